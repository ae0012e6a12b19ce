"""Exact rational and modular sparse linear algebra.

Vectors are sparse dicts ``{column: value}`` with no stored zeros. Values are
:class:`fractions.Fraction` in exact mode and ints in ``[0, p)`` in modular
mode.

Subspaces are kept in echelon form whose pivot is the *largest* nonzero column
of each row.  Reducing a vector against such a basis rewrites large words in
terms of smaller ones, so the surviving (non-pivot) coordinates form a
graded-lex normal-form complement.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from heapq import heapify, heappop, heappush
from typing import Iterable, Mapping, Sequence, Union

from .errors import DimensionMismatch, NotPrime

Rational = Fraction
SparseVector = dict
VectorLike = Union[Mapping[int, object], Sequence[object]]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` (ints are accepted as-is)."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ValueError(f"not a rational: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_mod_p(x, p: int) -> int:
    x = Fraction(x)
    den = x.denominator % p
    if den == 0:
        raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
    return x.numerator * pow(den, -1, p) % p


# ---------- primes ----------

def is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


def random_prime(seed=None, bits: int = 31) -> int:
    """A prime in ``[2^(bits-1), 2^bits)`` chosen reproducibly from ``seed``."""
    from sympy import nextprime

    rng = random.Random(seed)
    while True:
        p = int(nextprime(rng.randrange(1 << (bits - 1), 1 << bits)))
        if p < (1 << bits):
            return p


# ---------- vectors ----------

def as_sparse(vec: VectorLike, ambient_dim: int | None = None) -> dict:
    """Copy ``vec`` into a sparse dict of Fractions, validating its length."""
    if isinstance(vec, Mapping):
        out = {}
        for k, x in vec.items():
            if ambient_dim is not None and not 0 <= k < ambient_dim:
                raise DimensionMismatch(f"index {k} outside ambient dimension {ambient_dim}")
            if x:
                out[k] = x if isinstance(x, Fraction) else Fraction(x)
        return out
    if ambient_dim is not None and len(vec) != ambient_dim:
        raise DimensionMismatch(f"vector of length {len(vec)} in ambient dimension {ambient_dim}")
    return {k: (x if isinstance(x, Fraction) else Fraction(x)) for k, x in enumerate(vec) if x}


def to_dense(vec: Mapping[int, object], n: int) -> list:
    out = [Fraction(0)] * n
    for k, x in vec.items():
        out[k] = x
    return out


def dot(u: Mapping[int, object], v: Mapping[int, object]):
    if len(u) > len(v):
        u, v = v, u
    return sum((x * v[k] for k, x in u.items() if k in v), Fraction(0))


# ---------- dense RREF ----------

def rref(m: Sequence[Sequence[object]]) -> tuple[list[list[Fraction]], int]:
    """Classical reduced row echelon form (leftmost pivots) and rank."""
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return a, 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return a, r


# ---------- sparse echelon ----------

def _reduce_exact(rows: dict, v: dict, full: bool) -> dict:
    if full:
        heap = [-c for c in v if c in rows]
        heapify(heap)
        queued = set(heap)
        while heap:
            c = -heappop(heap)
            coef = v.get(c)
            if coef is None:
                continue
            for k, val in rows[c].items():
                x = v.get(k)
                x = -coef * val if x is None else x - coef * val
                if x:
                    v[k] = x
                    if k in rows and -k not in queued:
                        queued.add(-k)
                        heappush(heap, -k)
                else:
                    del v[k]
        return v
    # top reduction: only clear the leading entry until it is not a pivot
    heap = [-c for c in v]
    heapify(heap)
    while heap:
        c = -heap[0]
        if c not in v:
            heappop(heap)
            continue
        if c not in rows:
            break
        heappop(heap)
        coef = v[c]
        for k, val in rows[c].items():
            x = v.get(k)
            if x is None:
                v[k] = -coef * val
                heappush(heap, -k)
            else:
                x -= coef * val
                if x:
                    v[k] = x
                else:
                    del v[k]
    return v


def _reduce_mod(rows: dict, v: dict, p: int, full: bool) -> dict:
    if full:
        heap = [-c for c in v if c in rows]
        heapify(heap)
        queued = set(heap)
        while heap:
            c = -heappop(heap)
            coef = v.get(c)
            if coef is None:
                continue
            for k, val in rows[c].items():
                x = (v.get(k, 0) - coef * val) % p
                if x:
                    v[k] = x
                    if k in rows and -k not in queued:
                        queued.add(-k)
                        heappush(heap, -k)
                else:
                    v.pop(k, None)
        return v
    heap = [-c for c in v]
    heapify(heap)
    while heap:
        c = -heap[0]
        if c not in v:
            heappop(heap)
            continue
        if c not in rows:
            break
        heappop(heap)
        coef = v[c]
        for k, val in rows[c].items():
            x = v.get(k)
            if x is None:
                v[k] = -coef * val % p
                heappush(heap, -k)
            else:
                x = (x - coef * val) % p
                if x:
                    v[k] = x
                else:
                    del v[k]
    return v


class Echelon:
    """Incremental sparse echelon basis; pivot of each row is its largest column.

    ``p=None`` works over the rationals, otherwise over GF(p).  Rows are stored
    monic at their pivot.  Rows are only top-reduced on insertion; use
    :meth:`fully_reduce` for the canonical reduced basis.
    """

    __slots__ = ("ncols", "p", "rows", "_full")

    def __init__(self, ncols: int, p: int | None = None):
        self.ncols = ncols
        self.p = p
        self.rows: dict[int, dict] = {}
        self._full = True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _coerce(self, vec: Mapping[int, object]) -> dict:
        if self.p is None:
            return {k: (x if isinstance(x, Fraction) else Fraction(x)) for k, x in vec.items() if x}
        p = self.p
        out = {}
        for k, x in vec.items():
            x = x % p if isinstance(x, int) else to_mod_p(x, p)
            if x:
                out[k] = x
        return out

    def reduce(self, vec: Mapping[int, object], full: bool = True) -> dict:
        v = self._coerce(vec)
        if self.p is None:
            return _reduce_exact(self.rows, v, full)
        return _reduce_mod(self.rows, v, self.p, full)

    def add(self, vec: Mapping[int, object]) -> bool:
        """Insert ``vec``; returns True when it raised the rank."""
        v = self.reduce(vec, full=False)
        if not v:
            return False
        lead = max(v)
        c = v[lead]
        if self.p is None:
            if c != 1:
                inv = 1 / c
                v = {k: x * inv for k, x in v.items()}
        else:
            if c != 1:
                inv = pow(c, -1, self.p)
                v = {k: x * inv % self.p for k, x in v.items()}
        self.rows[lead] = v
        self._full = False
        return True

    def add_many(self, vectors: Iterable[Mapping[int, object]], sort: bool = True) -> int:
        """Insert vectors, sparsest first (a cheap Markowitz ordering)."""
        vectors = list(vectors)
        if sort:
            vectors.sort(key=len)
        return sum(1 for v in vectors if self.add(v))

    def insert_row(self, pivot: int, row: dict) -> None:
        """Trusted insertion of a row already monic at ``pivot = max(row)``."""
        self.rows[pivot] = row
        self._full = False

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self.reduce(vec, full=True)

    def fully_reduce(self) -> None:
        """Bring the basis to reduced echelon form in place (canonical)."""
        if self._full:
            return
        rows = self.rows
        done: dict[int, dict] = {}
        for c in sorted(rows):
            row = rows[c]
            if any(k in done for k in row if k != c):
                row = dict(row)
                if self.p is None:
                    row = _reduce_exact(done, row, full=True)
                else:
                    row = _reduce_mod(done, row, self.p, full=True)
            done[c] = row
        self.rows = done
        self._full = True

    def copy(self) -> "Echelon":
        e = Echelon(self.ncols, self.p)
        e.rows = {c: dict(r) for c, r in self.rows.items()}
        e._full = self._full
        return e


# ---------- Subspace ----------

class Subspace:
    """Linear subspace of ``K^ambient_dim`` stored by its canonical reduced basis."""

    __slots__ = ("ambient_dim", "_ech", "_hash")

    def __init__(self, ambient_dim: int, echelon: Echelon | None = None):
        if echelon is None:
            echelon = Echelon(ambient_dim)
        if echelon.p is not None:
            raise ValueError("Subspace requires an exact echelon")
        self.ambient_dim = ambient_dim
        self._ech = echelon
        self._hash = None

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        ech = Echelon(ambient_dim)
        for i in range(ambient_dim):
            ech.insert_row(i, {i: Fraction(1)})
        ech._full = True
        return cls(ambient_dim, ech)

    def dim(self) -> int:
        return self._ech.rank

    def __len__(self):
        return self._ech.rank

    @property
    def pivot_columns(self) -> list[int]:
        return sorted(self._ech.rows)

    @property
    def basis(self) -> tuple[dict, ...]:
        """Reduced basis rows (sparse), ordered by pivot."""
        self._ech.fully_reduce()
        rows = self._ech.rows
        return tuple(rows[c] for c in sorted(rows))

    def basis_matrix(self) -> list[list[Fraction]]:
        return [to_dense(r, self.ambient_dim) for r in self.basis]

    def echelon(self) -> Echelon:
        return self._ech

    def contains(self, vec: VectorLike) -> bool:
        return not self._ech.reduce(as_sparse(vec, self.ambient_dim), full=True)

    __contains__ = contains

    def normal_form(self, vec: VectorLike) -> dict:
        """Unique representative of ``vec`` modulo this subspace supported off the pivots."""
        return self._ech.reduce(as_sparse(vec, self.ambient_dim), full=True)

    def complement_columns(self) -> list[int]:
        rows = self._ech.rows
        return [c for c in range(self.ambient_dim) if c not in rows]

    def _key(self):
        return (self.ambient_dim, tuple((c, tuple(sorted(r.items()))) for c, r in zip(self.pivot_columns, self.basis)))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim or self.dim() != other.dim():
            return False
        if self._ech.rows.keys() != other._ech.rows.keys():
            return False
        return self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __add__(self, other):
        return sum_spaces(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __le__(self, other):
        return all(other.contains(r) for r in self.basis)

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim()})"


def span(vectors: Iterable[VectorLike], ambient_dim: int) -> Subspace:
    ech = Echelon(ambient_dim)
    ech.add_many(as_sparse(v, ambient_dim) for v in vectors)
    return Subspace(ambient_dim, ech)


def _check_same(u: Subspace, w: Subspace) -> None:
    if u.ambient_dim != w.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {u.ambient_dim} != {w.ambient_dim}")


def sum_spaces(u: Subspace, w: Subspace) -> Subspace:
    _check_same(u, w)
    ech = u._ech.copy()
    for row in w._ech.rows.values():
        ech.add(row)
    return Subspace(u.ambient_dim, ech)


def intersect(u: Subspace, w: Subspace) -> Subspace:
    """Intersection via the Zassenhaus stacking ``[u | u], [w | 0]``."""
    _check_same(u, w)
    n = u.ambient_dim
    ech = Echelon(2 * n)
    for row in u._ech.rows.values():
        v = {k + n: x for k, x in row.items()}
        v.update(row)
        ech.add(v)
    for row in w._ech.rows.values():
        ech.add({k + n: x for k, x in row.items()})
    out = Echelon(n)
    for c, row in ech.rows.items():
        if c < n:
            out.add(row)
    result = Subspace(n, out)
    assert sum_spaces(u, w).dim() == ech.rank - result.dim(), "Grassmann identity violated"
    return result


def annihilator(u: Subspace) -> Subspace:
    """Orthogonal complement under the coordinate dot product."""
    n = u.ambient_dim
    by_col: dict[int, list] = {}
    for row, c in zip(u.basis, u.pivot_columns):
        for k, x in row.items():
            if k != c:
                by_col.setdefault(k, []).append((c, x))
    ech = Echelon(n)
    for f in u.complement_columns():
        v = {f: Fraction(1)}
        for c, x in by_col.get(f, ()):
            v[c] = -x
        ech.add(v)
    return Subspace(n, ech)


def member(u: Subspace, vec: VectorLike) -> bool:
    return u.contains(vec)


def quotient_dim(u: Subspace) -> int:
    return u.ambient_dim - u.dim()


# ---------- modular rank ----------

@dataclass
class SparseMatrix:
    rows: int
    cols: int
    data: list = field(default_factory=list)

    @classmethod
    def from_dense(cls, m: Sequence[Sequence[object]]) -> "SparseMatrix":
        ncols = len(m[0]) if m else 0
        return cls(len(m), ncols, [{j: x for j, x in enumerate(r) if x} for r in m])

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, object]], cols: int) -> "SparseMatrix":
        return cls(len(rows), cols, [dict(r) for r in rows])

    def __post_init__(self):
        for r in self.data:
            for k in r:
                if not 0 <= k < self.cols:
                    raise DimensionMismatch(f"column {k} outside {self.cols}")


def exact_rank(m) -> int:
    if not isinstance(m, SparseMatrix):
        m = SparseMatrix.from_dense(m)
    ech = Echelon(m.cols)
    ech.add_many(m.data)
    return ech.rank


def rank_mod_p(m, p: int) -> int:
    """Rank over GF(p); a lower bound for the rational rank."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not isinstance(m, SparseMatrix):
        m = SparseMatrix.from_dense(m)
    ech = Echelon(m.cols, p)
    ech.add_many(m.data)
    return ech.rank
