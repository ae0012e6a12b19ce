"""N-homogeneous algebras ``T(E)/(R)`` and the constructions built from them."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import DegreeMismatch, DimensionMismatch, FormatError, InsufficientData, ResourceLimit
from .exactlin import (
    Echelon,
    Subspace,
    annihilator,
    as_sparse,
    format_rational,
    parse_rational,
    random_prime,
    span,
    sum_spaces,
)
from .tensor import ideal_echelon, index_word, interleave_pi, kron, reindex_dual, word_index

EXACT_AMBIENT_CAP = 10 ** 6
MODULAR_ROW_CAP = 10 ** 7
# ``mode="auto"`` switches to modular arithmetic above this ambient dimension
AUTO_EXACT_AMBIENT = 20000


def exact_cap() -> int:
    env = os.environ.get("REGAL_MAX_AMBIENT")
    return int(env) if env else EXACT_AMBIENT_CAP


def modular_cap() -> int:
    env = os.environ.get("REGAL_MAX_AMBIENT")
    return int(env) * 10 if env else MODULAR_ROW_CAP


@dataclass(eq=False)
class HomAlgebra:
    """``A(E, R) = T(E)/(R)`` with ``dim E = d`` and ``R`` inside ``E^(x N)``."""

    d: int
    N: int
    R: Subspace
    name: str = ""
    generator_names: tuple = ()
    params: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    _ideals: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"homogeneity degree must be >= 2, got {self.N}")
        if self.R.ambient_dim != self.d ** self.N:
            raise DimensionMismatch(f"relation space ambient {self.R.ambient_dim} != {self.d}^{self.N}")
        if not self.generator_names:
            self.generator_names = default_names(self.d)
        self.generator_names = tuple(self.generator_names)
        if len(self.generator_names) != self.d:
            raise DimensionMismatch(f"{len(self.generator_names)} generator names for d = {self.d}")

    # -- ideal components --

    def ideal_echelon(self, n: int, p: int | None = None) -> Echelon:
        """Echelon basis of ``(R)_n``; cached per (degree, prime)."""
        key = (n, p)
        if key not in self._ideals:
            self._check_resources(n, p)
            prev = None
            if n > self.N:
                prev = self.ideal_echelon(n - 1, p)
            self._ideals[key] = ideal_echelon(self.R.basis, self.d, self.N, n, p, prev)
        return self._ideals[key]

    def _check_resources(self, n: int, p: int | None) -> None:
        ambient = self.d ** n
        if p is None and ambient > exact_cap():
            raise ResourceLimit(f"degree {n} has ambient dimension {ambient} > exact cap {exact_cap()}")
        if p is not None:
            rows = ambient + self.R.dim() * self.d ** max(n - self.N, 0)
            if rows > modular_cap():
                raise ResourceLimit(f"degree {n} needs ~{rows} rows > modular cap {modular_cap()}")

    def ideal(self, n: int) -> Subspace:
        return Subspace(self.d ** n, self.ideal_echelon(n))

    def basis_words(self, n: int) -> list[int]:
        """Indices of the normal words spanning ``A_n`` (complement of the pivots)."""
        rows = self.ideal_echelon(n).rows
        return [c for c in range(self.d ** n) if c not in rows]

    def relation_vectors(self) -> tuple[dict, ...]:
        return self.R.basis

    def presentation_hash(self) -> str:
        return hashlib.sha256(json.dumps(algebra_to_json(self, include_meta=False), sort_keys=True).encode()).hexdigest()

    def __repr__(self):
        return f"HomAlgebra({self.name!r}, d={self.d}, N={self.N}, dim R={self.R.dim()})"


def default_names(d: int) -> tuple:
    if d <= 3:
        return ("x", "y", "z")[:d]
    return tuple(f"x{i}" for i in range(d))


def algebra(d: int, N: int, relations, name: str = "", generator_names=(), params=None) -> HomAlgebra:
    """Build a presentation from relations given as dense vectors or ``{word: coef}`` dicts."""
    vecs = []
    for rel in relations:
        if isinstance(rel, dict) and rel and isinstance(next(iter(rel)), tuple):
            vecs.append({word_index(w, d): Fraction(c) for w, c in rel.items()})
        else:
            vecs.append(as_sparse(rel, d ** N))
    return HomAlgebra(d, N, span(vecs, d ** N), name, tuple(generator_names), dict(params or {}))


# ---------- constructions ----------

def dual(a: HomAlgebra) -> HomAlgebra:
    names = tuple(f"{g}*" for g in a.generator_names)
    name = a.name[:-1] if a.name.endswith("!") else f"{a.name}!"
    return HomAlgebra(a.d, a.N, annihilator(a.R), name, names, dict(a.params))


def bullet(a: HomAlgebra, b: HomAlgebra) -> HomAlgebra:
    """Black product: relations ``pi_N(R (x) R')`` on ``E (x) E'``."""
    if a.N != b.N:
        raise DegreeMismatch(f"homogeneity degrees differ: {a.N} != {b.N}")
    rel = interleave_pi(kron(a.R, b.R), a.d, b.d, a.N)
    names = tuple(f"{g}{h}" for g in a.generator_names for h in b.generator_names)
    return HomAlgebra(a.d * b.d, a.N, rel, f"({a.name})*({b.name})", names)


def matrix_names(d: int) -> tuple:
    return tuple(f"u{i}{j}" if d <= 10 else f"u{i}_{j}" for i in range(d) for j in range(d))


def end_semigroup(a: HomAlgebra) -> HomAlgebra:
    """``end(A) = A! . A``; generator ``u^i_j`` is letter ``i*d + j`` (upper index on the E* leg)."""
    e = bullet(dual(a), a)
    e.name = f"end({a.name})"
    e.generator_names = matrix_names(a.d)
    e.meta["dim_r"] = e.R.dim()
    return e


def coaction_relations(a: HomAlgebra, convention: str = "direct") -> tuple[Subspace, Subspace]:
    """Relation spaces ``r`` (from coacting on A) and ``r_check`` (from coacting on A!).

    ``r`` carries ``R_perp`` on the upper indices and ``R`` on the lower ones.
    ``r_check`` is ``pi_N(R (x) R_perp)`` read with the E-leg as the upper index
    (coefficients unchanged).  ``convention="transpose"`` swaps the legs instead,
    which is kept only to document that it degenerates to ``r``.
    """
    d, N = a.d, a.N
    r_perp = annihilator(a.R)
    r = interleave_pi(kron(r_perp, a.R), d, d, N)
    raw = interleave_pi(kron(a.R, r_perp), d, d, N)
    if convention == "direct":
        pattern = (False,) * N
    elif convention == "transpose":
        pattern = (True,) * N
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return r, reindex_dual(raw, d, N, pattern)


def e_bialgebra(a: HomAlgebra, convention: str = "direct") -> HomAlgebra:
    """``e(A) = A(E* (x) E, r + r_check)``."""
    r, rc = coaction_relations(a, convention)
    total = sum_spaces(r, rc)
    e = HomAlgebra(a.d * a.d, a.N, total, f"e({a.name})", matrix_names(a.d))
    e.meta.update(dim_r=r.dim(), dim_r_check=rc.dim(), dim_relations=total.dim(),
                  base_d=a.d, convention=convention)
    return e


# ---------- degree dimensions ----------

def degree_dim(a: HomAlgebra, n: int, p: int | None = None) -> int:
    """``dim A_n``; with a prime ``p`` the result is an upper bound (rank is a lower bound)."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    if n < a.N:
        return a.d ** n
    return a.d ** n - a.ideal_echelon(n, p).rank


@dataclass
class HilbertTable:
    dims: list  # (degree, dim A_n, mode)
    prime: int | None = None

    @property
    def values(self) -> list[int]:
        return [dim for _, dim, _ in self.dims]

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "dims": [{"n": n, "dim": dim, "mode": mode} for n, dim, mode in self.dims],
        }


def hilbert_table(a: HomAlgebra, n_max: int, mode: str = "exact", p: int | None = None,
                  seed=None) -> HilbertTable:
    """Degree dimensions for ``n = 0..n_max``.

    ``mode`` is ``exact``, ``modular`` (every degree >= N mod a prime) or ``auto``
    (exact while ``d^n <= AUTO_EXACT_AMBIENT``).  Modular entries are tagged
    ``modular-lower-bound``: the ideal rank is a lower bound, so the dimension
    is an upper bound.
    """
    if mode not in ("exact", "modular", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode != "exact" and p is None:
        p = random_prime(seed)
    dims = []
    used_prime = False
    for n in range(n_max + 1):
        if n < a.N:
            dims.append((n, a.d ** n, "exact"))
            continue
        modular = mode == "modular" or (mode == "auto" and a.d ** n > AUTO_EXACT_AMBIENT)
        if modular:
            used_prime = True
            dims.append((n, degree_dim(a, n, p), "modular-lower-bound"))
        else:
            dims.append((n, degree_dim(a, n), "exact"))
    return HilbertTable(dims, p if used_prime else None)


# ---------- normal forms ----------

def _degree_of(a: HomAlgebra, length: int) -> int:
    n, size = 0, 1
    while size < length:
        size *= a.d
        n += 1
    if size != length:
        raise DimensionMismatch(f"vector length {length} is not a power of {a.d}")
    return n


def normal_form(a: HomAlgebra, v, n: int | None = None) -> dict:
    """Representative of ``v`` modulo ``(R)_n`` supported on normal words.

    Dense vectors carry their degree in their length; sparse dicts need ``n``.
    """
    if n is None:
        if isinstance(v, dict):
            raise DimensionMismatch("degree required for sparse vectors")
        n = _degree_of(a, len(v))
    vec = as_sparse(v, a.d ** n)
    if n < a.N:
        return vec
    return a.ideal_echelon(n).reduce(vec)


def is_ideal_member(a: HomAlgebra, v, n: int | None = None) -> bool:
    return not normal_form(a, v, n)


# ---------- growth ----------

@dataclass
class GrowthReport:
    dims: list
    differences: list  # differences[k] = k-th difference sequence
    degree: int | None
    gk_estimate: int | None
    status: str  # "stabilized" | "inconclusive"
    window: tuple

    def to_json(self) -> dict:
        return {
            "dims": self.dims,
            "differences": self.differences,
            "polynomial_degree": self.degree,
            "gk_dim_estimate": self.gk_estimate,
            "status": self.status,
            "window": list(self.window),
            "exact_claim": False,
        }


def finite_differences(dims: Sequence[int], k: int) -> list[int]:
    """k-th backward difference with ``dim A_n = 0`` for ``n < 0``.

    Entry j equals the coefficient of ``t^j`` in ``(1 - t)^k * sum_n dims[n] t^n``.
    """
    out = list(dims)
    for _ in range(k):
        out = [x - (out[j - 1] if j else 0) for j, x in enumerate(out)]
    return out


def gk_fit(t, min_run: int = 3, max_k: int | None = None) -> GrowthReport:
    """Estimate polynomial growth from a Hilbert table starting at degree 0.

    Finds the smallest k whose k-th difference is constant over the last
    ``min_run`` degrees of the window.  The estimate is never a proof.
    """
    if isinstance(t, HilbertTable):
        degrees = [n for n, _, _ in t.dims]
        dims = t.values
    else:
        dims = list(t)
        degrees = list(range(len(dims)))
    if len(dims) < 4:
        raise InsufficientData(f"need at least 4 degrees, got {len(dims)}")
    if degrees != list(range(len(dims))):
        raise InsufficientData("table must list consecutive degrees starting at 0")
    run = min(min_run, len(dims))
    diffs = []
    # padded differences stay exact past the window length, so k may exceed it
    for k in range(max_k if max_k is not None else 2 * len(dims) + 2):
        seq = finite_differences(dims, k)
        diffs.append(seq)
        tail = seq[-run:]
        if all(x == tail[0] for x in tail):
            if tail[0] == 0:
                # eventually zero at k = 0: finite-dimensional
                degree, gk = (None, 0) if k == 0 else (k - 1, k)
            else:
                degree, gk = k, k + 1
            return GrowthReport(dims, diffs, degree, gk, "stabilized", (degrees[0], degrees[-1]))
    return GrowthReport(dims, diffs, None, None, "inconclusive", (degrees[0], degrees[-1]))


def polynomial_ring_dims(k: int, n_max: int) -> list[int]:
    """Degree dimensions of the commutative polynomial ring in k variables."""
    return [comb(n + k - 1, k - 1) for n in range(n_max + 1)]


# ---------- JSON ----------

def algebra_to_json(a: HomAlgebra, include_meta: bool = True) -> dict:
    rels = []
    for row in a.R.basis:
        rels.append([
            {"coef": format_rational(x), "word": list(index_word(k, a.d, a.N))}
            for k, x in sorted(row.items())
        ])
    out = {
        "name": a.name,
        "dim": a.d,
        "N": a.N,
        "generators": list(a.generator_names),
        "relations": rels,
        "params": {k: format_rational(v) for k, v in sorted(a.params.items())},
    }
    if include_meta and a.meta:
        out["meta"] = dict(a.meta)
    return out


def _require(obj, key, kind, path):
    if key not in obj:
        raise FormatError(path, f"missing field {key!r}")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise FormatError(f"{path}.{key}" if path else key, f"expected integer, got {val!r}")
    if kind is not int and not isinstance(val, kind):
        raise FormatError(f"{path}.{key}" if path else key, f"expected {kind.__name__}, got {type(val).__name__}")
    return val


def algebra_from_json(obj) -> HomAlgebra:
    """Parse the algebra file format, reporting errors with a field path."""
    if not isinstance(obj, dict):
        raise FormatError("", "top level must be an object")
    d = _require(obj, "dim", int, "")
    N = _require(obj, "N", int, "")
    if d < 1:
        raise FormatError("dim", f"must be >= 1, got {d}")
    if N < 2:
        raise FormatError("N", f"must be >= 2, got {N}")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise FormatError("name", "expected string")
    gens = obj.get("generators", list(default_names(d)))
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise FormatError("generators", "expected a list of strings")
    if len(gens) != d:
        raise FormatError("generators", f"expected {d} names, got {len(gens)}")
    params = {}
    for k, v in (obj.get("params") or {}).items():
        try:
            params[k] = parse_rational(v)
        except ValueError as exc:
            raise FormatError(f"params.{k}", str(exc)) from None
    rels = _require(obj, "relations", list, "")
    vecs = []
    for i, rel in enumerate(rels):
        path = f"relations[{i}]"
        if not isinstance(rel, list):
            raise FormatError(path, "expected a list of terms")
        vec: dict = {}
        for j, term in enumerate(rel):
            tpath = f"{path}[{j}]"
            if not isinstance(term, dict):
                raise FormatError(tpath, "expected an object with 'coef' and 'word'")
            if "coef" not in term:
                raise FormatError(tpath, "missing field 'coef'")
            try:
                coef = parse_rational(term["coef"])
            except ValueError as exc:
                raise FormatError(f"{tpath}.coef", str(exc)) from None
            word = _require(term, "word", list, tpath)
            if len(word) != N:
                raise FormatError(f"{tpath}.word", f"expected length {N}, got {len(word)}")
            for k, letter in enumerate(word):
                if isinstance(letter, bool) or not isinstance(letter, int) or not 0 <= letter < d:
                    raise FormatError(f"{tpath}.word[{k}]", f"letter must be an integer in [0, {d}), got {letter!r}")
            idx = word_index(word, d)
            vec[idx] = vec.get(idx, Fraction(0)) + coef
        vecs.append({k: x for k, x in vec.items() if x})
    return HomAlgebra(d, N, span(vecs, d ** N), name, tuple(gens), params)


def load_algebra(path) -> HomAlgebra:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return algebra_from_json(obj)
