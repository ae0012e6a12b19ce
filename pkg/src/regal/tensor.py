"""Index bookkeeping on tensor powers.

A word ``(w_0, ..., w_{n-1})`` over an alphabet of size ``d`` is encoded
big-endian: ``index(w) = sum_k w_k * d**(n-1-k)``.  All modules share this
order; generator ``u^i_j`` of the matrix bialgebras is letter ``i*d + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import DimensionMismatch, PositionOutOfRange
from .exactlin import Echelon, Subspace


def word_index(word: Sequence[int], d: int) -> int:
    idx = 0
    for a in word:
        if not 0 <= a < d:
            raise ValueError(f"letter {a} outside alphabet of size {d}")
        idx = idx * d + a
    return idx


def index_word(idx: int, d: int, n: int) -> tuple[int, ...]:
    if not 0 <= idx < d ** n:
        raise ValueError(f"index {idx} outside [0, {d}^{n})")
    out = [0] * n
    for k in range(n - 1, -1, -1):
        idx, out[k] = divmod(idx, d)
    return tuple(out)


def words(d: int, n: int) -> Iterable[tuple[int, ...]]:
    return product(range(d), repeat=n)


def tensor_degree(ambient_dim: int, d: int) -> int:
    """``n`` with ``d**n == ambient_dim``."""
    n, size = 0, 1
    while size < ambient_dim:
        size *= d
        n += 1
    if size != ambient_dim:
        raise DimensionMismatch(f"{ambient_dim} is not a power of {d}")
    return n


@dataclass(frozen=True)
class Word:
    letters: tuple
    d: int

    @property
    def index(self) -> int:
        return word_index(self.letters, self.d)

    @classmethod
    def from_index(cls, idx: int, d: int, n: int) -> "Word":
        return cls(index_word(idx, d, n), d)

    def __len__(self):
        return len(self.letters)


@dataclass(frozen=True)
class TensorSpace:
    d: int
    n: int

    @property
    def dim(self) -> int:
        return self.d ** self.n


def permute(u: Subspace, perm: Sequence[int]) -> Subspace:
    """Image of ``u`` under the coordinate permutation ``old -> perm[old]``."""
    if len(perm) != u.ambient_dim:
        raise DimensionMismatch("permutation size does not match ambient dimension")
    ech = Echelon(u.ambient_dim)
    ech.add_many({perm[k]: x for k, x in row.items()} for row in u.basis)
    return Subspace(u.ambient_dim, ech)


def kron(u: Subspace, w: Subspace) -> Subspace:
    """Span of ``a (x) b`` for basis rows a of u, b of w; index ``i*dim(w) + j``."""
    dw = w.ambient_dim
    n = u.ambient_dim * dw
    ech = Echelon(n)
    # reduced echelon (x) reduced echelon is already reduced echelon
    for pa, a in zip(u.pivot_columns, u.basis):
        for pb, b in zip(w.pivot_columns, w.basis):
            ech.insert_row(pa * dw + pb, {i * dw + j: x * y for i, x in a.items() for j, y in b.items()})
    return Subspace(n, ech)


def interleave_permutation(d1: int, d2: int, N: int) -> list[int]:
    """Coordinate map of (a_1..a_N, b_1..b_N) -> ((a_1,b_1)..(a_N,b_N))."""
    base = d1 * d2
    size2 = d2 ** N
    perm = [0] * (base ** N)
    for a in words(d1, N):
        ia = word_index(a, d1)
        for b in words(d2, N):
            new = 0
            for x, y in zip(a, b):
                new = new * base + x * d2 + y
            perm[ia * size2 + word_index(b, d2)] = new
    return perm


def interleave_pi(u: Subspace, d1: int, d2: int, N: int) -> Subspace:
    if u.ambient_dim != (d1 ** N) * (d2 ** N):
        raise DimensionMismatch(f"ambient {u.ambient_dim} != {d1}^{N} * {d2}^{N}")
    return permute(u, interleave_permutation(d1, d2, N))


def deinterleave_pi(u: Subspace, d1: int, d2: int, N: int) -> Subspace:
    """Inverse of :func:`interleave_pi`."""
    if u.ambient_dim != (d1 * d2) ** N:
        raise DimensionMismatch(f"ambient {u.ambient_dim} != ({d1}*{d2})^{N}")
    perm = interleave_permutation(d1, d2, N)
    inv = [0] * len(perm)
    for old, new in enumerate(perm):
        inv[new] = old
    return permute(u, inv)


def shift_rows(rows: Iterable[dict], d: int, N: int, i: int, n: int) -> list[dict]:
    """Rows of ``E^(x i) (x) span(rows) (x) E^(x (n-N-i))``."""
    if not 0 <= i <= n - N:
        raise PositionOutOfRange(f"position {i} outside [0, {n - N}]")
    right = d ** (n - N - i)
    mid = d ** N * right
    out = []
    rows = list(rows)
    for prefix in range(d ** i):
        off = prefix * mid
        for s in range(right):
            for row in rows:
                out.append({off + k * right + s: x for k, x in row.items()})
    return out


def shift_embed(r: Subspace, i: int, n: int, d: int) -> Subspace:
    N = tensor_degree(r.ambient_dim, d)
    ech = Echelon(d ** n)
    ech.add_many(shift_rows(r.basis, d, N, i, n), sort=False)
    return Subspace(d ** n, ech)


def ideal_echelon(rel_rows: Sequence[dict], d: int, N: int, n: int,
                  p: int | None = None, previous: Echelon | None = None) -> Echelon:
    """Echelon basis of the degree-n piece of the two-sided ideal generated by ``rel_rows``.

    Built as ``I_n = I_{n-1} (x) E + E^(x (n-N)) (x) R``; the first summand
    inherits echelon form from ``previous`` and is inserted without reduction.
    """
    ech = Echelon(d ** n, p)
    if n < N:
        return ech
    if n == N or previous is None:
        if n == N:
            ech.add_many(rel_rows)
            return ech
        previous = ideal_echelon(rel_rows, d, N, n - 1, p)
    for c, row in previous.rows.items():
        for j in range(d):
            ech.insert_row(c * d + j, {k * d + j: x for k, x in row.items()})
    ech.add_many(shift_rows(rel_rows, d, N, n - N, n))
    return ech


def ideal_component(r: Subspace, n: int, d: int) -> Subspace:
    """Degree-n component of the two-sided ideal generated by ``r``."""
    N = tensor_degree(r.ambient_dim, d)
    if n < N:
        return Subspace(d ** n)
    return Subspace(d ** n, ideal_echelon(r.basis, d, N, n))


def reindex_dual(u: Subspace, d: int, n: int, pattern: Sequence[bool]) -> Subspace:
    """Swap the two legs of each pair-letter ``a*d + b -> b*d + a`` where ``pattern`` is True.

    ``u`` lives in ``(E (x) E)^(x n)`` with ``dim E = d``; the map is an involution.
    """
    if len(pattern) != n:
        raise DimensionMismatch(f"pattern of length {len(pattern)} for degree {n}")
    if u.ambient_dim != (d * d) ** n:
        raise DimensionMismatch(f"ambient {u.ambient_dim} != ({d}*{d})^{n}")
    if not any(pattern):
        return u
    base = d * d
    perm = []
    for w in words(base, n):
        new = 0
        for letter, swap in zip(w, pattern):
            if swap:
                a, b = divmod(letter, d)
                letter = b * d + a
            new = new * base + letter
        perm.append(new)
    return permute(u, perm)
