"""Koszul cochain and chain complexes of an N-homogeneous algebra.

Graded pieces ``A_n`` and ``A!_n`` are represented by normal words (the
complement of the ideal pivots).  The cochain differential is left
multiplication by ``c = sum_i xi_i (x) x_i``; it preserves
``A-degree - A!-degree``, so the cochain complex splits into finite strands.
The chain complex ``A (x) (A!_n)*`` uses ``(A!_n)* = W_n``, the annihilator of
the dual ideal in ``E^(x n)``, and splits by total degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .exactlin import Echelon, Subspace, annihilator
from .homog import HomAlgebra, dual


@dataclass
class LinMap:
    """Sparse matrix stored by columns: ``cols[src] = {tgt: coef}``."""

    n_src: int
    n_tgt: int
    cols: list

    def compose(self, first: "LinMap") -> "LinMap":
        """``self o first``."""
        assert first.n_tgt == self.n_src
        out = []
        for col in first.cols:
            acc: dict = {}
            for t, c in col.items():
                for k, x in self.cols[t].items():
                    y = acc.get(k, 0) + c * x
                    if y:
                        acc[k] = y
                    else:
                        acc.pop(k, None)
            out.append(acc)
        return LinMap(first.n_src, self.n_tgt, out)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def rank(self) -> int:
        ech = Echelon(self.n_tgt)
        ech.add_many(self.cols)
        return ech.rank

    def dense(self) -> list[list[Fraction]]:
        """Row-major dense matrix (targets x sources)."""
        m = [[Fraction(0)] * self.n_src for _ in range(self.n_tgt)]
        for s, col in enumerate(self.cols):
            for t, x in col.items():
                m[t][s] = x
        return m

    @classmethod
    def zero(cls, n_src: int, n_tgt: int) -> "LinMap":
        return cls(n_src, n_tgt, [{} for _ in range(n_src)])


@dataclass
class GradedComponentBasis:
    algebra: HomAlgebra
    degree: int
    words: list  # word indices in E^(x degree)

    @cached_property
    def position(self) -> dict:
        return {w: k for k, w in enumerate(self.words)}

    def __len__(self):
        return len(self.words)


@dataclass
class ComplexStrand:
    label: int  # strand value: A-degree minus A!-degree (cochain) or total degree (chain)
    positions: list  # dicts: index, dual_degree, degree, dim
    maps: list  # LinMap between consecutive positions, in the complex's direction
    homology: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "positions": [dict(p, homology=h) for p, h in zip(self.positions, self.homology)],
        }


def contraction_degree(i: int, N: int) -> int:
    """A!-degree of position i of the contracted complexes: N*(i//2) + i%2."""
    return N * (i // 2) + i % 2


class Koszul:
    """Caches the bases and multiplication maps an algebra's complexes need."""

    def __init__(self, a: HomAlgebra):
        self.a = a
        self.dual = dual(a)
        self._bases: dict = {}
        self._left: dict = {}
        self._right: dict = {}
        self._w: dict = {}

    def basis(self, which: str, n: int) -> GradedComponentBasis:
        key = (which, n)
        if key not in self._bases:
            alg = self.a if which == "A" else self.dual
            self._bases[key] = GradedComponentBasis(alg, n, alg.basis_words(n) if n >= 0 else [])
        return self._bases[key]

    def _nf(self, alg: HomAlgebra, n: int, idx: int) -> dict:
        if n < alg.N:
            return {idx: Fraction(1)}
        return alg.ideal_echelon(n).reduce({idx: Fraction(1)})

    def left_mult(self, which: str, n: int, i: int) -> LinMap:
        """Left multiplication by generator i: component n -> n+1."""
        key = (which, n, i)
        if key not in self._left:
            src, tgt = self.basis(which, n), self.basis(which, n + 1)
            alg = src.algebra
            shift = i * alg.d ** n
            cols = []
            for w in src.words:
                nf = self._nf(alg, n + 1, shift + w)
                cols.append({tgt.position[k]: x for k, x in nf.items()})
            self._left[key] = LinMap(len(src), len(tgt), cols)
        return self._left[key]

    def right_mult(self, n: int, i: int) -> LinMap:
        """Right multiplication by x_i on A: A_n -> A_{n+1}."""
        key = (n, i)
        if key not in self._right:
            src, tgt = self.basis("A", n), self.basis("A", n + 1)
            cols = []
            for w in src.words:
                nf = self._nf(self.a, n + 1, w * self.a.d + i)
                cols.append({tgt.position[k]: x for k, x in nf.items()})
            self._right[key] = LinMap(len(src), len(tgt), cols)
        return self._right[key]

    def dual_dim(self, n: int) -> int:
        return len(self.basis("A!", n)) if n >= 0 else 0

    def dim(self, n: int) -> int:
        return len(self.basis("A", n)) if n >= 0 else 0

    # -- cochain side --

    def d(self, n: int, k: int) -> LinMap:
        """``alpha (x) a -> sum_i xi_i alpha (x) x_i a`` from A!_n (x) A_k."""
        sa, sb = self.dual_dim(n), self.dim(k)
        ta, tb = self.dual_dim(n + 1), self.dim(k + 1)
        if sa * sb == 0:
            return LinMap.zero(sa * sb, ta * tb)
        cols: list = [dict() for _ in range(sa * sb)]
        for i in range(self.a.d):
            L1 = self.left_mult("A!", n, i)
            L2 = self.left_mult("A", k, i)
            for p in range(sa):
                c1 = L1.cols[p]
                if not c1:
                    continue
                for q in range(sb):
                    c2 = L2.cols[q]
                    col = cols[p * sb + q]
                    for t1, x in c1.items():
                        for t2, y in c2.items():
                            key = t1 * tb + t2
                            z = col.get(key, 0) + x * y
                            if z:
                                col[key] = z
                            else:
                                col.pop(key, None)
        return LinMap(sa * sb, ta * tb, cols)

    def d_power(self, n: int, k: int, power: int) -> LinMap:
        """``d^power`` from A!_n (x) A_k."""
        out = LinMap.zero(self.dual_dim(n) * self.dim(k), self.dual_dim(n) * self.dim(k))
        out.cols = [{s: Fraction(1)} for s in range(out.n_src)]
        for step in range(power):
            out = self.d(n + step, k + step).compose(out)
        return out

    # -- chain side --

    def w_space(self, n: int) -> Subspace:
        """``W_n = (A!_n)*`` inside ``E^(x n)``."""
        if n not in self._w:
            if n < self.a.N:
                self._w[n] = Subspace.full(self.a.d ** n)
            else:
                self._w[n] = annihilator(self.dual.ideal(n))
        return self._w[n]

    def w_split(self, n: int) -> list[LinMap]:
        """For each generator i, the map ``W_n -> W_{n-1}``, ``e_i (x) w_i + ... -> w_i``."""
        W, Wp = self.w_space(n), self.w_space(n - 1)
        pos = {c: k for k, c in enumerate(Wp.pivot_columns)}
        size = self.a.d ** (n - 1)
        maps = []
        for i in range(self.a.d):
            cols = []
            for row in W.basis:
                piece = {k - i * size: x for k, x in row.items() if i * size <= k < (i + 1) * size}
                coords = {pos[c]: x for c, x in piece.items() if c in pos}
                cols.append(coords)
            maps.append(LinMap(W.dim(), Wp.dim(), cols))
        return maps

    def d_prime(self, k: int, n: int) -> LinMap:
        """``a (x) (x_1 (x) w) -> a x_1 (x) w`` from A_k (x) W_n to A_{k+1} (x) W_{n-1}."""
        sa, sw = self.dim(k), self.w_space(n).dim() if n >= 0 else 0
        ta = self.dim(k + 1)
        tw = self.w_space(n - 1).dim() if n >= 1 else 0
        if sa * sw == 0 or n < 1:
            return LinMap.zero(sa * sw, ta * tw)
        cols: list = [dict() for _ in range(sa * sw)]
        for i, split in enumerate(self.w_split(n)):
            R = self.right_mult(k, i)
            for p in range(sa):
                c1 = R.cols[p]
                for q in range(sw):
                    c2 = split.cols[q]
                    if not c2:
                        continue
                    col = cols[p * sw + q]
                    for t1, x in c1.items():
                        for t2, y in c2.items():
                            key = t1 * tw + t2
                            z = col.get(key, 0) + x * y
                            if z:
                                col[key] = z
                            else:
                                col.pop(key, None)
        return LinMap(sa * sw, ta * tw, cols)

    def d_prime_power(self, k: int, n: int, power: int) -> LinMap:
        size = self.dim(k) * (self.w_space(n).dim() if n >= 0 else 0)
        out = LinMap(size, size, [{s: Fraction(1)} for s in range(size)])
        for step in range(power):
            out = self.d_prime(k + step, n - step).compose(out)
        return out

    # -- positions --

    def positions(self, limit: int) -> list[int]:
        """A!-degrees n(i) of the contracted complex while A!_{n(i)} != 0 and n(i) <= limit."""
        out = []
        i = 0
        while True:
            n = contraction_degree(i, self.a.N)
            if n > limit or self.dual_dim(n) == 0:
                return out
            out.append(n)
            i += 1


def _homology(dims: list[int], ranks_out: list[int], ranks_in: list[int]) -> list[int]:
    return [d - ro - ri for d, ro, ri in zip(dims, ranks_out, ranks_in)]


def canonical_d(a: HomAlgebra, n: int, k: int, ctx: Koszul | None = None) -> LinMap:
    ctx = ctx or Koszul(a)
    return ctx.d(n, k)


def cochain_strands(a: HomAlgebra, window: int, ctx: Koszul | None = None) -> tuple[list[ComplexStrand], list[int]]:
    """Strands of L(A) with every A-degree <= window, plus the labels left at the edge."""
    ctx = ctx or Koszul(a)
    N = a.N
    degs = ctx.positions(window + a.N + 1)
    top = degs[-1]
    strands, edge = [], []
    for s in range(-top, window + 1):
        if s + top > window:
            edge.append(s)
            continue
        positions, maps = [], []
        for i, n in enumerate(degs):
            k = s + n
            dim = ctx.dual_dim(n) * ctx.dim(k) if k >= 0 else 0
            positions.append({"index": i, "dual_degree": n, "degree": k, "dim": dim})
        for i in range(len(degs) - 1):
            n, k = degs[i], s + degs[i]
            power = 1 if i % 2 == 0 else N - 1
            if k < 0:
                maps.append(LinMap.zero(0, positions[i + 1]["dim"]))
            else:
                maps.append(ctx.d_power(n, k, power))
        ranks = [m.rank() for m in maps]
        dims = [p["dim"] for p in positions]
        out_r = ranks + [0]
        in_r = [0] + ranks
        st = ComplexStrand(s, positions, maps, _homology(dims, out_r, in_r))
        strands.append(st)
    return strands, edge


def chain_strands(a: HomAlgebra, t_max: int, ctx: Koszul | None = None) -> list[ComplexStrand]:
    """K(A) in total degrees 0..t_max; ``maps[i]`` goes from position i+1 to position i."""
    ctx = ctx or Koszul(a)
    N = a.N
    degs = ctx.positions(t_max)
    strands = []
    for t in range(t_max + 1):
        positions, maps = [], []
        for i, n in enumerate(degs):
            k = t - n
            dim = ctx.dim(k) * ctx.w_space(n).dim() if k >= 0 else 0
            positions.append({"index": i, "dual_degree": n, "degree": k, "dim": dim})
        for i in range(1, len(degs)):
            n, k = degs[i], t - degs[i]
            power = 1 if i % 2 == 1 else N - 1
            if k < 0:
                maps.append(LinMap.zero(0, positions[i - 1]["dim"]))
            else:
                maps.append(ctx.d_prime_power(k, n, power))
        ranks = [m.rank() for m in maps]
        dims = [p["dim"] for p in positions]
        # position i: outgoing map is maps[i-1] (none at 0), incoming is maps[i]
        out_r = [0] + ranks
        in_r = ranks + [0]
        strands.append(ComplexStrand(t, positions, maps, _homology(dims, out_r, in_r)))
    return strands


def nilpotency_check(a: HomAlgebra, total: int, ctx: Koszul | None = None) -> dict:
    """``d^N = 0`` on every A!_n (x) A_k with n + k + N <= total."""
    ctx = ctx or Koszul(a)
    failures, checked = [], 0
    for n in range(total + 1):
        if ctx.dual_dim(n) == 0:
            continue
        for k in range(total - n - a.N + 1):
            checked += 1
            if not ctx.d_power(n, k, a.N).is_zero():
                failures.append((n, k))
    return {"passed": not failures, "checked": checked, "failures": failures}


@dataclass
class KoszulReport:
    algebra: str
    t_max: int
    passed: bool
    strands: list
    nonzero: list  # (t, position, homology dim) with position >= 1

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "window": {"total_degree_max": self.t_max},
            "koszul_in_window": self.passed,
            "conclusive": False,
            "nonzero_positive_homology": [list(x) for x in self.nonzero],
            "strands": [s.to_json() for s in self.strands],
        }


@dataclass
class GorensteinReport:
    algebra: str
    window: int
    passed: bool
    top_total: int
    stray: list  # (strand, position, dim) off the final position
    strands: list
    edge: list

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "window": {"degree_max": self.window},
            "gorenstein_in_window": self.passed,
            "conclusive": False,
            "final_position_total": self.top_total,
            "stray_cohomology": [list(x) for x in self.stray],
            "edge": [f"strand {s}: edge: not assessed" for s in self.edge],
            "strands": [s.to_json() for s in self.strands],
        }


def koszulity_report(a: HomAlgebra, t_max: int = 6, ctx: Koszul | None = None) -> KoszulReport:
    strands = chain_strands(a, t_max, ctx)
    nonzero = [(s.label, i, h) for s in strands for i, h in enumerate(s.homology) if i >= 1 and h]
    return KoszulReport(a.name, t_max, not nonzero, strands, nonzero)


def gorenstein_report(a: HomAlgebra, window: int = 6, ctx: Koszul | None = None) -> GorensteinReport:
    strands, edge = cochain_strands(a, window, ctx)
    last = len(strands[0].positions) - 1 if strands else 0
    stray = [(s.label, i, h) for s in strands for i, h in enumerate(s.homology) if h and i != last]
    top = sum(s.homology[last] for s in strands)
    return GorensteinReport(a.name, window, not stray and top == 1, top, stray, strands, edge)
