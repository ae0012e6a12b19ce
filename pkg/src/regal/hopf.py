"""Quasi-determinant, Cramer adjoints and the identities of the matrix bialgebra e(A).

Every identity is verified in its native degree by ideal membership: the
difference of both sides, as a coefficient vector over words in the d*d
letters ``u^i_j = i*d + j``, must lie in the degree component of the ideal
generated by the relations of e(A).  Polynomials are never reduced while
being built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

from .asdata import ASData, as_data, top_degree
from .errors import NonGeneric, NotDiagonalQ, NotOneDimensionalTop, NoExactQ, RegalError, \
    ResourceLimit, SingularKappa, SingularSliceSpace
from .exactlin import format_rational
from .homog import HomAlgebra, e_bialgebra, exact_cap
from .tensor import word_index, words


class NCPoly:
    """Homogeneous noncommutative polynomial over ``n_letters`` letters."""

    __slots__ = ("n_letters", "terms", "degree")

    def __init__(self, n_letters: int, terms=None, degree: int | None = None):
        self.n_letters = n_letters
        self.terms: dict[tuple, Fraction] = {}
        for w, c in (terms or {}).items():
            if c:
                self.terms[tuple(w)] = Fraction(c)
        degs = {len(w) for w in self.terms}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous polynomial (degrees {sorted(degs)})")
        if degs:
            found = degs.pop()
            if degree is not None and degree != found:
                raise ValueError(f"declared degree {degree} but terms have degree {found}")
            degree = found
        self.degree = degree

    @classmethod
    def monomial(cls, n_letters: int, word, coef=1) -> "NCPoly":
        return cls(n_letters, {tuple(word): coef})

    def _compatible(self, other: "NCPoly") -> int | None:
        if self.n_letters != other.n_letters:
            raise ValueError("different alphabets")
        if self.terms and other.terms and self.degree != other.degree:
            raise ValueError(f"degrees differ: {self.degree} != {other.degree}")
        return self.degree if self.degree is not None else other.degree

    def __add__(self, other: "NCPoly") -> "NCPoly":
        deg = self._compatible(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            x = terms.get(w, 0) + c
            if x:
                terms[w] = x
            else:
                terms.pop(w, None)
        return NCPoly(self.n_letters, terms, deg)

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.n_letters, {w: -c for w, c in self.terms.items()}, self.degree)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            if self.n_letters != other.n_letters:
                raise ValueError("different alphabets")
            terms: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    x = terms.get(w, 0) + c1 * c2
                    if x:
                        terms[w] = x
                    else:
                        terms.pop(w, None)
            deg = None
            if self.degree is not None and other.degree is not None:
                deg = self.degree + other.degree
            return NCPoly(self.n_letters, terms, deg)
        other = Fraction(other)
        return NCPoly(self.n_letters, {w: c * other for w, c in self.terms.items()}, self.degree)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.n_letters == other.n_letters and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def to_vector(self) -> dict:
        return {word_index(w, self.n_letters): c for w, c in self.terms.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"{format_rational(c)}*{'.'.join(map(str, w))}" for w, c in sorted(self.terms.items())]
        return " + ".join(parts)


def zero(d: int, degree: int) -> NCPoly:
    return NCPoly(d * d, degree=degree)


def u(d: int, i: int, j: int) -> NCPoly:
    return NCPoly.monomial(d * d, (i * d + j,))


def u_word(d: int, upper: Iterable[int], lower: Iterable[int]) -> tuple:
    """Letters of ``u^{a_1}_{b_1} ... u^{a_n}_{b_n}``."""
    return tuple(a * d + b for a, b in zip(upper, lower))


def counit(p: NCPoly, d: int) -> Fraction:
    """``eps(u^i_j) = delta_ij`` extended multiplicatively."""
    return sum((c for w, c in p.terms.items() if all(x // d == x % d for x in w)), Fraction(0))


def coproduct(p: NCPoly, d: int) -> dict:
    """``Delta(u^A_B) = sum_C u^A_C (x) u^C_B`` as ``{(word1, word2): coef}``."""
    out: dict = {}
    for w, c in p.terms.items():
        upper = [x // d for x in w]
        lower = [x % d for x in w]
        for mid in product(range(d), repeat=len(w)):
            key = (u_word(d, upper, mid), u_word(d, mid, lower))
            x = out.get(key, 0) + c
            if x:
                out[key] = x
            else:
                out.pop(key, None)
    return out


# ---------- constructions ----------

def quasidet(data: ASData) -> NCPoly:
    """``D = kappa^-1 sum_{A,B} omega_A omega_B u^A_B`` in degree m."""
    if data.kappa_total == 0:
        raise SingularKappa("kappa = sum of squares of omega vanishes")
    d, m = data.d, data.m
    inv = 1 / data.kappa_total
    support = [(w, x) for w, x in zip(words(d, m), data.omega) if x]
    terms = {u_word(d, A, B): inv * xa * xb for A, xa in support for B, xb in support}
    return NCPoly(d * d, terms, m)


CRAMER_CONVENTIONS = ("printed", "transposed")
# fixed by requiring both Cramer identities on the quadratic catalog; see
# select_cramer_conventions and tests/test_hopf.py
CRAMER_LEFT = "transposed"
CRAMER_RIGHT = "printed"


def _slices(data: ASData):
    """``right[i] = [(A, omega_{Ai})]`` and ``left[i] = [(A, omega_{iA})]`` (nonzero only)."""
    d, m = data.d, data.m
    right = [[] for _ in range(d)]
    left = [[] for _ in range(d)]
    for w, x in zip(words(d, m), data.omega):
        if x:
            right[w[-1]].append((w[:-1], x))
            left[w[0]].append((w[1:], x))
    return right, left


def _require_generic(data: ASData) -> None:
    if not data.generic:
        raise NonGeneric("some kappa^i or kappa~_i vanishes")


def _bilinear(d: int, deg: int, first, second, scale) -> NCPoly:
    terms = {u_word(d, A, B): scale * xa * xb for A, xa in first for B, xb in second}
    return NCPoly(d * d, terms, deg)


def cramer_left(data: ASData, convention: str = CRAMER_LEFT) -> list[list[NCPoly]]:
    """Left Cramer adjoints ``S_L[i][j]`` of degree m-1.

    ``transposed``: ``(kappa^i)^-1 omega_{Aj} u^A_B omega_{Bi}``
    ``printed``:    ``(kappa^j)^-1 omega_{Ai} u^A_B omega_{Bj}``
    """
    _require_generic(data)
    right, _ = _slices(data)
    d, m = data.d, data.m
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            if convention == "transposed":
                row.append(_bilinear(d, m - 1, right[j], right[i], 1 / data.kappa[i]))
            elif convention == "printed":
                row.append(_bilinear(d, m - 1, right[i], right[j], 1 / data.kappa[j]))
            else:
                raise ValueError(f"unknown convention {convention!r}")
        out.append(row)
    return out


def cramer_right(data: ASData, convention: str = CRAMER_RIGHT) -> list[list[NCPoly]]:
    """Right Cramer adjoints ``S_R[i][j]`` of degree m-1.

    ``printed``:    ``(kappa~_j)^-1 omega_{jA} u^A_B omega_{iB}``
    ``transposed``: ``(kappa~_i)^-1 omega_{iA} u^A_B omega_{jB}``
    """
    _require_generic(data)
    _, left = _slices(data)
    d, m = data.d, data.m
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            if convention == "printed":
                row.append(_bilinear(d, m - 1, left[j], left[i], 1 / data.kappa_tilde[j]))
            elif convention == "transposed":
                row.append(_bilinear(d, m - 1, left[i], left[j], 1 / data.kappa_tilde[i]))
            else:
                raise ValueError(f"unknown convention {convention!r}")
        out.append(row)
    return out


# ---------- verification ----------

@dataclass
class Verdict:
    name: str
    passed: bool
    degree: int | None
    checked: int = 0
    failures: list = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "degree": self.degree,
               "checked": self.checked, "failures": [list(f) if isinstance(f, tuple) else f for f in self.failures]}
        if self.note:
            out["note"] = self.note
        return out


def in_ideal(e: HomAlgebra, p: NCPoly) -> bool:
    """``p`` lies in the ideal of e(A) (homogeneous, so degreewise)."""
    if not p:
        return True
    if p.degree < e.N:
        return False
    return not e.ideal_echelon(p.degree).reduce(p.to_vector())


def coaction_check(data: ASData, e: HomAlgebra, D: NCPoly | None = None) -> Verdict:
    """``sum_A omega_A u^A_B = D omega_B`` for every word B of length m."""
    d, m = data.d, data.m
    D = quasidet(data) if D is None else D
    support = [(A, x) for A, x in zip(words(d, m), data.omega) if x]
    failures = []
    count = 0
    for B, wB in zip(words(d, m), data.omega):
        lhs = NCPoly(d * d, {u_word(d, A, B): x for A, x in support}, m)
        diff = lhs - D * wB if wB else lhs
        count += 1
        if not in_ideal(e, diff):
            failures.append(B)
    return Verdict("coaction", not failures, m, count, failures)


def cramer_check(data: ASData, e: HomAlgebra, D: NCPoly | None = None,
                 left_convention: str = CRAMER_LEFT, right_convention: str = CRAMER_RIGHT) -> tuple[Verdict, Verdict]:
    """``S_L(u^i_k) u^k_j = delta_ij D = u^i_k S_R(u^k_j)`` in degree m."""
    _require_generic(data)
    d, m = data.d, data.m
    D = quasidet(data) if D is None else D
    SL = cramer_left(data, left_convention)
    SR = cramer_right(data, right_convention)
    left_fail, right_fail = [], []
    for i, j in product(range(d), repeat=2):
        target = D if i == j else zero(d, m)
        lhs = zero(d, m)
        rhs = zero(d, m)
        for k in range(d):
            lhs = lhs + SL[i][k] * u(d, k, j)
            rhs = rhs + u(d, i, k) * SR[k][j]
        if not in_ideal(e, lhs - target):
            left_fail.append((i, j))
        if not in_ideal(e, rhs - target):
            right_fail.append((i, j))
    n = d * d
    return (Verdict("cramer_left", not left_fail, m, n, left_fail),
            Verdict("cramer_right", not right_fail, m, n, right_fail))


def _require_diagonal(data: ASData) -> None:
    if not data.diagonal:
        raise NotDiagonalQ("Q is not diagonal")
    if data.h is None:
        raise NonGeneric("h-matrix undefined")


def proportionality_check(data: ASData, e: HomAlgebra) -> Verdict:
    """``S_L(u^i_j) = h^i_j S_R(u^i_j)`` modulo the ideal in degree m-1."""
    _require_generic(data)
    _require_diagonal(data)
    d = data.d
    SL, SR = cramer_left(data), cramer_right(data)
    failures = []
    for i, j in product(range(d), repeat=2):
        if not in_ideal(e, SL[i][j] - SR[i][j] * data.h[i][j]):
            failures.append((i, j))
    note = "exact polynomial identity" if data.m - 1 < e.N else ""
    return Verdict("proportionality", not failures, data.m - 1, d * d, failures, note)


def quasicentral_check(data: ASData, e: HomAlgebra, D: NCPoly | None = None) -> Verdict:
    """``D u^i_j = h^i_j u^i_j D`` modulo the ideal in degree m+1."""
    _require_generic(data)
    _require_diagonal(data)
    d = data.d
    D = quasidet(data) if D is None else D
    failures = []
    for i, j in product(range(d), repeat=2):
        x = u(d, i, j)
        if not in_ideal(e, D * x - (x * D) * data.h[i][j]):
            failures.append((i, j))
    return Verdict("quasicentral", not failures, data.m + 1, d * d, failures)


def grouplike_check(data: ASData, e: HomAlgebra, D: NCPoly | None = None,
                    cap: int | None = None) -> Verdict:
    """``Delta(D) - D (x) D`` lies in ``I_m (x) T + T (x) I_m`` at bidegree (m, m).

    Applies the normal-form projection on both tensor legs; the kernel of
    ``nf (x) nf`` is exactly that sum.
    """
    d, m = data.d, data.m
    cap = exact_cap() if cap is None else cap
    size = (d * d) ** m
    if size * size > cap:
        raise ResourceLimit(f"bidegree ({m},{m}) ambient {size}^2 exceeds cap {cap}")
    D = quasidet(data) if D is None else D
    diff = coproduct(D, d)
    for w1, c1 in D.terms.items():
        for w2, c2 in D.terms.items():
            key = (w1, w2)
            x = diff.get(key, 0) - c1 * c2
            if x:
                diff[key] = x
            else:
                diff.pop(key, None)
    # group by first leg, reduce the second leg, then reduce the first
    by_first: dict = {}
    for (w1, w2), c in diff.items():
        vec = by_first.setdefault(w1, {})
        idx = word_index(w2, d * d)
        vec[idx] = vec.get(idx, 0) + c
    ech = e.ideal_echelon(m) if m >= e.N else None
    nf = (lambda v: ech.reduce(v)) if ech is not None else (lambda v: {k: x for k, x in v.items() if x})
    total: dict = {}
    for w1, vec in by_first.items():
        right = nf(vec)
        if not right:
            continue
        for k1, a in nf({word_index(w1, d * d): Fraction(1)}).items():
            for k2, b in right.items():
                key = (k1, k2)
                x = total.get(key, 0) + a * b
                if x:
                    total[key] = x
                else:
                    total.pop(key, None)
    return Verdict("grouplike", not total, m, len(diff), sorted(total)[:10])


def counit_of_coproduct_recovers(D: NCPoly, d: int) -> bool:
    """``(eps (x) id) Delta(D) == D``."""
    out: dict = {}
    for (w1, w2), c in coproduct(D, d).items():
        e1 = counit(NCPoly.monomial(d * d, w1), d)
        if e1:
            out[w2] = out.get(w2, 0) + c * e1
    return NCPoly(d * d, out, D.degree) == D


def select_cramer_conventions(data: ASData, e: HomAlgebra) -> tuple[list[str], list[str]]:
    """Candidate index placements for which each Cramer identity holds."""
    D = quasidet(data)
    good_left, good_right = [], []
    for conv in CRAMER_CONVENTIONS:
        left, right = cramer_check(data, e, D, conv, conv)
        if left.passed:
            good_left.append(conv)
        if right.passed:
            good_right.append(conv)
    return good_left, good_right


def run_checks(data: ASData, e: HomAlgebra, grouplike: bool = False) -> list[Verdict]:
    """All verdicts applicable to ``data`` against the presentation ``e``.

    ``data`` need not come from ``e``'s own algebra, which is how stale data
    is tested against a perturbed presentation.
    """
    D = quasidet(data)
    out = [coaction_check(data, e, D)]
    if grouplike:
        out.append(grouplike_check(data, e, D))
    if data.generic:
        out += list(cramer_check(data, e, D))
        if data.diagonal:
            out += [proportionality_check(data, e), quasicentral_check(data, e, D)]
    return out


# ---------- report ----------

@dataclass
class HopfReport:
    algebra: str
    presentation_hash: str
    m: int | None = None
    generic: bool | None = None
    diagonal: bool | None = None
    asdata: ASData | None = None
    e_dims: dict = field(default_factory=dict)
    counit_D: Fraction | None = None
    D_terms: int | None = None
    verdicts: list = field(default_factory=list)
    antipode: str = "not assessed"
    antipode_of_D: str = "not assessed"
    notes: list = field(default_factory=list)

    def verdict(self, name: str) -> Verdict | None:
        return next((v for v in self.verdicts if v.name == name), None)

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts) and (self.counit_D in (None, 1))

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "presentation_hash": self.presentation_hash,
            "top_degree": self.m,
            "generic": self.generic,
            "Q_diagonal": self.diagonal,
            "asdata": self.asdata.to_json() if self.asdata else None,
            "e_relations": self.e_dims,
            "counit_D": None if self.counit_D is None else format_rational(self.counit_D),
            "D_terms": self.D_terms,
            "verdicts": [v.to_json() for v in self.verdicts],
            "antipode": self.antipode,
            "antipode_of_D": self.antipode_of_D,
            "cramer_conventions": {"left": CRAMER_LEFT, "right": CRAMER_RIGHT},
            "notes": list(self.notes),
            "all_passed": self.all_passed,
        }

    def to_markdown(self) -> str:
        lines = [f"# Hopf report: {self.algebra}", ""]
        lines.append(f"- presentation hash: `{self.presentation_hash}`")
        lines.append(f"- top degree m: {self.m}")
        lines.append(f"- generic: {self.generic}; Q diagonal: {self.diagonal}")
        if self.asdata is not None and self.asdata.h is not None:
            h = "; ".join(" ".join(format_rational(x) for x in row) for row in self.asdata.h)
            lines.append(f"- h-matrix: {h}")
        if self.counit_D is not None:
            lines.append(f"- eps(D) = {format_rational(self.counit_D)} ({self.D_terms} terms)")
        for k, v in self.e_dims.items():
            lines.append(f"- {k}: {v}")
        lines += ["", "| identity | degree | checked | verdict |", "|---|---|---|---|"]
        for v in self.verdicts:
            mark = "pass" if v.passed else f"FAIL {v.failures}"
            lines.append(f"| {v.name} | {v.degree} | {v.checked} | {mark} |")
        lines += ["", f"antipode: {self.antipode}", f"S(D): {self.antipode_of_D}"]
        for n in self.notes:
            lines.append(f"- note: {n}")
        return "\n".join(lines) + "\n"


def hopf_report(a: HomAlgebra, grouplike: bool = True, cap: int | None = None) -> HopfReport:
    """Run the whole pipeline; non-generic or non-diagonal input is a recorded outcome."""
    rep = HopfReport(a.name, a.presentation_hash())
    e = e_bialgebra(a)
    rep.e_dims = {k: e.meta[k] for k in ("dim_r", "dim_r_check", "dim_relations")}
    try:
        rep.m = top_degree(a)
        data = as_data(a, rep.m)
    except (NotOneDimensionalTop, NoExactQ, SingularSliceSpace) as exc:
        rep.notes.append(f"{type(exc).__name__}: {exc}")
        rep.antipode = "no antipode constructed (no regularity data)"
        return rep
    rep.asdata = data
    rep.generic = data.generic
    rep.diagonal = data.diagonal
    try:
        D = quasidet(data)
    except SingularKappa as exc:
        rep.notes.append(f"SingularKappa: {exc}")
        rep.antipode = "no antipode constructed (kappa = 0)"
        return rep
    rep.counit_D = counit(D, data.d)
    rep.D_terms = len(D)
    coact = coaction_check(data, e, D)
    rep.verdicts.append(coact)
    if grouplike:
        try:
            rep.verdicts.append(grouplike_check(data, e, D, cap))
        except ResourceLimit as exc:
            rep.notes.append(f"grouplike skipped: {exc}")
    if not data.diagonal:
        rep.antipode = "no antipode constructed (non-diagonal Q)"
        rep.notes.append("NotDiagonalQ: Cramer, proportionality and quasi-centrality not assessed")
        return rep
    if not data.generic:
        rep.antipode = "no antipode constructed (non-generic)"
        return rep
    left, right = cramer_check(data, e, D)
    rep.verdicts += [left, right, proportionality_check(data, e), quasicentral_check(data, e, D)]
    rep.antipode = "pass" if left.passed and right.passed else "fail"
    gl = rep.verdict("grouplike")
    if rep.antipode == "pass" and rep.counit_D == 1 and gl is not None and gl.passed:
        rep.antipode_of_D = "S(D) = D^-1 (from eps(D) = 1 and Delta(D) = D (x) D)"
    return rep
