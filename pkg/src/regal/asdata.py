"""Artin-Schelter regularity data: top form, twist matrix Q, kappas, h-matrix.

The top form is read on the predual side: ``W = (R (x) E) & (E (x) R)`` inside
``E^(x (N+1))`` for algebras of global dimension 3, ``W = R`` for planes.
Components of omega are identified with those of the dual top element through
the identity pairing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import (
    InvalidParam,
    NoExactQ,
    NotDiagonalQ,
    NotOneDimensionalTop,
    SingularSliceSpace,
    UnknownKey,
)
from .exactlin import Subspace, as_sparse, format_rational, intersect, parse_rational, rref, to_dense
from .homog import HomAlgebra, algebra
from .tensor import shift_embed, words

Matrix = tuple  # tuple of row tuples


# ---------- top form ----------

def top_space(a: HomAlgebra, m: int) -> Subspace:
    if m == a.N:
        return a.R
    if m == a.N + 1:
        return intersect(shift_embed(a.R, 0, m, a.d), shift_embed(a.R, 1, m, a.d))
    raise ValueError(f"top degree must be N or N+1, got {m}")


def top_degree(a: HomAlgebra) -> int:
    """``N + 1`` when ``(R x E) & (E x R)`` is nonzero (dimension 3), else ``N``."""
    return a.N + 1 if top_space(a, a.N + 1).dim() else a.N


def top_form(a: HomAlgebra, m: int | None = None) -> tuple:
    """Spanning vector of the one-dimensional top space, first nonzero entry 1."""
    if m is None:
        m = top_degree(a)
    w = top_space(a, m)
    if w.dim() != 1:
        raise NotOneDimensionalTop(w.dim(), m)
    vec = w.basis[0]
    lead = vec[min(vec)]
    return tuple(x / lead for x in to_dense(vec, a.d ** m))


# ---------- Q ----------

def left_slice(omega, d: int, m: int, i: int) -> list:
    """``(omega_{iA})_A``."""
    size = d ** (m - 1)
    return list(omega[i * size:(i + 1) * size])


def right_slice(omega, d: int, m: int, i: int) -> list:
    """``(omega_{Ai})_A``."""
    return list(omega[i::d])


def q_matrix(omega, d: int, m: int) -> Matrix:
    """Solve ``omega_{iA} = sum_j Q_i^j omega_{Aj}`` for all words A of length m-1."""
    omega = _dense(omega, d ** m)
    if not any(omega):
        raise ValueError("omega must be nonzero")
    g = [right_slice(omega, d, m, j) for j in range(d)]
    _, rank = rref(g)
    if rank < d:
        raise SingularSliceSpace(f"right slices span only {rank} of {d} dimensions")
    L = d ** (m - 1)
    Q = []
    for i in range(d):
        f = left_slice(omega, d, m, i)
        # columns: g_0..g_{d-1} | f_i
        aug = [[g[j][a] for j in range(d)] + [f[a]] for a in range(L)]
        red, r = rref(aug)
        if any(row[d] != 0 and not any(row[:d]) for row in red):
            raise NoExactQ(f"row {i}: left slice is not a combination of right slices")
        row = [Fraction(0)] * d
        for red_row in red[:r]:
            piv = next(c for c in range(d) if red_row[c] != 0)
            row[piv] = red_row[d]
        Q.append(tuple(row))
    Q = tuple(Q)
    for i in range(d):
        f = left_slice(omega, d, m, i)
        comb = [sum(Q[i][j] * g[j][a] for j in range(d)) for a in range(L)]
        assert comb == f, "Q does not reproduce the left slices"
    return Q


def is_diagonal(Q: Matrix) -> bool:
    return all(Q[i][j] == 0 for i in range(len(Q)) for j in range(len(Q)) if i != j)


def _dense(omega, n: int) -> list:
    if isinstance(omega, Mapping):
        return to_dense(as_sparse(omega, n), n)
    if len(omega) != n:
        raise ValueError(f"omega has length {len(omega)}, expected {n}")
    return [Fraction(x) for x in omega]


def rotate(word: tuple) -> tuple:
    """Cyclic action on indices: last letter moves to the front."""
    return word[-1:] + word[:-1]


def period(word: tuple) -> int:
    w = word
    for n in range(1, len(word) + 1):
        w = rotate(w)
        if w == word:
            return n
    return len(word)


@dataclass
class OrbitReport:
    passed: bool
    orbit_failures: list = field(default_factory=list)
    sigma_failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "orbit_failures": [list(w) for w in self.orbit_failures],
            "sigma_failures": [list(w) for w in self.sigma_failures],
        }


def orbit_check(omega, Q: Matrix, d: int | None = None, m: int | None = None) -> OrbitReport:
    """For each periodic word J: omega_J = 0 or the product of Q over one period is 1.

    Also flags words where the twisted cyclic symmetry ``omega_{iA} = Q_i omega_{Ai}``
    fails, so perturbations on non-periodic orbits are caught too.
    """
    if not is_diagonal(Q):
        raise NotDiagonalQ("orbit condition needs a diagonal Q")
    d = d or len(Q)
    if m is None:
        m = _degree(len(omega), d)
    omega = _dense(omega, d ** m)
    orbit_bad, sigma_bad = [], []
    for idx, word in enumerate(words(d, m)):
        w = omega[idx]
        n = period(word)
        if w:
            prod = Fraction(1)
            for j in word[:n]:
                prod *= Q[j][j]
            if prod != 1:
                orbit_bad.append(word)
        # word = A i  ->  rotate(word) = i A
        i = word[-1]
        rot = rotate(word)
        rot_idx = sum(c * d ** (m - 1 - k) for k, c in enumerate(rot))
        if omega[rot_idx] != Q[i][i] * w:
            sigma_bad.append(word)
    return OrbitReport(not orbit_bad and not sigma_bad, orbit_bad, sigma_bad)


def _degree(length: int, d: int) -> int:
    m, size = 0, 1
    while size < length:
        size *= d
        m += 1
    return m


# ---------- kappas ----------

H_CONVENTIONS = ("right_slice", "printed")
# the printed ratio uses kappa-tilde; with Q as defined above only the
# right-slice ratio makes S_L = h S_R hold (see tests/test_hopf.py)
DEFAULT_H_CONVENTION = "right_slice"


def h_matrix(kappa, kappa_tilde, Q: Matrix, convention: str = DEFAULT_H_CONVENTION) -> Matrix | None:
    """Multiplicatively antisymmetric matrix ``h[i][j] = f(j) / f(i)``.

    ``right_slice``: ``f(i) = kappa^i Q_i^i``;  ``printed``: ``f(i) = kappa~_i Q_i^i``.
    Returns None when some ``f(i)`` vanishes.
    """
    d = len(Q)
    if convention == "right_slice":
        f = [kappa[i] * Q[i][i] for i in range(d)]
    elif convention == "printed":
        f = [kappa_tilde[i] * Q[i][i] for i in range(d)]
    else:
        raise ValueError(f"unknown convention {convention!r}")
    if any(x == 0 for x in f):
        return None
    return tuple(tuple(f[j] / f[i] for j in range(d)) for i in range(d))


@dataclass
class KappaData:
    kappa: tuple
    kappa_tilde: tuple
    kappa_total: Fraction
    h: Matrix | None
    generic: bool
    cyclicity_ok: bool | None


def kappas(omega, Q: Matrix, d: int, m: int, convention: str = DEFAULT_H_CONVENTION) -> KappaData:
    omega = _dense(omega, d ** m)
    kappa = tuple(sum(x * x for x in right_slice(omega, d, m, i)) for i in range(d))
    kappa_tilde = tuple(sum(x * x for x in left_slice(omega, d, m, i)) for i in range(d))
    total = sum(x * x for x in omega)
    assert total == sum(kappa) == sum(kappa_tilde)
    generic = all(kappa) and all(kappa_tilde)
    h, cyclic = None, None
    if is_diagonal(Q):
        cyclic = all(kappa_tilde[i] == Q[i][i] ** 2 * kappa[i] for i in range(d))
        h = h_matrix(kappa, kappa_tilde, Q, convention)
        if h is None:
            generic = False
    return KappaData(kappa, kappa_tilde, total, h, bool(generic), cyclic)


@dataclass
class ASData:
    d: int
    m: int
    omega: tuple
    Q: Matrix
    kappa: tuple
    kappa_tilde: tuple
    kappa_total: Fraction
    h: Matrix | None
    generic: bool
    diagonal: bool
    cyclicity_ok: bool | None = None

    @classmethod
    def from_omega(cls, omega, d: int, m: int, convention: str = DEFAULT_H_CONVENTION) -> "ASData":
        omega = tuple(_dense(omega, d ** m))
        Q = q_matrix(omega, d, m)
        k = kappas(omega, Q, d, m, convention)
        return cls(d, m, omega, Q, k.kappa, k.kappa_tilde, k.kappa_total, k.h,
                   k.generic, is_diagonal(Q), k.cyclicity_ok)

    def scaled(self, lam) -> "ASData":
        """Same data with omega multiplied by ``lam``."""
        lam = Fraction(lam)
        return ASData.from_omega([x * lam for x in self.omega], self.d, self.m)

    def to_json(self) -> dict:
        fr = format_rational
        mat = lambda M: None if M is None else [[fr(x) for x in row] for row in M]
        return {
            "m": self.m,
            "omega": {"".join(map(str, w)): fr(x) for w, x in zip(words(self.d, self.m), self.omega) if x},
            "Q": mat(self.Q),
            "Q_diagonal": self.diagonal,
            "kappa": [fr(x) for x in self.kappa],
            "kappa_tilde": [fr(x) for x in self.kappa_tilde],
            "kappa_total": fr(self.kappa_total),
            "h": mat(self.h),
            "generic": self.generic,
            "cyclicity_ok": self.cyclicity_ok,
        }


def as_data(a: HomAlgebra, m: int | None = None) -> ASData:
    """Full regularity data of ``a``; raises if the top space is not a line."""
    if m is None:
        m = top_degree(a)
    return ASData.from_omega(top_form(a, m), a.d, m)


# ---------- catalog ----------

@dataclass(frozen=True)
class CatalogEntry:
    key: str
    params: tuple
    builder: Callable
    description: str


def _q(params, key="q") -> Fraction:
    if key not in params:
        raise InvalidParam(f"missing parameter {key!r}")
    q = params[key]
    try:
        q = parse_rational(q) if isinstance(q, str) else Fraction(q)
    except (ValueError, TypeError):
        raise InvalidParam(f"parameter {key!r} is not a rational: {q!r}") from None
    if q == 0:
        raise InvalidParam(f"parameter {key!r} must be nonzero")
    return q


def manin_plane(q) -> HomAlgebra:
    q = _q({"q": q})
    return algebra(2, 2, [{(1, 0): 1, (0, 1): -q}], f"manin_plane(q={format_rational(q)})",
                   ("x", "y"), {"q": q})


def jordan_plane() -> HomAlgebra:
    return algebra(2, 2, [{(0, 1): 1, (1, 0): -1, (1, 1): -1}], "jordan_plane", ("x", "y"))


def heisenberg_cubic() -> HomAlgebra:
    rels = [
        {(0, 0, 1): 1, (0, 1, 0): -2, (1, 0, 0): 1},
        {(1, 1, 0): 1, (1, 0, 1): -2, (0, 1, 1): 1},
    ]
    return algebra(2, 3, rels, "heisenberg_cubic", ("x", "y"))


def quantum_space_3(q) -> HomAlgebra:
    q = _q({"q": q})
    rels = [{(j, i): 1, (i, j): -q} for i in range(3) for j in range(i + 1, 3)]
    return algebra(3, 2, rels, f"quantum_space_3(q={format_rational(q)})", ("x", "y", "z"), {"q": q})


CATALOG = {
    "manin_plane": CatalogEntry("manin_plane", ("q",), lambda p: manin_plane(_q(p)),
                                "yx - q xy = 0, q != 0"),
    "jordan_plane": CatalogEntry("jordan_plane", (), lambda p: jordan_plane(),
                                 "xy - yx - yy = 0"),
    "heisenberg_cubic": CatalogEntry("heisenberg_cubic", (), lambda p: heisenberg_cubic(),
                                     "[x,[x,y]] = [y,[y,x]] = 0"),
    "quantum_space_3": CatalogEntry("quantum_space_3", ("q",), lambda p: quantum_space_3(_q(p)),
                                    "x_j x_i - q x_i x_j = 0 (i < j), q != 0"),
}


def catalog(key: str, params: Mapping | None = None) -> HomAlgebra:
    params = dict(params or {})
    if key not in CATALOG:
        raise UnknownKey(f"unknown catalog key {key!r}; known: {', '.join(sorted(CATALOG))}")
    entry = CATALOG[key]
    extra = set(params) - set(entry.params)
    if extra:
        raise InvalidParam(f"{key} takes no parameter(s) {sorted(extra)}")
    return entry.builder(params)
