from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product

import pytest
import sympy

from regal.asdata import (CATALOG, ASData, as_data, catalog, h_matrix, is_diagonal, kappas, left_slice,
                          orbit_check, period, q_matrix, right_slice, rotate, top_degree, top_form,
                          top_space)
from regal.errors import (InvalidParam, NoExactQ, NotDiagonalQ, NotOneDimensionalTop,
                          SingularSliceSpace, UnknownKey)
from regal.homog import algebra
from regal.tensor import word_index, words

XY, YX = 1, 2  # word indices of x(x)y and y(x)x


def test_manin_top_form():
    for q in (Fraction(2), Fraction(-3, 5)):
        a = catalog("manin_plane", {"q": q})
        omega = top_form(a)
        assert top_degree(a) == 2
        # first nonzero coordinate in word order is x(x)y
        assert omega[XY] == 1
        # rescaled to omega_yx = 1 it reads omega_xy = -q
        lam = 1 / omega[YX]
        assert omega[YX] * lam == 1 and omega[XY] * lam == -q
        assert omega[0] == omega[3] == 0


def test_cubic_top_space_is_a_line():
    a = catalog("heisenberg_cubic")
    assert top_degree(a) == 4
    assert top_space(a, 4).dim() == 1
    omega = top_form(a)
    assert len(omega) == 16 and omega[next(i for i, x in enumerate(omega) if x)] == 1


def test_quantum_space_top_form_support():
    q = Fraction(2)
    a = catalog("quantum_space_3", {"q": q})
    omega = top_form(a, 3)
    support = {i for i, x in enumerate(omega) if x}
    assert support == {word_index(p, 3) for p in permutations(range(3))}
    # each coefficient is +- a power of q (relative to the leading one)
    for i in support:
        x = abs(omega[i])
        assert any(x == q ** k for k in range(-3, 4))


def test_top_form_errors():
    free = algebra(2, 2, [])
    with pytest.raises(NotOneDimensionalTop) as info:
        top_form(free)
    assert info.value.dim == 0
    with pytest.raises(ValueError):
        top_space(free, 5)


def test_slices():
    omega = list(range(8))  # d = 2, m = 3
    assert left_slice(omega, 2, 3, 1) == [4, 5, 6, 7]
    assert right_slice(omega, 2, 3, 1) == [1, 3, 5, 7]


# ---------- Q ----------

def test_manin_q_matrix():
    a = catalog("manin_plane", {"q": "2"})
    Q = q_matrix(top_form(a), 2, 2)
    assert Q == ((-2, 0), (0, Fraction(-1, 2)))
    # scale invariance
    assert q_matrix([3 * x for x in top_form(a)], 2, 2) == Q


def test_symmetric_omega_gives_identity():
    omega = [0, 1, 1, 0]
    assert q_matrix(omega, 2, 2) == ((1, 0), (0, 1))


def test_cubic_q_is_diagonal_identity():
    data = as_data(catalog("heisenberg_cubic"))
    assert data.diagonal and data.Q == ((1, 0), (0, 1))


def test_q_matrix_solves_defining_equation_with_sympy():
    data = as_data(catalog("quantum_space_3", {"q": "3"}))
    d, m = 3, 3
    Qs = sympy.Matrix(data.Q)
    G = sympy.Matrix([right_slice(data.omega, d, m, j) for j in range(d)])
    F = sympy.Matrix([left_slice(data.omega, d, m, i) for i in range(d)])
    assert Qs * G == F
    assert Qs == sympy.diag(9, 1, sympy.Rational(1, 9))


def test_q_matrix_errors():
    with pytest.raises(SingularSliceSpace):
        q_matrix([1, 0, 1, 0], 2, 2)  # right slice of y is zero
    with pytest.raises(NoExactQ):
        # left slice of x is (1, 0, 0, 1); right slices are (1, 0, 0, 0) and (0, 1, 1, 0)
        q_matrix([1, 0, 0, 1, 0, 1, 0, 0], 2, 3)
    with pytest.raises(ValueError):
        q_matrix([0, 0, 0, 0], 2, 2)


def test_jordan_q_is_not_diagonal():
    data = as_data(catalog("jordan_plane"))
    assert not data.diagonal and not is_diagonal(data.Q)
    assert data.h is None
    with pytest.raises(NotDiagonalQ):
        orbit_check(data.omega, data.Q)


# ---------- orbits ----------

def test_rotate_and_period():
    assert rotate((0, 1, 2)) == (2, 0, 1)
    assert period((0, 1, 0, 1)) == 2
    assert period((1, 1, 1)) == 1
    assert period((0, 0, 1)) == 3


def test_orbit_check_manin():
    data = as_data(catalog("manin_plane", {"q": "2"}))
    rep = orbit_check(data.omega, data.Q)
    assert rep.passed
    assert data.Q[0][0] * data.Q[1][1] == 1


@pytest.mark.parametrize("key,params", [("manin_plane", {"q": "2"}), ("heisenberg_cubic", {}),
                                        ("quantum_space_3", {"q": "2"})])
def test_orbit_mutation_is_reported(key, params):
    data = as_data(catalog(key, params))
    assert orbit_check(data.omega, data.Q, data.d, data.m).passed
    for idx, word in enumerate(words(data.d, data.m)):
        if period(word) == 1 and data.Q[word[0]][word[0]] == 1:
            continue  # a constant word with Q_ii = 1 may carry any value
        bumped = list(data.omega)
        bumped[idx] += 1
        rep = orbit_check(bumped, data.Q, data.d, data.m)
        assert not rep.passed
        assert word in rep.orbit_failures or word in rep.sigma_failures


# ---------- kappas / h ----------

def test_manin_kappas_on_rescaled_omega():
    data = as_data(catalog("manin_plane", {"q": "2"})).scaled(-2)  # omega_yx = 1, omega_xy = -2
    assert data.omega[YX] == 1 and data.omega[XY] == -2
    assert data.kappa == (1, 4)
    assert data.kappa_tilde == (4, 1)
    assert data.kappa_tilde[0] == data.Q[0][0] ** 2 * data.kappa[0]
    assert data.kappa_total == 5
    assert data.cyclicity_ok


def test_h_diagonal_and_antisymmetry_everywhere():
    for key in CATALOG:
        params = {"q": "3/2"} if CATALOG[key].params else {}
        data = as_data(catalog(key, params))
        assert data.kappa_total == sum(data.kappa) == sum(data.kappa_tilde)
        if data.h is None:
            continue
        d = data.d
        for i, j, k in product(range(d), repeat=3):
            assert data.h[i][i] == 1
            assert data.h[i][j] * data.h[j][i] == 1
            assert data.h[i][j] * data.h[j][k] == data.h[i][k]


def test_zero_slice_is_not_generic():
    k = kappas([0, 1, 0, 0], ((1, 0), (0, 1)), 2, 2)
    assert k.kappa == (0, 1) and not k.generic


def test_h_matrix_conventions():
    Q = ((Fraction(-2), 0), (0, Fraction(-1, 2)))
    h = h_matrix((Fraction(1, 4), 1), (1, Fraction(1, 4)), Q)
    assert h == ((1, 1), (1, 1))
    printed = h_matrix((Fraction(1, 4), 1), (1, Fraction(1, 4)), Q, "printed")
    assert printed[0][1] == Fraction(1, 16)
    with pytest.raises(ValueError):
        h_matrix((1, 1), (1, 1), Q, "other")
    assert h_matrix((0, 1), (0, 1), Q) is None


def test_asdata_scale_invariants():
    data = as_data(catalog("heisenberg_cubic"))
    scaled = data.scaled(Fraction(-7, 3))
    assert scaled.Q == data.Q and scaled.h == data.h and scaled.generic == data.generic
    assert scaled.kappa_total == data.kappa_total * Fraction(49, 9)


def test_cubic_asdata_regression():
    data = as_data(catalog("heisenberg_cubic"))
    assert data.kappa == (6, 6) and data.kappa_tilde == (6, 6) and data.kappa_total == 12
    assert data.generic
    assert data.h == ((1, 1), (1, 1))
    j = data.to_json()
    assert j["omega"] == {"0011": "1", "0101": "-2", "0110": "1", "1001": "1", "1010": "-2", "1100": "1"}


def test_asdata_from_omega_round_trip():
    data = as_data(catalog("quantum_space_3", {"q": "2"}))
    again = ASData.from_omega(data.omega, 3, 3)
    assert again == data


# ---------- catalog ----------

def test_catalog_entries():
    a = catalog("manin_plane", {"q": "1"})
    assert a.R.contains({YX: 1, XY: -1}) and a.R.dim() == 1
    assert catalog("jordan_plane").R.dim() == 1
    c = catalog("heisenberg_cubic")
    assert c.R.dim() == 2 and c.d ** c.N - c.R.dim() == 6
    assert catalog("quantum_space_3", {"q": "2"}).R.dim() == 3


@pytest.mark.parametrize("key,params,exc", [
    ("manin_plane", {"q": "0"}, InvalidParam),
    ("manin_plane", {}, InvalidParam),
    ("manin_plane", {"q": "abc"}, InvalidParam),
    ("jordan_plane", {"q": "2"}, InvalidParam),
    ("quantum_space_3", {"q": 0}, InvalidParam),
    ("type_E", {}, UnknownKey),
])
def test_catalog_errors(key, params, exc):
    with pytest.raises(exc):
        catalog(key, params)
