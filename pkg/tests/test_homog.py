from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
import sympy

from regal import homog
from regal.asdata import catalog
from regal.errors import DegreeMismatch, DimensionMismatch, FormatError, InsufficientData, ResourceLimit
from regal.exactlin import Subspace, random_prime, span
from regal.homog import (algebra, algebra_from_json, algebra_to_json, bullet, coaction_relations,
                         degree_dim, dual, e_bialgebra, end_semigroup, finite_differences, gk_fit,
                         hilbert_table, is_ideal_member, load_algebra, normal_form, polynomial_ring_dims)

def manin(q="2"):
    return catalog("manin_plane", {"q": q})


# ---------- dual / bullet / end / e ----------

def test_dual_examples():
    full = algebra(2, 2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert dual(full).R.dim() == 0
    d = dual(manin())
    assert d.R.dim() == 3
    assert d.R.contains({0: 1}) and d.R.contains({3: 1})
    # x(x)y + 2 y(x)x pairs to -2 + 2 = 0 with y(x)x - 2 x(x)y
    assert d.R.contains({1: 1, 2: 2})
    assert not d.R.contains({1: 1, 2: Fraction(1, 2)})
    assert dual(catalog("heisenberg_cubic")).R.dim() == 6


@pytest.mark.parametrize("key,params", [("manin_plane", {"q": "5/7"}), ("jordan_plane", {}),
                                        ("heisenberg_cubic", {}), ("quantum_space_3", {"q": "3"})])
def test_dual_is_involution_and_degree_N_rule(key, params):
    a = catalog(key, params)
    assert dual(dual(a)).R == a.R
    assert degree_dim(a, a.N) == a.d ** a.N - a.R.dim()


def test_bullet_dimensions():
    zero = algebra(2, 2, [])
    assert bullet(zero, manin()).R.dim() == 0
    end = end_semigroup(manin())
    assert end.R.dim() == 3 and end.R.ambient_dim == 16 and end.d == 4
    cubic_end = end_semigroup(catalog("heisenberg_cubic"))
    assert cubic_end.R.dim() == 12 and cubic_end.R.ambient_dim == 64
    with pytest.raises(DegreeMismatch):
        bullet(manin(), catalog("heisenberg_cubic"))


def test_bullet_multiplicative_random():
    rng = random.Random(6)
    for _ in range(5):
        a = algebra(2, 2, [[rng.randint(-2, 2) for _ in range(4)] for _ in range(rng.randint(0, 3))])
        b = algebra(3, 2, [[rng.randint(-2, 2) for _ in range(9)] for _ in range(rng.randint(0, 4))])
        assert bullet(a, b).R.dim() == a.R.dim() * b.R.dim()


def test_end_of_free_algebra_is_free():
    free = algebra(2, 2, [])
    assert end_semigroup(free).R.dim() == 0


def test_e_bialgebra_dimensions():
    free = e_bialgebra(algebra(2, 2, []))
    assert free.meta["dim_r"] == free.meta["dim_r_check"] == free.meta["dim_relations"] == 0
    e = e_bialgebra(manin())
    assert (e.meta["dim_r"], e.meta["dim_r_check"], e.meta["dim_relations"]) == (3, 3, 6)
    c = e_bialgebra(catalog("heisenberg_cubic"))
    assert (c.meta["dim_r"], c.meta["dim_r_check"]) == (12, 12)
    assert c.R.ambient_dim == 64


def test_transpose_reading_degenerates():
    r, rc = coaction_relations(manin(), "transpose")
    assert rc == r
    with pytest.raises(ValueError):
        coaction_relations(manin(), "sideways")


def test_e_of_manin_is_quantum_matrices():
    # e(manin_plane(q)) has the Hilbert series of the commutative ring in 4 variables
    e = e_bialgebra(manin("2"))
    assert hilbert_table(e, 4).values == polynomial_ring_dims(4, 4)


# ---------- degree dims ----------

def test_hilbert_examples():
    assert degree_dim(manin(), 0) == 1 and degree_dim(manin(), 1) == 2
    assert hilbert_table(manin(), 5).values == [1, 2, 3, 4, 5, 6]
    assert hilbert_table(dual(catalog("heisenberg_cubic")), 4).values == [1, 2, 4, 2, 1]
    with pytest.raises(ValueError):
        degree_dim(manin(), -1)


def test_hilbert_exact_vs_modular_agree_on_corpus():
    for key, params, n in [("manin_plane", {"q": "2"}, 6), ("heisenberg_cubic", {}, 7),
                           ("quantum_space_3", {"q": "2"}, 5), ("jordan_plane", {}, 6)]:
        a = catalog(key, params)
        ex = hilbert_table(a, n, "exact")
        mod = hilbert_table(a, n, "modular", seed=1)
        assert ex.values == mod.values
        assert mod.prime == random_prime(1)
        assert {m for _, _, m in mod.dims[a.N:]} == {"modular-lower-bound"}
        assert ex.prime is None


def test_hilbert_auto_switches_to_modular(monkeypatch):
    monkeypatch.setattr(homog, "AUTO_EXACT_AMBIENT", 64)
    a = catalog("heisenberg_cubic")
    t = hilbert_table(a, 7, "auto", seed=0)
    modes = [m for _, _, m in t.dims]
    assert modes[6] == "exact" and modes[7] == "modular-lower-bound"
    assert t.values == hilbert_table(a, 7).values
    with pytest.raises(ValueError):
        hilbert_table(a, 3, "guess")


def test_resource_limit(monkeypatch):
    monkeypatch.setenv("REGAL_MAX_AMBIENT", "100")
    a = catalog("heisenberg_cubic")
    assert degree_dim(a, 6) == 16
    with pytest.raises(ResourceLimit):
        degree_dim(a, 7)


# ---------- normal forms ----------

def test_normal_form_manin_rewrite():
    q = Fraction(2)
    a = manin("2")
    yx = [0, 0, 1, 0]
    assert normal_form(a, yx) == {1: q}
    assert is_ideal_member(a, [0, -2, 1, 0])
    nf = normal_form(a, yx)
    assert normal_form(a, nf, 2) == nf
    with pytest.raises(DimensionMismatch):
        normal_form(a, [1, 2, 3])
    with pytest.raises(DimensionMismatch):
        normal_form(a, {0: 1})


def test_normal_form_difference_is_in_ideal():
    rng = random.Random(12)
    for key, params in [("heisenberg_cubic", {}), ("quantum_space_3", {"q": "-1/2"})]:
        a = catalog(key, params)
        n = a.N + 1
        v = {k: Fraction(rng.randint(-3, 3)) for k in rng.sample(range(a.d ** n), 6)}
        nf = normal_form(a, v, n)
        diff = {k: v.get(k, 0) - nf.get(k, 0) for k in set(v) | set(nf)}
        assert is_ideal_member(a, diff, n)
        assert set(nf) <= set(a.basis_words(n))


# ---------- growth ----------

@pytest.mark.parametrize("dims,degree,gk", [
    ([1, 1, 1, 1, 1], 0, 1),
    ([1, 2, 3, 4, 5, 6], 1, 2),
    ([1, 3, 6, 10, 15], 2, 3),
    ([1, 9, 45, 165, 495, 1287], 8, 9),
])
def test_gk_fit_examples(dims, degree, gk):
    g = gk_fit(dims)
    assert (g.degree, g.gk_estimate, g.status) == (degree, gk, "stabilized")
    assert g.to_json()["exact_claim"] is False


def test_gk_fit_finite_and_inconclusive():
    assert gk_fit([1, 2, 1, 0, 0, 0]).gk_estimate == 0
    assert gk_fit([1, 2, 4, 8, 16, 32, 64]).status == "inconclusive"
    with pytest.raises(InsufficientData):
        gk_fit([1, 2, 3])


def test_finite_differences_are_series_coefficients():
    t = sympy.symbols("t")
    dims = [1, 4, 9, 16, 25]
    for k in range(4):
        poly = sympy.expand((1 - t) ** k * sum(c * t ** n for n, c in enumerate(dims)))
        assert finite_differences(dims, k) == [poly.coeff(t, n) for n in range(len(dims))]


def test_polynomial_ring_dims():
    assert polynomial_ring_dims(3, 4) == [1, 3, 6, 10, 15]


# ---------- JSON ----------

def test_json_round_trip_and_hash_stability():
    a = catalog("quantum_space_3", {"q": "2/3"})
    b = algebra_from_json(json.loads(json.dumps(algebra_to_json(a))))
    assert b.R == a.R and b.d == 3 and b.N == 2
    assert b.presentation_hash() == a.presentation_hash()
    assert catalog("manin_plane", {"q": "2"}).presentation_hash() != manin("3").presentation_hash()


@pytest.mark.parametrize("mutate,path", [
    (lambda o: o.__setitem__("N", 3), "relations[0][0].word"),
    (lambda o: o["relations"][0][0].__setitem__("coef", "1/0"), "relations[0][0].coef"),
    (lambda o: o["relations"][0][1].__setitem__("word", [0, 5]), "relations[0][1].word[1]"),
    (lambda o: o.pop("dim"), ""),
    (lambda o: o.__setitem__("generators", ["x"]), "generators"),
])
def test_json_errors_carry_field_path(mutate, path):
    obj = algebra_to_json(manin(), include_meta=False)
    mutate(obj)
    with pytest.raises(FormatError) as info:
        algebra_from_json(obj)
    assert info.value.path == path


def test_load_algebra_reports_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "dim": 2,\n  "N": 2,\n  oops\n}\n')
    with pytest.raises(FormatError) as info:
        load_algebra(p)
    assert "line 4" in str(info.value)


def test_algebra_builder_validation():
    with pytest.raises(ValueError):
        algebra(2, 1, [])
    with pytest.raises(DimensionMismatch):
        algebra(2, 2, [[1, 0, 0]])
    a = algebra(2, 2, [{(1, 0): 1, (0, 1): -1}])
    assert a.R == span([[0, -1, 1, 0]], 4)
    assert Subspace.full(4) != a.R
