import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multimoment.action import NPlecticStructure, hamiltonian_vector_field
from multimoment.linfty import (GradedElement, HamiltonianPair, NotHamiltonian, bracket, element, morphism_consistency,
                                unary)
from multimoment.moment import HomotopyMomentMap, Obstructed, construct_homotopy
from multimoment.polyforms import Poly, PolyForm, PolyVec, ext_d
from multimoment.scene import load_fixture

from _corpus import corpus, fixture_map, random_form, random_poly, symplectic_corpus

R2 = NPlecticStructure(2, 1, PolyForm.basic(2, (0, 1)))
R3 = NPlecticStructure(3, 2, PolyForm.basic(3, (0, 1, 2)))


def fn(p):
    return PolyForm.function(p)


def pair(s, a):
    return element(s, a, hamiltonian_vector_field(s, a))


def omega_on(s, v, w) -> Poly:
    """omega(v, w) for a 2-form, expanded coordinate by coordinate."""
    out = Poly.zero(s.N)
    for (i, j), c in s.omega.comps.items():
        out = out + c * (v.comps[i] * w.comps[j] - v.comps[j] * w.comps[i])
    return out


def test_hamiltonian_pair_check():
    x = Poly.var(2, 0)
    HamiltonianPair(fn(x), PolyVec([Poly.zero(2), Poly.const(2, 1)]), R2)
    with pytest.raises(NotHamiltonian):
        HamiltonianPair(fn(x), PolyVec([Poly.const(2, 1), Poly.zero(2)]), R2)
    with pytest.raises(ValueError):
        HamiltonianPair(PolyForm.basic(2, (0,)), PolyVec.zero(2), R2)


def test_graded_element_shapes():
    with pytest.raises(ValueError):
        GradedElement(1, fn(Poly.zero(3)), R3)
    with pytest.raises(ValueError):
        GradedElement(-1, PolyForm.basic(3, (0,)), R3)
    assert element(R3, fn(Poly.var(3, 0))).degree == -1
    with pytest.raises(ValueError):
        element(R3, PolyForm.basic(3, (0,)))


def test_unary_examples():
    x = Poly.var(3, 0)
    out = unary(element(R3, fn(x)))
    assert out.degree == 0 and out.form == PolyForm.basic(3, (0,)) and out.payload.field.is_zero()
    assert unary(element(R3, fn(Poly.const(3, 5)))).is_zero()
    with pytest.raises(ValueError):
        unary(pair(R3, PolyForm.basic(3, (1,), x)))


def test_poisson_bracket_example():
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    px, py = pair(R2, fn(x)), pair(R2, fn(y))
    assert px.payload.field == PolyVec([Poly.zero(2), Poly.const(2, 1)])
    assert py.payload.field == PolyVec([Poly.const(2, -1), Poly.zero(2)])
    assert bracket([px, py]).form == fn(Poly.const(2, 1))
    assert bracket([py, px]).form == fn(Poly.const(2, -1))


def test_negative_total_degree_gives_zero():
    x = Poly.var(3, 0)
    a = pair(R3, PolyForm.basic(3, (1,), x))
    b = element(R3, fn(x))
    assert bracket([a, b]).is_zero() and bracket([a, b]).degree == -1
    out = bracket([b, b, a])
    assert out.is_zero() and out.payload is None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_poisson_two_ways_and_antisymmetry(seed):
    rng = random.Random(seed)
    f, g = random_poly(rng, 2, 3), random_poly(rng, 2, 3)
    pf, pg = pair(R2, fn(f)), pair(R2, fn(g))
    br = bracket([pf, pg])
    assert br.form == fn(omega_on(R2, pf.payload.field, pg.payload.field))
    assert bracket([pg, pf]).form == -br.form
    assert br.form.degree == R2.n - 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_three_ary_bracket_on_r3(seed):
    rng = random.Random(seed)
    forms = [random_form(rng, 3, 1) for _ in range(3)]
    xs = [pair(R3, a) for a in forms]
    out = bracket(xs)
    assert out.degree == -1 and out.form.degree == 0
    swapped = bracket([xs[1], xs[0], xs[2]])
    assert swapped.form == -out.form


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_unary_squares_to_zero(seed):
    rng = random.Random(seed)
    a = element(R3, random_form(rng, 3, 0, 3))
    once = unary(a)
    assert once.degree == 0 and ext_d(once.form).is_zero()


def test_morphism_consistency_examples():
    f, act, s = fixture_map("so3_r3_homotopy", "so3_r3")
    assert morphism_consistency(f, act, s).passed
    corrupted = HomotopyMomentMap(f.algebra, 3, 2, {1: f.forms(1), 2: (fn(Poly.var(3, 0) * Poly.var(3, 1)),
                                                                         *f.forms(2)[1:])})
    rep = morphism_consistency(corrupted, act, s)
    assert not rep.passed and set(rep.bracket_residuals) == {(1, 2)}


def test_equivariant_symplectic_bracket_is_f_of_bracket():
    act, s = load_fixture("sl2_r2").require_geometry()
    f = construct_homotopy(act, s)
    g = act.algebra
    pairs = [element(s, f.forms(1)[i], act.generators[i]) for i in range(g.dim)]
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = bracket([pairs[i], pairs[j]]).form
            rhs = PolyForm.zero(2, 0)
            for k, c in g.bracket_basis(i, j).items():
                rhs = rhs + f.forms(1)[k] * c
            assert lhs == rhs


@pytest.mark.parametrize("name,act,s", corpus(), ids=[c[0] for c in corpus()])
def test_constructed_maps_are_consistent(name, act, s):
    try:
        f = construct_homotopy(act, s)
    except Obstructed:
        return
    assert morphism_consistency(f, act, s).passed


def test_symplectic_corpus_nonempty():
    assert len(symplectic_corpus()) >= 5
