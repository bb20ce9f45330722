import itertools
import random
from fractions import Fraction

import pytest

from multimoment._indices import subsets
from multimoment.action import (GAction, NoHamiltonianField, NPlecticStructure, generator, hamiltonian_vector_field,
                                nondegeneracy_check, omega_k, validate_action)
from multimoment.liealg import Multivector
from multimoment.polyforms import Poly, PolyForm, PolyVec, contract, ext_d, interior
from multimoment.scene import load_fixture

from _corpus import corpus


def _det(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a, b in itertools.combinations(range(n), 2) if perm[a] > perm[b])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def form_on_vectors(a: PolyForm, point, vectors) -> Fraction:
    """a_x(w_1, ..., w_k) as a sum over coordinate k-subsets of minors."""
    vals = a.evaluate(point)
    return sum((c * _det([[w[j] for j in J] for w in vectors]) for J, c in vals.items()), Fraction(0))


def test_validate_fixtures():
    for name in ("so3_r3", "translations_r2", "sl2_r2", "se2_r2", "heisenberg_r2"):
        act, s = load_fixture(name).require_geometry()
        assert validate_action(act, s, [(1, 2, 3)[:s.N]]).passed, name


def test_flipped_generator_breaks_homomorphism():
    act, s = load_fixture("so3_r3").require_geometry()
    flipped = GAction(act.algebra, (act.generators[0] * -1, *act.generators[1:]))
    rep = validate_action(flipped, s)
    assert not rep.passed
    assert (1, 2) in [pair for pair, _ in rep.homomorphism_failures]
    assert not rep.preservation_failures


def test_preservation_and_closedness_failures():
    act, _ = load_fixture("translations_r2").require_geometry()
    s2 = NPlecticStructure(2, 1, PolyForm.basic(2, (0, 1), Poly.var(2, 0) + 1))
    rep = validate_action(act, s2)
    assert [i for i, _ in rep.preservation_failures] == [1]
    s3 = NPlecticStructure(3, 1, PolyForm.basic(3, (0, 1), Poly.var(3, 2)))
    rep3 = validate_action(GAction(load_fixture("trivial_r3").algebra, (PolyVec.zero(3),)), s3)
    assert not rep3.closed and rep3.d_omega == PolyForm.basic(3, (0, 1, 2))


def test_omega_k_examples():
    act, s = load_fixture("so3_r3").require_geometry()
    assert omega_k(act, s, Multivector(3, {(0, 1, 2): Fraction(1)})).is_zero()
    tr, s2 = load_fixture("translations_r2").require_geometry()
    assert omega_k(tr, s2, Multivector(2, {(0, 1): Fraction(1)})) == PolyForm.function(Poly.const(2, 1))


def test_omega_k_matches_pointwise_oracle():
    rng = random.Random(5)
    for name, act, s in corpus()[:20]:
        g = act.algebra
        for k in range(1, min(g.dim, s.n + 1) + 1):
            for idx in g.basis(k):
                form = omega_k(act, s, Multivector(k, {idx: Fraction(1)}))
                pt = [Fraction(rng.randint(-2, 2)) for _ in range(s.N)]
                vs = [[c.evaluate(pt) for c in act.generators[i].comps] for i in idx]
                for J in subsets(s.N, s.n + 1 - k):
                    ws = [[Fraction(int(j == t)) for t in range(s.N)] for j in J]
                    lhs = form.evaluate(pt).get(J, Fraction(0))
                    assert lhs == form_on_vectors(s.omega, pt, vs + ws), (name, idx, J)


def test_generator_is_wedge_of_fields():
    act, s = load_fixture("so3_r3").require_geometry()
    w = generator(act, Multivector(2, {(0, 1): Fraction(1)}))
    a = PolyForm.basic(3, (0, 1))
    assert contract(w, a) == interior(act.generators[1], interior(act.generators[0], a))


def test_nondegeneracy():
    s = NPlecticStructure(3, 1, PolyForm.basic(3, (0, 1)))
    ok, ker = nondegeneracy_check(s, (0, 0, 0))
    assert not ok and ker == [[0, 0, 1]]
    s2 = NPlecticStructure(3, 2, PolyForm.basic(3, (0, 1, 2)))
    assert nondegeneracy_check(s2, (1, 1, 1)) == (True, [])
    rep = validate_action(GAction(load_fixture("trivial_r3").algebra, (PolyVec.zero(3),)), s)
    assert not rep.passed and rep.nondegeneracy[0][1] is False


def test_hamiltonian_vector_field():
    s = NPlecticStructure(2, 1, PolyForm.basic(2, (0, 1)))
    v = hamiltonian_vector_field(s, PolyForm.function(Poly.var(2, 0)))
    assert v == PolyVec([Poly.zero(2), Poly.const(2, 1)])
    assert ext_d(PolyForm.function(Poly.var(2, 0))) == -interior(v, s.omega)
    s3 = NPlecticStructure(3, 2, PolyForm.basic(3, (0, 1, 2)))
    with pytest.raises(NoHamiltonianField):
        # dz is not of the form i_v(dx^dy), whose values lie in span(dx, dy)
        hamiltonian_vector_field(NPlecticStructure(3, 1, PolyForm.basic(3, (0, 1))),
                                 PolyForm.function(Poly.var(3, 2)))
    a = PolyForm.basic(3, (1,), Poly.var(3, 0))
    w = hamiltonian_vector_field(s3, a)
    assert ext_d(a) == -interior(w, s3.omega)
