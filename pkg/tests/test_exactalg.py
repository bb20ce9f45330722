from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from multimoment import exactalg as ea

small = st.integers(min_value=-4, max_value=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[Fraction(draw(small), draw(st.integers(1, 3))) for _ in range(c)] for _ in range(r)], c


def test_rational_round_trip():
    for q in [Fraction(0), Fraction(3), Fraction(-7, 4), Fraction(1, 9)]:
        assert ea.parse_rational(ea.format_rational(q)) == q
    assert ea.format_rational(Fraction(6, 3)) == "2"
    assert ea.format_rational(Fraction(-1, 2)) == "-1/2"


@pytest.mark.parametrize("bad", ["x", "1/0/2", True, None, 1.5])
def test_parse_rational_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        ea.parse_rational(bad)


def test_rref_hand_example():
    r, piv = ea.rref([[0, 2, 4], [1, 1, 1], [2, 4, 6]])
    assert piv == [0, 1]
    assert r == [[1, 0, -1], [0, 1, 2], [0, 0, 0]]


def test_kernel_basis_convention():
    # x + 2y + 3z = 0: free columns 1, 2
    ker = ea.kernel_basis([[1, 2, 3]], 3)
    assert ker == [[-2, 1, 0], [-3, 0, 1]]


def test_solve_inconsistent():
    assert ea.solve_linear([[1, 1], [2, 2]], [1, 3], 2) is None
    assert ea.solve_linear([[1, 1], [2, 2]], [1, 2], 2) == [1, 0]


def test_quotient_dim():
    dim, reps = ea.quotient_dim([[1, 0, 0]], [[1, 0, 0], [0, 1, 0], [1, 1, 0]], 3)
    assert dim == 1 and reps == [[0, 1, 0]]
    with pytest.raises(ValueError):
        ea.quotient_dim([[0, 0, 1]], [[1, 0, 0]], 3)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_matches_sympy(mc):
    m, c = mc
    r, piv = ea.rref(m, c)
    sr, spiv = sympy.Matrix(m).rref()
    assert list(spiv) == piv
    assert [[Fraction(int(sympy.numer(x)), int(sympy.denom(x))) for x in sr.row(i)] for i in range(sr.rows)] == r


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_is_null_and_complete(mc):
    m, c = mc
    ker = ea.kernel_basis(m, c)
    for v in ker:
        assert not any(ea.matvec(m, v))
    assert len(ker) + ea.rank(m, c) == c
    assert ea.span_rank(ker, c) == len(ker)


@settings(max_examples=150, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_on_consistent_systems(mc, xs):
    m, c = mc
    x = [Fraction(v) for v in xs[:c]]
    b = ea.matvec(m, x)
    sol = ea.solve_linear(m, b, c)
    assert sol is not None and ea.matvec(m, sol) == b
