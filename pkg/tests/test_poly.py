from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from rainbowkf.poly import (
    CharPoly,
    SturmCounter,
    char_poly,
    compare_largest_roots,
    format_poly,
    isolate_largest_root,
    squarefree,
)

X = sympy.Symbol("x")


def sympy_poly(coeffs):
    return sympy.Poly(list(reversed(coeffs)), X)


int_matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)
)


def test_char_poly_swap_matrix():
    assert char_poly([[0, 1], [1, 0]]).coeffs == (-1, 0, 1)


def test_char_poly_quotients():
    assert char_poly([[0, 1, 0], [1, 0, 5], [0, 1, 4]]).coeffs == (4, -6, -4, 1)
    assert char_poly([[1, 2, 3], [2, 0, 0], [2, 0, 2]]).coeffs == (8, -8, -3, 1)
    assert str(char_poly([[1, 2, 3], [2, 0, 0], [2, 0, 2]])) == "x^3 - 3x^2 - 8x + 8"


@given(int_matrices)
def test_char_poly_matches_sympy(m):
    expected = sympy.Matrix(m).charpoly(X).all_coeffs()
    assert char_poly(m).descending() == [int(c) for c in expected]


def test_charpoly_must_be_monic():
    with pytest.raises(ValueError):
        CharPoly((1, 2))


def test_format_poly():
    assert format_poly((0,)) == "0"
    assert format_poly((-1, 0, 1)) == "x^2 - 1"
    assert format_poly((0, -2, 0, -1)) == "-x^3 - 2x"


def test_isolate_x2_minus_1():
    iv = isolate_largest_root((-1, 0, 1), Fraction(1, 10**8))
    assert iv.contains(1)


@pytest.mark.parametrize(
    "coeffs,lo,hi",
    [((4, -6, -4, 1), "5.03", "5.04"), ((8, -8, -3, 1), "4.40", "4.41")],
)
def test_spot_roots(coeffs, lo, hi):
    iv = isolate_largest_root(coeffs, Fraction(1, 10**6))
    assert Fraction(lo) < iv.lo and iv.hi < Fraction(hi)
    assert iv.width <= Fraction(1, 10**6)
    # independent check: the sign of the cubic flips across the window
    f = sympy_poly(coeffs)
    assert f.eval(sympy.Rational(lo)) < 0 < f.eval(sympy.Rational(hi))


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_largest_root_of_products(roots):
    coeffs = sympy.Poly(sympy.prod([X - r for r in roots]), X).all_coeffs()
    p = [int(c) for c in reversed(coeffs)]
    iv = isolate_largest_root(p, Fraction(1, 10**6))
    assert iv.contains(max(roots)) or (iv.lo <= max(roots) <= iv.hi)


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=6).filter(lambda c: c[-1] != 0))
def test_sturm_counts_match_sympy(coeffs):
    f = sympy_poly(coeffs)
    real = [r for r in sympy.real_roots(f)]
    if not real:
        return
    counter = SturmCounter(coeffs)
    assert counter.above(Fraction(-10**6)) == len(set(real))
    for probe in (Fraction(-1), Fraction(0), Fraction(3, 2)):
        assert counter.above(probe) == len({r for r in real if r > probe})
    iv = isolate_largest_root(coeffs, Fraction(1, 10**9))
    assert iv.lo <= max(real) <= iv.hi
    assert iv.exact or iv.lo < max(real)


def test_squarefree_drops_repeats():
    # (x-1)^2 (x+2)
    assert squarefree((2, -3, 0, 1)) in ([-2, 1, 1], [2, -1, -1])


def test_no_real_root():
    with pytest.raises(ValueError):
        isolate_largest_root((1, 0, 1))


def test_compare_shared_root():
    p = (-2, -1, 1)  # (x-2)(x+1)
    q = (2, -3, 1)  # (x-2)(x-1)
    assert compare_largest_roots(p, q) == 0


def test_compare_irrational_shared_root():
    # both vanish at sqrt(3), q has an extra root below
    p = (-3, 0, 1)
    q = [int(c) for c in reversed(sympy.Poly((X**2 - 3) * (X + 5), X).all_coeffs())]
    assert compare_largest_roots(p, q) == 0


def test_compare_close_roots():
    # roots sqrt(2) and 99/70 differ by about 7e-5
    p = (-2, 0, 1)
    q = (-99, 70)
    assert compare_largest_roots(p, q) == -1
    assert compare_largest_roots(q, p) == 1


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_compare_linear(a, b):
    assert compare_largest_roots((-a, 1), (-b, 1)) == int(np.sign(a - b))
