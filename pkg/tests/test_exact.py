from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orthoforms import CRational, rationalize, to_fraction
from orthoforms import linalg
from orthoforms.exact import CONE, CZERO, I

from strategies import rationals


def test_to_fraction_accepts_exact_inputs():
    assert to_fraction("-6/8") == Fraction(-3, 4)
    assert to_fraction(3) == 3
    assert to_fraction("0.25") == Fraction(1, 4)


def test_to_fraction_rejects_floats_by_default():
    with pytest.raises(TypeError):
        to_fraction(0.5)
    assert to_fraction(0.5, allow_float=True) == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["x", "1/0", True, None])
def test_to_fraction_rejects_garbage(bad):
    with pytest.raises((TypeError, ValueError)):
        to_fraction(bad)


def test_rationalize_finds_small_denominators():
    assert rationalize(0.3333333, 1e-6) == Fraction(1, 3)
    assert rationalize(-2.5, 1e-12) == Fraction(-5, 2)
    assert rationalize(0.1, 0) == Fraction(0.1)


@given(st.floats(-100, 100, allow_nan=False), st.sampled_from([1e-2, 1e-5, 1e-9]))
def test_rationalize_stays_within_tolerance(x, eps):
    assert abs(rationalize(x, eps) - Fraction(x)) <= Fraction(eps)


def test_crational_arithmetic_and_printing():
    z = CRational(1, 2)
    assert z * z.conj() == CRational(5)
    assert I * I == -CONE
    assert (z / z) == CONE
    assert str(CRational(Fraction(1, 2), 1)) == "1/2+1i"
    assert str(CRational(0, -1)) == "-1i"
    assert not CZERO and z
    with pytest.raises(ZeroDivisionError):
        z / CZERO


@given(rationals, rationals, rationals, rationals)
def test_crational_matches_python_complex(a, b, c, d):
    z, w = CRational(a, b), CRational(c, d)
    ref = complex(float(a), float(b)) * complex(float(c), float(d))
    prod = z * w
    assert abs(complex(prod) - ref) < 1e-9
    assert z + w - w == z


def test_linalg_solve_inverse_rank():
    a = linalg.as_matrix([[2, 1], [1, 1]])
    inv = linalg.inverse(a)
    assert linalg.matmul(a, inv) == linalg.identity(2)
    assert linalg.solve(a, [Fraction(3), Fraction(2)]) == [1, 1]
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    assert linalg.solve([[1, 2], [2, 4]], [Fraction(1), Fraction(1)]) is None
    with pytest.raises(linalg.SingularMatrix):
        linalg.inverse([[1, 2], [2, 4]])


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=2, max_size=4))
def test_nullspace_vectors_are_annihilated(rows):
    for v in linalg.nullspace(rows):
        assert linalg.matvec(rows, v) == [0] * len(rows)
    assert linalg.rank(rows) + len(linalg.nullspace(rows)) == 3
