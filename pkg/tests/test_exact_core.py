"""Coefficient families and composition enumeration."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from juhlkit.exact_core import (
    compositions_of,
    factorial,
    m_coeff,
    n_coeff,
    nbar_coeff,
    partial_sums,
)

compositions = st.lists(st.integers(min_value=1, max_value=5), min_size=1, max_size=6).map(tuple)


def test_compositions_of_one():
    assert compositions_of(1) == [(1,)]


def test_compositions_of_three_exact_order():
    assert compositions_of(3) == [(3,), (1, 2), (2, 1), (1, 1, 1)]


def test_compositions_of_four_order_is_length_then_lex():
    assert compositions_of(4) == [
        (4,),
        (1, 3),
        (2, 2),
        (3, 1),
        (1, 1, 2),
        (1, 2, 1),
        (2, 1, 1),
        (1, 1, 1, 1),
    ]


@pytest.mark.parametrize("n", range(1, 13))
def test_compositions_count_distinct_and_sum(n):
    comps = compositions_of(n)
    assert len(comps) == 2 ** (n - 1)
    assert len(set(comps)) == len(comps)
    assert all(sum(c) == n for c in comps)
    assert all(all(e >= 1 for e in c) for c in comps)


@pytest.mark.parametrize("bad", [0, -1, "3", 2.5, True])
def test_compositions_invalid_argument(bad):
    with pytest.raises(ValueError):
        compositions_of(bad)


@pytest.mark.parametrize("bad", [(), (0,), (1, -2), (1.5,)])
def test_coefficients_reject_invalid_compositions(bad):
    for fn in (n_coeff, m_coeff, nbar_coeff):
        with pytest.raises(ValueError):
            fn(bad)


@pytest.mark.parametrize("n", range(1, 9))
def test_single_entry_composition_has_unit_coefficients(n):
    assert n_coeff((n,)) == 1
    assert m_coeff((n,)) == 1
    assert nbar_coeff((n,)) == factorial(n - 1) ** 2


def test_n_coeff_small_values():
    assert n_coeff((1, 1)) == 1
    assert n_coeff((1, 2)) == 2
    assert n_coeff((2, 1)) == 2
    assert n_coeff((1, 1, 1)) == 1


def test_m_coeff_small_values():
    # (2,1): (-1)^3 * 3! * 2! * 1/(2!*1!) * 1/(1!*0!) * 1/(2+1) = -2;
    # cross-validated by the N=3 inversion in test_juhl_core
    assert m_coeff((1, 1)) == -1
    assert m_coeff((1, 2)) == -2
    assert m_coeff((2, 1)) == -2
    assert m_coeff((1, 1, 1)) == 3


def test_nbar_small_values():
    assert nbar_coeff((1, 1)) == 1
    assert nbar_coeff((1, 2)) == 2
    assert nbar_coeff((1, 1, 1)) == 1
    assert nbar_coeff((3, 1)) == 12


def test_nbar_strips_factorial_squares_exhaustively():
    for n in range(1, 9):
        for comp in compositions_of(n):
            strip = Fraction(1)
            for e in comp:
                strip /= factorial(e - 1) ** 2
            assert n_coeff(comp) == nbar_coeff(comp) * strip


def test_partial_sums():
    assert partial_sums((1, 2, 3)) == (1, 3, 6)


@given(comp=compositions)
def test_reversal_symmetry(comp):
    rev = tuple(reversed(comp))
    assert n_coeff(comp) == n_coeff(rev)
    assert m_coeff(comp) == m_coeff(rev)
    assert nbar_coeff(comp) == nbar_coeff(rev)


def test_reversal_symmetry_exhaustive_to_ten():
    for n in range(1, 11):
        for comp in compositions_of(n):
            rev = tuple(reversed(comp))
            assert n_coeff(comp) == n_coeff(rev)
            assert m_coeff(comp) == m_coeff(rev)


@given(
    a=st.integers(min_value=-40, max_value=40).filter(bool),
    b=st.integers(min_value=1, max_value=40),
)
def test_rational_inverse_roundtrip(a, b):
    x = Fraction(a, b)
    assert x * (1 / x) == 1
    assert Fraction(x.numerator, x.denominator) == x  # normalization idempotent
