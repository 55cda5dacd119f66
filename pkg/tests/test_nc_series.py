"""The operators L_k and the brute-force iteration behind the closed forms."""

import pytest

from juhlkit.exact_core import compositions_of, factorial, nbar_coeff
from juhlkit.free_algebra import NCPoly
from juhlkit.nc_series import (
    NCSeries,
    apply_L,
    iterate_L_full,
    iterate_L_partial,
    x_series,
)


def _closed_form_full(n):
    return NCPoly({comp: nbar_coeff(comp) for comp in compositions_of(n)})


def _closed_form_partial(n, a):
    if a == n:
        return NCPoly({(): nbar_coeff((n,))})
    return NCPoly({comp: nbar_coeff(comp + (a,)) for comp in compositions_of(n - a)})


def test_apply_L_to_one_gives_x_series():
    # the derivative terms kill constants regardless of k
    assert apply_L(0, NCSeries.one(5)) == x_series(5)
    assert apply_L(1, NCSeries.one(5)) == x_series(5)


def test_apply_L_minus_one_to_x_constant_term():
    u = apply_L(-1, x_series(4))
    assert u.coeffs[0] == NCPoly({(2,): 1, (1, 1): 1})


def test_apply_L_lowers_valid_window():
    u = x_series(4)
    assert u.valid == 4
    assert apply_L(2, u).valid == 3


def test_iterate_full_hand_values():
    assert iterate_L_full(1) == NCPoly.from_word((1,))
    assert iterate_L_full(2) == NCPoly({(2,): 1, (1, 1): 1})
    assert iterate_L_full(3) == NCPoly({(3,): 4, (1, 2): 2, (2, 1): 2, (1, 1, 1): 1})


@pytest.mark.parametrize("n", range(1, 8))
def test_iterate_full_matches_closed_form(n):
    assert iterate_L_full(n) == _closed_form_full(n)


@pytest.mark.parametrize("n", range(1, 8))
def test_iterate_full_weight_homogeneous(n):
    assert iterate_L_full(n).weights() == {n}


def test_iterate_partial_hand_values():
    assert iterate_L_partial(2, 2) == NCPoly({(): 1})
    assert iterate_L_partial(2, 1) == NCPoly.from_word((1,))
    # asymmetric instance pinning the word orientation
    assert iterate_L_partial(4, 1) == NCPoly(
        {(3,): 12, (1, 2): 4, (2, 1): 3, (1, 1, 1): 1}
    )


@pytest.mark.parametrize("n", range(1, 7))
def test_iterate_partial_matches_closed_form(n):
    for a in range(1, n + 1):
        assert iterate_L_partial(n, a) == _closed_form_partial(n, a)


@pytest.mark.parametrize("n", range(1, 7))
def test_partial_at_top_order_is_factorial_square(n):
    assert iterate_L_partial(n, n) == NCPoly({(): factorial(n - 1) ** 2})


@pytest.mark.parametrize("n", range(1, 7))
def test_partials_recombine_to_full(n):
    acc = NCPoly.zero()
    for a in range(1, n + 1):
        acc = acc + iterate_L_partial(n, a) * NCPoly.from_word((a,))
    assert acc == iterate_L_full(n)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        iterate_L_full(0)
    with pytest.raises(ValueError):
        iterate_L_partial(3, 0)
    with pytest.raises(ValueError):
        iterate_L_partial(3, 4)


def test_monomial_power_out_of_range():
    with pytest.raises(ValueError):
        NCSeries.monomial(5, 4)
