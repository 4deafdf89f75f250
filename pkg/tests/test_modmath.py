import pytest
from hypothesis import given, strategies as st

from tdsig.errors import DuplicatePoint, NegativeExponentNonInvertible, NotInvertible, ZeroPoint
from tdsig.modmath import Residue, check_points, extended_gcd, lagrange_coeff_at_zero, mod_exp, mod_inv

PRIMES = [11, 23, 101, 1019, 10007]


def test_worked_example_inverses():
    assert mod_inv(7, 11) == 8
    assert mod_inv(4, 11) == 3
    assert mod_exp(18, 3, 23) == 13


def test_residue_is_canonical_and_prints_as_int():
    r = Residue(-35, 11)
    assert r == 9
    assert r.modulus == 11
    assert str(r) == "9"
    assert f"s={r}" == "s=9"


def test_residue_rejects_tiny_modulus():
    with pytest.raises(ValueError):
        Residue(3, 1)


def test_mod_inv_not_invertible():
    with pytest.raises(NotInvertible):
        mod_inv(6, 9)
    with pytest.raises(NotInvertible):
        mod_inv(0, 11)


def test_negative_exponent_uses_inverse():
    assert mod_exp(18, -1, 23) * 18 % 23 == 1
    assert mod_exp(2, -3, 11) == mod_inv(8, 11)


def test_negative_exponent_of_non_invertible_base():
    with pytest.raises(NegativeExponentNonInvertible):
        mod_exp(3, -1, 9)


def test_negative_exponent_error_is_a_not_invertible():
    assert issubclass(NegativeExponentNonInvertible, NotInvertible)


def test_check_points_reduces_before_comparing():
    assert check_points([9, 12, 14, 16], 11) == [9, 1, 3, 5]
    with pytest.raises(DuplicatePoint):
        check_points([1, 12], 11)
    with pytest.raises(ZeroPoint):
        check_points([11, 3], 11)
    assert check_points([0, 3], 11, allow_zero=True) == [0, 3]


def test_worked_example_lagrange_coefficients():
    # H = {A (u=9), F (u=16)}
    assert lagrange_coeff_at_zero(0, [9, 16], 11) == 7
    assert lagrange_coeff_at_zero(1, [9, 16], 11) == 5


@given(st.integers(min_value=-10**6, max_value=10**6), st.integers(min_value=1, max_value=10**6))
def test_extended_gcd_bezout(a, b):
    g, x, y = extended_gcd(a, b)
    assert a * x + b * y == g
    assert g >= 0
    assert a % g == 0 and b % g == 0


@given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=10**9))
def test_inverse_property(q, a):
    if a % q == 0:
        return
    assert a * mod_inv(a, q) % q == 1


@given(st.sampled_from([(23, 11, 18), (2039, 1019, 4)]), st.integers(-50, 50), st.integers(-50, 50))
def test_exponent_additivity(group, a, b):
    p, q, g = group
    assert mod_exp(g, a, p) * mod_exp(g, b, p) % p == mod_exp(g, a + b, p)


@given(st.sampled_from(PRIMES), st.data())
def test_lagrange_coefficients_sum_to_one(q, data):
    size = data.draw(st.integers(min_value=1, max_value=min(6, q - 1)))
    points = data.draw(st.lists(st.integers(min_value=1, max_value=q - 1), min_size=size, max_size=size, unique=True))
    total = sum(lagrange_coeff_at_zero(i, points, q) for i in range(len(points))) % q
    assert total == 1
