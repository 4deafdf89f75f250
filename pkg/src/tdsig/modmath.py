"""
Exact modular arithmetic over Python's arbitrary-precision integers.

Every result is canonicalized into [0, modulus) with floored modulo, so
intermediate values such as k1 - ms*R may go negative before reduction.
"""
from typing import Sequence

from tdsig.errors import DuplicatePoint, NegativeExponentNonInvertible, NotInvertible, ZeroPoint


class Residue(int):
    """An integer in [0, modulus) that remembers its modulus."""

    def __new__(cls, value: int, modulus: int):
        if modulus < 2:
            raise ValueError(f"modulus must be at least 2, got {modulus}")
        self = super().__new__(cls, value % modulus)
        self.modulus = modulus
        return self

    def __repr__(self):
        return f"Residue({int(self)}, {self.modulus})"

    def __str__(self):
        return str(int(self))


def extended_gcd(a: int, b: int):
    """
    Iterative extended Euclid.

    Returns:
        (g, x, y) with a*x + b*y == g == gcd(a, b)
    """
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_x, x = x, old_x - quotient * x
        old_y, y = y, old_y - quotient * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def mod_inv(a: int, modulus: int) -> Residue:
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    g, x, _ = extended_gcd(a % modulus, modulus)
    if g != 1:
        raise NotInvertible(a, modulus)
    return Residue(x, modulus)


def mod_exp(base: int, exponent: int, modulus: int) -> Residue:
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    if exponent < 0:
        try:
            base = mod_inv(base, modulus)
        except NotInvertible:
            raise NegativeExponentNonInvertible(base, modulus) from None
        exponent = -exponent
    return Residue(pow(base, exponent, modulus), modulus)


def check_points(points: Sequence[int], q: int, allow_zero: bool = False) -> list:
    """Reduce evaluation points mod q, rejecting collisions and (optionally) zero."""
    reduced = []
    seen = set()
    for point in points:
        r = point % q
        if r == 0 and not allow_zero:
            raise ZeroPoint(point, q)
        if r in seen:
            raise DuplicatePoint(point, q)
        seen.add(r)
        reduced.append(r)
    return reduced


def lagrange_coeff_at_zero(i: int, points: Sequence[int], q: int) -> Residue:
    """Prod over j != i of (-u_j) / (u_i - u_j) mod q."""
    reduced = check_points(points, q)
    u_i = reduced[i]
    numerator, denominator = 1, 1
    for j, u_j in enumerate(reduced):
        if j == i:
            continue
        numerator = numerator * -u_j % q
        denominator = denominator * (u_i - u_j) % q
    return Residue(numerator * mod_inv(denominator, q), q)
