from fractions import Fraction

import pytest

from selmer3.errors import DomainError
from selmer3.padicroots import ZpModel, form_has_projective_root_qp, has_ring_root, has_zp_root


def test_simple_roots():
    assert has_zp_root([-1, 0, 1], 5)  # x^2 - 1
    assert not has_zp_root([-2, 0, 1], 5)  # 2 is not a square mod 5
    assert has_zp_root([-2, 0, 0, 1], 5)  # 2 = 3^3 (mod 5) Hensel-lifts
    assert not has_zp_root([-5, 0, 0, 1], 5)  # Eisenstein, root has valuation 1/3


def test_root_needs_lifting_beyond_first_digit():
    # (x - 1)(x - 51) = x^2 - 52x + 51: both roots = 1 (mod 5), one lift
    # requires separating the cluster at depth 2
    assert has_zp_root([51, -52, 1], 5)
    # x^2 - 2x - 49 has roots 1 +- 5*sqrt(2), not in Q_5
    assert not has_zp_root([-49, -2, 1], 5)
    # x^2 - 2x + 1 - 25*4 = (x-1)^2 - 100: roots 1 +- 10 in Z_5
    assert has_zp_root([-99, -2, 1], 5)


def test_rational_scaling_is_harmless():
    assert has_zp_root([Fraction(-1, 7), 0, Fraction(1, 7)], 5)
    assert has_zp_root([-5, 0, 5], 7) == has_zp_root([-1, 0, 1], 7)


def test_zero_polynomial_rejected():
    with pytest.raises(DomainError):
        has_zp_root([0, 0], 5)
    with pytest.raises(DomainError):
        has_ring_root(ZpModel(5), [Fraction(0)])


def test_projective_roots_of_forms():
    # x^3 - 2 y^3 over Q_5: affine root since 2 is a cube mod 5
    assert form_has_projective_root_qp(1, 0, 0, -2, 5)
    # 5x^3 + y^3: no root at finite or infinite points of P^1(Q_5)
    assert not form_has_projective_root_qp(5, 0, 0, 1, 5)
    # degenerate leading coefficients give the obvious boundary roots
    assert form_has_projective_root_qp(0, 1, 1, 7, 5)
    assert form_has_projective_root_qp(3, 1, 1, 0, 5)


def test_brute_force_cross_check():
    # compare against a mod-p^4 search with Hensel-free certification: any
    # simple root mod p^4 whose derivative is a unit certifies a Z_p-root
    p = 7
    for coeffs in (
        [3, 1, 0, 1],
        [1, 2, 3, 4],
        [-2, 0, 1, 1],
        [6, 0, 1],
        [4, 5, 1],
    ):
        got = has_zp_root(coeffs, p)
        witness = False
        for x in range(p**2):
            val = sum(c * x**i for i, c in enumerate(coeffs))
            der = sum(i * c * x ** (i - 1) for i, c in enumerate(coeffs) if i)
            if val % p == 0 and der % p != 0:
                witness = True
        if witness:
            assert got  # a certified root must be found
