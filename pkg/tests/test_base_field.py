import random

import pytest
import sympy
from hypothesis import given, strategies as st

from pigeom.base_field import (
    FieldCtx,
    fq_frobenius,
    fq_inv_frobenius,
    fq_root_of_unity,
    is_prime,
    poly_is_irreducible,
)
from pigeom.errors import ConfigError

from conftest import field

CONTEXTS = [(5, 1), (5, 2), (3, 3), (7, 2), (13, 1)]


def test_frobenius_is_identity_on_prime_field():
    F = field(5)
    assert fq_frobenius(F(3), 1) == F(3)
    assert fq_inv_frobenius(F(2), 1) == F(2)


def test_frobenius_fixes_zero_and_one():
    for p, m in CONTEXTS:
        F = field(p, m)
        assert fq_frobenius(F.zero(), 2).is_zero()
        assert fq_frobenius(F.one(), 3) == F.one()
        assert fq_inv_frobenius(F.zero(), 1).is_zero()


def test_frobenius_of_x_matches_repeated_squaring():
    F = FieldCtx(5, 2, (2, 4, 1))
    x = sympy.symbols("x")
    expected = sympy.Poly(x ** 5, x, modulus=5).rem(sympy.Poly(x ** 2 + 4 * x + 2, x, modulus=5))
    coeffs = [int(c) % 5 for c in reversed(expected.all_coeffs())]
    assert fq_frobenius(F.x(), 1) == F(coeffs)


def test_inverse_frobenius_of_x_is_the_unique_fifth_root():
    F = FieldCtx(5, 2, (2, 4, 1))
    roots = [b for b in F.elements() if b ** 5 == F.x()]
    assert roots == [fq_inv_frobenius(F.x(), 1)]


def test_roots_of_unity():
    assert fq_root_of_unity(field(5), 2, 1) == field(5)(4)
    assert fq_root_of_unity(field(5), 1, 0).is_one()
    z = fq_root_of_unity(field(5, 2), 8, 1)
    assert (z ** 8).is_one() and not (z ** 4).is_one()


def test_root_of_unity_rejects_wild_e():
    with pytest.raises(ConfigError):
        fq_root_of_unity(field(5), 3, 1)


@pytest.mark.parametrize("p,m", CONTEXTS)
def test_root_of_unity_has_exact_order(p, m):
    F = field(p, m)
    q = F.q
    for e in (d for d in range(1, q) if (q - 1) % d == 0 and d <= 12):
        z = fq_root_of_unity(F, e, 1)
        assert (z ** e).is_one()
        assert all(not (z ** k).is_one() for k in range(1, e))


@pytest.mark.parametrize("p,m", CONTEXTS)
def test_generator_and_modulus(p, m):
    F = field(p, m)
    assert F.order(F.gen()) == F.q - 1
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(F.modulus)), x, modulus=p)
    assert poly.is_irreducible


def test_irreducibility_against_sympy():
    rng = random.Random(7)
    x = sympy.symbols("x")
    for _ in range(60):
        p = rng.choice([3, 5, 7])
        m = rng.randint(1, 4)
        f = [rng.randrange(p) for _ in range(m)] + [1]
        assert poly_is_irreducible(f, p) == sympy.Poly(list(reversed(f)), x, modulus=p).is_irreducible


def test_bad_parameters():
    with pytest.raises(ConfigError):
        FieldCtx(2, 1)
    with pytest.raises(ConfigError):
        FieldCtx(9, 1)
    with pytest.raises(ConfigError):
        FieldCtx(5, 2, (1, 0, 1))  # x^2 + 1 = (x - 2)(x + 2) over F_5
    assert is_prime(13) and not is_prime(1) and not is_prime(91)


def test_context_is_deterministic():
    assert FieldCtx(7, 3).modulus == FieldCtx(7, 3).modulus
    assert FieldCtx(7, 3).to_json() == FieldCtx(7, 3).to_json()


@given(st.sampled_from(CONTEXTS), st.integers(0, 2 ** 32), st.integers(1, 4))
def test_frobenius_round_trip_and_homomorphism(ctx, seed, s):
    F = field(*ctx)
    rng = random.Random(seed)
    for _ in range(20):
        a, b = F.random(rng), F.random(rng)
        assert fq_inv_frobenius(fq_frobenius(a, s), s) == a
        assert fq_frobenius(fq_inv_frobenius(a, s), s) == a
        assert fq_frobenius(a + b, s) == fq_frobenius(a, s) + fq_frobenius(b, s)
        assert fq_frobenius(a * b, s) == fq_frobenius(a, s) * fq_frobenius(b, s)
        assert fq_frobenius(a, s) == a ** (F.p ** s)
