import random

import pytest
from hypothesis import given, strategies as st

from pigeom.errors import NotAUnitError, PrecisionError
from pigeom.witt_base import (
    cp_carry,
    w_delta,
    w_frobenius,
    w_invert,
    w_p_integrate,
    w_teichmueller,
)

from conftest import base

CONTEXTS = [(5, 1, 4), (5, 2, 5), (3, 3, 4), (7, 2, 3)]


def test_frobenius_fixes_rational_integers():
    W = base(5, 2, 5)
    for s in (1, 2, 3):
        assert w_frobenius(W.from_int(2), s).equals(W.from_int(2))


def test_frobenius_on_teichmueller():
    W = base(5, 2, 5)
    a = W.field.gen()
    assert w_frobenius(w_teichmueller(a, W), 1).equals(w_teichmueller(a ** 5, W))


def test_delta_examples():
    W = base(5, 1, 4)
    assert w_delta(W.from_int(2)).equals(W.from_int(-6))
    assert w_delta(W.from_int(5)).equals(W.from_int(-624))
    assert w_delta(w_teichmueller(W.field(3), W)).is_zero()


def test_delta_needs_precision():
    W = base(5, 1, 4)
    with pytest.raises(PrecisionError):
        w_delta(W.random(random.Random(0), 1))


def test_teichmueller_examples():
    W = base(5, 1, 2)
    assert w_teichmueller(W.field(2), W).equals(W.from_int(7))
    assert w_teichmueller(W.field(1), W).equals(W.one())
    assert w_teichmueller(W.field(0), W).is_zero()


def test_invert_examples():
    W = base(5, 1, 3)
    assert w_invert(W.from_int(2)).equals(W.from_int(63))
    assert w_invert(W.one()).equals(W.one())
    with pytest.raises(NotAUnitError):
        w_invert(W.from_int(5))


def test_p_integrate_examples():
    W = base(5, 1, 4)
    assert w_p_integrate(W.zero()).is_zero()
    assert w_p_integrate(W.from_int(-624)).equals(W.from_int(5), 4)


def test_carry_examples():
    assert cp_carry(1, 1, 1, p=3) == -2
    assert cp_carry(1, 2, 1, p=5) == -42
    W = base(5, 1, 4)
    assert cp_carry(W.zero(), W.from_int(17), 1).is_zero()


@pytest.mark.parametrize("ctx", CONTEXTS)
def test_context_invariants(ctx):
    assert base(*ctx).check_invariants()


@pytest.mark.parametrize("ctx", CONTEXTS)
def test_teichmueller_is_fixed_by_q_power(ctx):
    W = base(*ctx)
    for a in list(W.field.elements())[:30]:
        t = w_teichmueller(a, W)
        assert (t ** W.field.q).equals(t)
        assert t.residue() == a
        assert w_delta(t).is_zero()


@given(st.sampled_from(CONTEXTS), st.integers(0, 2 ** 32), st.integers(1, 3))
def test_derivation_laws(ctx, seed, s):
    W = base(*ctx)
    rng = random.Random(seed)
    N = W.p ** s
    for _ in range(20):
        x, y = W.random(rng), W.random(rng)
        dx, dy = w_delta(x, s), w_delta(y, s)
        assert w_delta(x + y, s).equals(dx + dy + cp_carry(x, y, s), W.K - 1)
        assert w_delta(x * y, s).equals(x ** N * dy + y ** N * dx + W.p * dx * dy, W.K - 1)
        assert w_frobenius(x, s).equals(x ** N + W.p * dx, W.K - 1)


@given(st.sampled_from(CONTEXTS), st.integers(0, 2 ** 32))
def test_frobenius_is_a_ring_endomorphism(ctx, seed):
    W = base(*ctx)
    rng = random.Random(seed)
    x, y = W.random(rng), W.random(rng)
    assert w_frobenius(x + y).equals(w_frobenius(x) + w_frobenius(y))
    assert w_frobenius(x * y).equals(w_frobenius(x) * w_frobenius(y))
    assert w_frobenius(x, W.m).equals(x)
    assert w_frobenius(x).equals(x ** W.p, 1)


@given(st.sampled_from(CONTEXTS), st.integers(0, 2 ** 32))
def test_lifting_lemma(ctx, seed):
    """a = b mod p^nu implies (a = b mod p^{nu+1} iff delta a = delta b mod p^nu)."""
    W = base(*ctx)
    rng = random.Random(seed)
    for nu in range(1, W.K - 1):
        a = W.random(rng)
        b = a + W.random(rng) * W.p ** nu
        same_next = a.equals(b, nu + 1)
        same_delta = w_delta(a).equals(w_delta(b), nu)
        assert same_next == same_delta


@given(st.sampled_from(CONTEXTS), st.integers(0, 2 ** 32), st.integers(1, 2))
def test_p_integration_round_trips(ctx, seed, s):
    W = base(*ctx)
    rng = random.Random(seed)
    b = W.random(rng)
    u = w_p_integrate(b, s)
    assert u.reduce(1).is_zero()
    assert w_delta(u, s).equals(b, W.K - 1)
    v = W.random(rng) * W.p
    assert w_p_integrate(w_delta(v, s), s).equals(v, W.K)


def test_constants_of_delta_exhaustive():
    """delta a = 0 at full precision exactly when a is 0 or Teichmueller (Z/125)."""
    W = base(5, 1, 3)
    zeros = [a for a in range(125) if w_delta(W.from_int(a)).is_zero()]
    teich = sorted(int(w_teichmueller(W.field(r), W).c[0]) for r in range(5))
    assert zeros == teich


@given(st.sampled_from(CONTEXTS), st.integers(0, 2 ** 32))
def test_inverse(ctx, seed):
    W = base(*ctx)
    rng = random.Random(seed)
    a = W.lift_residue(W.field.random(rng, nonzero=True)) + W.random(rng) * W.p
    assert (a * w_invert(a)).equals(W.one())


def test_serialization_round_trip():
    W = base(5, 2, 5)
    a = W.random(random.Random(3), 4)
    from pigeom.witt_base import WElem
    b = WElem.from_json(W, a.to_json())
    assert b.prec == 4 and b.equals(a)
