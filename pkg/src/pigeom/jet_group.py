"""The partial pi-jet group J^1(GL_N) = G x g^n and its delta-Lie algebra.

Points are tuples (a_0, a_1, ..., a_n) with a_0 invertible and a_i arbitrary
N x N matrices over R_pi.  The product twists the g-part by the p^s-power
map; the kernel of (a_0, a) -> a_0 is g^n with a +_pi b = a + b + pi ab.
"""

from __future__ import annotations

from dataclasses import dataclass

from .connections import ConnectionData, PointwiseMode, christoffel_second
from .errors import ConfigError
from .matrix_ring import Mat, mat_inv, mat_pow_ps
from .ram_ring import RamCtx

__all__ = [
    "JetPoint",
    "jet_mul",
    "jet_inv",
    "jet_identity",
    "lie_add",
    "lie_neg",
    "g_to_G1",
    "log_derivative",
]


@dataclass
class JetPoint:
    """(a_0, a_1, ..., a_n): a_0 in GL_N(R_pi), a_i in Mat_N(R_pi)."""

    a0: Mat
    a: list

    def __post_init__(self):
        if not self.a0.is_invertible():
            raise ConfigError("a_0 must be invertible mod pi")
        N = self.a0.n
        if any(x.shape != (N, N) for x in self.a):
            raise ConfigError("all components must be N x N")

    @property
    def ring(self) -> RamCtx:
        return self.a0.ctx

    @property
    def n(self) -> int:
        return len(self.a)

    @classmethod
    def random(cls, ring: RamCtx, N: int, n: int, rng, prec: int | None = None) -> "JetPoint":
        a0 = Mat.random(ring, N, rng, prec, invertible=True)
        return cls(a0, [Mat.random(ring, N, rng, prec) for _ in range(n)])

    @property
    def prec(self) -> int:
        return min([self.a0.prec] + [x.prec for x in self.a])

    def equals(self, other: "JetPoint", prec: int | None = None) -> bool:
        return self.a0.equals(other.a0, prec) and all(
            x.equals(y, prec) for x, y in zip(self.a, other.a))

    def to_json(self) -> dict:
        return {"a0": self.a0.to_json(), "a": [x.to_json() for x in self.a]}


def jet_identity(ring: RamCtx, N: int, n: int) -> JetPoint:
    return JetPoint(Mat.identity(ring, N), [Mat.zeros(ring, N) for _ in range(n)])


def _twist(a0: Mat, b0: Mat, a0p: Mat, b0p: Mat, ps_exp: int) -> Mat:
    """pi^{-1}(a0^{(p^s)} b0^{(p^s)} - (a0 b0)^{(p^s)}), computed as
    (p/pi) * [(...)/p]; the bracket is exact since the p-power map is additive mod p.
    a0p, b0p are the precomputed entrywise powers of a0, b0.
    """
    e = a0.ctx.e
    X = a0p * b0p - mat_pow_ps(a0 * b0, ps_exp)
    return X.div_pi(e).mul_pi(e - 1)


def jet_mul(x: JetPoint, y: JetPoint) -> JetPoint:
    """c_0 = a_0 b_0, c_i = a_0^{(p^s)} b_i + a_i b_0^{(p^s)} + pi a_i b_i + twist."""
    if x.ring != y.ring or x.n != y.n:
        raise ConfigError("jet points live over different contexts")
    s = x.ring.s
    a0p = mat_pow_ps(x.a0, s)
    b0p = mat_pow_ps(y.a0, s)
    tw = _twist(x.a0, y.a0, a0p, b0p, s)
    c = [a0p * bi + ai * b0p + (ai * bi).mul_pi(1) + tw for ai, bi in zip(x.a, y.a)]
    return JetPoint(x.a0 * y.a0, c)


def jet_inv(x: JetPoint) -> JetPoint:
    """Two-sided inverse: b_0 = a_0^{-1} and, solving c_i = 0 for b_i,
    b_i = (a_0^{(p^s)} + pi a_i)^{-1} (-(a_i b_0^{(p^s)}) - twist).
    """
    s = x.ring.s
    b0 = mat_inv(x.a0)
    a0p = mat_pow_ps(x.a0, s)
    b0p = mat_pow_ps(b0, s)
    tw = _twist(x.a0, b0, a0p, b0p, s)
    b = [mat_inv(a0p + ai.mul_pi(1)) * (-(ai * b0p) - tw) for ai in x.a]
    return JetPoint(b0, b)


def lie_add(a: Mat, b: Mat) -> Mat:
    """a +_pi b = a + b + pi ab."""
    return a + b + (a * b).mul_pi(1)


def lie_neg(a: Mat) -> Mat:
    """-a + pi a^2 - pi^2 a^3 + ..., summed until the terms vanish."""
    result = -a
    term = -a
    while True:
        term = (term * a).mul_pi(1) * -1
        if term.is_zero():
            return result.reduce(a.prec)
        result = result + term


def g_to_G1(a: Mat) -> Mat:
    """a -> 1 + pi a, an isomorphism g(R_pi) -> ker(G(R_pi) -> G(k))."""
    return Mat.identity(a.ctx, a.n) + a.mul_pi(1)


def log_derivative(conn: ConnectionData) -> list:
    """The g^n-part of D(g^t) D_0(g^t)^{-1} at the evaluation point g.

    D(g^t) = (g^t, delta_i^G x^t at g) with delta_i^G x = x^{(p^s)} (Lambda_i - 1)/pi,
    and D_0 is the same for the trivial connection.
    """
    mode = conn.mode
    if not isinstance(mode, PointwiseMode):
        raise ConfigError("log_derivative works on pointwise connection data")
    ring = mode.ring
    s = ring.s
    gt = mode.g.T
    gpt = mat_pow_ps(mode.g, s).T
    n = conn.n
    one = Mat.identity(ring, mode.N)
    D = JetPoint(gt, [((lam - one).div_pi(1)).T * gpt for lam in conn.lambdas])
    D0 = JetPoint(gt, [Mat.zeros(ring, mode.N) for _ in range(n)])
    return jet_mul(D, jet_inv(D0)).a
