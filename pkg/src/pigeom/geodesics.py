"""Arithmetic ODEs over W: parallel transport and geodesics (e = n = N).

Curves are vectors c in W^n, identified with W-linear maps R_pi -> W via the
basis theta_l = pi^{l-1}; the velocity is v = delta^{(s)} c.  The connection
enters only through Gamma^k_{ij}(1), split in the theta basis as
sum_l Gamma^k_{ij,l} theta_l, and through p/pi = sum_l r_l theta_l.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .base_field import fq_inv_frobenius
from .connections import ConnectionData, christoffel_second
from .delta_poly import DeltaPoly, e_P
from .errors import ConfigError, DegenerateError, HypothesisError
from .matrix_ring import Mat
from .ram_ring import RamCtx, rpi_theta_coords
from .witt_base import BaseCtx, WElem, w_delta, w_frobenius, w_teichmueller

__all__ = [
    "GeodesicCtx",
    "Curve",
    "ode_solve",
    "ode_residual",
    "is_nondegenerate",
    "acceleration",
    "parallel_transport",
    "transport_residual",
    "transport_alpha",
    "alpha_to_beta",
    "geodesic",
    "geodesic_residuals",
    "par_map",
    "exp_map",
    "trans_map",
]


# -- the first-order solver ---------------------------------------------------


def _full(ctx: BaseCtx, x) -> WElem:
    if isinstance(x, int):
        return ctx.from_int(x)
    return WElem(ctx, list(x.c), ctx.K)


def ode_residual(F, G, u: Sequence[WElem], s: int = 1) -> list[WElem]:
    """delta^{(s)} u - F/G evaluated at (u, phi^s u)."""
    uphi = [w_frobenius(x, s) for x in u]
    g = G(u, uphi)
    if not g.is_unit():
        raise DegenerateError("denominator G vanishes mod p along the solution")
    ginv = g.invert()
    return [w_delta(x, s) - fx * ginv for x, fx in zip(u, F(u, uphi))]


def ode_solve(F: Callable, G: Callable, u0: Sequence, s: int = 1,
              depth: int | None = None, ctx: BaseCtx | None = None) -> list[WElem]:
    """The unique u = u0 mod p with delta^{(s)} u = F(u, u^phi)/G(u, u^phi).

    Stage nu writes delta u - f(u) = p^nu c and corrects u by p^{nu+1} b with
    b^{(p^s)} = -c mod p, found by the inverse Frobenius of k.  After stages
    0..depth-2 the equation holds mod p^{depth-1} and u is exact mod p^depth.
    """
    if ctx is None:
        ctx = next(x.ctx for x in u0 if isinstance(x, WElem))
    depth = ctx.K if depth is None else depth
    if not 2 <= depth <= ctx.K:
        raise ConfigError(f"depth must lie in [2, {ctx.K}]")
    p = ctx.p
    u = [_full(ctx, x) for x in u0]
    for nu in range(depth - 1):
        res = ode_residual(F, G, u, s)
        step = p ** (nu + 1)
        new = []
        for x, r in zip(u, res):
            r = r.reduce(nu + 1)
            if r.valuation() < nu:
                raise HypothesisError("successive approximation lost track of the residual")
            c = r.div_pi(nu).residue()
            b = fq_inv_frobenius(-c, s)
            new.append(x + ctx.lift_residue(b) * step)
        u = new
    return [x.reduce(depth) for x in u]


# -- geodesic context ----------------------------------------------------------


class GeodesicCtx:
    """Theta-decomposed Christoffel data for curves over W.

    ``gamma_theta[k][i][j]`` is the list (Gamma^k_{ij,l})_l of W elements;
    ``r`` holds the theta coordinates of p/pi.
    """

    def __init__(self, ring: RamCtx, gamma_theta, r: Sequence[WElem] | None = None):
        n = ring.e
        if ring.n != n:
            raise ConfigError("geodesics need e = n (= N)")
        self.ring, self.base, self.n, self.s = ring, ring.base, n, ring.s
        if r is None:
            r = rpi_theta_coords(ring.from_int(ring.p).div_pi(1))
        self.r = [_full(self.base, x) if x.prec >= self.base.K else x for x in r]
        self.gamma_theta = gamma_theta
        if len(gamma_theta) != n:
            raise ConfigError("gamma_theta must be n x n x n x n")

    @classmethod
    def from_connection(cls, conn: ConnectionData) -> "GeodesicCtx":
        ring = conn.mode.ring
        n = conn.n
        if not (ring.e == n == conn.mode.N):
            raise ConfigError(f"geodesics need e = n = N, got e={ring.e}, n={n}, N={conn.mode.N}")
        gam = christoffel_second(conn)
        # Gamma^k_{ij}(1) = (Gamma_i)_{jk} at x = 1
        gt = [[[rpi_theta_coords(conn.mode.at_one(gam[i][j, k])) for j in range(n)]
               for i in range(n)] for k in range(n)]
        return cls(ring, gt)

    @classmethod
    def flat(cls, ring: RamCtx) -> "GeodesicCtx":
        """Gamma(1) = 0 exactly."""
        n = ring.e
        z = ring.base.zero()
        return cls(ring, [[[[z] * n for _ in range(n)] for _ in range(n)] for _ in range(n)])

    def gamma_on(self, c: Sequence[WElem]) -> list:
        """g[k][i][j] = c^*(Gamma^k_{ij}(1)) = sum_l Gamma^k_{ij,l} c_l."""
        n = self.n
        out = []
        for k in range(n):
            plane = []
            for i in range(n):
                row = []
                for j in range(n):
                    coeffs = self.gamma_theta[k][i][j]
                    acc = coeffs[0] * c[0]
                    for l in range(1, n):
                        acc = acc + coeffs[l] * c[l]
                    row.append(acc)
                plane.append(row)
            out.append(plane)
        return out

    def c_star_p_over_pi(self, c: Sequence[WElem]) -> WElem:
        acc = self.r[0] * c[0]
        for l in range(1, self.n):
            acc = acc + self.r[l] * c[l]
        return acc

    def permuted(self, perm: Sequence[int]) -> "GeodesicCtx":
        """Relabel directions, theta basis and matrix indices by perm (0-based)."""
        n = self.n
        gt = [[[[self.gamma_theta[perm[k]][perm[i]][perm[j]][perm[l]] for l in range(n)]
                for j in range(n)] for i in range(n)] for k in range(n)]
        return GeodesicCtx(self.ring, gt, [self.r[perm[l]] for l in range(n)])


@dataclass
class Curve:
    """A curve c in W^n together with its velocity v (v = delta c up to precision)."""

    c: list
    v: list | None = None

    def velocity(self, s: int = 1) -> list:
        if self.v is None:
            self.v = [w_delta(x, s) for x in self.c]
        return self.v

    def scaled(self, zeta: WElem, s: int = 1) -> "Curve":
        """zeta c with velocity zeta^{p^s} v, for a Teichmueller zeta."""
        zp = zeta ** (zeta.ctx.p ** s)
        v = None if self.v is None else [zp * x for x in self.v]
        return Curve([zeta * x for x in self.c], v)

    def to_json(self) -> dict:
        return {"c": [x.to_json() for x in self.c],
                "v": None if self.v is None else [x.to_json() for x in self.v]}


def is_nondegenerate(ctx: GeodesicCtx, curve: Curve) -> bool:
    v = curve.velocity(ctx.s)
    if not ctx.c_star_p_over_pi(curve.c).is_unit():
        return False
    total = v[0]
    for x in v[1:]:
        total = total + x
    return total.is_unit()


def acceleration(ctx: GeodesicCtx, curve: Curve, w: Sequence[WElem] | None = None) -> list[WElem]:
    """Derivative of w along c (the acceleration when w = v):

    c^*(p/pi) (sum_i v_i^phi) delta w_k + sum_{ij} c^*(Gamma^k_{ij}(1)) v_i^phi w_j^phi.
    """
    s = ctx.s
    v = curve.velocity(s)
    w = v if w is None else w
    vphi = [w_frobenius(x, s) for x in v]
    wphi = [w_frobenius(x, s) for x in w]
    cp = ctx.c_star_p_over_pi(curve.c)
    vsum = vphi[0]
    for x in vphi[1:]:
        vsum = vsum + x
    g = ctx.gamma_on(curve.c)
    out = []
    for k in range(ctx.n):
        acc = cp * vsum * w_delta(w[k], s)
        for i in range(ctx.n):
            for j in range(ctx.n):
                acc = acc + g[k][i][j] * vphi[i] * wphi[j]
        out.append(acc)
    return out


def _denominator(ctx, c, vphi):
    vs = vphi[0]
    for x in vphi[1:]:
        vs = vs + x
    return ctx.c_star_p_over_pi(c) * vs


def _transport_system(ctx: GeodesicCtx, curve: Curve):
    s = ctx.s
    v = curve.velocity(s)
    vphi = [w_frobenius(x, s) for x in v]
    g = ctx.gamma_on(curve.c)
    den = _denominator(ctx, curve.c, vphi)
    if not den.is_unit():
        raise DegenerateError("curve is degenerate: (sum r_l c_l)(sum v_l) = 0 mod p")
    n = ctx.n

    def F(w, wphi):
        out = []
        for k in range(n):
            acc = None
            for i in range(n):
                for j in range(n):
                    t = g[k][i][j] * vphi[i] * wphi[j]
                    acc = t if acc is None else acc + t
            out.append(-acc)
        return out

    return F, (lambda w, wphi: den)


def parallel_transport(ctx: GeodesicCtx, curve: Curve, w0: Sequence, depth: int | None = None) -> list[WElem]:
    """The unique w = w0 mod p parallel along the non-degenerate curve."""
    F, G = _transport_system(ctx, curve)
    return ode_solve(F, G, w0, ctx.s, depth, ctx.base)


def transport_residual(ctx: GeodesicCtx, curve: Curve, w: Sequence[WElem]) -> list[WElem]:
    F, G = _transport_system(ctx, curve)
    return ode_residual(F, G, w, ctx.s)


def transport_alpha(ctx: GeodesicCtx, curve: Curve) -> Mat:
    """alpha with the transport system written as delta w = alpha w^phi."""
    s = ctx.s
    v = curve.velocity(s)
    vphi = [w_frobenius(x, s) for x in v]
    g = ctx.gamma_on(curve.c)
    dinv = _denominator(ctx, curve.c, vphi).invert()
    n = ctx.n
    rows = []
    for k in range(n):
        row = []
        for j in range(n):
            acc = g[k][0][j] * vphi[0]
            for i in range(1, n):
                acc = acc + g[k][i][j] * vphi[i]
            row.append(-(acc * dinv))
        rows.append(row)
    return Mat(ctx.base, rows)


def alpha_to_beta(alpha: Mat) -> Mat:
    """beta = alpha + p alpha^2 + p^2 alpha^3 + ..., so delta w = beta w^{(p^s)}."""
    ctx = alpha.ctx
    p = ctx.p
    beta = alpha
    term = alpha
    for k in range(1, ctx.K + 1):
        term = term * alpha * p
        if term.is_zero():
            break
        beta = beta + term
    return beta


def _geodesic_system(ctx: GeodesicCtx):
    n, s = ctx.n, ctx.s

    def G(u, uphi):
        return _denominator(ctx, u[:n], uphi[n:])

    def F(u, uphi):
        c, v = u[:n], u[n:]
        vphi = uphi[n:]
        den = G(u, uphi)
        g = ctx.gamma_on(c)
        out = [x * den for x in v]
        for k in range(n):
            acc = None
            for i in range(n):
                for j in range(n):
                    t = g[k][i][j] * vphi[i] * vphi[j]
                    acc = t if acc is None else acc + t
            out.append(-acc)
        return out

    return F, G


def geodesic(ctx: GeodesicCtx, c0: Curve, depth: int | None = None) -> Curve:
    """The unique non-degenerate geodesic c with c = c0 and delta c = delta c0 mod p.

    Solved as the first-order system delta c = v, delta v = geodesic equation.
    """
    n = ctx.n
    v0 = c0.velocity(ctx.s)
    if not is_nondegenerate(ctx, c0):
        raise DegenerateError("initial curve is degenerate")
    F, G = _geodesic_system(ctx)
    u = ode_solve(F, G, list(c0.c) + list(v0), ctx.s, depth, ctx.base)
    return Curve(u[:n], u[n:])


def geodesic_residuals(ctx: GeodesicCtx, curve: Curve) -> dict:
    """Residual valuations of the first-order and second-order geodesic equations.

    ``first_order``: delta v + (...)/(...) with the solver's v, and v - delta c;
    ``second_order``: the same with v replaced by delta c, so one more digit is
    consumed.  Each entry is (valuation, precision).
    """
    n, s = ctx.n, ctx.s
    F, G = _geodesic_system(ctx)
    u = list(curve.c) + list(curve.v)
    res = ode_residual(F, G, u, s)

    def summary(rs):
        prec = min(r.prec for r in rs)
        return min(r.reduce(prec).valuation() for r in rs), prec

    out = {"first_order": summary(res)}
    dc = [w_delta(x, s) for x in curve.c]
    res2 = ode_residual(F, G, list(curve.c) + dc, s)[n:]
    out["second_order"] = summary(res2)
    return out


# -- evaluation-map interpretations ---------------------------------------------


def par_map(ctx: GeodesicCtx, curve: Curve, P: DeltaPoly, lam) -> list:
    """Parallel transport map k^n -> k^n from P_0 to P along the curve."""
    base = ctx.base
    w0 = [base.lift_residue(base.field(x)) for x in lam]
    w = parallel_transport(ctx, curve, w0)
    return [e_P(P, x, ctx.s) for x in w]


def exp_map(ctx: GeodesicCtx, lam0, lam1, P: DeltaPoly) -> list:
    """Geodesic exponential map: the geodesic with c(P_0) = lam0, v(P_0) = lam1, read at P."""
    base = ctx.base
    field = base.field
    lam0 = [field(x) for x in lam0]
    lam1 = [field(x) for x in lam1]
    rres = [x.residue() for x in ctx.r]
    h0 = field.zero()
    for a, b in zip(rres, lam0):
        h0 = h0 + a * b
    h1 = field.zero()
    for b in lam1:
        h1 = h1 + b
    if h0.is_zero():
        raise DegenerateError("lambda_0 lies on the hyperplane orthogonal to r")
    if h1.is_zero():
        raise DegenerateError("lambda_1 lies on the hyperplane orthogonal to (1, ..., 1)")
    n = ctx.n
    F, G = _geodesic_system(ctx)
    u0 = [w_teichmueller(x, base) for x in lam0] + [base.lift_residue(x) for x in lam1]
    u = ode_solve(F, G, u0, ctx.s, None, base)
    return [e_P(P, x, ctx.s) for x in u[:n]]


def trans_map(F: Callable, G: Callable, P: DeltaPoly, lam0, base: BaseCtx, s: int = 1) -> list:
    """trans_{f,P}(lam0) = u(P) for the solution u of delta u = F/G with u(P_0) = lam0."""
    u0 = [base.lift_residue(base.field(x)) for x in lam0]
    uphi = [w_frobenius(x, s) for x in u0]
    if not G(u0, uphi).is_unit():
        raise DegenerateError("denominator vanishes at the starting point")
    u = ode_solve(F, G, u0, s, None, base)
    return [e_P(P, x, s) for x in u]
