"""A geodesic and a parallel transport over W for the Levi-Civita connection (e = n = N = 2)."""

import random

from pigeom import Curve, GeodesicCtx, Metric, PointwiseMode, TorsionSymbol, geodesic, levi_civita_for
from pigeom.base_field import FieldCtx
from pigeom.geodesics import geodesic_residuals, is_nondegenerate, parallel_transport, transport_residual
from pigeom.ram_ring import RamCtx
from pigeom.witt_base import BaseCtx

K = 6
R = RamCtx(BaseCtx(FieldCtx(5, 2), K), e=2, s=1, n=2, zeta_exps=[0, 1], M=2 * K)
W = R.base
rng = random.Random(3)
conn = levi_civita_for(Metric.random(R, 2, rng), TorsionSymbol.random_constant(R, 2, rng),
                       PointwiseMode(R, N=2))
ctx = GeodesicCtx.from_connection(conn)

while True:
    c0 = Curve([W.random(rng) for _ in range(2)])
    if is_nondegenerate(ctx, c0):
        break

g = geodesic(ctx, c0)
print("geodesic c =", [str(x) for x in g.c])
print("velocity v =", [str(x) for x in g.v])
print("residuals (valuation, precision):", geodesic_residuals(ctx, g))

w = parallel_transport(ctx, g, [W.one(), W.zero()])
print("parallel w =", [str(x) for x in w])
print("transport residual valuations:", [r.valuation() for r in transport_residual(ctx, g, w)])
