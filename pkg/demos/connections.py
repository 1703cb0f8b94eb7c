"""Levi-Civita and Chern connections for a random 2 x 2 metric, with their checks."""

import random

from pigeom import JetMode, Metric, TorsionSymbol, chern, levi_civita_for
from pigeom.base_field import FieldCtx
from pigeom.connections import (
    check_bq_symmetric,
    check_metric,
    check_symmetric,
    chern_corollary_check,
    lcc_mod_m_check,
)
from pigeom.ram_ring import RamCtx
from pigeom.witt_base import BaseCtx

R = RamCtx(BaseCtx(FieldCtx(5, 2), 6), e=2, s=1, n=2, zeta_exps=[0, 1])
rng = random.Random(7)
q = Metric.random(R, 2, rng)
L = TorsionSymbol.random_constant(R, 2, rng)
mode = JetMode.build(R, 2, 1)

lc = levi_civita_for(q, L, mode)
print("Levi-Civita, depth", lc.depth)
for rep in (check_metric(lc), check_symmetric(lc, L), lcc_mod_m_check(lc, q, L)):
    print("  ", rep.to_json())

ch = chern(q, mode)
print("Chern, depth", ch.depth)
for rep in (check_metric(ch), check_bq_symmetric(ch), chern_corollary_check(ch, q, lc, L)):
    print("  ", rep.to_json())
