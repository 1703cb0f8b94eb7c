"""pi-derivations on R_pi = W[pi]/(pi^2 - 5) over F_25, two directions with zeta = (1, -1)."""

import random

from pigeom import RamCtx, rpi_delta, rpi_phi
from pigeom.ram_ring import derivation_law_residuals
from pigeom.base_field import FieldCtx
from pigeom.witt_base import BaseCtx, w_teichmueller

W = BaseCtx(FieldCtx(5, 2), 6)
R = RamCtx(W, e=2, s=1, n=2, zeta_exps=[0, 1])
rng = random.Random(0)
pi = R.pi()

print("ring:", R.to_json())
print("phi_1(pi) =", rpi_phi(pi, 1))
print("phi_2(pi) =", rpi_phi(pi, 2))
print("delta_1(pi) =", rpi_delta(pi, 1))

a, b = R.random(rng), R.random(rng)
for i in (1, 2):
    s, p = derivation_law_residuals(a, b, i)
    # a residual that vanishes has valuation equal to its precision
    print(f"direction {i}: sum rule {s.valuation()}/{s.prec}, product rule {p.valuation()}/{p.prec}")

z = R.embed(w_teichmueller(W.field.gen(), W))
print("delta_1 of a Teichmueller lift:", rpi_delta(z, 1))
