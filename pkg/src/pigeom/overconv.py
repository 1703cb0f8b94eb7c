"""Cross-ramification comparison of Levi-Civita and Chern solutions.

A metric over W and a torsion symbol L_pi = (p/pi) L_p with L_p over W are
fed to the solvers over R_pi for several ramification indices e.  The
resulting Lambda entries should lie in W (theta coordinates >= 1 vanish) and
coincide across e.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .connections import JetMode, Metric, TorsionSymbol, chern, levi_civita_for
from .errors import ConfigError
from .matrix_ring import Mat
from .ram_ring import RamCtx, rpi_theta_coords
from .witt_base import BaseCtx, WElem

__all__ = [
    "OverconvReport",
    "ring_for",
    "lc_overconvergence_check",
    "chern_overconvergence_check",
    "compare_lambdas",
]


@dataclass
class OverconvReport:
    name: str
    e_list: list
    agree: bool
    in_W: bool
    precision: int
    first_disagreement: dict | None = None
    contexts: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.agree and self.in_W

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "e_list": list(self.e_list),
            "agree": self.agree,
            "in_W": self.in_W,
            "precision": self.precision,
            "passed": self.passed,
            "first_disagreement": self.first_disagreement,
            "contexts": self.contexts,
        }


def ring_for(base: BaseCtx, e: int, n: int, s: int = 1, zeta_exps=None) -> RamCtx:
    """R_pi over ``base`` with every pi-derivation acting as phi^s on W."""
    return RamCtx(base, e=e, s=s, n=n, zeta_exps=zeta_exps)


def _embed_metric(ring: RamCtx, q: Mat) -> Metric:
    return Metric(Mat(ring, [[ring.embed(a) for a in row] for row in q.rows]))


def _entries(conn):
    """Every R_pi coefficient of every Lambda entry, keyed by position."""
    out = {}
    for i, lam in enumerate(conn.lambdas):
        for a in range(lam.n):
            for b in range(lam.n):
                x = lam[a, b]
                if hasattr(x, "terms"):
                    for mono in x.ctx.monomials:
                        out[(i, a, b, mono)] = x.coefficient(mono)
                else:
                    out[(i, a, b, ())] = x
    return out


def compare_lambdas(name: str, conns: dict) -> OverconvReport:
    """Compare theta-coordinate 0 across contexts; higher coordinates must vanish."""
    tables = {e: _entries(c) for e, c in conns.items()}
    coords = {e: {k: rpi_theta_coords(v) for k, v in t.items()} for e, t in tables.items()}
    es = sorted(conns)
    keys = list(tables[es[0]])
    # common W-precision of coordinate 0
    prec = min(c[0].prec for e in es for c in coords[e].values())
    in_W = True
    for e in es:
        for k, c in coords[e].items():
            for j, x in enumerate(c[1:], start=1):
                if x.prec > 0 and not x.is_zero():
                    in_W = False
    agree = True
    first = None
    ref = coords[es[0]]
    for e in es[1:]:
        for k in keys:
            a, b = ref[k][0], coords[e][k][0]
            if not a.equals(b, prec):
                agree = False
                if first is None:
                    d = (a - b).reduce(prec)
                    first = {"e": [es[0], e], "entry": [k[0] + 1, k[1] + 1, k[2] + 1, list(k[3])],
                             "valuation": d.valuation()}
    contexts = [{"e": e, "ring": conns[e].mode.ring.to_json(), "depth": conns[e].depth,
                 "lambda_precision": min(L.prec for L in conns[e].lambdas)} for e in es]
    return OverconvReport(name, es, agree, in_W, prec, first, contexts)


def _check_config(base: BaseCtx, e_list):
    if not e_list:
        raise ConfigError("need at least one ramification index")
    for e in e_list:
        if (base.field.q - 1) % e:
            raise ConfigError(f"e={e} does not divide p^m - 1 = {base.field.q - 1}")


def lc_overconvergence_check(q: Mat, L_p: list, e_list, D: int = 1, s: int = 1,
                             zeta_exps=None, torsion_scale=None) -> OverconvReport:
    """Levi-Civita Lambda over R_pi for each e, with torsion L_pi = (p/pi) L_p.

    ``torsion_scale(ring)`` overrides p/pi; it is the hook for negative controls.
    """
    base = q.ctx
    _check_config(base, e_list)
    n = q.n
    if len(L_p) != n:
        raise ConfigError("L_p must have one matrix per direction (n = N)")
    conns = {}
    for e in e_list:
        ring = ring_for(base, e, n, s, zeta_exps)
        metric = _embed_metric(ring, q)
        mats = [Mat(ring, [[ring.embed(a) if isinstance(a, WElem) else a for a in row]
                           for row in Lk.rows]) for Lk in L_p]
        scale = ring.pi() ** (e - 1) if torsion_scale is None else torsion_scale(ring)
        L = TorsionSymbol.constant(ring, mats).scaled(scale)
        conns[e] = levi_civita_for(metric, L, JetMode.build(ring, n, D))
    return compare_lambdas("lc_overconvergence", conns)


def chern_overconvergence_check(q: Mat, e_list, D: int = 1, s: int = 1,
                                zeta_exps=None, n: int | None = None) -> OverconvReport:
    """Closed-form Chern Lambda over R_pi for each e."""
    base = q.ctx
    _check_config(base, e_list)
    n = q.n if n is None else n
    conns = {}
    for e in e_list:
        ring = ring_for(base, e, n, s, zeta_exps)
        metric = _embed_metric(ring, q)
        conns[e] = chern(metric, JetMode.build(ring, q.n, D), n)
    return compare_lambdas("chern_overconvergence", conns)
