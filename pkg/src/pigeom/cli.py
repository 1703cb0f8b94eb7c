"""Command-line driver: JSON config in, JSON report out.

Exit codes: 0 when every identity checked by the command holds, 1 when one
fails, 2 for an invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from .base_field import FieldCtx
from .connections import (
    JetMode,
    Metric,
    PointwiseMode,
    TorsionSymbol,
    check_bq_symmetric,
    check_metric,
    check_symmetric,
    chern,
    chern_corollary_check,
    christoffel_second,
    eajuns_check,
    lcc_mod_m_check,
    levi_civita_for,
)
from .delta_poly import DeltaPoly, witt_coords, witt_ghosts
from .errors import PigeomError, ConfigError, DegenerateError, HypothesisError
from .geodesics import (
    Curve,
    GeodesicCtx,
    exp_map,
    geodesic,
    geodesic_residuals,
    is_nondegenerate,
    parallel_transport,
    trans_map,
    transport_residual,
)
from .jet_group import JetPoint, g_to_G1, jet_identity, jet_inv, jet_mul, lie_add, lie_neg, log_derivative
from .matrix_ring import Mat
from .overconv import chern_overconvergence_check, lc_overconvergence_check
from .ram_ring import (
    RamCtx,
    RpiElem,
    commutator_residuals,
    derivation_law_residuals,
    digit_residuals,
    rpi_delta,
    rpi_theta_coords,
)
from .witt_base import BaseCtx, WElem, w_frobenius

__all__ = ["main", "build_ring", "run"]

COMMANDS = (
    "ring-info", "derivation-check", "levi-civita", "chern", "geodesic",
    "parallel-transport", "exp-map", "trans-map", "witt-coords",
    "jet-group-check", "overconvergence",
)


# -- config parsing -------------------------------------------------------------


def build_field(rc: dict) -> FieldCtx:
    mod = rc.get("modulus")
    return FieldCtx(int(rc["p"]), int(rc.get("m", 1)), tuple(int(x) for x in mod) if mod else None)


def build_base(rc: dict) -> BaseCtx:
    return BaseCtx(build_field(rc), int(rc["K"]))


def build_ring(rc: dict, base: BaseCtx | None = None, full: bool = False) -> RamCtx:
    """RamCtx from the 'ring' section; ``full`` pins the working precision to e*K."""
    base = build_base(rc) if base is None else base
    e = int(rc.get("e", 1))
    M = rc.get("prec_pi")
    if full:
        M = e * base.K
    return RamCtx(base, e=e, s=int(rc.get("s", 1)), n=int(rc.get("n", 1)),
                  zeta_exps=rc.get("zeta_exps"), M=None if M is None else int(M))


def parse_fq(field: FieldCtx, v):
    if isinstance(v, list):
        return field([int(x) for x in v])
    return field(int(v))


def parse_w(base: BaseCtx, v) -> WElem:
    if isinstance(v, dict):
        return WElem.from_json(base, v)
    if isinstance(v, list):
        c = [int(x) for x in v] + [0] * (base.m - len(v))
        return WElem(base, c, base.K)
    return base.from_int(int(v))


def parse_rpi(ring: RamCtx, v) -> RpiElem:
    if isinstance(v, dict) and "coords" in v:
        return RpiElem.from_json(ring, v)
    if isinstance(v, list):
        return ring.from_theta([parse_w(ring.base, x) for x in v])
    if isinstance(v, dict):
        return ring.embed(parse_w(ring.base, v))
    return ring.from_int(int(v))


def parse_mat(ring, rows, parse=parse_rpi) -> Mat:
    return Mat(ring, [[parse(ring, x) for x in row] for row in rows])


def _metric(ring: RamCtx, prob: dict, N: int) -> Metric:
    q = prob.get("q")
    if q is None:
        return Metric(Mat.identity(ring, N))
    return Metric(parse_mat(ring, q))


def _torsion(ring: RamCtx, prob: dict, n: int) -> TorsionSymbol:
    L = prob.get("torsion")
    if not L:
        return TorsionSymbol.zero(ring, n)
    if isinstance(L, dict):
        L = L.get("matrices")
    return TorsionSymbol.constant(ring, [parse_mat(ring, m) for m in L])


def _mode(ring: RamCtx, rc: dict, prob: dict, N: int):
    kind = prob.get("mode", "jet")
    if kind == "jet":
        return JetMode.build(ring, N, int(rc.get("D", 1)))
    if kind == "pointwise":
        g = prob.get("g")
        return PointwiseMode(ring, parse_mat(ring, g) if g else None, N)
    raise ConfigError(f"unknown mode {kind!r}")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("PIGEOM_SEED", "0"))


def _sample_rng(seed: int, k: int) -> random.Random:
    return random.Random(f"{seed}:{k}")


def _fan_out(worker, cfg: dict, seed: int, samples: int, jobs: int) -> list:
    """Run ``worker(cfg, seed, k)`` for k < samples; order and result are jobs-independent."""
    if jobs <= 1:
        return [worker(cfg, seed, k) for k in range(samples)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(worker, [cfg] * samples, [seed] * samples, range(samples)))


def _vals(xs) -> list:
    return [x.to_json() for x in xs]


# -- commands ----------------------------------------------------------------------


def cmd_ring_info(cfg, args):
    ring = build_ring(cfg["ring"])
    pi = ring.pi()
    ok = ring.base.check_invariants()
    report = {
        "ring": ring.to_json(),
        "cap": ring.cap,
        "delta_pi": [rpi_delta(pi, i).to_json() for i in range(1, ring.n + 1)],
        "r": _vals(rpi_theta_coords(ring.from_int(ring.p).div_pi(1))),
        "checks": {"base_invariants": ok},
    }
    return report, [] if ok else ["base_invariants"]


def _derivation_worker(cfg, seed, k):
    ring = build_ring(cfg["ring"])
    rng = _sample_rng(seed, k)
    a, b = ring.random(rng), ring.random(rng)
    bad = []
    target = ring.M - 1
    for i in range(1, ring.n + 1):
        for name, r in zip(("sum_rule", "product_rule"), derivation_law_residuals(a, b, i)):
            if r.prec < target or not r.reduce(target).is_zero():
                bad.append(name)
        for j in range(1, ring.n + 1):
            for t, r in enumerate(commutator_residuals(a, i, j) + digit_residuals(a, i, j)):
                if not r.reduce(1).is_zero():
                    bad.append("commutator_congruences" if t < 4 else "digit_congruences")
    return sorted(set(bad))


def cmd_derivation_check(cfg, args):
    samples = int(cfg.get("problem", {}).get("samples", 100))
    seed = _seed(args)
    results = _fan_out(_derivation_worker, cfg, seed, samples, args.jobs)
    failures = sorted({f for r in results for f in r})
    report = {"samples": samples, "seed": seed,
              "failing_samples": [k for k, r in enumerate(results) if r],
              "checks": {n: n not in failures for n in
                         ("sum_rule", "product_rule", "commutator_congruences", "digit_congruences")}}
    return report, failures


def _gamma_at_one(conn) -> list:
    gam = christoffel_second(conn)
    n = conn.n
    return [[[conn.mode.at_one(gam[i][j, k]) for j in range(n)] for i in range(n)] for k in range(n)]


def cmd_levi_civita(cfg, args):
    rc, prob = cfg["ring"], cfg.get("problem", {})
    ring = build_ring(rc)
    n = ring.n
    N = int(rc.get("N", n))
    metric = _metric(ring, prob, N)
    L = _torsion(ring, prob, n)
    mode = _mode(ring, rc, prob, N)
    conn = levi_civita_for(metric, L, mode, args.depth or prob.get("depth"))
    checks = [check_metric(conn), check_symmetric(conn, L)]
    if mode.name == "jet" or "g" not in prob:
        checks.append(lcc_mod_m_check(conn, metric, L))
    if mode.name == "jet":
        checks.append(eajuns_check(metric, mode))
    g1 = _gamma_at_one(conn)
    report = {
        "connection": conn.to_json(),
        "gamma_at_one": [[[x.to_json() for x in row] for row in plane] for plane in g1],
        "gamma_at_one_vanishes": all(x.is_zero() for plane in g1 for row in plane for x in row),
        "checks": [c.to_json() for c in checks],
    }
    return report, [c.name for c in checks if not c.passed]


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1


def cmd_chern(cfg, args):
    rc, prob = cfg["ring"], cfg.get("problem", {})
    ring = build_ring(rc)
    n = ring.n
    N = int(rc.get("N", n))
    metric = _metric(ring, prob, N)
    mode = _mode(ring, rc, prob, N)
    conn = chern(metric, mode, n, args.depth or prob.get("depth"))
    checks = [check_metric(conn), check_bq_symmetric(conn)]
    if mode.name == "jet":
        checks.append(chern_corollary_check(conn, metric))
    report = {"connection": conn.to_json(), "checks": [c.to_json() for c in checks]}
    failures = [c.name for c in checks if not c.passed]
    q = prob.get("q")
    if N == n == ring.s == ring.e == 1 and q is not None and isinstance(q[0][0], int):
        qi, p = int(q[0][0]), ring.p
        lam = mode.at_one(conn.lambdas[0][0, 0])
        leg = _legendre(qi, p)
        closed = ring.from_int(leg * pow(qi, (p - 1) // 2, p ** ring.K))
        ok = lam.equals(closed)
        report["legendre"] = {"q": qi, "symbol": leg, "lambda": lam.to_json(),
                              "closed_form": closed.to_json(), "agree": ok}
        if not ok:
            failures.append("legendre_closed_form")
    return report, failures


def _geo_ctx(cfg, prob) -> GeodesicCtx:
    rc = cfg["ring"]
    ring = build_ring(rc, full=True)
    n = ring.n
    if prob.get("flat"):
        return GeodesicCtx.flat(ring)
    metric = _metric(ring, prob, n)
    L = _torsion(ring, prob, n)
    conn = levi_civita_for(metric, L, PointwiseMode(ring, N=n))
    return GeodesicCtx.from_connection(conn)


def _depth(args, prob, base):
    d = args.depth or prob.get("depth")
    return base.K if d is None else int(d)


def cmd_geodesic(cfg, args):
    prob = cfg.get("problem", {})
    ctx = _geo_ctx(cfg, prob)
    base = ctx.base
    c0 = Curve([parse_w(base, x) for x in prob["c0"]])
    if not is_nondegenerate(ctx, c0):
        raise DegenerateError("initial curve is degenerate")
    depth = _depth(args, prob, base)
    curve = geodesic(ctx, c0, depth)
    res = geodesic_residuals(ctx, curve)
    ok1 = res["first_order"][0] >= depth - 1
    ok2 = res["second_order"][0] >= depth - 2
    report = {"curve": curve.to_json(), "depth": depth,
              "residuals": {k: {"valuation": v, "precision": p} for k, (v, p) in res.items()},
              "checks": {"first_order": ok1, "second_order": ok2}}
    return report, [k for k, ok in (("first_order", ok1), ("second_order", ok2)) if not ok]


def cmd_parallel_transport(cfg, args):
    prob = cfg.get("problem", {})
    ctx = _geo_ctx(cfg, prob)
    base = ctx.base
    curve = Curve([parse_w(base, x) for x in prob["c"]])
    if not is_nondegenerate(ctx, curve):
        raise DegenerateError("curve is degenerate")
    depth = _depth(args, prob, base)
    w = parallel_transport(ctx, curve, [parse_w(base, x) for x in prob["w0"]], depth)
    res = transport_residual(ctx, curve, w)
    val = min(r.reduce(min(x.prec for x in res)).valuation() for r in res)
    ok = val >= depth - 1
    report = {"w": _vals(w), "depth": depth, "residual_valuation": val,
              "checks": {"transport_equation": ok}}
    return report, [] if ok else ["transport_equation"]


def _fq_json(x) -> list:
    return [str(c) for c in x.coeffs]


def cmd_exp_map(cfg, args):
    prob = cfg.get("problem", {})
    ctx = _geo_ctx(cfg, prob)
    F = ctx.base.field
    P = DeltaPoly.from_json(prob.get("P", [{"exponents": [1], "coefficient": "1"}]), ctx.base)
    out = exp_map(ctx, [parse_fq(F, x) for x in prob["lambda0"]],
                  [parse_fq(F, x) for x in prob["lambda1"]], P)
    return {"P": P.to_json(), "value": [_fq_json(x) for x in out]}, []


def _linear_system(base: BaseCtx, lin: dict, n: int):
    """F(u, u^phi) = A u + B u^phi + c with G = 1."""
    A = [[parse_w(base, x) for x in row] for row in lin.get("A", [[0] * n for _ in range(n)])]
    B = [[parse_w(base, x) for x in row] for row in lin.get("B", [[0] * n for _ in range(n)])]
    c = [parse_w(base, x) for x in lin.get("c", [0] * n)]

    def F(u, uphi):
        out = []
        for k in range(n):
            acc = c[k]
            for j in range(n):
                acc = acc + A[k][j] * u[j] + B[k][j] * uphi[j]
            out.append(acc)
        return out

    return F, (lambda u, uphi: base.one())


def cmd_trans_map(cfg, args):
    prob = cfg.get("problem", {})
    base = build_base(cfg["ring"])
    lam0 = [parse_fq(base.field, x) for x in prob["lambda0"]]
    F, G = _linear_system(base, prob.get("linear", {}), len(lam0))
    P = DeltaPoly.from_json(prob.get("P", [{"exponents": [1], "coefficient": "1"}]), base)
    out = trans_map(F, G, P, lam0, base, int(cfg["ring"].get("s", 1)))
    return {"P": P.to_json(), "value": [_fq_json(x) for x in out]}, []


def cmd_witt_coords(cfg, args):
    prob = cfg.get("problem", {})
    base = build_base(cfg["ring"])
    a = parse_w(base, prob["a"])
    r = int(prob.get("r", base.K - 1))
    xs = witt_coords(a, r)
    ghosts = witt_ghosts(xs)
    ok = all(g.equals(w_frobenius(a, j), g.prec) for j, g in enumerate(ghosts))
    return {"coords": _vals(xs), "checks": {"ghost_round_trip": ok}}, [] if ok else ["ghost_round_trip"]


def _jet_worker(cfg, seed, k):
    rc = cfg["ring"]
    ring = build_ring(rc)
    n = ring.n
    N = int(rc.get("N", n))
    rng = _sample_rng(seed, k)
    bad = []
    a, b, c = [JetPoint.random(ring, N, n, rng) for _ in range(3)]
    ab_c = jet_mul(jet_mul(a, b), c)
    a_bc = jet_mul(a, jet_mul(b, c))
    if not ab_c.equals(a_bc, min(ab_c.prec, a_bc.prec)):
        bad.append("associativity")
    one = jet_identity(ring, N, n)
    a1 = jet_mul(a, one)
    if not a1.equals(a, min(a1.prec, a.prec)):
        bad.append("identity")
    prod = jet_mul(a, jet_inv(a))
    if not prod.equals(one, prod.prec):
        bad.append("inverse")
    x, y = Mat.random(ring, N, rng), Mat.random(ring, N, rng)
    if not lie_add(x, lie_neg(x)).is_zero():
        bad.append("lie_inverse")
    kx = JetPoint(Mat.identity(ring, N), [x] * n)
    ky = JetPoint(Mat.identity(ring, N), [y] * n)
    kk = jet_mul(kx, ky)
    if not all(z.equals(lie_add(x, y), z.prec) for z in kk.a):
        bad.append("kernel_law")
    lhs, rhs = g_to_G1(x) * g_to_G1(y), g_to_G1(lie_add(x, y))
    if not lhs.equals(rhs, min(lhs.prec, rhs.prec)):
        bad.append("g_to_G1_homomorphism")
    return bad


def cmd_jet_group_check(cfg, args):
    rc, prob = cfg["ring"], cfg.get("problem", {})
    samples = int(prob.get("samples", 20))
    seed = _seed(args)
    results = _fan_out(_jet_worker, cfg, seed, samples, args.jobs)
    failures = sorted({f for r in results for f in r})
    # logarithmic derivative against the Christoffel symbols at a random point
    ring = build_ring(rc)
    n = ring.n
    rng = _sample_rng(seed, -1)
    g = Mat.random(ring, n, rng, invertible=True)
    conn = levi_civita_for(Metric.random(ring, n, rng), TorsionSymbol.random_constant(ring, n, rng),
                           PointwiseMode(ring, g=g))
    ld = log_derivative(conn)
    ok = all(a.equals(b, min(a.prec, b.prec)) for a, b in zip(ld, christoffel_second(conn)))
    if not ok:
        failures.append("log_derivative")
    names = ("associativity", "identity", "inverse", "lie_inverse", "kernel_law",
             "g_to_G1_homomorphism", "log_derivative")
    return {"samples": samples, "seed": seed, "checks": {k: k not in failures for k in names}}, failures


def cmd_overconvergence(cfg, args):
    rc, prob = cfg["ring"], cfg.get("problem", {})
    base = build_base(rc)
    e_list = [int(e) for e in prob.get("e_list", [1, 2])]
    q = parse_mat(base, prob["q"], parse_w) if "q" in prob else Mat.identity(base, int(rc.get("N", 2)))
    n = q.n
    Lp = prob.get("L_p")
    Lp = [parse_mat(base, m, parse_w) for m in Lp] if Lp else [Mat.zeros(base, n) for _ in range(n)]
    D = int(rc.get("D", 1))
    s = int(rc.get("s", 1))
    zexp = rc.get("zeta_exps")
    lc = lc_overconvergence_check(q, Lp, e_list, D, s, zexp)
    ch = chern_overconvergence_check(q, e_list, D, s, zexp)
    report = {"levi_civita": lc.to_json(), "chern": ch.to_json()}
    failures = [r.name for r in (lc, ch) if not r.passed]
    if prob.get("negative_control"):
        neg = lc_overconvergence_check(q, Lp, e_list, D, s, zexp, torsion_scale=lambda R: R.one())
        report["negative_control"] = neg.to_json()
        if neg.passed:
            failures.append("negative_control_not_flagged")
    return report, failures


HANDLERS = {
    "ring-info": cmd_ring_info,
    "derivation-check": cmd_derivation_check,
    "levi-civita": cmd_levi_civita,
    "chern": cmd_chern,
    "geodesic": cmd_geodesic,
    "parallel-transport": cmd_parallel_transport,
    "exp-map": cmd_exp_map,
    "trans-map": cmd_trans_map,
    "witt-coords": cmd_witt_coords,
    "jet-group-check": cmd_jet_group_check,
    "overconvergence": cmd_overconvergence,
}


# -- entry point ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pigeom", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--depth", type=int, help="override the solver depth")
    parser.add_argument("--seed", type=int, help="seed for randomized suites (default: $PIGEOM_SEED or 0)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for randomized suites")
    return parser


def run(command: str, cfg: dict, args) -> tuple[dict, list]:
    if "ring" not in cfg:
        raise ConfigError("config needs a 'ring' section")
    report, failures = HANDLERS[command](cfg, args)
    report = {"command": command, "ring_config": cfg["ring"], **report,
              "passed": not failures, "failures": failures}
    return report, failures


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
        report, failures = run(args.command, cfg, args)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError,
            ConfigError, HypothesisError, DegenerateError) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except PigeomError as exc:
        print(f"failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for name in failures:
        print(f"FAIL: {name}", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
