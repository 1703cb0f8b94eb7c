"""Acceptance suite: ten end-to-end criteria, each with an exact tolerance and
a runtime budget.  Every test prints one PASS/FAIL line (visible without -s).

Run alone with:  pytest tests/test_acceptance.py -v
"""

import itertools
import random
import time

import pytest
from sympy import legendre_symbol

from pigeom.cli import parse_mat, parse_w
from pigeom.connections import (
    JetMode,
    Metric,
    PointwiseMode,
    TorsionSymbol,
    check_metric,
    check_symmetric,
    chern,
    christoffel_second,
    lcc_depth_check,
    lcc_mod_m_check,
    levi_civita_for,
)
from pigeom.delta_poly import DeltaPoly, eval_delta_poly, witt_coords, witt_ghosts
from pigeom.geodesics import (
    Curve,
    GeodesicCtx,
    geodesic,
    geodesic_residuals,
    is_nondegenerate,
    ode_residual,
    ode_solve,
)
from pigeom.jet_group import (
    JetPoint,
    g_to_G1,
    jet_identity,
    jet_inv,
    jet_mul,
    lie_add,
    lie_neg,
    log_derivative,
)
from pigeom.matrix_ring import Mat
from pigeom.overconv import chern_overconvergence_check, lc_overconvergence_check
from pigeom.ram_ring import commutator_residuals, derivation_law_residuals, digit_residuals
from pigeom.witt_base import w_delta, w_frobenius, w_teichmueller

from conftest import base, ring

SEED = 20240


@pytest.fixture
def report(capsys):
    """Call report(n, title, ok, elapsed, budget, detail) to print the verdict line."""

    def emit(n, title, ok, elapsed, budget, detail=""):
        verdict = "PASS" if ok and elapsed < budget else "FAIL"
        line = f"[{verdict}] criterion {n:2d} {title}: {elapsed:.2f}s (< {budget}s)"
        if detail:
            line += f"  {detail}"
        with capsys.disabled():
            print("\n" + line)
        return verdict == "PASS"

    return emit


def same(x, y):
    return x.equals(y, min(x.prec, y.prec))


# 1 -------------------------------------------------------------------------------


def test_c01_derivation_axioms(report):
    t0 = time.perf_counter()
    R = ring(5, 2, 8, e=2, n=2, zeta_exps=(0, 1))
    rng = random.Random(SEED + 1)
    target = R.M - 1
    laws_ok = True
    for _ in range(500):
        a, b = R.random(rng), R.random(rng)
        for i in (1, 2):
            for r in derivation_law_residuals(a, b, i):
                laws_ok &= r.prec >= target and r.reduce(target).is_zero()
    cong_ok = True
    for _ in range(200):
        a = R.random(rng)
        for i in (1, 2):
            for j in (1, 2):
                for r in commutator_residuals(a, i, j) + digit_residuals(a, i, j):
                    cong_ok &= r.reduce(1).is_zero()
    elapsed = time.perf_counter() - t0
    ok = report(1, "derivation axioms", laws_ok and cong_ok, elapsed, 10,
                f"laws={laws_ok} congruences={cong_ok}")
    assert ok


# 2 -------------------------------------------------------------------------------


def test_c02_levi_civita(report):
    t0 = time.perf_counter()
    R = ring(5, 2, 8, e=2, n=2, zeta_exps=(0, 1))
    mode = JetMode.build(R, 2, 1)
    rng = random.Random(SEED + 2)
    one = Mat.identity(mode.ctx, 2)
    checks_ok = perturb_ok = True
    for _ in range(25):
        q = Metric.random(R, 2, rng)
        L = TorsionSymbol.random_constant(R, 2, rng)
        conn = levi_civita_for(q, L, mode)
        assert conn.depth == R.M
        checks_ok &= check_metric(conn).passed
        checks_ok &= check_symmetric(conn, L).passed
        checks_ok &= all((lam - one).reduce(1).is_zero() for lam in conn.lambdas)
        checks_ok &= lcc_mod_m_check(conn, q, L).passed
        # one entry per Lambda_i at a random level nu
        for i in range(2):
            a, b = rng.randrange(2), rng.randrange(2)
            nu = rng.randrange(1, R.M)
            lam = list(conn.lambdas)
            lam[i] = lam[i] + Mat.unit(mode.ctx, 2, a, b).mul_pi(nu)
            bad = type(conn)(lam, conn.mode, conn.A, conn.B, conn.depth)
            vals = [check_metric(bad).valuation, check_symmetric(bad, L).valuation]
            perturb_ok &= min(vals) == nu
    elapsed = time.perf_counter() - t0
    ok = report(2, "Levi-Civita solver", checks_ok and perturb_ok, elapsed, 30,
                f"checks={checks_ok} perturbation_valuations={perturb_ok}")
    assert ok


# 3 -------------------------------------------------------------------------------


def _depth_case(R, mode, rng, k):
    T = Metric.teichmueller(R, [[1, 2], [2, 3]]).q
    X = Mat.random(R, 2, rng)
    q = Metric(T + (X + X.T).mul_pi(k))
    L = TorsionSymbol.random_constant(R, 2, rng).scaled(R.pi() ** 3)
    conn = levi_civita_for(q, L, mode)
    dq_val = min(q.delta(i).reduce(R.M - 1).valuation() for i in (1, 2))
    return q, conn, dq_val


def test_c03_lcc_depth(report):
    """Gamma_ijk = 0 mod (pi^3, P) when delta_i q = L(1) = 0 mod pi^3.

    A perturbation pi^3 X of a Teichmueller matrix has delta of valuation 2, so
    the perturbation is pi^3 (pi X); the hypothesis is asserted explicitly.
    """
    t0 = time.perf_counter()
    R = ring(5, 2, 4, e=2, n=2, zeta_exps=(0, 1))
    mode = JetMode.build(R, 2, 1)
    rng = random.Random(SEED + 3)
    ok_all = True
    for _ in range(3):
        q, conn, dq_val = _depth_case(R, mode, rng, 4)
        ok_all &= dq_val >= 3 and lcc_depth_check(conn, q, 3).passed
    elapsed = time.perf_counter() - t0
    q, conn, dq_val = _depth_case(R, mode, rng, 3)
    literal = lcc_depth_check(conn, q, 3)
    ok = report(3, "Levi-Civita depth test", ok_all, elapsed, 5,
                f"(info: q = Teich + pi^3 X gives v(delta q) = {dq_val}, "
                f"v(Gamma) = {literal.valuation})")
    assert ok


# 4 -------------------------------------------------------------------------------


def test_c04_chern_legendre(report):
    t0 = time.perf_counter()
    ok_all = True
    mod1 = True
    for p in (5, 13):
        R = ring(p, 1, 4, M=4)
        mode = PointwiseMode(R, N=1)
        for q in range(1, p * p):
            if q % p == 0:
                continue
            lam = chern(Metric(Mat(R, [[q]])), mode).lambdas[0][0, 0]
            leg = legendre_symbol(q, p)
            closed = R.from_int(leg * pow(q, (p - 1) // 2, p ** 4))
            factor = lam * R.from_int(pow(q, (p - 1) // 2, p ** 4)).invert()
            ok_all &= lam.prec == R.cap and lam.equals(closed)
            ok_all &= factor.equals(R.from_int(leg))
            mod1 &= (lam - R.one()).reduce(1).is_zero()
    elapsed = time.perf_counter() - t0
    ok = report(4, "Chern / Legendre", ok_all, elapsed, 5,
                f"(info: Lambda = 1 mod p for every q: {mod1})")
    assert ok


# 5 -------------------------------------------------------------------------------


def test_c05_scalar_lc_equals_chern(report):
    t0 = time.perf_counter()
    R = ring(7, 2, 4, e=2, n=1)
    mode = PointwiseMode(R, N=1)
    rng = random.Random(SEED + 5)
    ok_all = True
    for _ in range(20):
        q = Metric.random(R, 1, rng)
        lc = levi_civita_for(q, TorsionSymbol.zero(R, 1), mode)
        ch = chern(q, mode)
        ok_all &= lc.depth == ch.depth == R.M
        ok_all &= lc.lambdas[0].equals(ch.lambdas[0])
    elapsed = time.perf_counter() - t0
    assert report(5, "scalar LC = Chern", ok_all, elapsed, 5)


# 6 -------------------------------------------------------------------------------


def _random_metric_data(rng, bound):
    """A symmetric 2 x 2 metric as integer theta-coordinate data, invertible mod pi."""
    while True:
        ent = [[[rng.randrange(bound) for _ in range(2)] for _ in range(2)] for _ in range(3)]
        rows = [[ent[0], ent[1]], [ent[1], ent[2]]]
        d = (ent[0][0][0] * ent[2][0][0] - ent[1][0][0] ** 2) % 5
        if d:
            return rows


def _geo_setup(K, q_rows, L_rows):
    R = ring(5, 2, K, e=2, n=2, zeta_exps=(0, 1), M=2 * K)
    q = Metric(parse_mat(R, q_rows))
    L = TorsionSymbol.constant(R, [parse_mat(R, m) for m in L_rows])
    return GeodesicCtx.from_connection(levi_civita_for(q, L, PointwiseMode(R, N=2)))


def test_c06_geodesics(report):
    t0 = time.perf_counter()
    K = 6
    rng = random.Random(SEED + 6)
    q_rows = _random_metric_data(rng, 5 ** 7)
    L_rows = [[[0, 1], [-1, 0]], [[0, -1], [1, 0]]]
    ctx = _geo_setup(K, q_rows, L_rows)
    ctx7 = _geo_setup(K + 1, q_rows, L_rows)
    W, W7 = ctx.base, ctx7.base
    resid_ok = unique_ok = scale_ok = lift_ok = True
    count = 0
    while count < 20:
        data = [[rng.randrange(5 ** 7) for _ in range(2)] for _ in range(2)]
        c0 = Curve([parse_w(W, x) for x in data])
        if not is_nondegenerate(ctx, c0):
            continue
        count += 1
        g = geodesic(ctx, c0)
        res = geodesic_residuals(ctx, g)
        resid_ok &= res["first_order"][0] >= K - 1 and res["second_order"][0] >= res["second_order"][1]
        # same c and delta c mod p
        c1 = Curve([x + W.random(rng) * 25 for x in c0.c])
        g1 = geodesic(ctx, c1)
        unique_ok &= all(a.equals(b) for a, b in zip(g.c + g.v, g1.c + g1.v))
        z = w_teichmueller(W.field.random(rng, nonzero=True), W)
        gz, gs = geodesic(ctx, c0.scaled(z)), g.scaled(z)
        scale_ok &= all(a.equals(b) for a, b in zip(gz.c + gz.v, gs.c + gs.v))
        if count <= 5:
            # one more digit: the K-curve satisfies the second-order form mod p^{K-1}
            g7 = geodesic(ctx7, Curve([parse_w(W7, x) for x in data]))
            lift_ok &= all(a.coeffs == [x % 5 ** K for x in b.coeffs] for a, b in zip(g.c, g7.c))
            v7, p7 = geodesic_residuals(ctx7, g7)["second_order"]
            lift_ok &= p7 == K - 1 and v7 >= K - 1
    flat = _geo_setup(K, [[1, 0], [0, 1]], [[[0, 0], [0, 0]]] * 2)
    straight_ok = True
    for _ in range(5):
        while True:
            c0 = Curve([W.random(rng) for _ in range(2)])
            if is_nondegenerate(flat, c0):
                break
        g = geodesic(flat, c0)
        straight_ok &= all(w_delta(v).is_zero() for v in g.v)
    elapsed = time.perf_counter() - t0
    ok_all = resid_ok and unique_ok and scale_ok and lift_ok and straight_ok
    ok = report(6, "geodesics", ok_all, elapsed, 20,
                f"residuals={resid_ok} K+1-lift={lift_ok} uniqueness={unique_ok} "
                f"scaling={scale_ok} straight_lines={straight_ok}")
    assert ok


# 7 -------------------------------------------------------------------------------


def test_c07_ode_oracle(report):
    """Exhaustive search over Z/9 for delta u = a u + b u^phi + c (mod 3)."""
    t0 = time.perf_counter()
    W = base(3, 1, 2)
    elems = [W.from_int(x) for x in range(9)]
    ok_all = True
    for a, b, c in itertools.product(range(9), repeat=3):
        A, B, C = W.from_int(a), W.from_int(b), W.from_int(c)
        F = lambda u, uphi: [A * u[0] + B * uphi[0] + C]
        G = lambda u, uphi: W.one()
        sols = [u for u in elems if ode_residual(F, G, [u])[0].reduce(1).is_zero()]
        for r in range(3):
            cls = [u for u in sols if u.coeffs[0] % 3 == r]
            solved = ode_solve(F, G, [r], ctx=W)[0]
            ok_all &= len(cls) == 1 and cls[0].equals(solved)
    elapsed = time.perf_counter() - t0
    assert report(7, "ODE oracle over Z/9", ok_all, elapsed, 5, "(729 linear systems)")


# 8 -------------------------------------------------------------------------------


def test_c08_witt_and_delta_polynomials(report):
    t0 = time.perf_counter()
    W = base(5, 2, 6)
    rng = random.Random(SEED + 8)
    ghost_ok = teich_ok = homog_ok = True
    for _ in range(100):
        a = W.random(rng)
        for j, gj in enumerate(witt_ghosts(witt_coords(a, 3))):
            ghost_ok &= gj.equals(w_frobenius(a, j), gj.prec) and gj.prec >= W.K - 3
        z = w_teichmueller(W.field.random(rng), W)
        teich_ok &= all(x.is_zero() for x in witt_coords(z, 3)[1:])
    P = DeltaPoly({(5,): 2, (0, 1): 3, (1, 0, 0): 0}) * DeltaPoly.t(0, 2) + DeltaPoly.t(2)
    P = P.homogeneous_parts(5)[7]
    d = 7
    for _ in range(100):
        a = W.random(rng)
        z = w_teichmueller(W.field.random(rng, nonzero=True), W)
        lhs = eval_delta_poly(P, z * a)
        homog_ok &= lhs.equals(eval_delta_poly(P, a) * z ** d, lhs.prec)
    elapsed = time.perf_counter() - t0
    assert report(8, "Witt coordinates / delta-polynomials", ghost_ok and teich_ok and homog_ok,
                  elapsed, 5, f"ghosts={ghost_ok} teichmueller={teich_ok} homogeneity={homog_ok}")


# 9 -------------------------------------------------------------------------------


def test_c09_jet_group(report):
    t0 = time.perf_counter()
    R = ring(5, 2, 4, e=2, n=2, zeta_exps=(0, 1))
    rng = random.Random(SEED + 9)
    one = jet_identity(R, 2, 2)
    I = Mat.identity(R, 2)
    flags = dict(associativity=True, identity=True, inverse=True, kernel_law=True,
                 lie_inverse=True, g_to_G1=True, log_derivative=True)
    for k in range(100):
        a, b, c = (JetPoint.random(R, 2, 2, rng) for _ in range(3))
        flags["associativity"] &= same(jet_mul(jet_mul(a, b), c), jet_mul(a, jet_mul(b, c)))
        flags["identity"] &= same(jet_mul(a, one), a) and same(jet_mul(one, a), a)
        ai = jet_inv(a)
        l, r = jet_mul(ai, a), jet_mul(a, ai)
        flags["inverse"] &= l.equals(one, l.prec) and r.equals(one, r.prec)
        x, y = Mat.random(R, 2, rng), Mat.random(R, 2, rng)
        prod = jet_mul(JetPoint(I, [x, x]), JetPoint(I, [y, y]))
        flags["kernel_law"] &= all(same(z, lie_add(x, y)) for z in prod.a)
        flags["lie_inverse"] &= lie_add(x, lie_neg(x)).is_zero()
        flags["g_to_G1"] &= same(g_to_G1(lie_add(x, y)), g_to_G1(x) * g_to_G1(y))
        if k % 4 == 0:
            g = Mat.random(R, 2, rng, invertible=True)
            q = Metric.random(R, 2, rng)
            conn = levi_civita_for(q, TorsionSymbol.random_constant(R, 2, rng), PointwiseMode(R, g=g))
            flags["log_derivative"] &= all(
                same(u, v) for u, v in zip(log_derivative(conn), christoffel_second(conn)))
    elapsed = time.perf_counter() - t0
    ok = report(9, "jet group", all(flags.values()), elapsed, 10,
                " ".join(f"{k}={v}" for k, v in flags.items()) + " (log_derivative on 25 connections)")
    assert ok


# 10 ------------------------------------------------------------------------------


def test_c10_overconvergence(report):
    t0 = time.perf_counter()
    W = base(5, 2, 4)
    rng = random.Random(SEED + 10)
    lc_ok = ch_ok = neg_ok = True
    for _ in range(3):
        while True:
            X = Mat.random(W, 2, rng)
            q = X + X.T
            if q.is_invertible():
                break
        v = [rng.choice([-1, 1]) for _ in range(2)]
        Lp = [Mat(W, [[0, s], [-s, 0]]) for s in v]
        lc_ok &= lc_overconvergence_check(q, Lp, [1, 2, 4]).passed
        ch_ok &= chern_overconvergence_check(q, [1, 2, 4]).passed
        neg = lc_overconvergence_check(q, Lp, [1, 2, 4], torsion_scale=lambda R: R.one())
        neg_ok &= not neg.passed
    elapsed = time.perf_counter() - t0
    assert report(10, "overconvergence e in {1, 2, 4}", lc_ok and ch_ok and neg_ok, elapsed, 30,
                  f"levi_civita={lc_ok} chern={ch_ok} negative_control_flagged={neg_ok}")
