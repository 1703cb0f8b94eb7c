"""pi-connections on GL_N: Levi-Civita and Chern solvers and their checks.

A connection is encoded by matrices Lambda_i = 1 + pi Gamma_i^t.  Everything
runs over a *mode*: pointwise (coefficients in R_pi, x specialised to a
matrix g) or jet (coefficients in the truncated series ring T, x = 1 + u).
The Levi-Civita solver is written against the generic ring protocol so the
same code serves both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConfigError, HypothesisError
from .matrix_ring import Mat, mat_inv, mat_sqrt_near_one
from .ram_ring import RamCtx, RpiElem, rpi_delta, rpi_phi
from .series_ring import SeriesCtx, SeriesElem, ser_eval_at_one

__all__ = [
    "PointwiseMode",
    "JetMode",
    "Metric",
    "TorsionSymbol",
    "ConnectionData",
    "CheckReport",
    "metric_matrices",
    "christoffel_second",
    "lower_indices",
    "check_metric",
    "check_symmetric",
    "check_bq_symmetric",
    "levi_civita",
    "levi_civita_for",
    "chern",
    "eajuns_check",
    "lcc_mod_m_check",
    "lcc_depth_check",
    "chern_corollary_check",
]


# -- modes ------------------------------------------------------------------


class PointwiseMode:
    """Coefficients in R_pi with x specialised to g (default: the identity)."""

    name = "pointwise"

    def __init__(self, ring: RamCtx, g: Mat | None = None, N: int | None = None):
        if g is None:
            if N is None:
                raise ConfigError("pointwise mode needs g or N")
            g = Mat.identity(ring, N)
        if not g.is_invertible():
            raise ConfigError("evaluation point g is not invertible mod pi")
        self.ring = ring
        self.ctx = ring
        self.g = g
        self.N = g.n

    def embed(self, a: RpiElem) -> RpiElem:
        return a

    def x_matrix(self) -> Mat:
        return self.g

    def at_one(self, a) -> RpiElem:
        """Value used for 'F(1)' statements; only meaningful when g = 1."""
        return a


class JetMode:
    """Coefficients in T = R_pi[[u]]/(deg > D), x = 1 + u."""

    name = "jet"

    def __init__(self, series: SeriesCtx):
        self.series = series
        self.ring = series.ring
        self.ctx = series
        self.N = series.N

    @classmethod
    def build(cls, ring: RamCtx, N: int, D: int = 2) -> "JetMode":
        return cls(SeriesCtx(ring, N, D))

    def embed(self, a: RpiElem) -> SeriesElem:
        return self.series.constant(a)

    def x_matrix(self) -> Mat:
        S, N = self.series, self.N
        return Mat(S, [[S.x_entry(a, b) for b in range(N)] for a in range(N)])

    def at_one(self, a: SeriesElem) -> RpiElem:
        return ser_eval_at_one(a)


def _embed_mat(mode, X: Mat) -> Mat:
    return Mat(mode.ctx, [[mode.embed(a) for a in row] for row in X.rows])


def _at_one_mat(mode, X: Mat) -> Mat:
    return Mat(mode.ring, [[mode.at_one(a) for a in row] for row in X.rows])


def _half(ctx) -> int:
    pK = ctx.p ** ctx.eng.K
    return (pK + 1) // 2


# -- metric and torsion -------------------------------------------------------


class Metric:
    """A symmetric matrix q in GL_N(R_pi)."""

    def __init__(self, q: Mat):
        N = q.n
        if q.shape != (N, N):
            raise ConfigError("metric must be square")
        for a in range(N):
            for b in range(a + 1, N):
                if not q[a, b].equals(q[b, a]):
                    raise ConfigError("metric must be symmetric")
        if not q.is_invertible():
            raise ConfigError("metric is not invertible mod pi")
        self.q = q
        self.ring = q.ctx
        self.N = N

    @classmethod
    def random(cls, ring: RamCtx, N: int, rng, prec: int | None = None) -> "Metric":
        while True:
            rows = [[None] * N for _ in range(N)]
            for a in range(N):
                for b in range(a, N):
                    rows[a][b] = rows[b][a] = ring.random(rng, prec)
            q = Mat(ring, rows)
            if q.is_invertible():
                return cls(q)

    @classmethod
    def teichmueller(cls, ring: RamCtx, residues) -> "Metric":
        """Metric whose entries are Teichmueller lifts of the given residues."""
        N = len(residues)
        rows = [[ring.teichmueller(ring.field(residues[a][b])) for b in range(N)] for a in range(N)]
        return cls(Mat(ring, rows))

    def phi(self, i: int) -> Mat:
        return self.q.map(lambda a: rpi_phi(a, i))

    def delta(self, i: int) -> Mat:
        return self.q.map(lambda a: rpi_delta(a, i))

    def frob_power(self) -> Mat:
        """q^{(p^s)}, entrywise."""
        N = self.ring.p ** self.ring.s
        return self.q.map(lambda a: a ** N)


class TorsionSymbol:
    """Antisymmetric torsion symbol L = (L^1, ..., L^n).

    ``kind='constant'``: ``data[k]`` is an n x n Mat over R_pi holding L^{k+1}.
    ``kind='polynomial'``: ``data`` maps (k, i, j) with i < j (0-based) to a
    list of (coef, monomial) terms, a monomial being a tuple of
    ((a, b, c), exponent) standing for (y_a)_{bc}^exponent.  Entries with
    i > j are the negatives, diagonal entries vanish.
    """

    def __init__(self, ring: RamCtx, n: int, kind: str, data):
        if kind not in ("constant", "polynomial"):
            raise ConfigError(f"unknown torsion kind {kind!r}")
        self.ring, self.n, self.kind, self.data = ring, n, kind, data
        if kind == "constant":
            if len(data) != n or any(L.shape != (n, n) for L in data):
                raise ConfigError("constant torsion needs n matrices of size n x n")
            for L in data:
                for i in range(n):
                    for j in range(n):
                        if not (L[i, j] + L[j, i]).is_zero():
                            raise ConfigError("torsion symbol must be antisymmetric")
        else:
            for (k, i, j) in data:
                if not (0 <= k < n and 0 <= i < j < n):
                    raise ConfigError("polynomial torsion keys must satisfy i < j")

    @classmethod
    def zero(cls, ring: RamCtx, n: int) -> "TorsionSymbol":
        return cls(ring, n, "constant", [Mat.zeros(ring, n) for _ in range(n)])

    @classmethod
    def constant(cls, ring: RamCtx, mats) -> "TorsionSymbol":
        mats = [m if isinstance(m, Mat) else Mat(ring, m) for m in mats]
        return cls(ring, len(mats), "constant", mats)

    @classmethod
    def random_constant(cls, ring: RamCtx, n: int, rng, values=(-1, 0, 1)) -> "TorsionSymbol":
        mats = []
        for _ in range(n):
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    v = rng.choice(values)
                    rows[i][j], rows[j][i] = v, -v
            mats.append(Mat(ring, rows))
        return cls(ring, n, "constant", mats)

    def scaled(self, c: RpiElem) -> "TorsionSymbol":
        """The symbol c * L."""
        if self.kind == "constant":
            return TorsionSymbol(self.ring, self.n, "constant", [L * c for L in self.data])
        data = {key: [(c * coef, mono) for coef, mono in terms] for key, terms in self.data.items()}
        return TorsionSymbol(self.ring, self.n, "polynomial", data)

    def _coef(self, coef):
        return self.ring.from_int(coef) if isinstance(coef, int) else coef

    def evaluate(self, lambdas: Sequence[Mat], mode) -> list:
        """U[i][j][k] = L^k_{ij}(Lambda) in the mode's ring."""
        n = self.n
        ctx = mode.ctx
        U = [[[ctx.zero() for _ in range(n)] for _ in range(n)] for _ in range(n)]
        if self.kind == "constant":
            for k, L in enumerate(self.data):
                for i in range(n):
                    for j in range(n):
                        if not L[i, j].is_zero():
                            U[i][j][k] = mode.embed(L[i, j])
            return U
        for (k, i, j), terms in self.data.items():
            total = ctx.zero()
            for coef, mono in terms:
                term = mode.embed(self._coef(coef))
                for (a, b, c), ex in mono:
                    term = term * lambdas[a][b, c] ** ex
                total = total + term
            U[i][j][k] = total
            U[j][i][k] = -total
        return U

    def at_one(self) -> list:
        """U[i][j][k] = L^k_{ij}(1) over R_pi."""
        ring = self.ring
        ones = [Mat.identity(ring, self.n) for _ in range(self.n)]
        return self.evaluate(ones, _RingMode(ring))


class _RingMode:
    def __init__(self, ring):
        self.ring = self.ctx = ring

    def embed(self, a):
        return a

    def at_one(self, a):
        return a


# -- connection data and reports ----------------------------------------------


@dataclass
class CheckReport:
    """Outcome of a congruence check.

    ``valuation`` is the smallest pi-adic valuation among the residual
    entries (equal to ``precision`` when they all vanish); the check passes
    iff valuation >= precision.
    """

    name: str
    passed: bool
    valuation: int
    precision: int
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual_valuation": self.valuation,
            "precision": self.precision,
            **self.details,
        }


def _report(name: str, residuals, prec: int, **details) -> CheckReport:
    val = prec
    for r in residuals:
        if r.prec < prec:
            raise HypothesisError(f"{name}: residual known only mod pi^{r.prec} < pi^{prec}")
        val = min(val, r.reduce(prec).valuation())
    return CheckReport(name, val >= prec, val, prec, details)


@dataclass
class ConnectionData:
    lambdas: list
    mode: object
    A: list
    B: Mat
    depth: int
    kind: str = "custom"
    metric: Metric | None = None
    torsion: TorsionSymbol | None = None

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def gammas(self) -> list:
        return christoffel_second(self)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "mode": self.mode.name,
            "depth": self.depth,
            "lambdas": [L.to_json() for L in self.lambdas],
        }


def metric_matrices(metric: Metric, mode, n: int | None = None):
    """A_i = x^{(p^s)t} phi_i(q) x^{(p^s)} and B = (x^t q x)^{(p^s)}."""
    ring = metric.ring
    n = ring.n if n is None else n
    if mode.N != metric.N:
        raise ConfigError("metric size does not match the mode")
    ps = ring.p ** ring.s
    x = mode.x_matrix()
    xp = x.map(lambda a: a ** ps)
    xpt = xp.T
    A = [xpt * _embed_mat(mode, metric.phi(i)) * xp for i in range(1, n + 1)]
    B = (x.T * _embed_mat(mode, metric.q) * x).map(lambda a: a ** ps)
    return A, B


def christoffel_second(conn: ConnectionData) -> list:
    """Gamma_i with Gamma_i^t = (Lambda_i - 1)/pi; (Gamma_i)_{jk} = Gamma^k_{ij}."""
    out = []
    for L in conn.lambdas:
        E = L - Mat.identity(L.ctx, L.n)
        out.append(E.div_pi(1).T)
    return out


def _upper_from_gammas(gammas) -> list:
    """U[i][j][k] = Gamma^k_{ij} = (Gamma_i)_{jk}."""
    n = len(gammas)
    return [[[gammas[i][j, k] for k in range(n)] for j in range(n)] for i in range(n)]


def lower_indices(U, qps: Mat) -> list:
    """Lowered symbol X_{ijk} = sum_m X^m_{ij} (q_{mk})^{p^s}.

    ``U[i][j][m]`` holds X^m_{ij}; ``qps`` is q^{(p^s)} in the same ring.
    """
    n = len(U)
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = U[i][j][0] * qps[0, k]
                for m in range(1, n):
                    acc = acc + U[i][j][m] * qps[m, k]
                out[i][j][k] = acc
    return out


def check_metric(conn: ConnectionData, prec: int | None = None) -> CheckReport:
    prec = conn.depth if prec is None else prec
    res = []
    for L, A in zip(conn.lambdas, conn.A):
        R = L.T * A * L - conn.B
        res.extend(x for row in R.rows for x in row)
    return _report("metric", res, prec)


def _symmetric_residuals(lambdas, U, n):
    one = Mat.identity(lambdas[0].ctx, n)
    lambdas = [X - one for X in lambdas]
    pi_res = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = lambdas[i][k, j] - lambdas[j][k, i]
                pi_res.append(lhs - U[i][j][k].mul_pi(1))
    return pi_res


def check_symmetric(conn: ConnectionData, L: TorsionSymbol | None = None,
                    prec: int | None = None) -> CheckReport:
    """(Lambda_i - 1)_{kj} - (Lambda_j - 1)_{ki} = pi L^k_{ij}(Lambda)."""
    L = conn.torsion if L is None else L
    n = conn.n
    if conn.mode.N != n:
        raise ConfigError("symmetry needs N = n")
    if L is None:
        L = TorsionSymbol.zero(conn.mode.ring, n)
    prec = conn.depth if prec is None else prec
    U = L.evaluate(conn.lambdas, conn.mode)
    return _report("symmetric", _symmetric_residuals(conn.lambdas, U, n), prec)


def check_bq_symmetric(conn: ConnectionData, prec: int | None = None) -> CheckReport:
    """A_i Lambda_i = Lambda_i^t A_i."""
    prec = conn.depth if prec is None else prec
    res = []
    for L, A in zip(conn.lambdas, conn.A):
        R = A * L - L.T * A
        res.extend(x for row in R.rows for x in row)
    return _report("bq_symmetric", res, prec)


def _check_inputs(A, B, n):
    for X in list(A) + [B]:
        if X.shape != (n, n):
            raise ConfigError("Levi-Civita inputs must be n x n with n = number of directions")
        for a in range(n):
            for b in range(a + 1, n):
                if not X[a, b].equals(X[b, a]):
                    raise HypothesisError("A_i and B must be symmetric")
    for i, Ai in enumerate(A):
        if not (Ai - B).reduce(1).is_zero():
            raise HypothesisError(f"A_{i + 1} is not congruent to B mod pi")


def levi_civita(A: Sequence[Mat], B: Mat, L: TorsionSymbol, depth: int | None = None,
                mode=None, metric: Metric | None = None) -> ConnectionData:
    """The unique tuple Lambda with Lambda = 1 mod pi, Lambda^t A_i Lambda = B and
    (B(Lambda_i - 1))_{kj} - (B(Lambda_j - 1))_{ki} = pi L_{ijk}(Lambda),
    L_{ijk} = sum_l L^l_{ij} B_{kl}, built by successive approximation.

    Stage nu corrects Lambda by pi^nu Z^nu, so the result after stages
    1..depth-1 is exact mod pi^depth.
    """
    n = len(A)
    ctx = B.ctx
    if mode is None:
        mode = PointwiseMode(ctx, N=n) if isinstance(ctx, RamCtx) else JetMode(ctx)
    _check_inputs(A, B, n)
    if L.n != n:
        raise ConfigError("torsion symbol has the wrong number of directions")
    avail = min([B.prec] + [X.prec for X in A])
    depth = avail if depth is None else depth
    if not 1 <= depth <= avail:
        raise ConfigError(f"depth {depth} outside [1, {avail}] allowed by the input precision")
    half = _half(ctx)
    Binv = mat_inv(B)
    one = Mat.identity(ctx, n)
    lam = [Mat.identity(ctx, n) for _ in range(n)]
    for nu in range(1, depth):
        C = [(B - lam[i].T * A[i] * lam[i]).div_pi(nu) for i in range(n)]
        BL = [B * (lam[i] - one) for i in range(n)]
        U = L.evaluate(lam, mode)
        Llow = lower_indices(U, B)
        Lnu = [[[None] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    val = Llow[i][j][k].mul_pi(1) - (BL[i][k, j] - BL[j][k, i])
                    Lnu[i][j][k] = val.div_pi(nu)
        new = []
        for i in range(n):
            Dt = [[None] * n for _ in range(n)]
            for j in range(n):
                for k in range(n):
                    d = (C[i][j, k] + C[j][i, k] - C[k][i, j]) * half
                    f = (Lnu[k][i][j] + Lnu[i][j][k] - Lnu[j][k][i]) * half
                    Dt[k][j] = d + f  # transposed: (D_i + F_i)^t
            Z = Binv * Mat(ctx, Dt)
            new.append(lam[i] + Z.mul_pi(nu))
        lam = new
    lam = [X.reduce(depth) for X in lam]
    return ConnectionData(lam, mode, list(A), B, depth, "levi-civita", metric, L)


def chern(metric: Metric, mode, n: int | None = None, depth: int | None = None) -> ConnectionData:
    """Lambda_i = (A_i^{-1} B)^{1/2}, the root congruent to 1 mod pi."""
    A, B = metric_matrices(metric, mode, n)
    lam = [mat_sqrt_near_one(mat_inv(Ai) * B) for Ai in A]
    prec = min(X.prec for X in lam)
    depth = prec if depth is None else min(depth, prec)
    lam = [X.reduce(depth) for X in lam]
    return ConnectionData(lam, mode, A, B, depth, "chern", metric, None)


def levi_civita_for(metric: Metric, L: TorsionSymbol, mode, depth: int | None = None) -> ConnectionData:
    """Convenience: metric matrices followed by the Levi-Civita solver."""
    A, B = metric_matrices(metric, mode, L.n)
    return levi_civita(A, B, L, depth, mode, metric)


# -- congruence reports from the theory ---------------------------------------


def eajuns_check(metric: Metric, mode) -> CheckReport:
    """C_i := (B - A_i)/pi is congruent to -delta_i q modulo P."""
    ring = metric.ring
    A, B = metric_matrices(metric, mode)
    res = []
    for i, Ai in enumerate(A, start=1):
        C = (B - Ai).div_pi(1)
        dq = metric.delta(i)
        for a in range(metric.N):
            for b in range(metric.N):
                res.append(mode.at_one(C[a, b]) + dq[a, b])
    prec = min(r.prec for r in res)
    return _report("eajuns", res, prec)


def _first_kind_at_one(conn: ConnectionData, qps: Mat) -> list:
    gam = [_at_one_mat(conn.mode, G) for G in christoffel_second(conn)]
    return lower_indices(_upper_from_gammas(gam), qps)


def lcc_mod_m_check(conn: ConnectionData, metric: Metric, L: TorsionSymbol) -> CheckReport:
    """Gamma_{ijk}(1) = -1/2(d_i q_jk + d_j q_ik - d_k q_ij)
    + 1/2(L_kij(1) + L_ijk(1) - L_jki(1)) mod pi.

    The torsion is evaluated at y = 1 first and then lowered with q^{(p^s)}.
    """
    ring = metric.ring
    n = conn.n
    half = _half(ring)
    qps = metric.frob_power()
    G = _first_kind_at_one(conn, qps)
    Llow = lower_indices(L.at_one(), qps)
    dq = [metric.delta(i) for i in range(1, n + 1)]
    res = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                rhs = -(dq[i][j, k] + dq[j][i, k] - dq[k][i, j]) * half
                rhs = rhs + (Llow[k][i][j] + Llow[i][j][k] - Llow[j][k][i]) * half
                res.append(G[i][j][k] - rhs)
    return _report("lcc_mod_M", res, 1)


def lcc_depth_check(conn: ConnectionData, metric: Metric, m: int) -> CheckReport:
    """Gamma_{ijk} = 0 mod (pi^m, P)."""
    G = _first_kind_at_one(conn, metric.frob_power())
    res = [x for plane in G for row in plane for x in row]
    return _report("lcc_depth", res, m, m=m)


def chern_corollary_check(ch: ConnectionData, metric: Metric, lc: ConnectionData | None = None,
                          L: TorsionSymbol | None = None) -> CheckReport:
    """Congruences mod M relating Chern (and LC) symbols to delta_i q:

    Gamma_i^Ch = -1/2 delta_i q (q^{(p^s)})^{-1}, Gamma_{ijk}^Ch = -1/2 delta_i q_jk,
    and, when ``lc`` is given, Gamma^LC_{ijk} = G^Ch_ijk + G^Ch_jik - G^Ch_kij
    + 1/2(L_kij(1) + L_ijk(1) - L_jki(1)).

    The last relation carries no factor 1/2 on the Chern terms: that is what
    the first-kind Chern congruence combined with the Levi-Civita mod-M
    formula forces.
    """
    ring = metric.ring
    n = ch.n
    N = metric.N
    half = _half(ring)
    qps = metric.frob_power()
    qps_inv = mat_inv(qps)
    res = []
    gam = [_at_one_mat(ch.mode, G) for G in christoffel_second(ch)]
    for i in range(n):
        target = metric.delta(i + 1) * qps_inv * (-half)
        R = gam[i] - target
        res.extend(x for row in R.rows for x in row)
    low = None
    if N == n:
        low = lower_indices(_upper_from_gammas(gam), qps)
        for i in range(n):
            dq = metric.delta(i + 1)
            for j in range(n):
                for k in range(n):
                    res.append(low[i][j][k] + dq[j, k] * half)
    if lc is not None:
        if low is None:
            raise ConfigError("LC comparison needs N = n")
        L = TorsionSymbol.zero(ring, n) if L is None else L
        G = _first_kind_at_one(lc, qps)
        Llow = lower_indices(L.at_one(), qps)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    rhs = low[i][j][k] + low[j][i][k] - low[k][i][j]
                    rhs = rhs + (Llow[k][i][j] + Llow[i][j][k] - Llow[j][k][i]) * half
                    res.append(G[i][j][k] - rhs)
    return _report("chern_mod_M", res, 1)
