"""Truncated jets T = R_pi[[u]] / (total degree > D) in the N^2 variables u = x - 1.

An element is a dense vector of R_pi coefficients, one per monomial of degree
at most D, sharing a single pi-adic precision.  The ideal P = (u) is the
kernel of evaluation at x = 1 and M = (pi, u) is the maximal ideal.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from ._local import LocalElem
from .errors import ConfigError, PrecisionError
from .ram_ring import RamCtx, RpiElem

__all__ = [
    "SeriesCtx",
    "SeriesElem",
    "ser_add",
    "ser_neg",
    "ser_mul",
    "ser_invert",
    "ser_eval_at_one",
    "ser_reduce_mod",
    "ser_div_pi",
]


def _monomials(nvars: int, D: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(D + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            exps = [0] * nvars
            for v in combo:
                exps[v] += 1
            out.append(tuple(exps))
    return out


class SeriesEngine:
    """Vector arithmetic for T, laid out as one R_pi block per monomial."""

    def __init__(self, base_eng, monomials):
        self.base = base_eng
        self.p, self.m, self.e, self.K = base_eng.p, base_eng.m, base_eng.e, base_eng.K
        self.cap = base_eng.cap
        self.bsize = base_eng.size
        self.nmon = len(monomials)
        self.size = self.bsize * self.nmon
        index = {mono: k for k, mono in enumerate(monomials)}
        D = max(sum(mono) for mono in monomials)
        table = []
        for i, a in enumerate(monomials):
            for j, b in enumerate(monomials):
                if sum(a) + sum(b) <= D:
                    table.append((i, j, index[tuple(x + y for x, y in zip(a, b))]))
        self.table = table
        self._mods = {}

    def _blocks(self, c):
        bs = self.bsize
        return [c[k * bs:(k + 1) * bs] for k in range(self.nmon)]

    def mods(self, prec):
        mods = self._mods.get(prec)
        if mods is None:
            mods = self.base.mods(prec) * self.nmon
            self._mods[prec] = mods
        return mods

    def normalize(self, c, prec):
        return [x % md for x, md in zip(c, self.mods(prec))]

    def valuation(self, c, prec):
        best = prec
        for blk in self._blocks(c):
            if any(blk):
                best = min(best, self.base.valuation(blk, best))
        return best

    def mul_raw(self, a, b):
        A = self._blocks(a)
        B = self._blocks(b)
        nzA = [any(x) for x in A]
        nzB = [any(x) for x in B]
        bs = self.bsize
        acc = [[0] * bs for _ in range(self.nmon)]
        mul = self.base.mul_raw
        for i, j, k in self.table:
            if nzA[i] and nzB[j]:
                prod = mul(A[i], B[j])
                row = acc[k]
                for t in range(bs):
                    row[t] += prod[t]
        pK = self.base.pK
        return [x % pK for row in acc for x in row]

    def scale_raw(self, a, k):
        pK = self.base.pK
        return [x * k % pK for x in a]

    def mul_pi_raw(self, a, k):
        out = []
        for blk in self._blocks(a):
            out.extend(self.base.mul_pi_raw(blk, k))
        return out

    def div_pi_raw(self, a, prec, k):
        if k > prec:
            raise PrecisionError(f"cannot divide by pi^{k} at precision {prec}")
        out = []
        for blk in self._blocks(a):
            out.extend(self.base.div_pi_raw(blk, prec, k))
        return out


class SeriesCtx:
    """Context for T over ``ring`` with N x N matrix variables and degree cap D."""

    def __init__(self, ring: RamCtx, N: int, D: int = 2):
        if D < 1:
            raise ConfigError("degree cap D must be >= 1")
        if N < 1:
            raise ConfigError("matrix size N must be >= 1")
        self.ring, self.N, self.D = ring, N, D
        self.field = ring.field
        self.p = ring.p
        self.nvars = N * N
        self.monomials = _monomials(self.nvars, D)
        self.eng = SeriesEngine(ring.eng, self.monomials)
        self.cap = ring.cap
        self.M = ring.M
        # (pi, u)^k vanishes once k >= prec + D
        self.nilpotent_degree = D

    def __eq__(self, other):
        return isinstance(other, SeriesCtx) and (self.ring, self.N, self.D) == (
            other.ring, other.N, other.D)

    def __hash__(self):
        return hash((self.ring, self.N, self.D))

    def __repr__(self):
        return f"SeriesCtx(N={self.N}, D={self.D}, ring={self.ring!r})"

    def constant(self, a: RpiElem) -> "SeriesElem":
        c = list(a.c) + [0] * (self.eng.size - self.eng.bsize)
        return SeriesElem(self, c, a.prec)

    def from_int(self, n: int) -> "SeriesElem":
        return self.constant(self.ring.from_int(n))

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def lift_residue(self, a):
        return self.constant(self.ring.lift_residue(a))

    def u(self, a: int, b: int) -> "SeriesElem":
        """The variable u_{ab} = x_{ab} - delta_{ab} (0-based indices)."""
        exps = [0] * self.nvars
        exps[a * self.N + b] = 1
        k = self.monomials.index(tuple(exps))
        c = [0] * self.eng.size
        c[k * self.eng.bsize] = 1
        return SeriesElem(self, c, self.cap)

    def x_entry(self, a: int, b: int) -> "SeriesElem":
        return self.u(a, b) + (1 if a == b else 0)

    def from_terms(self, terms: dict, prec: int | None = None) -> "SeriesElem":
        """Build sum coeff * u^mono from {exponent tuple: RpiElem or int}."""
        bs = self.eng.bsize
        c = [0] * self.eng.size
        precs = [self.cap]
        for mono, coef in terms.items():
            k = self.monomials.index(tuple(mono))
            if isinstance(coef, int):
                coef = self.ring.from_int(coef)
            c[k * bs:(k + 1) * bs] = coef.c
            precs.append(coef.prec)
        return SeriesElem(self, c, min(precs) if prec is None else prec)

    def random(self, rng, prec: int | None = None, unit: bool = False):
        prec = self.M if prec is None else prec
        pK = self.p ** self.ring.K
        while True:
            a = SeriesElem(self, [rng.randrange(pK) for _ in range(self.eng.size)], prec)
            if not unit or a.is_unit():
                return a


class SeriesElem(LocalElem):
    """Element of T; ``prec`` is a common pi-adic precision for all coefficients."""

    __slots__ = ()

    def coefficient(self, mono) -> RpiElem:
        ctx = self.ctx
        k = ctx.monomials.index(tuple(mono))
        bs = ctx.eng.bsize
        return RpiElem(ctx.ring, self.c[k * bs:(k + 1) * bs], self.prec)

    def terms(self) -> dict:
        """Nonzero coefficients keyed by exponent tuple."""
        ctx = self.ctx
        out = {}
        for mono in ctx.monomials:
            coef = self.coefficient(mono)
            if not coef.is_zero():
                out[mono] = coef
        return out

    def eval_at_one(self) -> RpiElem:
        return ser_eval_at_one(self)

    def to_json(self) -> list:
        return [{"mono": list(mono), "coef": coef.to_json()} for mono, coef in self.terms().items()]

    def __repr__(self):
        parts = []
        for mono, coef in self.terms().items():
            name = "*".join(
                f"u{v // self.ctx.N + 1}{v % self.ctx.N + 1}" + (f"^{k}" if k > 1 else "")
                for v, k in enumerate(mono) if k
            )
            parts.append(f"({coef.c})" + (f"*{name}" if name else ""))
        return f"Series({' + '.join(parts) or '0'} + O(pi^{self.prec}))"


def ser_add(a: SeriesElem, b: SeriesElem) -> SeriesElem:
    return a + b


def ser_neg(a: SeriesElem) -> SeriesElem:
    return -a


def ser_mul(a: SeriesElem, b: SeriesElem) -> SeriesElem:
    return a * b


def ser_invert(a: SeriesElem) -> SeriesElem:
    return a.invert()


def ser_eval_at_one(a: SeriesElem) -> RpiElem:
    """Constant term, i.e. the image of a in T/P = R_pi."""
    return a.coefficient(a.ctx.monomials[0])


def ser_reduce_mod(a: SeriesElem, pi_power: int, include_P: bool = False) -> SeriesElem:
    """Normal form modulo (pi^pi_power) or modulo (pi^pi_power, P)."""
    if pi_power > a.prec:
        raise PrecisionError(f"element known only mod pi^{a.prec}")
    if include_P:
        return a.ctx.constant(ser_eval_at_one(a).reduce(pi_power))
    return a.reduce(pi_power)


def ser_div_pi(a: SeriesElem, j: int) -> SeriesElem:
    return a.div_pi(j)
