"""R_pi = W[pi]/(pi^e - p) with n higher pi-Frobenius lifts.

The i-th lift acts as phi^s on W-coefficients and sends pi to zeta_i pi,
where zeta_i = T(tau)^{j_i (p^m - 1)/e} for the fixed generator tau of the
residue field.  The matching pi-derivation is
delta_i(a) = (phi_i(a) - a^{p^s}) / pi.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._local import Engine, LocalElem
from .base_field import FqElem, fq_root_of_unity
from .errors import ConfigError, PrecisionError
from .witt_base import BaseCtx, WElem, cp_carry, w_teichmueller

__all__ = [
    "RamCtx",
    "RpiElem",
    "Word",
    "rpi_phi",
    "rpi_delta",
    "rpi_phi_word",
    "rpi_delta_word",
    "rpi_theta_coords",
    "rpi_val",
    "rpi_div_pi",
    "rpi_invert",
    "rpi_residue",
    "derivation_law_residuals",
    "commutator_residuals",
    "teichmueller_digits",
    "digit_residuals",
]


class RamCtx:
    """Context for R_pi mod pi^cap, with cap = e*K.

    ``M`` is the working precision handed to random or user-built elements;
    constants (integers, Teichmueller lifts, pi itself) are exact and carry
    the full cap.
    """

    def __init__(self, base: BaseCtx, e: int = 1, s: int = 1, n: int = 1,
                 zeta_exps=None, M: int | None = None):
        if e < 1 or s < 1 or n < 1:
            raise ConfigError("e, s, n must all be >= 1")
        field = base.field
        if (field.q - 1) % e:
            raise ConfigError(
                f"e={e} does not divide p^m - 1 = {field.q - 1}; the extension "
                "would not be tame, increase the residue degree m"
            )
        if zeta_exps is None:
            zeta_exps = list(range(n))
        zeta_exps = [int(j) % e for j in zeta_exps]
        if len(zeta_exps) != n:
            raise ConfigError(f"need {n} zeta exponents, got {len(zeta_exps)}")
        self.base, self.field = base, field
        self.p, self.m, self.K = base.p, base.m, base.K
        self.e, self.s, self.n = e, s, n
        self.zeta_exps = tuple(zeta_exps)
        self.eng = Engine(self.p, self.m, e, self.K, base.modulus_lift)
        self.cap = self.eng.cap
        self.M = e * (self.K - 1) if M is None else int(M)
        if not 1 <= self.M <= self.cap:
            raise ConfigError(f"pi-precision M={self.M} outside [1, {self.cap}]")
        self.zetas = [w_teichmueller(fq_root_of_unity(field, e, j), base) for j in zeta_exps]
        for z in self.zetas:
            if not (z ** e).equals(base.one()):
                raise ConfigError("zeta is not an e-th root of unity")
        # zeta_i^j as raw W vectors, for the block-wise action of phi_i
        self._zeta_pows = []
        for z in self.zetas:
            pw, cur = [], base.one()
            for _ in range(e):
                pw.append(list(cur.c))
                cur = cur * z
            self._zeta_pows.append(pw)

    def __eq__(self, other):
        return isinstance(other, RamCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.base, self.e, self.s, self.n, self.zeta_exps, self.M)

    def __repr__(self):
        return (f"RamCtx(p={self.p}, m={self.m}, K={self.K}, e={self.e}, s={self.s}, "
                f"n={self.n}, zeta_exps={list(self.zeta_exps)}, M={self.M})")

    # -- constructors ----------------------------------------------------

    def from_int(self, n: int) -> "RpiElem":
        c = [0] * self.eng.size
        c[0] = n
        return RpiElem(self, c, self.cap)

    def zero(self) -> "RpiElem":
        return self.from_int(0)

    def one(self) -> "RpiElem":
        return self.from_int(1)

    def pi(self) -> "RpiElem":
        return self.from_int(1).mul_pi(1) if self.e > 1 else self.from_int(self.p)

    def embed(self, w: WElem) -> "RpiElem":
        """W -> R_pi; a W element known mod p^k is known mod pi^{e k}."""
        c = list(w.c) + [0] * (self.eng.size - self.m)
        return RpiElem(self, c, min(self.e * w.prec, self.cap))

    def from_theta(self, coords, prec: int | None = None) -> "RpiElem":
        """Element sum_j coords[j] pi^j from W elements or ints."""
        c = []
        precs = []
        for j in range(self.e):
            v = coords[j] if j < len(coords) else 0
            if isinstance(v, WElem):
                c.extend(v.c)
                precs.append(self.e * v.prec + j)
            else:
                c.extend([int(v)] + [0] * (self.m - 1))
        if prec is None:
            prec = min(precs + [self.cap])
        return RpiElem(self, c, min(prec, self.cap))

    def teichmueller(self, alpha: FqElem) -> "RpiElem":
        return self.embed(w_teichmueller(alpha, self.base))

    def lift_residue(self, a: FqElem) -> "RpiElem":
        c = list(a.coeffs) + [0] * (self.eng.size - self.m)
        return RpiElem(self, c, self.cap)

    def random(self, rng, prec: int | None = None, unit: bool = False) -> "RpiElem":
        prec = self.M if prec is None else prec
        pk = self.p ** self.K
        while True:
            a = RpiElem(self, [rng.randrange(pk) for _ in range(self.eng.size)], prec)
            if not unit or a.is_unit():
                return a

    def word(self, *letters) -> "Word":
        w = Word(tuple(letters))
        for i in w.letters:
            if not 1 <= i <= self.n:
                raise ConfigError(f"direction {i} outside 1..{self.n}")
        return w

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "e": self.e,
            "s": self.s,
            "n": self.n,
            "zeta_exps": list(self.zeta_exps),
            "prec_pi": self.M,
        }


class RpiElem(LocalElem):
    """Element of R_pi known mod pi^prec."""

    __slots__ = ()

    def theta_coords(self) -> list[WElem]:
        return rpi_theta_coords(self)

    def phi(self, i: int) -> "RpiElem":
        return rpi_phi(self, i)

    def delta(self, i: int) -> "RpiElem":
        return rpi_delta(self, i)

    def to_json(self) -> dict:
        return {"coords": [w.to_json() for w in rpi_theta_coords(self)], "prec": self.prec}

    @classmethod
    def from_json(cls, ctx: RamCtx, data: dict) -> "RpiElem":
        coords = [WElem.from_json(ctx.base, d) for d in data["coords"]]
        return ctx.from_theta(coords, int(data["prec"]))

    def __repr__(self):
        parts = []
        for j, w in enumerate(rpi_theta_coords(self)):
            v = w.c[0] if self.ctx.m == 1 else w.c
            parts.append(f"{v}" if j == 0 else f"{v}*pi^{j}")
        return f"Rpi({' + '.join(parts)} + O(pi^{self.prec}))"


@dataclass(frozen=True)
class Word:
    """A word i_1 ... i_l over the directions 1..n (empty word allowed)."""

    letters: tuple[int, ...] = ()

    def __len__(self):
        return len(self.letters)

    @property
    def length(self) -> int:
        return len(self.letters)


def rpi_phi(a: RpiElem, i: int) -> RpiElem:
    """phi_i^{(s)}: phi^s on coefficients, pi -> zeta_i pi."""
    ctx = a.ctx
    base, m, e = ctx.base, ctx.m, ctx.e
    zp = ctx._zeta_pows[i - 1]
    weng = base.eng
    out = []
    for j in range(e):
        blk = base.apply_phi_raw(a.c[j * m:(j + 1) * m], ctx.s)
        if j:
            blk = weng.mul_raw(blk, zp[j])
        out.extend(blk)
    return RpiElem(ctx, out, a.prec)


def rpi_delta(a: RpiElem, i: int) -> RpiElem:
    """(phi_i(a) - a^{p^s}) / pi with precision a.prec - 1."""
    return rpi_delta_word(a, Word((i,)))


def rpi_phi_word(a: RpiElem, mu: Word) -> RpiElem:
    """phi_{i_1} o ... o phi_{i_l}(a); the rightmost letter acts first."""
    for i in reversed(mu.letters):
        a = rpi_phi(a, i)
    return a


def rpi_delta_word(a: RpiElem, mu: Word) -> RpiElem:
    """(phi_mu(a) - a^{p^{|mu| s}}) / pi, the derivation attached to phi_mu."""
    if a.prec < 2:
        raise PrecisionError("pi-derivation needs precision >= 2")
    ctx = a.ctx
    diff = rpi_phi_word(a, mu) - a ** (ctx.p ** (len(mu) * ctx.s))
    return diff.reduce(a.prec).div_pi(1)


def rpi_theta_coords(a: RpiElem) -> list[WElem]:
    """Coordinates in the basis 1, pi, ..., pi^{e-1}, each with its own precision."""
    ctx = a.ctx
    m, e = ctx.m, ctx.e
    return [
        WElem(ctx.base, a.c[j * m:(j + 1) * m], max(0, -((j - a.prec) // e)))
        for j in range(e)
    ]


def rpi_val(a: RpiElem) -> int:
    return a.valuation()


def rpi_div_pi(a: RpiElem, j: int) -> RpiElem:
    return a.div_pi(j)


def rpi_invert(a: RpiElem) -> RpiElem:
    return a.invert()


def rpi_residue(a: RpiElem) -> FqElem:
    return a.residue()


# -- identities satisfied by the pi-derivations ----------------------------------


def derivation_law_residuals(a: RpiElem, b: RpiElem, i: int) -> tuple[RpiElem, RpiElem]:
    """Residuals of the sum and product rules for delta_i.

    sum:     delta(a + b) - delta a - delta b - (p/pi) C_p(a, b)
    product: delta(ab) - a^{p^s} delta b - b^{p^s} delta a - pi delta a delta b
    """
    ctx = a.ctx
    N = ctx.p ** ctx.s
    da, db = rpi_delta(a, i), rpi_delta(b, i)
    carry = cp_carry(a, b, ctx.s).mul_pi(ctx.e - 1)
    r_sum = rpi_delta(a + b, i) - da - db - carry
    r_prod = rpi_delta(a * b, i) - (a ** N) * db - (b ** N) * da - (da * db).mul_pi(1)
    return r_sum, r_prod


def commutator_residuals(a: RpiElem, i: int, j: int) -> list[RpiElem]:
    """Four quantities that vanish mod pi for any a and directions i, j:

    phi_i phi_j a - phi_j phi_i a;
    delta_ij a - delta_i pi (delta_j a)^{p^s};
    (phi_i phi_j a - phi_j phi_i a)/pi - (delta_i pi (delta_j a)^{p^s} - delta_j pi (delta_i a)^{p^s});
    (phi_i phi_j a - phi_j phi_i a)/pi - (delta_ij a - delta_ji a).
    """
    ctx = a.ctx
    N = ctx.p ** ctx.s
    pi = ctx.pi()
    dpi_i, dpi_j = rpi_delta(pi, i), rpi_delta(pi, j)
    da_i, da_j = rpi_delta(a, i), rpi_delta(a, j)
    d_ij = rpi_delta_word(a, Word((i, j)))
    d_ji = rpi_delta_word(a, Word((j, i)))
    comm = rpi_phi_word(a, Word((i, j))) - rpi_phi_word(a, Word((j, i)))
    comm_pi = comm.reduce(a.prec).div_pi(1)
    return [
        comm,
        d_ij - dpi_i * da_j ** N,
        comm_pi - (dpi_i * da_j ** N - dpi_j * da_i ** N),
        comm_pi - (d_ij - d_ji),
    ]


def teichmueller_digits(a: RpiElem) -> tuple[RpiElem, RpiElem]:
    """The Teichmueller (or zero) zeta_0, zeta with a = zeta_0 + zeta pi mod pi^2."""
    ctx = a.ctx
    z0 = ctx.teichmueller(a.residue())
    z1 = ctx.teichmueller((a - z0).reduce(2).div_pi(1).residue())
    return z0, z1


def digit_residuals(a: RpiElem, i: int, j: int) -> list[RpiElem]:
    """delta_i a - delta_i pi zeta^{p^s} and
    delta_ij a - delta_i pi (delta_j pi)^{p^s} zeta^{p^{2s}}, both 0 mod pi."""
    ctx = a.ctx
    N = ctx.p ** ctx.s
    pi = ctx.pi()
    _, z = teichmueller_digits(a)
    dpi_i, dpi_j = rpi_delta(pi, i), rpi_delta(pi, j)
    return [
        rpi_delta(a, i) - dpi_i * z ** N,
        rpi_delta_word(a, Word((i, j))) - dpi_i * dpi_j ** N * z ** (N * N),
    ]
