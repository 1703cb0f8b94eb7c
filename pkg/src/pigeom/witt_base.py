"""The unramified base W = W(F_{p^m}) mod p^K with its Frobenius lift.

W is realised as (Z/p^K)[x]/(f) where f is the lift of the residue modulus
whose roots are Teichmueller.  With that choice x itself is a root of unity,
the Frobenius lift is the substitution x -> x^p, and every phi^s is a
linear map given by a precomputed matrix.
"""

from __future__ import annotations

from math import comb

from ._local import Engine, LocalElem
from .base_field import FieldCtx, FqElem
from .errors import ConfigError, PrecisionError

__all__ = [
    "BaseCtx",
    "WElem",
    "w_frobenius",
    "w_delta",
    "w_teichmueller",
    "w_invert",
    "w_p_integrate",
    "cp_carry",
]


def _poly_mul_mod(a, b, f, pk):
    """Product of two length-m vectors in (Z/pk)[y]/(f), f monic."""
    m = len(f) - 1
    prod = [0] * (2 * m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for d in range(2 * m - 2, m - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(m):
                prod[d - m + i] -= c * f[i]
    return [x % pk for x in prod[:m]]


def _poly_pow_mod(a, n, f, pk):
    m = len(f) - 1
    result = [1] + [0] * (m - 1)
    while n:
        if n & 1:
            result = _poly_mul_mod(result, a, f, pk)
        n >>= 1
        if n:
            a = _poly_mul_mod(a, a, f, pk)
    return result


def _teichmueller_modulus(field: FieldCtx, K: int) -> tuple[int, ...]:
    """Monic lift of field.modulus over Z/p^K whose roots are Teichmueller.

    Work in (Z/p^K)[y]/(F0) for the naive lift F0; the Teichmueller lift t
    of y has conjugates t^{p^j}, and prod_j (X - t^{p^j}) has scalar
    coefficients.
    """
    p, m = field.p, field.m
    pk = p ** K
    f0 = list(field.modulus)
    if m == 1:
        # the unique root is -f0[0]; its Teichmueller lift gives X - t
        t = -f0[0] % pk
        for _ in range(K):
            t = pow(t, p, pk)
        return ((-t) % pk, 1)
    t = [0, 1] + [0] * (m - 2)
    for _ in range(K):
        t = _poly_pow_mod(t, p ** m, f0, pk)
    conj = [t]
    for _ in range(m - 1):
        conj.append(_poly_pow_mod(conj[-1], p, f0, pk))
    # expand prod (X - c_j); coefficients live in (Z/pk)[y]/(F0)
    zero = [0] * m
    one = [1] + [0] * (m - 1)
    poly = [one]
    for c in conj:
        neg_c = [(-x) % pk for x in c]
        new = [list(zero) for _ in range(len(poly) + 1)]
        for d, coef in enumerate(poly):
            new[d + 1] = [(u + v) % pk for u, v in zip(new[d + 1], coef)]
            prod = _poly_mul_mod(coef, neg_c, f0, pk)
            new[d] = [(u + v) % pk for u, v in zip(new[d], prod)]
        poly = new
    out = []
    for coef in poly:
        if any(coef[1:]):
            raise ConfigError("Teichmueller modulus has non-scalar coefficients")
        out.append(coef[0])
    return tuple(out)


class BaseCtx:
    """Context for W mod p^K.

    Attributes: ``field``, ``K``, ``modulus_lift`` and ``frobenius_matrix``
    (column i holds the coordinates of phi(x^i) = x^{p i}).
    """

    def __init__(self, field: FieldCtx, K: int):
        if K < 2:
            raise ConfigError(f"precision K must be >= 2, got {K}")
        self.field = field
        self.K = K
        self.p, self.m = field.p, field.m
        self.modulus_lift = _teichmueller_modulus(field, K)
        self.eng = Engine(self.p, self.m, 1, K, self.modulus_lift)
        self._phi_cache: dict[int, list[list[int]]] = {}
        self.frobenius_matrix = self.phi_matrix(1)

    def __eq__(self, other):
        return isinstance(other, BaseCtx) and (self.field, self.K) == (other.field, other.K)

    def __hash__(self):
        return hash((self.field, self.K))

    def __repr__(self):
        return f"BaseCtx(p={self.p}, m={self.m}, K={self.K})"

    # -- constructors ----------------------------------------------------

    def __call__(self, value, prec: int | None = None) -> "WElem":
        if isinstance(value, WElem):
            return value.reduce(prec) if prec is not None else value
        if isinstance(value, FqElem):
            return self.lift_residue(value)
        if prec is None:
            prec = self.K
        if isinstance(value, int):
            return WElem(self, [value] + [0] * (self.m - 1), prec)
        coeffs = [int(c) for c in value]
        if len(coeffs) > self.m:
            raise ValueError("too many coefficients")
        return WElem(self, coeffs + [0] * (self.m - len(coeffs)), prec)

    def from_int(self, n: int) -> "WElem":
        return WElem(self, [n] + [0] * (self.m - 1), self.K)

    def zero(self) -> "WElem":
        return self.from_int(0)

    def one(self) -> "WElem":
        return self.from_int(1)

    def x(self) -> "WElem":
        """The Teichmueller root x of modulus_lift."""
        if self.m == 1:
            return self.from_int(-self.modulus_lift[0])
        return WElem(self, [0, 1] + [0] * (self.m - 2), self.K)

    def lift_residue(self, a: FqElem) -> "WElem":
        """Coordinate-wise lift of a residue (not Teichmueller)."""
        return WElem(self, list(a.coeffs), self.K)

    def random(self, rng, prec: int | None = None) -> "WElem":
        prec = self.K if prec is None else prec
        pk = self.p ** prec
        return WElem(self, [rng.randrange(pk) for _ in range(self.m)], prec)

    # -- Frobenius -------------------------------------------------------

    def phi_matrix(self, s: int) -> list[list[int]]:
        """Matrix of phi^s on the power basis (phi^m = id)."""
        s %= self.m
        mat = self._phi_cache.get(s)
        if mat is None:
            m, pk = self.m, self.p ** self.K
            xs = self.x()
            base = xs ** (self.p ** s)
            cols = []
            cur = self.one()
            for _ in range(m):
                cols.append(list(cur.c))
                cur = cur * base
            mat = [[cols[i][k] % pk for i in range(m)] for k in range(m)]
            self._phi_cache[s] = mat
        return mat

    def apply_phi_raw(self, c: list[int], s: int) -> list[int]:
        if self.m == 1 or s % self.m == 0:
            return list(c)
        mat = self.phi_matrix(s)
        return [sum(r * v for r, v in zip(row, c)) for row in mat]

    def check_invariants(self) -> bool:
        """Verify the modulus, Frobenius and phi^m = id on the basis."""
        p, m = self.p, self.m
        if tuple(c % p for c in self.modulus_lift) != self.field.modulus:
            return False
        basis = [WElem(self, [int(i == k) for i in range(m)], self.K) for k in range(m)]
        for a in basis:
            fa = w_frobenius(a, 1)
            if not (fa - a ** p).reduce(1).is_zero():
                return False
            if not w_frobenius(a, m).equals(a):
                return False
            for b in basis:
                if not w_frobenius(a * b, 1).equals(fa * w_frobenius(b, 1)):
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "K": self.K,
            "modulus_lift": [str(c) for c in self.modulus_lift],
        }


class WElem(LocalElem):
    """Element of W known mod p^prec; ``c`` holds the m coefficients."""

    __slots__ = ()

    @property
    def coeffs(self) -> list[int]:
        return self.c

    def frobenius(self, s: int = 1) -> "WElem":
        return w_frobenius(self, s)

    def delta(self, s: int = 1) -> "WElem":
        return w_delta(self, s)

    def to_json(self) -> dict:
        return {"coeffs": [str(x) for x in self.c], "prec": self.prec}

    @classmethod
    def from_json(cls, ctx: BaseCtx, data: dict) -> "WElem":
        return cls(ctx, [int(x) for x in data["coeffs"]], int(data["prec"]))

    def __repr__(self):
        if self.ctx.m == 1:
            return f"W({self.c[0]} + O(p^{self.prec}))"
        return f"W({self.c} + O(p^{self.prec}))"


def w_frobenius(a: WElem, s: int = 1) -> WElem:
    """phi^s(a); precision is preserved."""
    return WElem(a.ctx, a.ctx.apply_phi_raw(a.c, s), a.prec)


def w_delta(a: WElem, s: int = 1) -> WElem:
    """(phi^s(a) - a^{p^s}) / p, known to one digit less than a."""
    if a.prec < 2:
        raise PrecisionError("delta needs precision >= 2")
    diff = w_frobenius(a, s) - a ** (a.ctx.p ** s)
    return diff.reduce(a.prec).div_pi(1)


def w_teichmueller(alpha: FqElem, ctx: BaseCtx) -> WElem:
    """The root of unity (or 0) lifting alpha, exact at precision K."""
    t = ctx.lift_residue(alpha)
    if alpha.is_zero():
        return t
    q = ctx.field.q
    for _ in range(ctx.K):
        t = t ** q
    return t


def w_invert(a: WElem) -> WElem:
    return a.invert()


def w_p_integrate(b: WElem, s: int = 1) -> WElem:
    """The unique u in pW with delta^{(s)} u = b.

    Writing u = p y, the equation reads phi^s(y) = b + p^{p^s - 1} y^{p^s}, a
    contraction; K rounds reach the fixed point.
    """
    ctx = b.ctx
    p = ctx.p
    N = p ** s
    carry = p ** (N - 1)
    y = w_frobenius(b, -s)
    for _ in range(ctx.K):
        y = w_frobenius(b + carry * y ** N, -s)
    prec = min(b.prec + 1, ctx.K)
    return (p * y).reduce(prec)


def cp_carry(x, y, s: int = 1, p: int | None = None):
    """C_p^{(s)}(x, y) = (x^{p^s} + y^{p^s} - (x + y)^{p^s}) / p.

    Evaluated as the integer polynomial -sum_k binom(p^s, k)/p x^k y^{p^s-k},
    so it works in any of the package's rings and on plain ints.
    """
    if p is None:
        p = x.ctx.p if hasattr(x, "ctx") else y.ctx.p
    N = p ** s
    xp = [1, x]
    yp = [1, y]
    for _ in range(2, N):
        xp.append(xp[-1] * x)
        yp.append(yp[-1] * y)
    total = 0
    for k in range(1, N):
        total = total - (comb(N, k) // p) * (xp[k] * yp[N - k])
    return total
