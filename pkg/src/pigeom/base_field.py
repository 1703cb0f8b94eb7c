"""The finite residue field F_{p^m}.

Elements are coefficient tuples in the power basis 1, x, ..., x^{m-1} of
F_p[x]/(modulus).  The field stands in for the algebraically closed residue
field of the unramified base; every construction downstream only ever
touches finitely many residues, so a large enough m suffices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ConfigError

__all__ = [
    "FieldCtx",
    "FqElem",
    "is_prime",
    "prime_factors",
    "poly_is_irreducible",
    "fq_frobenius",
    "fq_inv_frobenius",
    "fq_root_of_unity",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over F_p, lists low -> high -------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _pmod(prod, f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def poly_is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p.

    f has no factor of degree d < deg f iff gcd(f, x^{p^d} - x) = 1 for
    every 1 <= d < deg f.
    """
    f = _trim([c % p for c in f])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    xp = [0, 1]
    for _ in range(1, m):
        xp = _ppowmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    # f must also divide x^{p^m} - x
    xp = _ppowmod(xp, p, f, p)
    return _trim(list(xp)) == [0, 1]


@dataclass(frozen=True)
class FieldCtx:
    """Context for F_{p^m} = F_p[x]/(modulus).

    ``modulus`` is monic, low -> high, length m+1.  When omitted it is found
    by a seeded random search, so the same (p, m) always yields the same
    field; the choice is reported by :meth:`to_json`.
    """

    p: int
    m: int = 1
    modulus: tuple[int, ...] | None = None
    generator: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        p, m = self.p, self.m
        if not isinstance(p, int) or not is_prime(p) or p == 2:
            raise ConfigError(f"p must be an odd prime, got {p!r}")
        if m < 1:
            raise ConfigError("residue degree m must be >= 1")
        if self.modulus is None:
            object.__setattr__(self, "modulus", _search_modulus(p, m))
        mod = tuple(int(c) % p for c in self.modulus)
        if len(mod) != m + 1 or mod[-1] != 1:
            raise ConfigError(f"modulus must be monic of degree {m}: {self.modulus}")
        if not poly_is_irreducible(mod, p):
            raise ConfigError(f"modulus {mod} is reducible over F_{p}")
        object.__setattr__(self, "modulus", mod)
        if self.generator is None:
            object.__setattr__(self, "generator", self._search_generator())
        else:
            g = tuple(int(c) % p for c in self.generator)
            object.__setattr__(self, "generator", g)
            if self.order(self(g)) != self.q - 1:
                raise ConfigError("supplied generator is not primitive")

    @property
    def q(self) -> int:
        return self.p ** self.m

    def __call__(self, value) -> "FqElem":
        """Coerce an int or coefficient sequence to an element."""
        if isinstance(value, FqElem):
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.m - 1)
        else:
            coeffs = [int(c) % self.p for c in value]
            coeffs += [0] * (self.m - len(coeffs))
            if len(coeffs) != self.m:
                raise ValueError("too many coefficients")
        return FqElem(self, tuple(coeffs))

    def zero(self) -> "FqElem":
        return self(0)

    def one(self) -> "FqElem":
        return self(1)

    def gen(self) -> "FqElem":
        return FqElem(self, self.generator)

    def x(self) -> "FqElem":
        """The class of x in the power basis."""
        if self.m == 1:
            return self(-self.modulus[0])
        return self([0, 1])

    def elements(self) -> Iterable["FqElem"]:
        """All q elements, in lexicographic coefficient order."""
        for idx in range(self.q):
            coeffs = []
            for _ in range(self.m):
                idx, r = divmod(idx, self.p)
                coeffs.append(r)
            yield FqElem(self, tuple(coeffs))

    def random(self, rng: random.Random, nonzero: bool = False) -> "FqElem":
        while True:
            a = FqElem(self, tuple(rng.randrange(self.p) for _ in range(self.m)))
            if not (nonzero and a.is_zero()):
                return a

    def order(self, a: "FqElem") -> int:
        if a.is_zero():
            raise ZeroDivisionError("0 has no multiplicative order")
        n = self.q - 1
        for r in prime_factors(self.q - 1):
            while n % r == 0 and (a ** (n // r)).is_one():
                n //= r
        return n

    def _search_generator(self) -> tuple[int, ...]:
        rng = random.Random(f"generator:{self.p}:{self.modulus}")
        while True:
            a = self.random(rng, nonzero=True)
            if self.order(a) == self.q - 1:
                return a.coeffs

    def _mul(self, a, b):
        return tuple(_pad(_pmulmod(list(a), list(b), self.modulus, self.p), self.m))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "modulus": [str(c) for c in self.modulus],
            "generator": [str(c) for c in self.generator],
        }


def _pad(a, m):
    a = list(a)[:m]
    return a + [0] * (m - len(a))


def _search_modulus(p: int, m: int) -> tuple[int, ...]:
    if m == 1:
        return (0, 1)
    rng = random.Random(f"modulus:{p}:{m}")
    while True:
        f = [rng.randrange(p) for _ in range(m)] + [1]
        if f[0] and poly_is_irreducible(f, p):
            return tuple(f)


class FqElem:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    def _coerce(self, other) -> "FqElem":
        if isinstance(other, FqElem):
            if other.ctx != self.ctx:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return self.ctx(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return FqElem(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FqElem(self.ctx, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FqElem(self.ctx, self.ctx._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def frobenius(self, s: int = 1) -> "FqElem":
        return fq_frobenius(self, s)

    def inv_frobenius(self, s: int = 1) -> "FqElem":
        return fq_inv_frobenius(self, s)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.modulus, self.coeffs))

    def __int__(self):
        if any(self.coeffs[1:]):
            raise ValueError("element is not in the prime field")
        return self.coeffs[0]

    def __repr__(self):
        if self.ctx.m == 1:
            return f"Fq({self.coeffs[0]} mod {self.ctx.p})"
        return f"Fq{list(self.coeffs)}"


def fq_frobenius(a: FqElem, s: int = 1) -> FqElem:
    """a^{p^s}; Fr has order m so s is reduced mod m first."""
    s %= a.ctx.m
    return a ** (a.ctx.p ** s) if s else a


def fq_inv_frobenius(a: FqElem, s: int = 1) -> FqElem:
    """The unique b with b^{p^s} = a (k is perfect)."""
    return fq_frobenius(a, (-s) % a.ctx.m)


def fq_root_of_unity(ctx: FieldCtx, e: int, j: int = 1) -> FqElem:
    """tau^{j (q-1)/e} for the fixed generator tau of F_q^x."""
    if e < 1 or (ctx.q - 1) % e:
        raise ConfigError(
            f"e={e} does not divide p^m - 1 = {ctx.q - 1}; increase the residue degree m"
        )
    return ctx.gen() ** ((j * ((ctx.q - 1) // e)) % (ctx.q - 1))
