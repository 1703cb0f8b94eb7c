"""Integer-vector arithmetic for (Z/p^K)[x, pi] / (f(x), pi^e - p).

An element is a flat list ``c`` of e*m integers, ``c[j*m + i]`` being the
coefficient of pi^j x^i, together with an absolute pi-adic precision
``prec``.  The pi^j block is stored reduced mod p^ceil((prec - j)/e); this
canonical form makes equality at a given precision a plain list compare.

The unramified ring W is the case e = 1 (pi = p).
"""

from __future__ import annotations

from .errors import NotDivisibleError, PrecisionError


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class Engine:
    def __init__(self, p: int, m: int, e: int, K: int, modulus: tuple[int, ...]):
        self.p, self.m, self.e, self.K = p, m, e, K
        self.cap = e * K
        self.size = e * m
        self.pK = p ** K
        self.modulus = tuple(modulus)
        # x^d mod f for m <= d <= 2m-2, in the power basis, mod p^K
        self.xred = {}
        cur = [(-c) % self.pK for c in modulus[:m]]  # x^m
        for d in range(m, 2 * m - 1):
            self.xred[d] = list(cur)
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(m):
                    cur[i] = (cur[i] - top * modulus[i]) % self.pK
        self._mods: dict[int, list[int]] = {}

    # -- precision bookkeeping -------------------------------------------

    def block_exp(self, prec: int, j: int) -> int:
        """p-adic precision of the pi^j block at pi-adic precision prec."""
        return max(0, -((j - prec) // self.e))

    def mods(self, prec: int) -> list[int]:
        mods = self._mods.get(prec)
        if mods is None:
            mods = []
            for j in range(self.e):
                mods.extend([self.p ** self.block_exp(prec, j)] * self.m)
            self._mods[prec] = mods
        return mods

    def normalize(self, c: list[int], prec: int) -> list[int]:
        return [x % md for x, md in zip(c, self.mods(prec))]

    def valuation(self, c: list[int], prec: int) -> int:
        p, m, e = self.p, self.m, self.e
        if prec > 0 and any(x % p for x in c[:m]):
            return 0
        best = prec
        for j in range(e):
            if j >= best:
                break
            blk = c[j * m:(j + 1) * m]
            vs = [_vp(x, p) for x in blk if x]
            if vs:
                best = min(best, e * min(vs) + j)
        return best

    # -- ring operations on raw vectors ------------------------------------

    def mul_raw(self, a: list[int], b: list[int]) -> list[int]:
        p, m, e, pK = self.p, self.m, self.e, self.pK
        if m == 1 and e == 1:
            return [a[0] * b[0] % pK]
        acc = [[0] * (2 * m - 1) for _ in range(2 * e - 1)]
        blocks_b = [(j2, b[j2 * m:(j2 + 1) * m]) for j2 in range(e)]
        blocks_b = [(j2, bb) for j2, bb in blocks_b if any(bb)]
        for j1 in range(e):
            aa = a[j1 * m:(j1 + 1) * m]
            if not any(aa):
                continue
            for j2, bb in blocks_b:
                row = acc[j1 + j2]
                for i1, ai in enumerate(aa):
                    if ai:
                        for i2, bi in enumerate(bb):
                            row[i1 + i2] += ai * bi
        for j in range(2 * e - 2, e - 1, -1):
            lo, hi = acc[j - e], acc[j]
            for i in range(2 * m - 1):
                if hi[i]:
                    lo[i] += p * hi[i]
        out = []
        xred = self.xred
        for j in range(e):
            row = acc[j]
            for d in range(2 * m - 2, m - 1, -1):
                c = row[d]
                if c:
                    red = xred[d]
                    for i in range(m):
                        row[i] += c * red[i]
            out.extend(x % pK for x in row[:m])
        return out

    def scale_raw(self, a: list[int], k: int) -> list[int]:
        pK = self.pK
        return [x * k % pK for x in a]

    def mul_pi_raw(self, a: list[int], k: int) -> list[int]:
        """Multiply by pi^k (k >= 0)."""
        p, m, e, pK = self.p, self.m, self.e, self.pK
        q, r = divmod(k, e)
        out = [0] * self.size
        scale = p ** q
        for j in range(e):
            jj = j + r
            f = scale
            if jj >= e:
                jj -= e
                f *= p
            for i in range(m):
                out[jj * m + i] = a[j * m + i] * f % pK
        return out

    def div_pi_raw(self, a: list[int], prec: int, k: int) -> list[int]:
        """Exact division by pi^k of an element known mod pi^prec."""
        if k > prec:
            raise PrecisionError(f"cannot divide by pi^{k} at precision {prec}")
        if self.valuation(a, prec) < k:
            raise NotDivisibleError(f"element not divisible by pi^{k}")
        p, m, e = self.p, self.m, self.e
        q, r = divmod(k, e)
        out = [0] * self.size
        for jo in range(e):
            if jo < e - r:
                src, d = jo + r, p ** q
            else:
                src, d = jo + r - e, p ** (q + 1)
            for i in range(m):
                out[jo * m + i] = a[src * m + i] // d
        return out


class LocalElem:
    """Element of a truncated local ring, shared by W and R_pi.

    Subclasses supply ``ctx`` objects exposing ``eng`` (an :class:`Engine`)
    and ``field`` (the residue :class:`~pigeom.base_field.FieldCtx`).
    Precision of a product is min(prec_a + v(b), prec_b + v(a)), the usual
    lattice bound, so multiplying by pi^k gains k digits.
    """

    __slots__ = ("ctx", "c", "prec")

    def __init__(self, ctx, c, prec):
        self.ctx = ctx
        self.prec = prec
        self.c = ctx.eng.normalize(c, prec)

    def _new(self, c, prec):
        return type(self)(self.ctx, c, min(prec, self.ctx.eng.cap))

    def _coerce(self, other):
        if isinstance(other, LocalElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError("elements of different rings")
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new([a + b for a, b in zip(self.c, other.c)], min(self.prec, other.prec))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new([a - b for a, b in zip(self.c, other.c)], min(self.prec, other.prec))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return self._new([-a for a in self.c], self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            eng = self.ctx.eng
            vk = eng.e * _vp(other, eng.p) if other else eng.cap
            return self._new(eng.scale_raw(self.c, other), self.prec + vk)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        eng = self.ctx.eng
        prec = min(self.prec + other.valuation(), other.prec + self.valuation())
        return self._new(eng.mul_raw(self.c, other.c), prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_pi(self, k: int = 1):
        """Multiply by pi^k; precision grows by k (capped)."""
        eng = self.ctx.eng
        return self._new(eng.mul_pi_raw(self.c, k), self.prec + k)

    def div_pi(self, k: int = 1):
        """Exact division by pi^k; precision drops by k."""
        eng = self.ctx.eng
        return self._new(eng.div_pi_raw(self.c, self.prec, k), self.prec - k)

    # -- predicates and accessors ------------------------------------------

    def valuation(self) -> int:
        """pi-adic valuation; equals ``prec`` when the element is 0 at its precision."""
        return self.ctx.eng.valuation(self.c, self.prec)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_unit(self) -> bool:
        return self.prec > 0 and any(x % self.ctx.eng.p for x in self.c[: self.ctx.eng.m])

    def reduce(self, prec: int):
        """Forget digits beyond pi^prec (prec may not exceed the current one)."""
        return self._new(self.c, min(prec, self.prec))

    def residue(self):
        if self.prec < 1:
            raise PrecisionError("no residue information at precision 0")
        return self.ctx.field(self.c[: self.ctx.eng.m])

    def equals(self, other, prec: int | None = None) -> bool:
        """Congruence mod pi^prec (default: the common known precision)."""
        other = self._coerce(other)
        common = min(self.prec, other.prec)
        if prec is None:
            prec = common
        elif prec > common:
            raise PrecisionError(f"cannot compare at precision {prec}; only {common} known")
        return (self - other).reduce(prec).is_zero()

    def __eq__(self, other):
        try:
            return self.equals(other)
        except (ValueError, TypeError):
            return NotImplemented

    __hash__ = None

    def invert(self):
        """Inverse of a unit by Newton lifting from the residue inverse."""
        from .errors import NotAUnitError

        if not self.is_unit():
            raise NotAUnitError(f"{self!r} is not a unit")
        y = self.ctx.lift_residue(self.residue().inverse())
        target = self.prec
        # in a truncated series ring the error also has to clear the u-degrees
        needed = target + getattr(self.ctx, "nilpotent_degree", 0)
        reach = 1
        while reach < needed:
            y = y * (2 - self * y)
            reach *= 2
        return y.reduce(target)
