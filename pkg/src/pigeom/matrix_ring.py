"""Matrices over any of the package's local rings (W, R_pi, T)."""

from __future__ import annotations

from fractions import Fraction

from .errors import HypothesisError, NotAUnitError

__all__ = ["Mat", "mat_inv", "mat_pow_ps", "mat_sqrt_near_one", "half_binomial"]


def half_binomial(k: int) -> Fraction:
    """C(1/2, k) as an exact fraction; its denominator is a power of 2."""
    c = Fraction(1)
    for i in range(k):
        c *= Fraction(1, 2) - i
        c /= i + 1
    return c


def _frac_mod(c: Fraction, pk: int) -> int:
    return c.numerator * pow(c.denominator, -1, pk) % pk


class Mat:
    """A rows x cols matrix of ring elements sharing one context ``ctx``."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx, rows):
        self.ctx = ctx
        self.rows = [[ctx.from_int(x) if isinstance(x, int) else x for x in row] for row in rows]
        width = {len(r) for r in self.rows}
        if len(width) > 1:
            raise ValueError("ragged matrix")

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, ctx, n: int) -> "Mat":
        return cls(ctx, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ctx, r: int, c: int | None = None) -> "Mat":
        return cls(ctx, [[0] * (r if c is None else c) for _ in range(r)])

    @classmethod
    def unit(cls, ctx, n: int, i: int, j: int) -> "Mat":
        """Elementary matrix E_{ij} (0-based)."""
        return cls(ctx, [[int((a, b) == (i, j)) for b in range(n)] for a in range(n)])

    @classmethod
    def random(cls, ctx, n: int, rng, prec=None, invertible: bool = False) -> "Mat":
        while True:
            X = cls(ctx, [[ctx.random(rng, prec) for _ in range(n)] for _ in range(n)])
            if not invertible or X.is_invertible():
                return X

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def map(self, f) -> "Mat":
        return Mat(self.ctx, [[f(x) for x in row] for row in self.rows])

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Mat):
            other = Mat.identity(self.ctx, self.n) * other
        return Mat(self.ctx, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Mat):
            other = Mat.identity(self.ctx, self.n) * other
        return Mat(self.ctx, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, Mat):
            r, k = self.shape
            k2, c = other.shape
            if k != k2:
                raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
            cols = [[other.rows[t][j] for t in range(k)] for j in range(c)]
            out = []
            for row in self.rows:
                out_row = []
                for col in cols:
                    acc = row[0] * col[0]
                    for t in range(1, k):
                        acc = acc + row[t] * col[t]
                    out_row.append(acc)
                out.append(out_row)
            return Mat(self.ctx, out)
        return self.map(lambda x: x * other)

    def __rmul__(self, other):
        return self.map(lambda x: other * x)

    @property
    def T(self) -> "Mat":
        return Mat(self.ctx, [list(col) for col in zip(*self.rows)])

    def mul_pi(self, k: int = 1) -> "Mat":
        return self.map(lambda x: x.mul_pi(k))

    def div_pi(self, k: int = 1) -> "Mat":
        return self.map(lambda x: x.div_pi(k))

    def reduce(self, prec: int) -> "Mat":
        return self.map(lambda x: x.reduce(prec))

    def pow_ps(self, s_total: int) -> "Mat":
        """Entrywise p^{s_total}-th powers."""
        return mat_pow_ps(self, s_total)

    def inv(self) -> "Mat":
        return mat_inv(self)

    def sqrt_near_one(self) -> "Mat":
        return mat_sqrt_near_one(self)

    # -- predicates -------------------------------------------------------

    @property
    def prec(self) -> int:
        return min(x.prec for row in self.rows for x in row)

    def valuation(self) -> int:
        return min(x.valuation() for row in self.rows for x in row)

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.rows for x in row)

    def equals(self, other: "Mat", prec: int | None = None) -> bool:
        return all(a.equals(b, prec) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.equals(other)

    __hash__ = None

    def residue(self) -> list[list]:
        return [[x.residue() for x in row] for row in self.rows]

    def is_invertible(self) -> bool:
        try:
            _residue_inverse(self.residue(), self.ctx.field)
        except NotAUnitError:
            return False
        return True

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.rows]

    def __repr__(self):
        body = ",\n ".join(repr(row) for row in self.rows)
        return f"Mat([{body}])"


def _residue_inverse(rows, field):
    """Gauss-Jordan inverse over F_q; raises NotAUnitError when singular."""
    n = len(rows)
    aug = [list(r) + [field(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise NotAUnitError("matrix is singular modulo the maximal ideal")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_inv(X: Mat) -> Mat:
    """Two-sided inverse by Newton iteration Y <- Y(2 - XY) from the residue inverse."""
    ctx = X.ctx
    n = X.n
    if X.shape != (n, n):
        raise ValueError("only square matrices are invertible")
    Y = Mat(ctx, [[ctx.lift_residue(a) for a in row]
                  for row in _residue_inverse(X.residue(), ctx.field)])
    target = X.prec
    needed = target + getattr(ctx, "nilpotent_degree", 0)
    two = Mat.identity(ctx, n) * 2
    reach = 1
    while reach < needed:
        Y = Y * (two - X * Y)
        reach *= 2
    return Y.reduce(target)


def mat_pow_ps(X: Mat, s_total: int) -> Mat:
    N = X.ctx.p ** s_total
    return X.map(lambda a: a ** N)


def mat_sqrt_near_one(Y: Mat) -> Mat:
    """The square root congruent to 1 mod pi, by the binomial series in Y - 1.

    The terms C(1/2, k)(Y - 1)^k are summed until (Y - 1)^k vanishes at the
    working precision; for p odd the coefficients are p-adic integers.
    """
    ctx = Y.ctx
    n = Y.n
    Z = Y - Mat.identity(ctx, n)
    if Z.prec >= 1 and not Z.reduce(1).is_zero():
        raise HypothesisError("square root series needs Y = 1 mod pi")
    pK = ctx.p ** ctx.eng.K
    result = Mat.identity(ctx, n)
    power = Mat.identity(ctx, n)
    k = 0
    while True:
        k += 1
        power = power * Z
        if power.is_zero():
            break
        result = result + power * _frac_mod(half_binomial(k), pK)
    return result.reduce(Y.prec)
