"""delta-polynomials in one variable and the evaluation maps they define.

A delta-polynomial P in R{t} = R[t, t', t'', ...] is evaluated on a in W by
substituting t^{(i)} -> (delta^{(s)})^i a.  Reducing mod p gives the
evaluation map e_P : W -> k.  Giving t^{(i)} the degree p^{is} makes R{t}
graded, and homogeneous pieces scale by zeta^d under Teichmueller scaling.
"""

from __future__ import annotations

from .base_field import FqElem
from .errors import PrecisionError
from .witt_base import BaseCtx, WElem, w_delta, w_frobenius

__all__ = ["DeltaPoly", "eval_delta_poly", "e_P", "delta_iterates", "witt_coords", "witt_ghosts"]


def _trim_exps(exps) -> tuple[int, ...]:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


class DeltaPoly:
    """Sparse delta-polynomial: {exponent tuple over (t, t', ...): coefficient}.

    Coefficients are ints or WElems.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for exps, coef in (terms or {}).items():
            key = _trim_exps(exps)
            if any(x < 0 for x in key):
                raise ValueError("exponents must be nonnegative")
            clean[key] = clean.get(key, 0) + coef
        self.terms = {k: v for k, v in clean.items() if not _is_zero(v)}

    @classmethod
    def t(cls, i: int = 0, power: int = 1, coef=1) -> "DeltaPoly":
        """coef * (t^{(i)})^power."""
        exps = [0] * (i + 1)
        exps[i] = power
        return cls({tuple(exps): coef})

    @classmethod
    def constant(cls, c) -> "DeltaPoly":
        return cls({(): c})

    @property
    def order(self) -> int:
        """Largest i with t^{(i)} present (0 for constants and for P = t)."""
        return max((len(k) - 1 for k in self.terms if k), default=0)

    def degree_of(self, exps, p: int, s: int) -> int:
        return sum(e * p ** (i * s) for i, e in enumerate(exps))

    def homogeneous_parts(self, p: int, s: int = 1) -> dict[int, "DeltaPoly"]:
        parts: dict[int, dict] = {}
        for exps, coef in self.terms.items():
            parts.setdefault(self.degree_of(exps, p, s), {})[exps] = coef
        return {d: DeltaPoly(t) for d, t in sorted(parts.items())}

    def is_homogeneous(self, p: int, s: int = 1) -> bool:
        return len(self.homogeneous_parts(p, s)) <= 1

    def degree(self, p: int, s: int = 1) -> int:
        """Top graded degree."""
        return max((self.degree_of(k, p, s) for k in self.terms), default=0)

    def __add__(self, other):
        if not isinstance(other, DeltaPoly):
            other = DeltaPoly.constant(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return DeltaPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return DeltaPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, DeltaPoly) else -other)

    def __mul__(self, other):
        if not isinstance(other, DeltaPoly):
            return DeltaPoly({k: v * other for k, v in self.terms.items()})
        terms: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                n = max(len(k1), len(k2))
                a = list(k1) + [0] * (n - len(k1))
                b = list(k2) + [0] * (n - len(k2))
                key = _trim_exps(x + y for x, y in zip(a, b))
                terms[key] = terms.get(key, 0) + v1 * v2
        return DeltaPoly(terms)

    __rmul__ = __mul__

    def to_json(self) -> list:
        out = []
        for exps, coef in sorted(self.terms.items()):
            c = coef.to_json() if isinstance(coef, WElem) else str(coef)
            out.append({"exponents": list(exps), "coefficient": c})
        return out

    @classmethod
    def from_json(cls, data, ctx: BaseCtx | None = None) -> "DeltaPoly":
        terms = {}
        for item in data:
            c = item["coefficient"]
            if isinstance(c, dict):
                c = WElem.from_json(ctx, c)
            else:
                c = int(c)
            terms[tuple(int(x) for x in item["exponents"])] = c
        return cls(terms)

    def __repr__(self):
        def mono(exps):
            names = []
            for i, e in enumerate(exps):
                if e:
                    v = "t" + "'" * i if i < 4 else f"t^({i})"
                    names.append(v + (f"^{e}" if e > 1 else ""))
            return "*".join(names) or "1"

        body = " + ".join(f"{c}*{mono(k)}" for k, c in sorted(self.terms.items()))
        return f"DeltaPoly({body or '0'})"


def _is_zero(v) -> bool:
    return v == 0 if isinstance(v, int) else v.is_zero()


def delta_iterates(a: WElem, r: int, s: int = 1) -> list[WElem]:
    """[a, delta a, ..., delta^r a] with precisions a.prec, ..., a.prec - r."""
    if a.prec <= r:
        raise PrecisionError(f"need precision > {r} to take {r} derivations")
    out = [a]
    for _ in range(r):
        out.append(w_delta(out[-1], s))
    return out


def eval_delta_poly(P: DeltaPoly, a: WElem, s: int = 1) -> WElem:
    """P^{(s)}{a}, known to precision a.prec - order(P)."""
    r = P.order
    its = delta_iterates(a, r, s)
    ctx = a.ctx
    total = ctx.zero()
    for exps, coef in P.terms.items():
        term = coef if isinstance(coef, WElem) else ctx.from_int(coef)
        for i, e in enumerate(exps):
            if e:
                term = term * its[i] ** e
        total = total + term
    return total.reduce(a.prec - r)


def e_P(P: DeltaPoly, a: WElem, s: int = 1) -> FqElem:
    """The evaluation map a -> a(P) = P^{(s)}{a} mod p."""
    return eval_delta_poly(P, a, s).residue()


def witt_coords(a: WElem, r: int) -> list[WElem]:
    """Coordinates (x_0, ..., x_r) of a under R -> W(R) (s = 1).

    They are the unique solution of sum_{i<=j} p^i x_i^{p^{j-i}} = phi^j(a),
    obtained by exact division by p^j at step j.
    """
    if a.prec <= r:
        raise PrecisionError(f"need precision > {r} for {r + 1} Witt coordinates")
    p = a.ctx.p
    xs = [a]
    for j in range(1, r + 1):
        acc = w_frobenius(a, j)
        for i, x in enumerate(xs):
            acc = acc - (x ** (p ** (j - i))) * p ** i
        xs.append(acc.reduce(a.prec).div_pi(j))
    return xs


def witt_ghosts(xs: list[WElem]) -> list[WElem]:
    """Ghost components w_j = sum_{i<=j} p^i x_i^{p^{j-i}}."""
    p = xs[0].ctx.p
    out = []
    for j in range(len(xs)):
        acc = xs[0].ctx.zero()
        for i in range(j + 1):
            acc = acc + (xs[i] ** (p ** (j - i))) * p ** i
        out.append(acc)
    return out
