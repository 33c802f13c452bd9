"""Eta-quotient bookkeeping: admissibility, characters, cusp orders, Sturm bounds."""

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith import QuadChar, divisors, factor, is_prime
from .heckeops import op_U, op_V
from .qseries import HorizonError, eta_quotient_series, series_mul
from .reports import CongruenceReport

__all__ = [
    "EtaQuotient",
    "Cusp",
    "CuspReport",
    "GHResult",
    "gh_check",
    "martin_orders",
    "sturm_bound",
    "congruence_to_bound",
    "cuspation",
]


@dataclass(frozen=True)
class EtaQuotient:
    """prod_{delta | N} eta(delta z)^r_delta."""

    levelN: int
    exps: dict

    def __post_init__(self):
        clean = {int(d): int(r) for d, r in dict(self.exps).items() if r}
        for d in clean:
            if d < 1 or self.levelN % d:
                raise ValueError(f"{d} does not divide the level {self.levelN}")
        object.__setattr__(self, "exps", clean)

    def __hash__(self):
        return hash((self.levelN, tuple(sorted(self.exps.items()))))

    @property
    def weight_num(self):
        """Twice the weight."""
        return sum(self.exps.values())

    @property
    def weight(self):
        return Fraction(self.weight_num, 2)

    @property
    def offset24(self):
        return sum(d * r for d, r in self.exps.items())

    def series(self, n_terms=None, ring=None, *, upto=None):
        return eta_quotient_series(self.exps, n_terms, ring, upto=upto)

    def __str__(self):
        parts = [f"eta({d}z)^{r}" if r != 1 else f"eta({d}z)" for d, r in sorted(self.exps.items())]
        return " ".join(parts) + f" [N={self.levelN}]"


@dataclass(frozen=True)
class GHResult:
    cond1: bool
    cond2: bool
    cond3: bool
    character: QuadChar = None

    def __iter__(self):
        return iter((self.cond1, self.cond2, self.cond3, self.character))

    @property
    def holds(self):
        return self.cond1 and self.cond2 and self.cond3

    @property
    def certificate(self):
        """How modularity is backed: "formula-backed" when all three
        conditions hold, "table-backed" for a half-integral quotient that
        passes the order conditions (membership then rests on external
        tables, not on this check), otherwise None."""
        if self.holds:
            return "formula-backed"
        if self.cond1 and self.cond2 and not self.cond3:
            return "table-backed"
        return None


def _squarefree_kernel(n):
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factor(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def gh_check(eq):
    """Evaluate the three Gordon-Hughes conditions and the character.

    The character (((-1)^k prod delta^r_delta) / n) is returned only for
    integral weight, reduced to the squarefree part of the numerator (the
    two agree on n coprime to 6N, which is where the character is defined).
    """
    N = eq.levelN
    cond1 = eq.offset24 % 24 == 0
    cond2 = sum(Fraction(N * r, d) for d, r in eq.exps.items()) % 24 == 0
    cond3 = eq.weight_num % 2 == 0
    char = None
    if cond3:
        k = eq.weight_num // 2
        num = Fraction((-1) ** k)
        for d, r in eq.exps.items():
            num *= Fraction(d) ** r
        # delta^r with r < 0 has the same square class as delta^|r|
        top = num.numerator * num.denominator
        char = QuadChar(_squarefree_kernel(top))
    return GHResult(cond1, cond2, cond3, char)


@dataclass(frozen=True)
class Cusp:
    d: int
    c: int
    order: Fraction
    classes: int

    @property
    def order24(self):
        o = self.order * 24
        return o.numerator if o.denominator == 1 else o


@dataclass
class CuspReport:
    eq: EtaQuotient
    cusps: list = field(default_factory=list)

    def order_at(self, d):
        for cusp in self.cusps:
            if cusp.d == d:
                return cusp.order
        raise KeyError(f"no cusp with denominator {d}")

    @property
    def holomorphic(self):
        return all(c.order >= 0 for c in self.cusps)

    @property
    def cuspidal(self):
        return all(c.order > 0 for c in self.cusps)

    def to_json(self):
        return {
            "levelN": self.eq.levelN,
            "exps": {str(d): r for d, r in sorted(self.eq.exps.items())},
            "cusps": [
                {"d": c.d, "c": c.c, "classes": c.classes, "order24": str(c.order24)}
                for c in self.cusps
            ],
        }


def _euler_phi(n):
    out = n
    for p in factor(n):
        out = out // p * (p - 1)
    return out


def martin_orders(eq):
    """Vanishing order at c/d for each divisor d of N.

    order(c/d) = (N/24) sum_delta gcd(d^2, delta^2) r_delta / (delta gcd(d^2, N)).
    The value depends only on d; one representative per d is listed, with
    c the least positive integer coprime to d, and ``classes`` counting the
    Gamma_0(N) cusps sharing that denominator.
    """
    N = eq.levelN
    cusps = []
    for d in divisors(N):
        total = sum(Fraction(gcd(d * d, delta * delta) * r, delta * gcd(d * d, N)) for delta, r in eq.exps.items())
        order = Fraction(N, 24) * total
        c = next(c for c in range(1, d + 2) if gcd(c, d) == 1)
        cusps.append(Cusp(d=d, c=c, order=order, classes=_euler_phi(gcd(d, N // d))))
    return CuspReport(eq=eq, cusps=cusps)


def sturm_bound(k_num, levelN):
    """floor(k N / 12 * prod_{p | N}(1 + 1/p)) with weight k = k_num / 2."""
    if levelN < 1:
        raise ValueError(f"level must be >= 1, got {levelN}")
    val = Fraction(k_num * levelN, 24)
    for p in factor(levelN):
        val *= Fraction(p + 1, p)
    return val.numerator // val.denominator


def congruence_to_bound(f, g, m, bound, claim_id="congruence", params=None):
    """Compare f and g coefficientwise mod m for 0 <= n <= bound."""
    t0 = time.perf_counter()
    for name, s in (("f", f), ("g", g)):
        if s.horizon < bound:
            raise HorizonError(f"{name} is valid to {s.horizon}, below the bound {bound}")
    rep = CongruenceReport(claim_id=claim_id, modulus=m, n_range=(0, bound), params=dict(params or {}))
    for n in range(bound + 1):
        diff = (f[n] - g[n]) % m
        rep.tested_count += 1
        if diff:
            rep.add_failure(n, diff)
    rep.wall_time_ms = int((time.perf_counter() - t0) * 1000)
    return rep


def cuspation(f, m, levelN, lam):
    """Restrict f to n not divisible by m and multiply by a form congruent to 1.

    Returns (series, new_k_num, new_level) where the weight is new_k_num / 2
    and the level is 4 N m^2 / gcd(N, m).
    """
    if m == 2 or not is_prime(m):
        raise ValueError(f"cuspation needs an odd prime m, got {m}")
    if f.ring.is_exact or f.ring.m != m:
        raise ValueError(f"cuspation expects a series reduced mod {m}")
    restricted = f - op_V(op_U(f, m), m)
    if m >= 5:
        mult = EtaQuotient(m * m, {1: m * m, m * m: -1})
        k_num = 2 * lam + m * m
    else:
        mult = EtaQuotient(9, {1: 27, 9: -3})
        k_num = 2 * lam + 25
    unit = mult.series(upto=restricted.horizon, ring=f.ring)
    new_level = 4 * levelN * m * m // gcd(levelN, m)
    return series_mul(restricted, unit), k_num, new_level
