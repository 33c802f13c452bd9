"""U, V, sign twist and Hecke operators on integral q-series.

All operators act on coefficient sequences indexed by exponent. The caller
supplies weight and character; nothing here infers modularity. Output
horizons shrink as the formulas dictate (``T(Q^2)`` divides by ``Q^2``).
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import QuadChar, is_prime
from .qseries import HorizonError, QSeries

__all__ = [
    "HalfIntWeight",
    "IntWeight",
    "op_U",
    "op_V",
    "sign_twist",
    "hecke_T",
    "hecke_T2",
    "eigencheck",
]


@dataclass(frozen=True)
class HalfIntWeight:
    """Weight lambda + 1/2 on Gamma_0(level4N) with a quadratic character."""

    lam: int
    char: QuadChar = field(default_factory=QuadChar)
    level4N: int = 4

    def __post_init__(self):
        if self.lam < 1:
            raise ValueError(f"lambda must be >= 1, got {self.lam}")
        if self.level4N % 4:
            raise ValueError(f"half-integral level must be divisible by 4, got {self.level4N}")


@dataclass(frozen=True)
class IntWeight:
    k: int
    char: QuadChar = field(default_factory=QuadChar)
    levelN: int = 1

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"weight must be >= 0, got {self.k}")


def _build(f, values):
    return QSeries._raw(values, 0, f.ring)


def _reduce(f, x):
    return x if f.ring.is_exact else x % f.ring.m


def op_U(f, j):
    """sum a(n) q^n -> sum a(jn) q^n."""
    if j < 1:
        raise ValueError("U(j) needs j >= 1")
    c, top = f.aligned()
    return _build(f, c[: top + 1 : j] if not isinstance(c, np.ndarray) else c[: top + 1 : j].copy())


def op_V(f, j):
    """sum a(n) q^n -> sum a(n) q^(jn).

    Known through j * (top + 1) - 1: the next possible term sits at j * (top + 1).
    """
    if j < 1:
        raise ValueError("V(j) needs j >= 1")
    c, top = f.aligned()
    n = j * (top + 1)
    if f.ring.is_exact:
        out = [0] * n
        out[::j] = c[: top + 1]
    else:
        out = np.zeros(n, dtype=c.dtype)
        out[::j] = c[: top + 1]
    return _build(f, out)


def sign_twist(f):
    """sum a(n) q^n -> sum (-1)^n a(n) q^n."""
    c, top = f.aligned()
    if f.ring.is_exact:
        return _build(f, [-x if i % 2 else x for i, x in enumerate(c)])
    out = c.astype(np.int64)
    out[1::2] = (-out[1::2]) % f.ring.m
    return _build(f, out)


def hecke_T(f, Q, w):
    """Integral-weight T(Q): a(Qn) + chi(Q) Q^(k-1) a(n/Q)."""
    if not is_prime(Q):
        raise ValueError(f"T(Q) needs Q prime, got {Q}")
    c, top = f.aligned()
    H = top // Q
    scale = _reduce(f, w.char(Q) * Q ** (w.k - 1)) if w.k >= 1 else Fraction(w.char(Q), Q)
    if isinstance(scale, Fraction):
        raise ValueError("weight 0 T(Q) would leave the integers")
    out = [int(c[Q * n]) + (scale * int(c[n // Q]) if n % Q == 0 else 0) for n in range(H + 1)]
    if not f.ring.is_exact:
        out = np.array([x % f.ring.m for x in out], dtype=np.int64)
    return _build(f, out)


def hecke_T2(f, Q, w):
    """Half-integral-weight T(Q^2).

    b(n) = a(Q^2 n) + ((-1)^lam n / Q) chi(Q) Q^(lam-1) a(n)
           + chi(Q^2) Q^(2 lam - 1) a(n / Q^2)
    """
    if Q % 2 == 0 or not is_prime(Q):
        raise ValueError(f"T(Q^2) needs an odd prime Q, got {Q}")
    if w.level4N % Q == 0:
        raise ValueError(f"Q={Q} divides the level {w.level4N}")
    c, top = f.aligned()
    H = top // (Q * Q)
    lam = w.lam
    chi_q = w.char(Q)
    sgn = -1 if lam % 2 else 1
    mid = chi_q * Q ** (lam - 1)
    last = w.char(Q * Q) * Q ** (2 * lam - 1)
    QQ = Q * Q
    if f.ring.is_exact:
        out = []
        for n in range(H + 1):
            v = c[QQ * n]
            k = 0 if n % Q == 0 else _legendre_odd(sgn * n, Q)
            if k:
                v += k * mid * c[n]
            if n % QQ == 0:
                v += last * c[n // QQ]
            out.append(v)
        return _build(f, out)
    m = f.ring.m
    a = c.astype(np.int64)
    n = np.arange(H + 1)
    out = a[: QQ * H + 1 : QQ].copy()
    # Legendre symbols (sgn * n / Q) for the residues mod Q
    table = np.array([_legendre_odd(sgn * r, Q) for r in range(Q)], dtype=np.int64)
    out += table[n % Q] * (mid % m) * a[: H + 1] % m
    out[::QQ] += (last % m) * a[: H // QQ + 1]
    return _build(f, out % m)


def _legendre_odd(x, Q):
    x %= Q
    if x == 0:
        return 0
    return 1 if pow(x, (Q - 1) // 2, Q) == 1 else -1


def eigencheck(f, Q, w, bound):
    """Eigenvalue mu with f|T(Q^2) = mu f through ``bound``, or None.

    Raises HorizonError when f is not known to Q^2 * bound, and ValueError
    for a series that vanishes through ``bound``.
    """
    if f.horizon < Q * Q * bound:
        raise HorizonError(f"need coefficients to {Q * Q * bound}, series valid to {f.horizon}")
    g = hecke_T2(f, Q, w)
    lead = next((n for n in range(bound + 1) if f[n] != 0), None)
    if lead is None:
        raise ValueError("zero series through the bound has no eigenvalue")
    if f.ring.is_exact:
        mu = Fraction(g[lead], f[lead])
        if mu.denominator == 1:
            mu = mu.numerator
        ok = all(g[n] == mu * f[n] for n in range(bound + 1))
    else:
        m = f.ring.m
        mu = g[lead] * pow(f[lead], -1, m) % m
        ok = all(g[n] == mu * f[n] % m for n in range(bound + 1))
    return mu if ok else None
