"""Shimura lift coefficients and decomposition in explicit finite bases."""

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import QuadChar, divisors, factor, is_squarefree, kronecker
from .heckeops import HalfIntWeight, hecke_T2, op_U, op_V
from .qseries import EXACT, HorizonError, QSeries, Ring, as_ring, eta_quotient_series, phi_st, theta_phi
from .reports import CongruenceReport

__all__ = [
    "LiftParams",
    "LIFT_SOURCE",
    "BETA_BASIS",
    "LIFT_VECTOR",
    "shimura_A",
    "lift_series",
    "restrict_residues",
    "restrict_coprime_uv",
    "basis_decompose",
    "beta_basis_series",
    "mod3_relation_check",
    "cooper_matrix",
    "cooper_consistency",
]

# eta(z)^6 eta(2z)^9, weight 15/2 on Gamma_0(16)
LIFT_SOURCE = {1: 6, 2: 9}

# eleven eta-quotients spanning weight-14 cusp forms on Gamma_0(8)
BETA_BASIS = (
    {1: 32, 2: -4},
    {4: 44, 8: -16},
    {2: 20, 4: 8},
    {2: 8, 4: 20},
    {2: -4, 4: 32},
    {4: 20, 8: 8},
    {2: 4, 4: 8, 8: 16},
    {2: -8, 4: 20, 8: 16},
    {2: -4, 4: 8, 8: 24},
    {4: -4, 8: 32},
    {2: 4, 4: -16, 8: 40},
)

LIFT_VECTOR = (1, 96, -2304, 0, -65536, -24576, 0, 393216, 0, -6291456, 0)


@dataclass(frozen=True)
class LiftParams:
    """Source form data for the t-th lift: weight lam + 1/2, character char."""

    t: int = 1
    lam: int = 7
    char: QuadChar = field(default_factory=lambda: QuadChar(4))
    level4N: int = 16

    def __post_init__(self):
        if self.t < 1 or not is_squarefree(self.t):
            raise ValueError(f"t must be squarefree and positive, got {self.t}")
        if self.lam < 1:
            raise ValueError(f"lambda must be >= 1, got {self.lam}")

    def psi(self, n):
        """psi_t(n) = chi(n) (-1/n)^lam (t/n)."""
        return self.char(n) * kronecker(-1, n) ** self.lam * kronecker(self.t, n)


def _accessor(b):
    if isinstance(b, QSeries):
        ring = b.ring

        def get(k):
            if k > b.horizon:
                raise HorizonError(f"need b({k}), source valid to {b.horizon}")
            return b[k]

        return get, ring
    return b, EXACT


def shimura_A(b, p, n):
    """A_t(n) = sum_{d | n} psi_t(d) d^(lam-1) b(t n^2 / d^2).

    ``b`` is a QSeries or a callable k -> b(k). For a residue series the
    result is reduced in the same ring.
    """
    if n < 1:
        raise ValueError(f"A_t(n) needs n >= 1, got {n}")
    get, ring = _accessor(b)
    if p.t * n * n > getattr(b, "horizon", p.t * n * n):
        raise HorizonError(f"need b to {p.t * n * n}, source valid to {b.horizon}")
    total = 0
    for d in divisors(n):
        s = p.psi(d)
        if s:
            e = n // d
            total += s * d ** (p.lam - 1) * get(p.t * e * e)
    return total if ring.is_exact else total % ring.m


def lift_series(bound, ring=None, params=None, source=None):
    """sum_{n=1}^{bound} A_t(n) q^n as a QSeries (zero constant term)."""
    params = params or LiftParams()
    ring = as_ring(ring)
    b = source if source is not None else eta_quotient_series(LIFT_SOURCE, ring=ring, upto=params.t * bound * bound)
    vals = [0] + [shimura_A(b, params, n) for n in range(1, bound + 1)]
    return QSeries(vals, 0, ring)


def restrict_residues(f, allowed, M):
    """Zero every coefficient at q^n with n mod M outside ``allowed``."""
    keep = {a % M for a in allowed}
    c, top = f.aligned()
    if f.ring.is_exact:
        vals = [x if i % M in keep else 0 for i, x in enumerate(c)]
    else:
        mask = np.isin(np.arange(top + 1) % M, sorted(keep))
        vals = np.where(mask, c, 0)
    return QSeries._raw(vals, 0, f.ring)


def restrict_coprime_uv(f, M):
    """Keep n coprime to M by inclusion-exclusion over U(d) V(d), d | rad(M)."""
    if M < 1:
        raise ValueError(f"M must be positive, got {M}")
    primes = list(factor(M))
    rad = 1
    for p in primes:
        rad *= p
    out = f
    for d in divisors(rad):
        if d == 1:
            continue
        mu = (-1) ** sum(1 for p in primes if d % p == 0)
        term = op_V(op_U(f, d), d)
        out = out + term if mu > 0 else out - term
    return out


def _field_ops(ring):
    if ring.is_exact:
        return (lambda x: Fraction(x)), (lambda x: 1 / x)
    m = ring.m
    return (lambda x: int(x) % m), (lambda x: pow(int(x), -1, m))


def basis_decompose(f, basis, bound):
    """Coefficients c with f = sum c_i basis_i through q^bound, or None.

    Exact rational elimination (or modular, for residue series). Raises
    ValueError when the truncated basis is linearly dependent.
    """
    ring = f.ring
    for g in basis:
        if g.ring != ring:
            raise ValueError("basis and target live in different rings")
    for name, s in [("target", f)] + [(f"basis[{i}]", g) for i, g in enumerate(basis)]:
        if s.horizon < bound:
            raise HorizonError(f"{name} is valid to {s.horizon}, below {bound}")
    lift, inv = _field_ops(ring)
    k = len(basis)
    mod = (lambda x: x) if ring.is_exact else (lambda x: x % ring.m)

    # rows: (coefficient vector to bound, combination of original basis elements)
    rows = []
    for i, g in enumerate(basis):
        vec = [lift(g[n]) for n in range(bound + 1)]
        comb = [lift(1 if j == i else 0) for j in range(k)]
        for piv, pvec, pcomb in rows:
            x = vec[piv]
            if x:
                vec = [mod(a - x * b) for a, b in zip(vec, pvec)]
                comb = [mod(a - x * b) for a, b in zip(comb, pcomb)]
        piv = next((n for n, x in enumerate(vec) if x), None)
        if piv is None:
            raise ValueError(f"degenerate basis: element {i} is dependent through q^{bound}")
        s = inv(vec[piv])
        vec = [mod(a * s) for a in vec]
        comb = [mod(a * s) for a in comb]
        # keep earlier rows reduced at the new pivot
        reduced = []
        for opiv, ovec, ocomb in rows:
            x = ovec[piv]
            if x:
                ovec = [mod(a - x * b) for a, b in zip(ovec, vec)]
                ocomb = [mod(a - x * b) for a, b in zip(ocomb, comb)]
            reduced.append((opiv, ovec, ocomb))
        rows = reduced + [(piv, vec, comb)]

    target = [lift(f[n]) for n in range(bound + 1)]
    coeffs = [lift(0)] * k
    for piv, vec, comb in rows:
        x = target[piv]
        if x:
            target = [mod(a - x * b) for a, b in zip(target, vec)]
            coeffs = [mod(a + x * b) for a, b in zip(coeffs, comb)]
    if any(target):
        return None
    if ring.is_exact:
        return [c.numerator if c.denominator == 1 else c for c in coeffs]
    return [int(c) for c in coeffs]


def beta_basis_series(bound, ring=None):
    return [eta_quotient_series(e, ring=ring, upto=bound) for e in BETA_BASIS]


def mod3_relation_check(bound=60):
    """Lift restricted to n = 1, 5 (mod 6) against eta(6z)^4, mod 3."""
    t0 = time.perf_counter()
    ring = Ring.mod(3)
    lift = lift_series(bound, ring)
    lhs = restrict_residues(lift, {1, 5}, 6)
    rhs = eta_quotient_series({6: 4}, ring=ring, upto=bound)
    rep = CongruenceReport(claim_id="mod3-relation", modulus=3, n_range=(0, bound), params={"bound": bound})
    for n in range(bound + 1):
        rep.tested_count += 1
        d = (lhs[n] - rhs[n]) % 3
        if d:
            rep.add_failure(n, d)
    rep.wall_time_ms = int((time.perf_counter() - t0) * 1000)
    return rep


def cooper_matrix(Q, bound=20):
    """T(Q^2) on (phi^9, phi_{5,4}, phi_{1,8}) in that basis, weight 9/2.

    Row i holds the coordinates of basis_i | T(Q^2).
    """
    upto = Q * Q * bound
    basis = [theta_phi(ring=None, upto=upto) ** 9, phi_st(5, 4, upto=upto), phi_st(1, 8, upto=upto)]
    w = HalfIntWeight(4)
    rows = []
    for g in basis:
        image = hecke_T2(g, Q, w)
        short = [b.truncate_to(bound) for b in basis]
        coords = basis_decompose(image.truncate_to(bound), short, bound)
        if coords is None:
            raise ArithmeticError(f"T({Q}^2) image leaves the span through q^{bound}")
        rows.append([Fraction(c) for c in coords])
    return rows


def cooper_consistency(Q, bound=20):
    """Check the triangular shape and that a single beta fits all entries.

    Returns (ok, beta, matrix). beta is solved from the middle diagonal
    entry; every other entry must then match the closed form.
    """
    M = cooper_matrix(Q, bound)
    alpha = Q ** 7 + 1
    beta = 17 * M[1][1] - 16 * alpha
    expected = [
        [alpha, Fraction(-2 * alpha + 2 * beta, 17), Fraction(2 * alpha - 2 * beta, 17)],
        [0, Fraction(16 * alpha + beta, 17), Fraction(alpha - beta, 17)],
        [0, Fraction(16 * alpha - 16 * beta, 17), Fraction(alpha + 16 * beta, 17)],
    ]
    ok = all(M[i][j] == expected[i][j] for i in range(3) for j in range(3))
    return ok, beta, M
