"""Runners behind the CLI: congruence families, identities, and the hunt."""

import logging
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import arith
from .arith import QuadChar, is_prime, kronecker
from .etaquot import EtaQuotient, congruence_to_bound, gh_check, martin_orders, sturm_bound
from .heckeops import HalfIntWeight, IntWeight, eigencheck, hecke_T, hecke_T2, op_U, op_V, sign_twist
from .qseries import (
    QSeries,
    Ring,
    ahs_generators,
    eta_quotient_series,
    overpartition_series,
    phi_st,
    pochhammer_product,
    read_cache,
    series_div_exact,
    theta_phi,
    write_cache,
)
from .reports import CongruenceReport, HuntRecord
from . import shimura

log = logging.getLogger(__name__)

__all__ = [
    "THEOREMS",
    "IDENTITIES",
    "LONG_ONLY",
    "pbar_residues",
    "verify_theorem",
    "verify_identity",
    "hunt",
    "hunt_weight",
]

# coefficient counts above this are refused by the hunt (uint8 residues)
HUNT_LIMIT = 60_000_000


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = int((time.perf_counter() - self.t0) * 1000)


# -- overpartition residues with an on-disk cache ---------------------------


def _cache_path(cache_dir, m):
    return os.path.join(cache_dir, f"pbar-mod{m}.qser")


def pbar_residues(m, upto, cache_dir=None):
    """pbar(n) mod m for 0 <= n <= upto, reusing a cached expansion if long enough."""
    ring = Ring.mod(m)
    path = _cache_path(cache_dir, m) if cache_dir else None
    if path and os.path.exists(path):
        try:
            cached = read_cache(path)
        except ValueError as exc:
            log.warning("ignoring unreadable cache %s: %s", path, exc)
        else:
            if cached.ring == ring and cached.offset24 == 0 and cached.horizon >= upto:
                return cached
    series = overpartition_series(upto=upto, ring=ring)
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        write_cache(series, path)
    return series


# -- congruence families -----------------------------------------------------


@dataclass(frozen=True)
class Family:
    m: int
    multiplier: int
    q_rule: str
    q_ok: object
    default_Q: tuple
    default_n_max: int
    n_rule: str = ""
    n_ok: object = None


THEOREMS = {
    "mod3-1": Family(3, 3, "Q = 5 (mod 6)", lambda Q: Q % 6 == 5, (5, 11), 200),
    "mod3-2": Family(3, 1, "Q = 5 (mod 6)", lambda Q: Q % 6 == 5, (5,), 300, "n = 2 (mod 3)", lambda n: n % 3 == 2),
    "mod5": Family(5, 5, "Q = 4 (mod 5)", lambda Q: Q % 5 == 4, (19,), 100),
    "mod7": Family(7, 7, "Q = 3, 5, 6 (mod 7)", lambda Q: Q % 7 in (3, 5, 6), (3, 5), 300),
    "mod11": Family(11, 11, "Q = 10 (mod 11)", lambda Q: Q % 11 == 10, (43,), 6),
}

COUNTEREXAMPLE = {"m": 13, "Q": 103, "n": 3, "expected": 12}
LONG_ONLY = {"mod13-counterexample"}


def _check_Q(name, fam, Q):
    if Q < 3 or not is_prime(Q):
        raise ValueError(f"{name}: Q must be an odd prime, got {Q}")
    if not fam.q_ok(Q):
        raise ValueError(f"{name}: Q={Q} violates the family condition {fam.q_rule}")


def verify_theorem(name, Qs=None, n_max=None, cache_dir=None):
    """Check one congruence family; one report per Q."""
    if name == "mod13-counterexample":
        return [_counterexample(cache_dir)]
    if name not in THEOREMS:
        raise ValueError(f"unknown theorem {name!r}; choose from {sorted(THEOREMS) + sorted(LONG_ONLY)}")
    fam = THEOREMS[name]
    Qs = tuple(Qs) if Qs else fam.default_Q
    n_max = fam.default_n_max if n_max is None else int(n_max)
    if n_max < 1:
        raise ValueError("n-max must be >= 1")
    for Q in Qs:
        _check_Q(name, fam, Q)
    reports = []
    for Q in Qs:
        with _Timer() as t:
            step = fam.multiplier * Q**3
            pbar = pbar_residues(fam.m, step * n_max, cache_dir)
            skipped = [f"gcd(n, {Q}) > 1"]
            if fam.n_rule:
                skipped.append(f"n outside {fam.n_rule}")
            rep = CongruenceReport(
                claim_id=f"{name}:Q={Q}",
                modulus=fam.m,
                q_prime=Q,
                n_range=(1, n_max),
                params={"family": name, "index": f"{fam.multiplier}*Q^3*n", "Q": Q},
                skipped="; ".join(skipped),
            )
            for n in range(1, n_max + 1):
                if gcd(n, Q) != 1 or (fam.n_ok and not fam.n_ok(n)):
                    continue
                rep.tested_count += 1
                r = int(pbar[step * n])
                if r:
                    rep.add_failure(n, r)
        rep.wall_time_ms = t.ms
        reports.append(rep)
    return reports


def _counterexample(cache_dir):
    m, Q, n, expected = (COUNTEREXAMPLE[k] for k in ("m", "Q", "n", "expected"))
    with _Timer() as t:
        index = m * Q**3 * n
        pbar = pbar_residues(m, index, cache_dir)
        r = int(pbar[index])
        rep = CongruenceReport(
            claim_id="mod13-counterexample",
            modulus=m,
            q_prime=Q,
            n_range=(n, n),
            params={"index": index, "expected_residue": expected, "residue": r},
            tested_count=1,
        )
        if r != expected:
            rep.add_failure(n, r)
    rep.wall_time_ms = t.ms
    return rep


# -- identities --------------------------------------------------------------


def _report(claim_id, modulus, bound, **params):
    return CongruenceReport(claim_id=claim_id, modulus=modulus, n_range=(0, bound), params=params)


def _compare(rep, lhs, rhs, bound, start=0, key=None):
    m = rep.modulus
    for n in range(start, bound + 1):
        rep.tested_count += 1
        d = lhs[n] - rhs[n]
        if m:
            d %= m
        if d:
            rep.add_failure(n if key is None else key(n), d)


def _pbar_exact(upto):
    return overpartition_series(upto=upto)


def _dissections(bound):
    rep = _report("dissections", 0, bound)
    pbar = _pbar_exact(3 * bound + 2)
    c, _ = pbar.aligned()
    pieces = [
        ({2: 4, 3: 6, 1: -8, 6: -3}, 1),
        ({2: 3, 3: 3, 1: -7}, 2),
        ({2: 2, 6: 3, 1: -6}, 4),
    ]
    for r, (exps, k) in enumerate(pieces):
        rhs = pochhammer_product(exps, bound + 1).scale(k)
        lhs = QSeries(c[r::3][: bound + 1])
        _compare(rep, lhs, rhs, bound, key=lambda n, r=r: 3 * n + r)
    return rep


def _mod4_corollary(bound):
    rep = _report("mod4-corollary", 4, bound)
    pbar = _pbar_exact(3 * bound + 2)
    for n in range(bound + 1):
        rep.tested_count += 1
        v = pbar[3 * n + 2] % 4
        if v:
            rep.add_failure(n, v)
    return rep


def _ahs(bound):
    rep = _report("ahs", 0, bound)
    a, b = ahs_generators(bound // 3 + 2)
    phim = theta_phi(upto=bound, sign=-1)
    first = op_V(a, 3) - op_V(b, 3).shift(24).scale(2)
    _compare(rep, phim, first, bound)
    a, b = ahs_generators(bound + 1)
    lhs = a**3 - (b**3).shift(24).scale(8)
    rhs = series_div_exact(phim**4, op_V(phim, 3))
    _compare(rep, lhs, rhs, bound)
    return rep


def _r5_relation(bound):
    Qs = (3, 5, 7)
    rep = _report("r5-relation", 0, bound, Q=list(Qs), r5_9=0)
    table = arith.r5_table(max(Qs) ** 2 * bound)
    rep.params["r5_9"] = table[9]
    for Q in Qs:
        for n in range(1, bound + 1):
            rep.tested_count += 1
            last = Q**3 * table[n // (Q * Q)] if n % (Q * Q) == 0 else 0
            lhs = table[Q * Q * n] + Q * kronecker(n, Q) * table[n] + last
            if lhs != (Q**3 + 1) * table[n]:
                rep.add_failure(n, {"Q": Q, "lhs": lhs, "rhs": (Q**3 + 1) * table[n]})
    rep.tested_count += 1
    if table[9] != 250:
        rep.add_failure(9, table[9])
    return rep


def _divisor_identity(bound):
    rep = _report("divisor-identity", 0, bound)
    for n in range(1, bound + 1):
        rep.tested_count += 1
        lhs, rhs = arith.divisor_identity_check(n)
        if lhs != rhs:
            rep.add_failure(n, lhs - rhs)
    return rep


def _phi14_closed_form(bound):
    Qs = tuple(Q for Q in (3, 5, 7, 11, 13, 17, 19, 23) if Q <= max(bound, 13))
    rep = _report("phi14-closed-form", 0, max(Qs) ** 2, Q=list(Qs))
    series = phi_st(1, 4, upto=max(Qs) ** 2)
    for Q in Qs:
        rep.tested_count += 1
        want = arith.phi14_closed_form(Q)
        got = series[Q * Q]
        # r_{1,4}(4 Q^2) counts one even and four odd squares: 5 phi_{1,4}(Q^2)
        oracle = arith.r_st(1, 4, 4 * Q * Q)
        if got != want or oracle != 5 * want:
            rep.add_failure(Q * Q, {"series": got, "oracle": oracle, "closed_form": want})
    return rep


def _eigenforms(bound):
    rep = _report("eigenforms", 0, bound)
    cases = []
    phi = theta_phi(upto=169 * bound)
    f52 = phi**5 - phi_st(1, 4, upto=169 * bound).scale(2)
    for Q in (3, 5, 7):
        cases.append((f"phi^5-2phi_14,Q={Q}", f52, Q, 2, Q**3 + 1))
        cases.append((f"phi_14,Q={Q}", phi_st(1, 4, upto=169 * bound), Q, 2, Q**3 + 1))
        cases.append((f"phi^5,Q={Q}", phi**5, Q, 2, Q**3 + 1))
    f94 = phi**9 - phi_st(5, 4, upto=169 * bound).scale(2)
    for Q in (3, 5, 13):
        cases.append((f"phi^9-2phi_54,Q={Q}", f94, Q, 4, Q**7 + 1))
    for label, f, Q, lam, want in cases:
        rep.tested_count += 1
        mu = eigencheck(f, Q, HalfIntWeight(lam), bound)
        rep.params[label] = None if mu is None else str(mu)
        if mu != want:
            rep.add_failure(Q, {"case": label, "mu": None if mu is None else str(mu), "expected": want})
    return rep


def _lift_primes(bound):
    """A_1(Q) = b(Q^2) + (-1/Q) Q^6 by the convolution and by eigencheck."""
    rep = _report("lift-primes", 0, bound)
    top = max(bound, 7)
    b = eta_quotient_series(shimura.LIFT_SOURCE, upto=max(top * top, 49 * 5))
    params = shimura.LiftParams()
    for Q in range(3, top + 1):
        if not is_prime(Q):
            continue
        rep.tested_count += 1
        closed = b[Q * Q] + kronecker(-1, Q) * Q**6
        A = shimura.shimura_A(b, params, Q)
        mu = eigencheck(b, Q, HalfIntWeight(7, QuadChar(4), 16), 5) if Q <= 7 else closed
        if not (A == closed == mu):
            rep.add_failure(Q, {"A": A, "closed": closed, "eigen": str(mu)})
    for n in range(5, bound + 1, 6):
        rep.tested_count += 1
        if shimura.shimura_A(b, params, n) % 3:
            rep.add_failure(n, shimura.shimura_A(b, params, n) % 3)
    return rep


_STURM = {
    # m: (twisted?, weight numerator, level, target builder)
    3: (False, 28, 144),
    7: (True, 89, 32),
    11: (True, 109, 32),
}


def _sturm_target(m, upto):
    phi = theta_phi(upto=upto, ring=Ring.mod(m))
    if m == 3:
        return sign_twist(phi**5)
    if m == 7:
        return phi**5 - phi_st(1, 4, upto=upto, ring=Ring.mod(m)).scale(2)
    return phi**9 - phi_st(5, 4, upto=upto, ring=Ring.mod(m)).scale(2)


def _sturm(m, default):
    def run(bound):
        bound = default if bound is None else bound
        twisted, k_num, level = _STURM[m]
        pbar = pbar_residues(m, m * bound)
        f = op_U(pbar, m)
        if twisted:
            f = sign_twist(f)
        rep = congruence_to_bound(f, _sturm_target(m, bound), m, bound, claim_id=f"sturm-mod{m}")
        rep.params["sturm_bound"] = sturm_bound(k_num, level)
        return rep

    return run


def _s14_basis(bound):
    rep = _report("s14-basis", 0, bound)
    lift = shimura.lift_series(bound)
    vec = shimura.basis_decompose(lift, shimura.beta_basis_series(bound), bound)
    rep.params["vector"] = vec
    if vec is None:
        rep.add_failure(0, "not in span")
        rep.tested_count += 1
        return rep
    for i, (got, want) in enumerate(zip(vec, shimura.LIFT_VECTOR), start=1):
        rep.tested_count += 1
        if got != want:
            rep.add_failure(i, {"got": str(got), "expected": want})
    want3 = [1, 0, 0, 0, 2] + [0] * 6
    for i, (got, want) in enumerate(zip(vec, want3), start=1):
        rep.tested_count += 1
        if Fraction(got) % 3 != want:
            rep.add_failure(i, {"mod3": str(Fraction(got) % 3), "expected": want})
    return rep


def _modularity_form(m):
    mp = m % 8
    a, b = 2 * mp - 8, 16 - mp
    return EtaQuotient(2, {1: a * m - 2, 2: b * m + 1}), mp


def _modularity(bound):
    rep = _report("modularity", 0, bound, m=[3, 7, 11])
    cusp = EtaQuotient(2, {1: 8, 2: 8})
    for m in (3, 7, 11):
        eq, mp = _modularity_form(m)
        gh = gh_check(eq)
        k = eq.weight_num // 2
        # form | T(m) needs the form through m * (bound + 1)
        form = eq.series(upto=m * (bound + 2))
        image = hecke_T(form, m, IntWeight(k, gh.character, 2))
        rep.tested_count += 1
        try:
            g = series_div_exact(image, cusp.series(upto=image.horizon))
        except ArithmeticError as exc:
            rep.add_failure(0, {"m": m, "division": str(exc)})
            continue
        ring = Ring.mod(m)
        rhs = (theta_phi(upto=bound, sign=-1, ring=ring) ** (8 - mp)) * g.reduce_mod(m)
        lhs = op_U(pbar_residues(m, m * bound), m)
        for n in range(bound + 1):
            rep.tested_count += 1
            d = (lhs[n] - rhs[n]) % m
            if d:
                rep.add_failure(n, {"m": m, "residue": d})
        rep.params[f"m={m}"] = {
            "exps": {str(d): r for d, r in eq.exps.items()},
            "weight": k,
            "certificate": gh.certificate,
        }
    return rep


def _cusp_orders(bound):
    rep = _report("cusp-orders", 0, 0)
    claims = [(EtaQuotient(2, {1: 8, 2: 8}), {1: 1, 2: 1})]
    for m in (3, 7, 11):
        eq, mp = _modularity_form(m)
        claims.append((eq, {2: m, 1: Fraction(m * mp - 1, 8)}))
    for eq, want in claims:
        orders = martin_orders(eq)
        for d, o in want.items():
            rep.tested_count += 1
            if orders.order_at(d) != o:
                rep.add_failure(d, {"eq": str(eq), "order": str(orders.order_at(d)), "expected": str(o)})
    eta6 = EtaQuotient(36, {6: 4})
    rep.tested_count += 1
    if not martin_orders(eta6).cuspidal:
        rep.add_failure(0, {"eq": str(eta6), "orders": martin_orders(eta6).to_json()})
    # leading exponent of the series equals the order at infinity
    for eq, _ in claims + [(eta6, None)]:
        rep.tested_count += 1
        s = eq.series(upto=eq.offset24 // 24 + 10)
        lead = s.normalize().offset24
        if Fraction(lead, 24) != martin_orders(eq).order_at(eq.levelN):
            rep.add_failure(0, {"eq": str(eq), "leading24": lead})
    return rep


def _cooper_matrix(bound):
    rep = _report("cooper-matrix", 0, bound)
    for Q in (3, 5, 7, 11, 13):
        rep.tested_count += 1
        ok, beta, _ = shimura.cooper_consistency(Q, bound)
        rep.params[f"beta(Q={Q})"] = str(beta)
        if not ok:
            rep.add_failure(Q, "matrix entries not consistent with a single beta")
    return rep


def _mod3_relation(bound):
    return shimura.mod3_relation_check(bound)


IDENTITIES = {
    "dissections": (_dissections, 300),
    "mod4-corollary": (_mod4_corollary, 1000),
    "ahs": (_ahs, 300),
    "r5-relation": (_r5_relation, 50),
    "divisor-identity": (_divisor_identity, 500),
    "phi14-closed-form": (_phi14_closed_form, 13),
    "eigenforms": (_eigenforms, 30),
    "lift-primes": (_lift_primes, 60),
    "sturm-mod3": (_sturm(3, 500), 500),
    "sturm-mod7": (_sturm(7, 178), 178),
    "sturm-mod11": (_sturm(11, 218), 218),
    "s14-basis": (_s14_basis, 30),
    "mod3-relation": (_mod3_relation, 60),
    "modularity": (_modularity, 60),
    "cusp-orders": (_cusp_orders, 0),
    "cooper-matrix": (_cooper_matrix, 20),
}

LONG_BOUNDS = {"mod3-relation": 336}


def verify_identity(name, bound=None, long=False):
    if name not in IDENTITIES:
        raise ValueError(f"unknown identity {name!r}; choose from {sorted(IDENTITIES)}")
    fn, default = IDENTITIES[name]
    if bound is None:
        bound = LONG_BOUNDS.get(name, default) if long else default
    with _Timer() as t:
        rep = fn(bound)
    rep.wall_time_ms = t.ms
    return rep


# -- hunt ----------------------------------------------------------------------


def hunt_weight(m):
    """lambda with sum pbar(mn) q^n of weight lambda + 1/2 on Gamma_0(16) mod m."""
    mp = m % 8
    return (8 + mp) * (m - 1) // 2 - 1


def hunt(m, Qs, bound, cache_dir=None, limit=HUNT_LIMIT):
    """Test sum pbar(mn) q^n | T(Q^2) = 0 (mod m) through q^bound for each Q."""
    if not is_prime(m) or m < 3:
        raise ValueError(f"m must be an odd prime, got {m}")
    if m >= 256:
        raise ValueError("hunt keeps one byte per residue; m must be < 256")
    lam = hunt_weight(m)
    w = HalfIntWeight(lam, QuadChar(1), 16)
    records = []
    for Q in Qs:
        if Q < 3 or not is_prime(Q) or Q == m:
            records.append(HuntRecord(m, Q, bound, "inconclusive", note="Q must be an odd prime different from m"))
            continue
        need = m * Q * Q * bound
        if need > limit:
            records.append(
                HuntRecord(m, Q, bound, "inconclusive", note=f"needs {need} coefficients, limit {limit}")
            )
            continue
        try:
            pbar = pbar_residues(m, need, cache_dir)
        except MemoryError:
            records.append(HuntRecord(m, Q, bound, "inconclusive", note="out of memory"))
            break
        image = hecke_T2(op_U(pbar, m).truncate_to(Q * Q * bound), Q, w)
        fail = next((n for n in range(bound + 1) if image[n]), None)
        records.append(
            HuntRecord(
                m, Q, bound, "pass" if fail is None else "fail", fail_n=fail, cached_horizon=pbar.horizon,
                note=f"lambda={lam}",
            )
        )
    return records
