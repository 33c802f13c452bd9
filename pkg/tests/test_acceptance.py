"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line. Run directly with
``python tests/test_acceptance.py [--long]`` for just the summary lines.
"""

import sys
import time
from math import gcd, isqrt

import numpy as np
import pytest

import oracles
from overpart.arith import kronecker, r5_table
from overpart.etaquot import EtaQuotient, martin_orders, sturm_bound
from overpart.heckeops import HalfIntWeight, eigencheck, op_U, op_V, sign_twist
from overpart.qseries import QSeries, Ring, overpartition_series, phi_st, read_cache, theta_phi, write_cache
from overpart.shimura import restrict_coprime_uv, restrict_residues
from overpart import verify


def _line(number, title, ok, detail, elapsed):
    status = "PASS" if ok else "FAIL"
    return f"{status} criterion {number:>2}: {title} ({detail}; {elapsed:.2f}s)"


def _emit(capsys, line):
    if capsys is None:
        print(line)
        return
    with capsys.disabled():
        print("\n" + line)


def criterion_1():
    t0 = time.perf_counter()
    pbar = overpartition_series(50)
    elapsed = time.perf_counter() - t0
    want = [oracles.overpartitions(n) for n in range(50)]
    ok = pbar[3] == 8 and pbar.coefficients() == want and elapsed < 1
    return ok, f"pbar(3)=8, first 50 values vs enumeration, series built in {elapsed:.3f}s"


def criterion_2():
    t0 = time.perf_counter()
    d = verify.verify_identity("dissections", 300)
    c = verify.verify_identity("mod4-corollary", 1000)
    ok = d.passed and c.passed and time.perf_counter() - t0 < 1
    return ok, f"dissections n<=300 failures={len(d.failures)}, mod 4 n<=1000 failures={len(c.failures)}"


def criterion_3():
    r = verify.verify_identity("ahs", 300)
    return r.passed, f"both identities to q^300, failures={len(r.failures)}"


def criterion_4():
    r = verify.verify_identity("r5-relation", 50)
    # independent recheck: r5 as the 5-fold self-convolution of the square indicator
    top = 49 * 50
    squares = [(x * x, 1 if x == 0 else 2) for x in range(isqrt(top) + 1)]
    table = [1] + [0] * top
    for _ in range(5):
        nxt = [0] * (top + 1)
        for i, c in enumerate(table):
            if c:
                for s, w in squares:
                    if i + s > top:
                        break
                    nxt[i + s] += w * c
        table = nxt
    ok = r.passed and table[9] == 250
    ok &= all(table[n] == oracles.squares_count(n, 5) for n in range(13))
    ok &= table == r5_table(top)[: top + 1]
    for Q in (3, 5, 7):
        for n in range(1, 51):
            last = Q**3 * table[n // (Q * Q)] if n % (Q * Q) == 0 else 0
            ok &= table[Q * Q * n] + Q * kronecker(n, Q) * table[n] + last == (Q**3 + 1) * table[n]
    return ok, "Q in {3,5,7}, n<=50, r5(9)=250, r5 from convolution oracle"


def criterion_5():
    t0 = time.perf_counter()
    reps = [verify.verify_identity(f"sturm-mod{m}") for m in (3, 7, 11)]
    elapsed = time.perf_counter() - t0
    bounds = (sturm_bound(89, 32), sturm_bound(28, 144), sturm_bound(109, 32))
    ok = all(r.passed for r in reps) and bounds == (178, 336, 218) and elapsed < 10
    ranges = ", ".join(f"mod {r.modulus} to n={r.n_range[1]}" for r in reps)
    return ok, f"{ranges}; Sturm bounds {bounds}"


def criterion_6():
    bound = 30
    phi = theta_phi(upto=25 * bound)
    f52 = phi**5 - phi_st(1, 4, upto=25 * bound).scale(2)
    f94 = phi**9 - phi_st(5, 4, upto=25 * bound).scale(2)
    ok = all(eigencheck(f52, Q, HalfIntWeight(2), bound) == Q**3 + 1 for Q in (3, 5))
    ok &= eigencheck(f94, 3, HalfIntWeight(4), bound) == 3**7 + 1
    c = verify.verify_identity("phi14-closed-form")
    d = verify.verify_identity("divisor-identity", 500)
    return ok and c.passed and d.passed, "eigenvalues Q^3+1, Q^7+1; phi_{1,4}(Q^2) closed form; divisor identity n<=500"


def criterion_7(long=False):
    lift = verify.verify_identity("lift-primes", 60)
    basis = verify.verify_identity("s14-basis", 30)
    rel = verify.verify_identity("mod3-relation", long=long)
    ok = lift.passed and basis.passed and rel.passed
    return ok, f"A_1 at primes <= 60, beta vector and mod-3 reduction, mod-3 relation to {rel.n_range[1]}"


def criterion_8():
    cusps = verify.verify_identity("cusp-orders")
    modular = verify.verify_identity("modularity")
    eta6 = martin_orders(EtaQuotient(36, {6: 4}))
    ok = cusps.passed and modular.passed and eta6.cuspidal
    return ok, f"{cusps.tested_count} cusp checks; division by eta^8(z)eta^8(2z) exact for m in 3, 7, 11"


def criterion_9():
    runs = [
        ("mod3-1", (5, 11), 200),
        ("mod3-2", (5,), 300),
        ("mod5", (19,), 100),
        ("mod7", (3, 5), 300),
        ("mod11", (43,), 6),
    ]
    reps = []
    for name, Qs, n_max in runs:
        reps += verify.verify_theorem(name, Qs, n_max)
    ok = all(r.passed and r.tested_count > 0 for r in reps)
    return ok, ", ".join(f"{r.claim_id}:{r.tested_count}" for r in reps)


def criterion_10():
    rep = verify.verify_theorem("mod13-counterexample")[0]
    return rep.passed, f"pbar(13*103^3*3) mod 13 = {rep.params['residue']}"


def criterion_11():
    rng = np.random.default_rng(20240611)
    ok = True
    for _ in range(100):
        c = rng.integers(-1000, 1000, size=int(rng.integers(1, 90))).tolist()
        f = QSeries(c)
        j, k = (int(x) for x in rng.integers(1, 7, size=2))
        ok &= op_U(op_V(f, j), j) == f
        a, b = op_U(op_U(f, j), k), op_U(f, j * k)
        top = min(a.horizon, b.horizon)
        ok &= a[0 : top + 1] == b[0 : top + 1]
        a, b = sign_twist(f), op_V(op_U(f, 2), 2).scale(2) - f
        top = min(a.horizon, b.horizon)
        ok &= a[0 : top + 1] == b[0 : top + 1]
        M = int(rng.choice([2, 3, 6, 10, 12, 30]))
        units = {r for r in range(M) if gcd(r, M) == 1}
        a, b = restrict_residues(f, units, M), restrict_coprime_uv(f, M)
        top = min(a.horizon, b.horizon)
        ok &= a[0 : top + 1] == b[0 : top + 1]
    import os
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        for i in range(100):
            m = int(rng.choice([3, 7, 13, 251]))
            vals = rng.integers(0, m, size=int(rng.integers(1, 400)))
            f = QSeries(vals, int(rng.integers(-48, 48)), Ring.mod(m))
            p1, p2 = os.path.join(d, f"{i}a"), os.path.join(d, f"{i}b")
            write_cache(f, p1)
            write_cache(read_cache(p1), p2)
            with open(p1, "rb") as x, open(p2, "rb") as y:
                ok &= x.read() == y.read()
    return bool(ok), "U/V laws, sign twist, restriction paths, cache bytes; 100 seeded inputs each"


TITLES = {
    1: "overpartition basics",
    2: "mod-3 dissections and mod-4 corollary",
    3: "AHS identities",
    4: "r5 Hecke relation",
    5: "Sturm congruences mod 3, 7, 11",
    6: "eigenforms, phi_{1,4} closed form, divisor identity",
    7: "Shimura lift module",
    8: "cusp orders and modularity chain",
    9: "congruence families",
    10: "mod-13 counterexample",
    11: "property suites",
}


def run(number, long=False):
    fn = globals()[f"criterion_{number}"]
    t0 = time.perf_counter()
    ok, detail = fn(long) if number == 7 else fn()
    return ok, _line(number, TITLES[number], ok, detail, time.perf_counter() - t0)


@pytest.mark.parametrize("number", [1, 2, 3, 4, 5, 6, 7, 8, 9, 11])
def test_criterion(number, capsys, request):
    ok, line = run(number, long=request.config.getoption("--long"))
    _emit(capsys, line)
    assert ok, line


@pytest.mark.long
def test_criterion_10(capsys):
    ok, line = run(10)
    _emit(capsys, line)
    assert ok, line


if __name__ == "__main__":
    use_long = "--long" in sys.argv
    results = []
    for n in TITLES:
        if n == 10 and not use_long:
            print("SKIP criterion 10: mod-13 counterexample (pass --long)")
            continue
        ok, line = run(n, long=use_long)
        print(line)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
