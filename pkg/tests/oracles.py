"""Slow, obviously-correct reference computations used only by the tests."""

from itertools import product
from math import isqrt


def partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def overpartitions(n):
    # each distinct part may carry an overline on its first occurrence
    return sum(2 ** len(set(p)) for p in partitions(n))


def overpartition_counts(N):
    """[pbar(0..N)] by choosing a multiplicity for each part size.

    A part size used j >= 1 times contributes a factor 2 (first copy
    overlined or not), matching the enumeration definition above.
    """
    ways = [1] + [0] * N
    for k in range(1, N + 1):
        new = ways[:]
        for total in range(N + 1):
            if ways[total]:
                for used in range(k, N - total + 1, k):
                    new[total + used] += 2 * ways[total]
        ways = new
    return ways


def poly_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def naive_pochhammer_product(exps, n):
    """prod (q^d; q^d)^r through n coefficients, factor by factor."""
    out = [1] + [0] * (n - 1)
    for d, r in exps.items():
        for k in range(d, n, d):
            if r > 0:
                factor = [0] * n
                factor[0] = 1
                factor[k] = -1
                for _ in range(r):
                    out = poly_mul(out, factor, n)
            else:
                geo = [1 if i % k == 0 else 0 for i in range(n)]
                for _ in range(-r):
                    out = poly_mul(out, geo, n)
    return out


def sigma(n, k=1):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def squares_count(n, s):
    r = isqrt(n)
    return sum(1 for xs in product(range(-r, r + 1), repeat=s) if sum(x * x for x in xs) == n)


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def naive_T2(c, Q, lam, chi=lambda n: 1):
    """Half-integral T(Q^2) on a coefficient list indexed from q^0."""
    sgn = (-1) ** lam
    out = []
    for n in range((len(c) - 1) // (Q * Q) + 1):
        v = c[Q * Q * n] + legendre(sgn * n, Q) * chi(Q) * Q ** (lam - 1) * c[n]
        if n % (Q * Q) == 0:
            v += chi(Q * Q) * Q ** (2 * lam - 1) * c[n // (Q * Q)]
        out.append(v)
    return out
