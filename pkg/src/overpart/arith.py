"""Number-theoretic primitives and brute-force oracles.

The oracles (``r5``, ``r_st``, ``triangle_reps4``) are deliberately naive
nested loops. They never touch the series code, so tests can use them as
independent ground truth for the q-expansion routines.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt

__all__ = [
    "QuadChar",
    "kronecker",
    "is_prime",
    "factor",
    "divisors",
    "sigma_k",
    "sigma_table",
    "is_squarefree",
    "r5",
    "r5_table",
    "r_st",
    "triangle_reps4",
    "divisor_identity_check",
    "phi14_closed_form",
]


def kronecker(a, n):
    """Kronecker symbol (a/n), extended to every integer n."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out powers of two from n
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class QuadChar:
    """Real quadratic character n -> (D/n)."""

    D: int = 1

    def __call__(self, n):
        return kronecker(self.D, n)

    @property
    def is_trivial(self):
        return self.D == 1

    def __str__(self):
        return f"({self.D}/.)"


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    # deterministic Miller-Rabin for n < 3.3e24
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor(n):
    """Trial-division factorization, returned as {prime: exponent}."""
    n = int(n)
    if n < 1:
        raise ValueError(f"factor() needs a positive integer, got {n}")
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    divs = [1]
    for p, e in factor(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def is_squarefree(n):
    return all(e == 1 for e in factor(n).values())


def sigma_k(n, k=1):
    """Sum of the k-th powers of the divisors of n."""
    if n < 1:
        raise ValueError(f"sigma_k needs n >= 1, got {n}")
    total = 1
    for p, e in factor(n).items():
        pk = p**k
        total *= sum(pk**i for i in range(e + 1))
    return total


def sigma_table(N, k=1):
    """[sigma_k(0)=0, sigma_k(1), ..., sigma_k(N)] by a divisor sieve."""
    table = [0] * (N + 1)
    for d in range(1, N + 1):
        dk = d**k
        for mult in range(d, N + 1, d):
            table[mult] += dk
    return table


def _square_counts(n, parity=None):
    """Map value x*x -> number of signed x with that square, x*x <= n."""
    counts = {}
    for x in range(-isqrt(n), isqrt(n) + 1):
        if parity is not None and x % 2 != parity:
            continue
        counts[x * x] = counts.get(x * x, 0) + 1
    return counts


def _sum_table(n, slots):
    # ways[x] = ordered choices, one square per slot, summing to x <= n
    ways = [1] + [0] * n
    for slot in slots:
        new = [0] * (n + 1)
        for total, w in enumerate(ways):
            if w:
                for sq, mult in slot.items():
                    if total + sq <= n:
                        new[total + sq] += w * mult
        ways = new
    return ways


def _count_sums(n, slots):
    return _sum_table(n, slots)[n]


def r5_table(N):
    """[r5(0), ..., r5(N)] by counting signed square 5-tuples."""
    return _sum_table(N, [_square_counts(N)] * 5)


def r5(n):
    """Number of signed ordered 5-tuples with x1^2 + ... + x5^2 = n."""
    if n < 0:
        return 0
    return _count_sums(n, [_square_counts(n)] * 5)


def r_st(s, t, n):
    """Representations of n as s even squares followed by t odd squares,
    counted over all orderings of the even/odd slots."""
    if n < 0:
        return 0
    even = _square_counts(n, 0)
    odd = _square_counts(n, 1)
    # the fixed slot pattern, times the number of ways to place the even slots
    return comb(s + t, s) * _count_sums(n, [even] * s + [odd] * t)


def triangle_reps4(n):
    """Ordered 4-tuples of triangular numbers summing to n."""
    tri = []
    k = 0
    while k * (k + 1) // 2 <= n:
        tri.append(k * (k + 1) // 2)
        k += 1
    count = 0
    for a in tri:
        for b in tri:
            if a + b > n:
                break
            for c in tri:
                if a + b + c > n:
                    break
                if n - a - b - c in tri:
                    count += 1
    return count


def divisor_identity_check(n):
    """Both sides of sum_i sigma(2i-1) sigma(2n-2i+1) = sum_{d|n, n/d odd} d^3."""
    if n < 1:
        raise ValueError(f"divisor identity needs n >= 1, got {n}")
    lhs = sum(sigma_k(2 * i - 1) * sigma_k(2 * n - 2 * i + 1) for i in range(1, n + 1))
    rhs = sum(d**3 for d in divisors(n) if (n // d) % 2 == 1)
    return lhs, rhs


def phi14_closed_form(Q):
    """Coefficient of q^(Q^2) in phi_{1,4}, i.e. 16(Q^3 - Q + 1)."""
    if Q % 2 == 0 or not is_prime(Q):
        raise ValueError(f"Q must be an odd prime, got {Q}")
    return 16 * (Q**3 - Q + 1)


def frac_or_int(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def coprime(a, b):
    return gcd(a, b) == 1
