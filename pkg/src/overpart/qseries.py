"""Truncated q-series over the integers or a prime residue ring.

A :class:`QSeries` stores coefficients on a unit-q grid starting at the
exponent ``offset24 / 24``; index ``i`` holds the coefficient of
``q^((offset24 + 24 i) / 24)``. Coefficients past ``valid_to`` are unknown
and reading them raises :class:`HorizonError`.

Exact coefficients are Python ints (tuples); residues mod m are read-only
numpy arrays, one byte per entry when m < 256. Residue products and
quotients by sparse series go through :mod:`overpart.kernels`.
"""

import os
import struct
import tempfile
from dataclasses import dataclass
from math import isqrt

import numpy as np

from . import kernels
from .arith import is_prime, sigma_table

__all__ = [
    "Ring",
    "EXACT",
    "QSeries",
    "HorizonError",
    "InexactDivisionError",
    "RingMismatchError",
    "series_mul",
    "series_inv",
    "series_pow",
    "series_div_exact",
    "reduce_mod",
    "eta_series",
    "pochhammer",
    "eta_quotient_series",
    "theta_phi",
    "theta_psi",
    "phi_st",
    "ahs_generators",
    "eisenstein",
    "overpartition_series",
    "write_cache",
    "read_cache",
]


class HorizonError(IndexError):
    """A coefficient beyond the validity horizon was requested."""


class InexactDivisionError(ArithmeticError):
    """series_div_exact left a nonzero remainder."""


class RingMismatchError(TypeError):
    pass


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: exact integers (``m is None``) or Z/mZ, m an odd prime."""

    m: int = None

    def __post_init__(self):
        if self.m is not None:
            m = int(self.m)
            if not (2 < m < 65536 and is_prime(m)):
                raise ValueError(f"residue ring needs an odd prime modulus below 2^16, got {m}")
            object.__setattr__(self, "m", m)

    @classmethod
    def exact(cls):
        return EXACT

    @classmethod
    def mod(cls, m):
        return cls(m)

    @property
    def is_exact(self):
        return self.m is None

    def is_unit(self, x):
        if self.m is None:
            return x in (1, -1)
        return x % self.m != 0

    def __str__(self):
        return "ZZ" if self.m is None else f"GF({self.m})"


EXACT = Ring()


def as_ring(ring):
    if ring is None:
        return EXACT
    if isinstance(ring, Ring):
        return ring
    return Ring(int(ring))


def _ensure_same_ring(a, b):
    if a.ring != b.ring:
        raise RingMismatchError(f"ring mismatch: {a.ring} vs {b.ring}")


def _terms_for(n_terms, upto, offset24):
    # translate an inclusive exponent bound into a coefficient count
    if upto is not None:
        if n_terms is not None:
            raise TypeError("give n_terms or upto, not both")
        return max(0, (24 * upto - offset24) // 24 + 1)
    if n_terms is None:
        raise TypeError("n_terms is required")
    return int(n_terms)


class QSeries:
    """Immutable truncated q-expansion."""

    __slots__ = ("offset24", "valid_to", "ring", "_c")

    def __init__(self, coeffs, offset24=0, ring=None, valid_to=None):
        ring = as_ring(ring)
        if ring.is_exact:
            c = tuple(int(x) for x in coeffs)
        else:
            if isinstance(coeffs, np.ndarray) and coeffs.dtype.kind in "iu":
                c = np.mod(coeffs.astype(np.int64), ring.m)
            else:
                c = np.array([int(x) % ring.m for x in coeffs], dtype=np.int64)
            c = np.ascontiguousarray(c, dtype=kernels.residue_dtype(ring.m))
        if valid_to is None:
            valid_to = len(c) - 1
        valid_to = int(valid_to)
        if valid_to >= len(c):
            raise ValueError(f"valid_to={valid_to} but only {len(c)} coefficients stored")
        c = c[: valid_to + 1]
        if not ring.is_exact:
            c.setflags(write=False)
        self.offset24 = int(offset24)
        self.valid_to = valid_to
        self.ring = ring
        self._c = c

    @classmethod
    def _raw(cls, c, offset24, ring):
        # trusted constructor: c already reduced and typed
        self = cls.__new__(cls)
        if not ring.is_exact:
            c = np.ascontiguousarray(c, dtype=kernels.residue_dtype(ring.m))
            c.setflags(write=False)
        else:
            c = tuple(c)
        self.offset24 = int(offset24)
        self.valid_to = len(c) - 1
        self.ring = ring
        self._c = c
        return self

    @classmethod
    def one(cls, n_terms, ring=None):
        return cls.monomial(0, n_terms, ring=ring)

    @classmethod
    def monomial(cls, exponent, n_terms, coeff=1, ring=None):
        c = [0] * n_terms
        if n_terms:
            c[0] = coeff
        return cls(c, offset24=24 * exponent, ring=ring)

    @classmethod
    def from_terms(cls, terms, upto, ring=None):
        """Integral series from {exponent: coeff}, valid through ``upto``."""
        c = [0] * (upto + 1)
        for e, v in terms.items():
            if 0 <= e <= upto:
                c[e] += v
        return cls(c, 0, ring)

    # -- inspection -------------------------------------------------------

    def __len__(self):
        return self.valid_to + 1

    @property
    def is_integral(self):
        return self.offset24 % 24 == 0

    @property
    def top24(self):
        """Largest valid exponent, in 24ths."""
        return self.offset24 + 24 * self.valid_to

    @property
    def horizon(self):
        """Largest exponent with a known coefficient (integral series)."""
        self._need_integral()
        return self.top24 // 24

    def _need_integral(self):
        if not self.is_integral:
            raise ValueError(f"series has fractional exponents (offset24={self.offset24})")

    def coeff(self, i):
        """Coefficient at storage index i."""
        if i < 0:
            raise IndexError(f"negative index {i}")
        if i > self.valid_to:
            raise HorizonError(f"index {i} beyond valid_to={self.valid_to}")
        return int(self._c[i])

    def __getitem__(self, n):
        """Coefficient of q^n (integral series); zero below the leading exponent."""
        if isinstance(n, slice):
            start = 0 if n.start is None else n.start
            stop = self.horizon + 1 if n.stop is None else n.stop
            return [self[k] for k in range(start, stop, n.step or 1)]
        self._need_integral()
        i = n - self.offset24 // 24
        if i < 0:
            return 0
        return self.coeff(i)

    def coefficients(self):
        return [int(x) for x in self._c]

    def values(self):
        """Raw storage: tuple of ints or read-only residue array."""
        return self._c

    def nonzero_terms(self):
        if self.ring.is_exact:
            return [(i, v) for i, v in enumerate(self._c) if v]
        nz = np.flatnonzero(self._c)
        return list(zip(nz.tolist(), self._c[nz].tolist()))

    def is_zero(self):
        if self.ring.is_exact:
            return not any(self._c)
        return not self._c.any()

    def __repr__(self):
        head = ", ".join(str(x) for x in self.coefficients()[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"QSeries([{head}{more}], offset24={self.offset24}, valid_to={self.valid_to}, ring={self.ring})"

    # -- shape ------------------------------------------------------------

    def normalize(self):
        """Absorb leading zero coefficients into offset24 (steps of 24)."""
        i = 0
        while i <= self.valid_to and self._c[i] == 0:
            i += 1
        if i == 0 or i > self.valid_to:
            return self
        return QSeries._raw(self._c[i:], self.offset24 + 24 * i, self.ring)

    def truncate(self, valid_to):
        """Keep storage indices 0..valid_to."""
        if valid_to > self.valid_to:
            raise HorizonError(f"cannot extend horizon from {self.valid_to} to {valid_to}")
        return QSeries._raw(self._c[: valid_to + 1], self.offset24, self.ring)

    def truncate_to(self, exponent):
        """Keep exponents up to ``exponent`` (integral series)."""
        self._need_integral()
        return self.truncate(exponent - self.offset24 // 24)

    def shift(self, exponent24):
        """Multiply by q^(exponent24/24)."""
        return QSeries._raw(self._c, self.offset24 + exponent24, self.ring)

    def aligned(self):
        """(values indexed by exponent from 0, top exponent) for integral series."""
        self._need_integral()
        off = self.offset24 // 24
        if off < 0:
            raise ValueError("negative exponents are not supported here")
        top = off + self.valid_to
        if self.ring.is_exact:
            return [0] * off + list(self._c), top
        pad = np.zeros(off, dtype=self._c.dtype)
        return np.concatenate([pad, self._c]), top

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.ring != other.ring or self.top24 != other.top24:
            return False
        a, b = self.normalize(), other.normalize()
        if a.is_zero() and b.is_zero():
            return True
        if a.offset24 != b.offset24:
            return False
        return a.coefficients() == b.coefficients()

    __hash__ = None

    def agrees_with(self, other, upto):
        """True when the two integral series match for every exponent <= upto."""
        _ensure_same_ring(self, other)
        return all(self[n] == other[n] for n in range(0, upto + 1))

    # -- arithmetic -------------------------------------------------------

    def _align_pair(self, other):
        _ensure_same_ring(self, other)
        if (self.offset24 - other.offset24) % 24:
            raise ValueError("offsets differ by a fractional exponent")
        off = min(self.offset24, other.offset24)
        top = min(self.top24, other.top24)
        if top < off:
            raise HorizonError("series have no common valid range")
        n = (top - off) // 24 + 1

        def spread(f):
            lead = (f.offset24 - off) // 24
            if self.ring.is_exact:
                body = list(f._c[: max(0, n - lead)])
                return [0] * lead + body + [0] * (n - lead - len(body))
            out = np.zeros(n, dtype=np.int64)
            body = f._c[: max(0, n - lead)]
            out[lead: lead + len(body)] = body
            return out

        return spread(self), spread(other), off

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, off = self._align_pair(other)
        if self.ring.is_exact:
            return QSeries._raw([x + y for x, y in zip(a, b)], off, self.ring)
        return QSeries._raw((a + b) % self.ring.m, off, self.ring)

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        if self.ring.is_exact:
            return QSeries._raw([-x for x in self._c], self.offset24, self.ring)
        return QSeries._raw((-self._c.astype(np.int64)) % self.ring.m, self.offset24, self.ring)

    def scale(self, k):
        k = int(k)
        if self.ring.is_exact:
            return QSeries._raw([k * x for x in self._c], self.offset24, self.ring)
        m = self.ring.m
        return QSeries._raw(self._c.astype(np.int64) * (k % m) % m, self.offset24, self.ring)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(other)
        if isinstance(other, QSeries):
            return series_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e):
        return series_pow(self, e)

    def reduce_mod(self, m):
        return reduce_mod(self, m)


# -- multiplication --------------------------------------------------------


def _sparse_limit(n):
    return 4 * isqrt(n) + 16


def _nnz(c):
    if isinstance(c, np.ndarray):
        return int(np.count_nonzero(c))
    return sum(1 for x in c if x)


def _sparse_pairs(c):
    if isinstance(c, np.ndarray):
        nz = np.flatnonzero(c)
        return nz.astype(np.int64), c[nz].astype(np.int64)
    idx = [i for i, x in enumerate(c) if x]
    return idx, [c[i] for i in idx]


def _exact_sparse_mul(dense, idx, val, n):
    out = [0] * n
    for s, v in zip(idx, val):
        if s >= n:
            break
        seg = dense[: n - s]
        if v == 1:
            out[s:] = [x + y for x, y in zip(out[s:], seg)]
        elif v == -1:
            out[s:] = [x - y for x, y in zip(out[s:], seg)]
        else:
            out[s:] = [x + v * y for x, y in zip(out[s:], seg)]
    return out


def _pack(vals, width):
    return int.from_bytes(b"".join(x.to_bytes(width, "little") for x in vals), "little")


def _unpack(value, count, width):
    raw = value.to_bytes(count * width, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(count)]


def _exact_dense_mul(a, b, n):
    """Truncated product of integer lists by Kronecker substitution."""
    a, b = list(a[:n]), list(b[:n])
    if not a or not b:
        return [0] * n
    bound = max(abs(x) for x in a) * max(abs(x) for x in b) * min(len(a), len(b)) * 2
    width = max(1, (bound.bit_length() + 8) // 8)
    ap = [x if x > 0 else 0 for x in a]
    an = [-x if x < 0 else 0 for x in a]
    bp = [x if x > 0 else 0 for x in b]
    bn = [-x if x < 0 else 0 for x in b]
    count = len(a) + len(b) - 1
    A, An, B, Bn = (_pack(v, width) for v in (ap, an, bp, bn))
    pos = _unpack(A * B + An * Bn, count, width)
    neg = _unpack(A * Bn + An * B, count, width) if (An or Bn) else [0] * count
    out = [p - q for p, q in zip(pos, neg)][:n]
    return out + [0] * (n - len(out))


def _fft_conv_nonneg(a, b, n):
    size = 1
    while size < len(a) + len(b):
        size <<= 1
    fa = np.fft.rfft(a.astype(np.float64), size)
    fb = np.fft.rfft(b.astype(np.float64), size)
    return np.rint(np.fft.irfft(fa * fb, size)[:n]).astype(np.int64)


def _mod_dense_mul(a, b, n, m):
    a = np.asarray(a[:n], dtype=np.int64)
    b = np.asarray(b[:n], dtype=np.int64)
    if min(len(a), len(b)) * (m - 1) ** 2 < 2**40:
        out = _fft_conv_nonneg(a, b, n) % m
    else:
        if min(len(a), len(b)) * 255**2 >= 2**40:
            raise MemoryError("operands too long for exact FFT convolution")
        a0, a1 = a & 255, a >> 8
        b0, b1 = b & 255, b >> 8
        lo = _fft_conv_nonneg(a0, b0, n) % m
        mid = (_fft_conv_nonneg(a0, b1, n) + _fft_conv_nonneg(a1, b0, n)) % m
        hi = _fft_conv_nonneg(a1, b1, n) % m
        out = (lo + 256 * mid + (65536 % m) * hi) % m
    if len(out) < n:
        out = np.concatenate([out, np.zeros(n - len(out), dtype=np.int64)])
    return out


def series_mul(a, b, method=None):
    """Product of two series; ``method`` forces 'sparse' or 'dense'."""
    _ensure_same_ring(a, b)
    n = min(a.valid_to, b.valid_to) + 1
    offset = a.offset24 + b.offset24
    ca, cb = a._c[:n], b._c[:n]
    if method is None:
        limit = _sparse_limit(n)
        na, nb = _nnz(ca), _nnz(cb)
        if min(na, nb) <= limit:
            method = "sparse"
            if na < nb:
                ca, cb = cb, ca
        else:
            method = "dense"
    elif method == "sparse" and _nnz(ca) < _nnz(cb):
        ca, cb = cb, ca
    if method not in ("sparse", "dense"):
        raise ValueError(f"unknown method {method!r}")
    if a.ring.is_exact:
        if method == "sparse":
            idx, val = _sparse_pairs(cb)
            out = _exact_sparse_mul(list(ca), idx, val, n)
        else:
            out = _exact_dense_mul(ca, cb, n)
    else:
        m = a.ring.m
        if method == "sparse":
            idx, val = _sparse_pairs(cb)
            out = kernels.sparse_mul_mod(ca, idx, val, m, n)
        else:
            out = _mod_dense_mul(ca, cb, n, m)
    return QSeries._raw(out, offset, a.ring)


# -- division --------------------------------------------------------------


def _exact_div(num, den, n):
    """c with den * c = num through n terms; den[0] must be +-1."""
    d0 = den[0]
    terms = [(i, v) for i, v in enumerate(den[:n]) if v and i]
    c = [0] * n
    for i in range(n):
        x = num[i] if i < len(num) else 0
        for s, v in terms:
            if s > i:
                break
            x -= v * c[i - s]
        c[i] = x * d0
    return c


def _divide(num_c, den, n, ring):
    if ring.is_exact:
        return _exact_div(list(num_c), list(den._c), n)
    idx, val = _sparse_pairs(den._c[:n])
    return kernels.sparse_div_mod(np.asarray(num_c[:n]) % ring.m, idx, val, ring.m, n)


def series_inv(a, n_terms=None):
    """Reciprocal of a series whose index-0 coefficient is a unit."""
    if len(a) == 0 or not a.ring.is_unit(int(a._c[0])):
        raise ZeroDivisionError("series_inv needs a unit constant term")
    n = len(a) if n_terms is None else min(int(n_terms), len(a))
    return QSeries._raw(_divide([1], a, n, a.ring), -a.offset24, a.ring)


def series_div_exact(a, b):
    """Quotient a / b, required to have no terms at negative exponents."""
    _ensure_same_ring(a, b)
    bn = b.normalize()
    if bn.is_zero():
        raise ZeroDivisionError("division by a zero series")
    if not b.ring.is_unit(int(bn._c[0])):
        raise ZeroDivisionError("leading coefficient of divisor is not a unit")
    n = min(a.valid_to, bn.valid_to) + 1
    c = _divide(a._c[:n], bn, n, a.ring)
    offset = a.offset24 - bn.offset24
    strip = 0
    while offset + 24 * strip < 0:
        if strip >= n:
            raise HorizonError("quotient horizon exhausted by remainder terms")
        if c[strip] != 0:
            raise InexactDivisionError(
                f"nonzero remainder coefficient at exponent {(offset + 24 * strip) / 24}"
            )
        strip += 1
    if strip >= n:
        raise HorizonError("quotient has no valid coefficients")
    return QSeries._raw(c[strip:], offset + 24 * strip, a.ring)


# -- powers ----------------------------------------------------------------


def _miller_pow(c, e, n):
    """Coefficients of c^e through n terms, c[0] = +-1, exact integers."""
    c0 = c[0]
    terms = [(k, v) for k, v in enumerate(c[:n]) if v and k]
    f = [0] * n
    f[0] = c0**e if e >= 0 else c0 ** (-e)
    for i in range(1, n):
        acc = 0
        for k, v in terms:
            if k > i:
                break
            acc += ((e + 1) * k - i) * v * f[i - k]
        q, r = divmod(acc, i)
        if r:
            raise ArithmeticError("non-integral power coefficient")
        f[i] = q * c0
    return f


def series_pow(a, e):
    """a^e; negative e inverts first."""
    e = int(e)
    if e == 0:
        return QSeries.one(len(a), a.ring)
    if e < 0:
        return series_pow(series_inv(a), -e)
    if e == 1:
        return a
    n = len(a)
    if a.ring.is_exact and n and a._c[0] in (1, -1):
        return QSeries._raw(_miller_pow(list(a._c), e, n), e * a.offset24, a.ring)
    if not a.ring.is_exact and e <= 16 and _nnz(a._c) <= _sparse_limit(n):
        out = a
        for _ in range(e - 1):
            out = series_mul(out, a, method="sparse")
        return out
    result = None
    base = a
    while e:
        if e & 1:
            result = base if result is None else series_mul(result, base)
        e >>= 1
        if e:
            base = series_mul(base, base)
    return result


def reduce_mod(a, m):
    """Reduce an integer series mod a prime; residues in [0, m)."""
    ring = as_ring(m)
    if not a.ring.is_exact:
        if a.ring == ring:
            return a
        raise RingMismatchError(f"cannot reduce {a.ring} series to {ring}")
    c = np.array([x % ring.m for x in a._c], dtype=np.int64)
    return QSeries._raw(c, a.offset24, ring)


# -- generators ------------------------------------------------------------


def _pentagonal_exponents(n):
    """(exponent, sign) of sum_k (-1)^k q^(k(3k-1)/2), exponents < n."""
    out = [(0, 1)]
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 >= n:
            break
        sign = -1 if k % 2 else 1
        out.append((e1, sign))
        e2 = e1 + k
        if e2 < n:
            out.append((e2, sign))
        k += 1
    return sorted(out)


def _from_sparse(pairs, n, offset24, ring):
    if ring.is_exact:
        c = [0] * n
        for e, v in pairs:
            c[e] += v
        return QSeries._raw(c, offset24, ring)
    c = np.zeros(n, dtype=kernels.residue_dtype(ring.m))
    for e, v in pairs:
        c[e] = (int(c[e]) + v) % ring.m
    return QSeries._raw(c, offset24, ring)


def pochhammer(delta, n_terms, ring=None):
    """(q^delta; q^delta)_infinity through n_terms coefficients."""
    ring = as_ring(ring)
    pairs = [(delta * e, s) for e, s in _pentagonal_exponents(n_terms // delta + 1) if delta * e < n_terms]
    return _from_sparse(pairs, n_terms, 0, ring)


def eta_series(delta, n_terms=None, ring=None, *, upto=None):
    """eta(delta z) = q^(delta/24) (q^delta; q^delta)_infinity."""
    if delta < 1:
        raise ValueError("delta must be positive")
    n = _terms_for(n_terms, upto, delta)
    return pochhammer(delta, n, ring).shift(delta)


def _exps_of(eq):
    exps = getattr(eq, "exps", eq)
    return {int(d): int(r) for d, r in dict(exps).items() if r}


def pochhammer_product(exps, n_terms, ring=None):
    """prod_delta (q^delta; q^delta)^r_delta, offset 0."""
    ring = as_ring(ring)
    exps = _exps_of(exps)
    n = n_terms
    if ring.is_exact:
        result = None
        for d, r in sorted(exps.items()):
            f = _miller_pow(list(pochhammer(d, n, ring)._c), r, n)
            result = f if result is None else _exact_dense_mul(result, f, n)
        if result is None:
            result = [1] + [0] * (n - 1)
        return QSeries._raw(result, 0, ring)
    m = ring.m
    cur = np.zeros(n, dtype=kernels.residue_dtype(m))
    if n:
        cur[0] = 1
    for d, r in sorted(exps.items()):
        p = pochhammer(d, n, ring)
        idx, val = _sparse_pairs(p._c)
        if abs(r) <= 48:
            for _ in range(abs(r)):
                if r > 0:
                    cur = kernels.sparse_mul_mod(cur, idx, val, m, n)
                else:
                    cur = kernels.sparse_div_mod(cur, idx, val, m, n)
        else:
            power = series_pow(p, abs(r))
            if r > 0:
                cur = _mod_dense_mul(cur, power._c, n, m)
            else:
                pi, pv = _sparse_pairs(power._c)
                cur = kernels.sparse_div_mod(cur, pi, pv, m, n)
    return QSeries._raw(cur, 0, ring)


def eta_quotient_series(eq, n_terms=None, ring=None, *, upto=None):
    """q-expansion of prod_delta eta(delta z)^r_delta."""
    exps = _exps_of(eq)
    offset24 = sum(d * r for d, r in exps.items())
    n = _terms_for(n_terms, upto, offset24)
    return pochhammer_product(exps, n, ring).shift(offset24)


def theta_phi(n_terms=None, ring=None, sign=1, *, upto=None):
    """phi(q) = sum_{n in Z} q^(n^2); ``sign=-1`` gives phi(-q)."""
    n = _terms_for(n_terms, upto, 0)
    pairs = [(0, 1)]
    k = 1
    while k * k < n:
        pairs.append((k * k, 2 * (sign**k)))
        k += 1
    return _from_sparse(pairs, n, 0, as_ring(ring))


def theta_psi(n_terms=None, ring=None, *, upto=None):
    """psi(q) = sum_{n >= 0} q^(n(n+1)/2)."""
    n = _terms_for(n_terms, upto, 0)
    pairs = []
    k = 0
    while k * (k + 1) // 2 < n:
        pairs.append((k * (k + 1) // 2, 1))
        k += 1
    return _from_sparse(pairs, n, 0, as_ring(ring))


def phi_st(s, t, n_terms=None, ring=None, *, upto=None):
    """phi(q)^s (2 q^(1/4) psi(q^2))^t, for 4 | t; offset24 = 6t."""
    if t % 4:
        raise ValueError(f"phi_st needs 4 | t, got t={t}")
    if s < 0 or t < 0:
        raise ValueError("phi_st needs s, t >= 0")
    ring = as_ring(ring)
    n = _terms_for(n_terms, upto, 6 * t)
    phi = theta_phi(n, ring)
    psi2 = _from_sparse(
        [(2 * e, v) for e, v in theta_psi(n // 2 + 1).nonzero_terms() if 2 * e < n], n, 0, ring
    )
    out = series_mul(series_pow(phi, s), series_pow(psi2, t)) if (s and t) else (
        series_pow(phi, s) if s else series_pow(psi2, t)
    )
    return out.scale(2**t).shift(6 * t)


def ahs_generators(n_terms, ring=None):
    """a(q) = phi(-q^3) and b(q) = (q;q)(q^6;q^6)^2 / ((q^2;q^2)(q^3;q^3))."""
    ring = as_ring(ring)
    pairs = [(3 * e, v) for e, v in theta_phi(n_terms // 3 + 1, sign=-1).nonzero_terms() if 3 * e < n_terms]
    a = _from_sparse(pairs, n_terms, 0, ring)
    b = pochhammer_product({1: 1, 6: 2, 2: -1, 3: -1}, n_terms, ring)
    return a, b


_EISENSTEIN = {4: (240, 3), 6: (-504, 5), 10: (-264, 9)}


def eisenstein(k, n_terms=None, ring=None, *, upto=None):
    """E_k = 1 + c_k sum sigma_{k-1}(n) q^n for k in {4, 6, 10}."""
    if k not in _EISENSTEIN:
        raise ValueError(f"unsupported Eisenstein weight {k}")
    c, power = _EISENSTEIN[k]
    n = _terms_for(n_terms, upto, 0)
    sig = sigma_table(max(n - 1, 0), power)
    coeffs = [1] + [c * sig[i] for i in range(1, n)]
    return QSeries(coeffs[:n], 0, ring)


def overpartition_series(n_terms=None, ring=None, *, upto=None):
    """sum pbar(n) q^n = 1 / phi(-q)."""
    n = _terms_for(n_terms, upto, 0)
    ring = as_ring(ring)
    if ring.is_exact:
        return series_inv(theta_phi(n, ring, sign=-1))
    # straight from the sparse theta terms: no dense divisor is ever built
    pairs = [(0, 1)]
    k = 1
    while k * k < n:
        pairs.append((k * k, (-2 if k % 2 else 2) % ring.m))
        k += 1
    idx, val = zip(*pairs)
    return QSeries._raw(kernels.sparse_div_mod([1], idx, val, ring.m, n), 0, ring)


# -- coefficient cache -----------------------------------------------------

_MAGIC = b"QSER1"
_HEADER = struct.Struct("<BHiQ")


def write_cache(series, path):
    """Write a residue series in the QSER1 format, replacing atomically."""
    if series.ring.is_exact:
        raise ValueError("exact series cannot be cached (ring tag 0 is unsupported)")
    if series.ring.m >= 256:
        raise ValueError("cache stores one byte per residue; modulus must be < 256")
    body = np.ascontiguousarray(series.values(), dtype=np.uint8).tobytes()
    header = _MAGIC + _HEADER.pack(1, series.ring.m, series.offset24, len(series))
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qser-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            fh.write(body)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_cache(path):
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ValueError(f"{path}: not a QSER1 file")
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        tag, m, offset24, count = _HEADER.unpack(head)
        if tag != 1:
            raise ValueError(f"{path}: unsupported ring tag {tag}")
        body = fh.read(count)
        if len(body) != count:
            raise ValueError(f"{path}: expected {count} residues, found {len(body)}")
    c = np.frombuffer(body, dtype=np.uint8).copy()
    if count and c.max() >= m:
        raise ValueError(f"{path}: residue out of range for modulus {m}")
    return QSeries._raw(c, offset24, Ring(m))
