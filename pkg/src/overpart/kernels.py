"""Residue kernels with backend selection at import.

The compiled extension is used when it imports; otherwise (or when
``OVERPART_PURE_PYTHON=1``) the numpy fallback is used. ``BACKEND`` names
the active one.
"""

import os

import numpy as np

from . import _fallback

_compiled = None
if os.environ.get("OVERPART_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_I32_MAX = 2**31 - 1
_I64_MAX = 2**63 - 1


def residue_dtype(m):
    """Storage dtype for residues mod m: one byte when m < 256."""
    return np.uint8 if m < 256 else np.int64


def _impl(backend):
    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    if backend == "python":
        return _fallback
    raise ValueError(f"unknown backend {backend!r}")


def _prep(idx, val, m):
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    val = np.ascontiguousarray(np.asarray(val, dtype=np.int64) % m, dtype=np.int64)
    if idx.size and (np.any(idx < 0) or np.any(np.diff(idx) <= 0)):
        raise ValueError("sparse exponents must be non-negative and strictly increasing")
    return idx, val


def _dense(a, n, m):
    a = np.asarray(a)
    if a.shape[0] < n:
        raise ValueError(f"dense operand has {a.shape[0]} entries, need {n}")
    return np.ascontiguousarray(a[:n], dtype=residue_dtype(m))


def sparse_mul_mod(a, idx, val, m, n, backend=None):
    """out[i] = sum_j val[j] * a[i - idx[j]] mod m, for 0 <= i < n."""
    idx, val = _prep(idx, val, m)
    a = _dense(a, n, m)
    out = np.empty(n, dtype=residue_dtype(m))
    if n == 0:
        return out
    sq = (m - 1) ** 2 + 1
    if 64 * sq < _I32_MAX:
        acc = np.empty(1 << 14, dtype=np.int32)
        reduce_every = (_I32_MAX - m) // sq
    else:
        acc = np.empty(1 << 14, dtype=np.int64)
        reduce_every = (_I64_MAX - m) // sq
    reduce_every = max(1, min(reduce_every, idx.size + 1))
    _impl(backend)._mul_impl(a, idx, val, m, out, acc, reduce_every)
    return out


def sparse_div_mod(num, idx, val, m, n, backend=None):
    """Solve sum_j val[j] * c[i - idx[j]] = num[i] mod m for c[0..n-1].

    ``idx[0]`` must be 0 and ``val[0]`` a unit mod m. ``num`` may be shorter
    than n and is then zero-extended. Cost is O(n * terms).
    """
    idx, val = _prep(idx, val, m)
    if idx.size == 0 or idx[0] != 0 or val[0] % m == 0:
        raise ZeroDivisionError("sparse divisor needs a unit constant term")
    num = np.ascontiguousarray(np.asarray(num)[:n], dtype=residue_dtype(m))
    if num.shape[0] == 0:
        num = np.zeros(1, dtype=residue_dtype(m))
    inv0 = pow(int(val[0]), -1, m)
    out = np.zeros(n, dtype=residue_dtype(m))
    if n == 0:
        return out
    live = int(np.searchsorted(idx, n))
    if live * ((m - 1) ** 2 + 1) + m < _I32_MAX:
        acc = np.empty(1 << 14, dtype=np.int32)
    else:
        acc = np.empty(1 << 14, dtype=np.int64)
    _impl(backend)._div_impl(num, idx[:max(live, 1)], val[:max(live, 1)], m, inv0, out, acc)
    return out


def available_backends():
    return ["cython", "python"] if _compiled is not None else ["python"]
