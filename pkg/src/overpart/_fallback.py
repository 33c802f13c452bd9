"""Numpy implementations of the residue kernels.

Same contract as the compiled ``_kernels`` module. Division uses a
divide-and-conquer schedule: each left half is solved, its contribution to
the right half is pushed with one slice operation per sparse term, then the
right half is solved. Only leaves of ``_LEAF`` entries run scalar Python.
"""

import numpy as np

_LEAF = 64


def _mul_impl(a, idx, val, m, out, acc, reduce_every):
    n = out.shape[0]
    acc = np.zeros(n, dtype=np.int64)
    a = a.astype(np.int64)
    since = 0
    for s, v in zip(idx.tolist(), val.tolist()):
        if s >= n:
            break
        if v:
            acc[s:] += v * a[: n - s]
        since += 1
        if since == reduce_every:
            acc %= m
            since = 0
    out[:] = acc % m


def _div_impl(num, idx, val, m, inv0, out, acc):
    n = out.shape[0]
    terms = [(s, v) for s, v in zip(idx.tolist()[1:], val.tolist()[1:]) if v]
    acc = np.zeros(n, dtype=np.int64)
    k = min(n, num.shape[0])
    acc[:k] = num[:k]
    c = np.zeros(n, dtype=np.int64)

    def leaf(lo, hi):
        local = [(s, v) for s, v in terms if s < hi - lo]
        for i in range(lo, hi):
            x = int(acc[i])
            for s, v in local:
                if s > i - lo:
                    break
                x -= v * int(c[i - s])
            c[i] = x % m * inv0 % m

    def solve(lo, hi):
        if hi - lo <= _LEAF:
            leaf(lo, hi)
            return
        mid = (lo + hi) // 2
        solve(lo, mid)
        # pairs (t, i) with t in [lo, mid) and i in [mid, hi)
        for s, v in terms:
            if s >= hi - lo:
                break
            i0 = max(mid, lo + s)
            i1 = min(hi, mid + s)
            if i0 < i1:
                acc[i0:i1] -= v * c[i0 - s:i1 - s]
        acc[mid:hi] %= m
        solve(mid, hi)

    if n:
        solve(0, n)
    out[:] = c


def block_size():
    return _LEAF
