# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled residue kernels: sparse multiply and sparse divide mod m.

Both take a dense residue array and a sparse operand given as sorted
exponent/value arrays. Accumulators are int32 or int64, chosen by the
Python wrapper so that no partial sum can overflow before reduction.
"""

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t

ctypedef fused res_t:
    uint8_t
    int64_t

ctypedef fused acc_t:
    int32_t
    int64_t

cdef enum:
    BLOCK = 16384


cdef inline int64_t _mod(int64_t x, int64_t m) nogil:
    x %= m
    return x + m if x < 0 else x


def _mul_impl(const res_t[::1] a, const int64_t[::1] idx, const int64_t[::1] val,
              int64_t m, res_t[::1] out, acc_t[::1] acc, Py_ssize_t reduce_every):
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t nt = idx.shape[0]
    cdef Py_ssize_t lo, hi, i, j, s, start, since
    cdef acc_t v
    cdef acc_t* accp = &acc[0]
    cdef const res_t* ap = &a[0]
    with nogil:
        lo = 0
        while lo < n:
            hi = lo + BLOCK
            if hi > n:
                hi = n
            for i in range(hi - lo):
                accp[i] = 0
            since = 0
            for j in range(nt):
                s = idx[j]
                if s >= hi:
                    break
                v = <acc_t>val[j]
                start = lo if lo > s else s
                for i in range(start, hi):
                    accp[i - lo] += v * <acc_t>ap[i - s]
                since += 1
                if since == reduce_every:
                    for i in range(hi - lo):
                        accp[i] = accp[i] % m
                    since = 0
            for i in range(lo, hi):
                out[i] = <res_t>_mod(accp[i - lo], m)
            lo = hi


def _div_impl(const res_t[::1] num, const int64_t[::1] idx, const int64_t[::1] val,
              int64_t m, int64_t inv0, res_t[::1] out, acc_t[::1] acc):
    # idx[0] == 0 carries the unit; idx[1:] strictly increasing and positive.
    # num may be shorter than out; missing entries are zero.
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t nn = num.shape[0]
    cdef Py_ssize_t nt = idx.shape[0]
    cdef Py_ssize_t lo, hi, i, j, s, start, end
    cdef acc_t v
    cdef int64_t x
    cdef acc_t* accp = &acc[0]
    cdef res_t* cp = &out[0]
    with nogil:
        lo = 0
        while lo < n:
            hi = lo + BLOCK
            if hi > n:
                hi = n
            for i in range(lo, hi):
                accp[i - lo] = <acc_t>num[i] if i < nn else 0
            # terms reaching back before this block: contiguous, vectorizable
            for j in range(1, nt):
                s = idx[j]
                if s >= hi:
                    break
                v = <acc_t>val[j]
                start = lo if lo > s else s
                end = lo + s
                if end > hi:
                    end = hi
                for i in range(start, end):
                    accp[i - lo] -= v * <acc_t>cp[i - s]
            # terms landing inside the block: sequential recurrence
            for i in range(lo, hi):
                x = accp[i - lo]
                for j in range(1, nt):
                    s = idx[j]
                    if s > i - lo:
                        break
                    x -= val[j] * <int64_t>cp[i - s]
                cp[i] = <res_t>(_mod(x, m) * inv0 % m)
            lo = hi


def block_size():
    return BLOCK
