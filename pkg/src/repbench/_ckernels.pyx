# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_pykernels`` for the contract."""

import numpy as np
from libc.math cimport INFINITY

cdef enum:
    OP_X = 0
    OP_CX = 1
    OP_MEASURE = 2
    OP_RESET = 3


def propagate_shots(const int[:, ::1] ops, const unsigned char[:, ::1] flips,
                    int num_qubits, int num_clbits):
    cdef Py_ssize_t shots = flips.shape[0]
    cdef Py_ssize_t n_ops = ops.shape[0]
    out_arr = np.zeros((shots, num_clbits), dtype=np.uint8)
    state_arr = np.zeros(num_qubits, dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef unsigned char[::1] state = state_arr
    cdef Py_ssize_t s, i, k, op
    cdef int opcode, a, b
    for op in range(n_ops):
        if ops[op, 0] < OP_X or ops[op, 0] > OP_RESET:
            raise ValueError(f"unknown opcode {ops[op, 0]}")
    with nogil:
        for s in range(shots):
            for i in range(num_qubits):
                state[i] = 0
            k = 0
            for i in range(n_ops):
                opcode = ops[i, 0]
                a = ops[i, 1]
                b = ops[i, 2]
                if opcode == OP_X:
                    state[a] ^= 1 ^ flips[s, k]
                    k += 1
                elif opcode == OP_CX:
                    state[b] ^= state[a]
                    state[a] ^= flips[s, k]
                    state[b] ^= flips[s, k + 1]
                    k += 2
                elif opcode == OP_MEASURE:
                    out[s, b] = state[a] ^ flips[s, k]
                    k += 1
                else:
                    state[a] = 0
    return out_arr


cdef inline int _popcount(unsigned long long x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef inline int _lowbit(unsigned long long x) nogil:
    cdef int i = 0
    while not (x & 1):
        x >>= 1
        i += 1
    return i


def match_dp(dist_in):
    cdef double[:, ::1] dist = np.ascontiguousarray(dist_in, dtype=np.float64)
    cdef int k = dist.shape[0]
    if k == 0:
        return 0.0, []
    if k > 30:
        raise ValueError("match_dp supports at most 30 vertices")
    cdef unsigned long long full = (1ULL << k) - 1
    best_arr = np.empty(full + 1, dtype=np.float64)
    choice_arr = np.empty(full + 1, dtype=np.int8)
    cdef double[::1] best = best_arr
    cdef signed char[::1] choice = choice_arr
    cdef unsigned long long mask, rest, m, low
    cdef int i, j, c
    cdef double b, cand
    best[0] = 0.0
    choice[0] = -1
    with nogil:
        for mask in range(1, full + 1):
            if _popcount(mask) & 1:
                continue
            i = _lowbit(mask)
            rest = mask ^ (1ULL << i)
            b = INFINITY
            c = -1
            m = rest
            while m:
                low = m & (~m + 1)
                j = _lowbit(low)
                cand = dist[i, j] + best[rest ^ low]
                if cand < b:
                    b = cand
                    c = j
                m ^= low
            best[mask] = b
            choice[mask] = c
    partner = [-1] * k
    mask = full
    while mask:
        i = _lowbit(mask)
        j = choice[mask]
        if j < 0:
            return float("inf"), partner
        partner[i] = j
        partner[j] = i
        mask ^= (1ULL << i) | (1ULL << j)
    return float(best[full]), partner
