# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled policy-sweep kernels; mirrors _pykern exactly."""

import numpy as np

cimport numpy as cnp


def policy_eu(double[::1] weight, cnp.int32_t[:, ::1] dvals, cnp.int32_t[:, ::1] sidxs,
              cnp.int64_t[::1] offsets, cnp.int64_t[::1] choice):
    cdef Py_ssize_t n = weight.shape[0]
    cdef Py_ssize_t k = dvals.shape[0]
    cdef Py_ssize_t c, t
    cdef double total = 0.0
    cdef bint ok
    for c in range(n):
        ok = True
        for t in range(k):
            if choice[offsets[t] + sidxs[t, c]] != dvals[t, c]:
                ok = False
                break
        if ok:
            total += weight[c]
    return total


def policy_sweep(double[::1] weight, cnp.int32_t[:, ::1] dvals, cnp.int32_t[:, ::1] sidxs,
                 cnp.int64_t[::1] n_states, cnp.int64_t[::1] n_alts):
    cdef Py_ssize_t k = n_states.shape[0]
    cdef Py_ssize_t n = weight.shape[0]

    offsets_arr = np.zeros(k, dtype=np.int64)
    if k:
        offsets_arr[1:] = np.cumsum(np.asarray(n_states))[:-1]
    cell_alts_arr = np.repeat(np.asarray(n_alts), np.asarray(n_states)).astype(np.int64)
    cdef Py_ssize_t m = cell_alts_arr.shape[0]
    choice_arr = np.zeros(m, dtype=np.int64)
    best_arr = np.zeros(m, dtype=np.int64)

    cdef cnp.int64_t[::1] offsets = offsets_arr
    cdef cnp.int64_t[::1] cell_alts = cell_alts_arr
    cdef cnp.int64_t[::1] choice = choice_arr
    cdef cnp.int64_t[::1] best_choice = best_arr

    cdef double best = -np.inf
    cdef double eu
    cdef Py_ssize_t c, t, p
    cdef bint ok

    while True:
        eu = 0.0
        for c in range(n):
            ok = True
            for t in range(k):
                if choice[offsets[t] + sidxs[t, c]] != dvals[t, c]:
                    ok = False
                    break
            if ok:
                eu += weight[c]
        if eu > best:
            best = eu
            best_choice[:] = choice
        p = m - 1
        while p >= 0:
            choice[p] += 1
            if choice[p] < cell_alts[p]:
                break
            choice[p] = 0
            p -= 1
        if p < 0:
            break
    return float(best), best_arr
