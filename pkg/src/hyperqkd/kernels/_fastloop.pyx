# cython: boundscheck=False, wraparound=False, nonecheck=False, cdivision=True
"""Compiled Monte Carlo accumulation kernel.

Hot inner loop of the protocol simulation.  Must return bit-identical
counts to ``hyperqkd.kernels._pyloop.mc_chunk`` for identical inputs: the
outcome search advances while u >= cdf[o], which equals NumPy's right-side
searchsorted on the same float64 table.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def mc_chunk(const cnp.uint8_t[:, ::1] a_basis,
             const cnp.uint8_t[:, ::1] a_bit,
             const cnp.uint8_t[:, ::1] b_basis,
             const cnp.uint8_t[:, ::1] b_bit,
             const cnp.uint8_t[::1] survived,
             const double[:, ::1] u_bell,
             const double[:, :, ::1] cdf,
             const cnp.uint8_t[:, ::1] flip):
    """See ``hyperqkd.kernels._pyloop.mc_chunk`` for the contract."""
    cdef Py_ssize_t m = a_basis.shape[0]
    cdef Py_ssize_t n = a_basis.shape[1]
    pairs_arr = np.zeros((n, 2), dtype=np.int64)
    errors_arr = np.zeros((n, 2), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] pairs = pairs_arr
    cdef cnp.int64_t[:, ::1] errors = errors_arr
    cdef Py_ssize_t r, k
    cdef int basis, combo, o, corrected
    cdef double u
    for r in range(m):
        if survived[r] == 0:
            continue
        for k in range(n):
            basis = a_basis[r, k]
            if basis != b_basis[r, k]:
                continue
            combo = ((basis * 2 + a_bit[r, k]) * 2 + b_basis[r, k]) * 2 + b_bit[r, k]
            u = u_bell[r, k]
            o = 0
            while o < 3 and u >= cdf[k, combo, o]:
                o += 1
            pairs[k, basis] += 1
            corrected = b_bit[r, k] ^ flip[basis, o]
            if corrected != a_bit[r, k]:
                errors[k, basis] += 1
    return pairs_arr, errors_arr
