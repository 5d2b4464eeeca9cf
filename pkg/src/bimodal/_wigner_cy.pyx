# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Wigner kernel.

Same displacement-element recurrence as the NumPy fallback, evaluated
point by point with two reusable length-d buffers, so the working set
stays in cache regardless of grid size.  The grid loop runs without the
GIL; the dispatcher may call ``fill_rows`` from several threads on
disjoint row ranges of the same output array.
"""

import numpy as np

from libc.math cimport M_PI, exp


def fill_rows(double complex[:, ::1] coeff, double[::1] qs, double[::1] ps,
              double[:, ::1] out, Py_ssize_t row_start, Py_ssize_t row_stop):
    """Fill ``out[row_start:row_stop, :]`` with Wigner values.

    ``coeff`` is the density matrix pre-multiplied by parity signs down
    the rows; ``out`` receives values including the 2/pi prefactor.
    """
    cdef Py_ssize_t d = coeff.shape[0]
    cdef Py_ssize_t n_p = ps.shape[0]

    prev_arr = np.empty(d, dtype=np.complex128)
    cur_arr = np.empty(d, dtype=np.complex128)
    sqn_arr = np.sqrt(np.arange(d, dtype=np.float64))
    cdef double complex[::1] prev_mv = prev_arr
    cdef double complex[::1] cur_mv = cur_arr
    cdef double[::1] sqn_mv = sqn_arr

    cdef double complex *prev = &prev_mv[0]
    cdef double complex *cur = &cur_mv[0]
    cdef double complex *swap
    cdef double *sqn = &sqn_mv[0]

    cdef double complex unit_i = 1j
    cdef double complex xi, neg, term
    cdef Py_ssize_t iq, ip, n, m
    cdef double xr, xp, acc, invm
    cdef double two_over_pi = 2.0 / M_PI

    with nogil:
        for iq in range(row_start, row_stop):
            for ip in range(n_p):
                xr = 2.0 * qs[iq]
                xp = 2.0 * ps[ip]
                xi = xr + unit_i * xp
                neg = -xr + unit_i * xp
                prev[0] = exp(-0.5 * (xr * xr + xp * xp))
                for n in range(1, d):
                    prev[n] = prev[n - 1] * neg / sqn[n]
                acc = 0.0
                for n in range(d):
                    term = prev[n] * coeff[n, 0]
                    acc += term.real
                for m in range(1, d):
                    invm = 1.0 / sqn[m]
                    cur[0] = xi * prev[0] * invm
                    for n in range(1, d):
                        cur[n] = (xi * prev[n] + sqn[n] * prev[n - 1]) * invm
                    for n in range(d):
                        term = cur[n] * coeff[n, m]
                        acc += term.real
                    swap = prev
                    prev = cur
                    cur = swap
                out[iq, ip] = two_over_pi * acc
