# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: single-pass PSD synthesis and rolling-sum edge statistics.

Same contracts as kernels._ref; draws come straight from the bit generator
of the supplied numpy Generator, one bin at a time.
"""

import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport sqrt
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_standard_exponential,
    random_standard_normal,
)

NAME = "compiled"


def fill_psd(double[::1] out, double[::1] signal_power, double noise_var, rng):
    cdef Py_ssize_t n = out.shape[0]
    if signal_power.shape[0] != n:
        raise ValueError("signal_power length must match out")
    if noise_var <= 0.0:
        raise ValueError("noise_var must be positive")
    cdef bitgen_t *bg = <bitgen_t *> PyCapsule_GetPointer(
        rng.bit_generator.capsule, "BitGenerator")
    cdef double sd = sqrt(0.5 * noise_var)
    cdef double re, im
    cdef Py_ssize_t i
    with rng.bit_generator.lock, nogil:
        for i in range(n):
            if signal_power[i] > 0.0:
                re = sqrt(signal_power[i]) + sd * random_standard_normal(bg)
                im = sd * random_standard_normal(bg)
                out[i] = re * re + im * im
            else:
                out[i] = noise_var * random_standard_exponential(bg)


def edge_accumulate(double[::1] q, double[::1] psd, Py_ssize_t half_window):
    cdef Py_ssize_t n = psd.shape[0]
    cdef Py_ssize_t nh = half_window
    if nh < 2:
        raise ValueError("half_window must be >= 2")
    if n < 2 * nh:
        raise ValueError("psd shorter than two half-windows")
    if q.shape[0] != n:
        raise ValueError("q length must match psd")
    cdef double left = 0.0, right = 0.0, r
    cdef double scale = 0.5 * nh
    cdef Py_ssize_t j
    with nogil:
        for j in range(nh):
            left += psd[j]
        for j in range(nh, 2 * nh):
            right += psd[j]
        for j in range(nh, n - nh):
            r = left / right - 1.0
            q[j] += scale * r * r
            left += psd[j] - psd[j - nh]
            right += psd[j + nh] - psd[j]
