# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled diagonal-group flow kernels; same contract as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()


cdef void _softmax(const double[:] s, Py_ssize_t k, double[:] p) noexcept nogil:
    cdef Py_ssize_t j
    cdef double top = s[0], tot = 0.0
    for j in range(1, k):
        if s[j] > top:
            top = s[j]
    for j in range(k):
        p[j] = exp(s[j] - top)
        tot += p[j]
    for j in range(k):
        p[j] /= tot


cdef void _moment(const double[:] p, const double[:, :] lam, double hbar, double[:] mu) noexcept nogil:
    cdef Py_ssize_t j, a, k = lam.shape[0], d = lam.shape[1]
    for a in range(d):
        mu[a] = 0.0
    for j in range(k):
        for a in range(d):
            mu[a] += p[j] * lam[j, a]
    for a in range(d):
        mu[a] *= hbar


def diag_rhs(const double[:] s, const double[:, :] lam, double hbar):
    cdef Py_ssize_t k = lam.shape[0], d = lam.shape[1], j, a
    out_arr = np.empty(k + d)
    p_arr = np.empty(k)
    mu_arr = np.empty(d)
    cdef double[:] out = out_arr, p = p_arr, mu = mu_arr
    cdef double c = 0.0, dot
    with nogil:
        _softmax(s, k, p)
        _moment(p, lam, hbar, mu)
        for a in range(d):
            c += mu[a] * mu[a]
        c /= hbar
        for j in range(k):
            dot = 0.0
            for a in range(d):
                dot += lam[j, a] * mu[a]
            out[j] = -2.0 * (dot - c)
        for a in range(d):
            out[k + a] = -mu[a]
    return out_arr


def diag_jac(const double[:] s, const double[:, :] lam, double hbar):
    cdef Py_ssize_t k = lam.shape[0], d = lam.shape[1], i, j, a
    jac_arr = np.zeros((k + d, k + d))
    p_arr = np.empty(k)
    mu_arr = np.empty(d)
    lbar_arr = np.empty(d)
    dmu_arr = np.empty((k, d))
    w_arr = np.empty(k)
    cdef double[:, :] jac = jac_arr, dmu = dmu_arr
    cdef double[:] p = p_arr, mu = mu_arr, lbar = lbar_arr, w = w_arr
    cdef double dot
    with nogil:
        _softmax(s, k, p)
        for a in range(d):
            lbar[a] = 0.0
        for j in range(k):
            for a in range(d):
                lbar[a] += p[j] * lam[j, a]
        for a in range(d):
            mu[a] = hbar * lbar[a]
        for j in range(k):
            dot = 0.0
            for a in range(d):
                dmu[j, a] = hbar * p[j] * (lam[j, a] - lbar[a])
                dot += dmu[j, a] * mu[a]
            w[j] = 4.0 / hbar * dot
        for i in range(k):
            for j in range(k):
                dot = 0.0
                for a in range(d):
                    dot += lam[i, a] * dmu[j, a]
                jac[i, j] = -2.0 * dot + w[j]
        for a in range(d):
            for j in range(k):
                jac[k + a, j] = -dmu[j, a]
    return jac_arr


def diag_observe(const double[:] s, const double[:, :] lam, double hbar):
    cdef Py_ssize_t k = lam.shape[0], d = lam.shape[1], j, a
    p_arr = np.empty(k)
    mu_arr = np.empty(d)
    cdef double[:] p = p_arr, mu = mu_arr
    cdef double mean = 0.0, var = 0.0, proj
    with nogil:
        _softmax(s, k, p)
        _moment(p, lam, hbar, mu)
        for j in range(k):
            proj = 0.0
            for a in range(d):
                proj += lam[j, a] * mu[a]
            mean += p[j] * proj
        for j in range(k):
            proj = 0.0
            for a in range(d):
                proj += lam[j, a] * mu[a]
            var += p[j] * (proj - mean) * (proj - mean)
        if var < 0.0:
            var = 0.0
    return p_arr, mu_arr, float(sqrt(2.0 * hbar * var))
