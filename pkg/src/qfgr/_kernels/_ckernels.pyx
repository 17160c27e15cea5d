# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled assembly kernels; same contracts as qfgr._kernels.pykernels."""
import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, exp, fabs, sqrt

cnp.import_array()

BACKEND = "c"

cdef double _SQRT_2PI = sqrt(2.0 * M_PI)


cdef inline double _weight(double x, double eta, bint sharp) noexcept nogil:
    cdef double peak = 1.0 / (_SQRT_2PI * eta)
    if sharp:
        if fabs(x) <= eta:
            return peak
        return 0.0
    return peak * exp(-(x * x) / (2.0 * eta * eta))


def kernel_weights(x, double eta, bint sharp):
    arr = np.asarray(x, dtype=np.float64)
    shape = arr.shape
    cdef const double[::1] flat = np.ascontiguousarray(arr).reshape(-1)
    out_arr = np.empty(flat.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(flat.shape[0]):
            out[i] = _weight(flat[i], eta, sharp)
    return out_arr.reshape(shape)


def build_rate_tensor(hp, energies, double hbar, double eta, bint sharp, bint symmetrized):
    cdef const double complex[:, ::1] h = np.ascontiguousarray(hp, dtype=np.complex128)
    cdef const double[::1] e = np.ascontiguousarray(energies, dtype=np.float64)
    cdef Py_ssize_t n = e.shape[0]
    cdef cnp.ndarray out_arr = np.empty((n, n, n, n), dtype=np.complex128)
    cdef double complex[:, :, :, ::1] p = out_arr
    cdef double pref = 2.0 * M_PI / hbar
    cdef Py_ssize_t a, b, c, d
    cdef double arg
    cdef double complex hac
    with nogil:
        for a in range(n):
            for c in range(n):
                hac = h[a, c]
                for b in range(n):
                    for d in range(n):
                        if symmetrized:
                            arg = 0.5 * (e[a] + e[b]) - 0.5 * (e[c] + e[d])
                        else:
                            arg = e[b] - e[d]
                        p[a, b, c, d] = pref * hac * (h[b, d].real - 1j * h[b, d].imag) \
                            * _weight(arg, eta, sharp)
    return out_arr


def rate_superoperator(p_in):
    cdef const double complex[:, :, :, ::1] p = np.ascontiguousarray(p_in, dtype=np.complex128)
    cdef Py_ssize_t n = p.shape[0]
    cdef cnp.ndarray half_arr = np.zeros((n * n, n * n), dtype=np.complex128)
    cdef double complex[:, ::1] half = half_arr
    cdef cnp.ndarray out_arr = np.empty((n * n, n * n), dtype=np.complex128)
    cdef double complex[:, ::1] s = out_arr
    cdef Py_ssize_t a, b, c, d
    cdef double complex acc
    with nogil:
        # in-scattering: (1/2) P[a,b,c,d]
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for d in range(n):
                        half[a * n + b, c * n + d] = 0.5 * p[a, b, c, d]
        # out-scattering: -(1/2) sum_c P[a,d,c,c] applied as rho -> A rho
        for a in range(n):
            for d in range(n):
                acc = 0
                for c in range(n):
                    acc = acc + p[a, d, c, c]
                for b in range(n):
                    half[a * n + b, d * n + b] = half[a * n + b, d * n + b] - 0.5 * acc
        # add the Hermitian-conjugate image of the half map
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for d in range(n):
                        s[a * n + b, c * n + d] = half[a * n + b, c * n + d] \
                            + (half[b * n + a, d * n + c].real
                               - 1j * half[b * n + a, d * n + c].imag)
    return out_arr


def double_commutator_superoperator(ops_in):
    cdef const double complex[:, :, ::1] ops = np.ascontiguousarray(ops_in, dtype=np.complex128)
    cdef Py_ssize_t k = ops.shape[0]
    cdef Py_ssize_t n = ops.shape[1]
    cdef cnp.ndarray out_arr = np.zeros((n * n, n * n), dtype=np.complex128)
    cdef double complex[:, ::1] s = out_arr
    cdef cnp.ndarray l2_arr = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] l2 = l2_arr
    cdef Py_ssize_t i, a, b, c, d
    cdef double complex acc
    for i in range(k):
        with nogil:
            for a in range(n):
                for b in range(n):
                    acc = 0
                    for c in range(n):
                        acc = acc + ops[i, a, c] * ops[i, c, b]
                    l2[a, b] = acc
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        # rho -> L rho L term: coefficient of rho[c,d] is L[a,c] L[d,b]
                        for d in range(n):
                            s[a * n + b, c * n + d] = s[a * n + b, c * n + d] \
                                + ops[i, a, c] * ops[i, d, b]
                        # rho -> -(1/2)(L^2 rho + rho L^2)
                        s[a * n + b, c * n + b] = s[a * n + b, c * n + b] - 0.5 * l2[a, c]
                        s[a * n + b, a * n + c] = s[a * n + b, a * n + c] - 0.5 * l2[c, b]
    return out_arr
