# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled inner loops: subset-offset trace kernels and a Hermitian Jacobi solver.

The trace kernels walk the submasks of trace_mask with the branch-free
increment s -> (s - mask) & mask, which visits all 2^M offsets in
ascending order starting at 0. No scratch besides the output is
allocated. The Python fallbacks in _pykernels must match these within
floating-point reordering; integer index streams match bit-exactly.
"""

import numpy as np

from libc.math cimport sqrt, fabs, copysign


def powerset_mixed(const double complex[:, ::1] rho,
                   const long long[::1] bases,
                   unsigned long long trace_mask,
                   bint mirror):
    """Reduced matrix from a full density matrix by offset summation.

    bases[l] is the full-space row index with reduced index l at the
    kept bit positions. With mirror set, only l >= m is summed and the
    upper triangle is filled with conjugates.
    """
    cdef Py_ssize_t dprime = bases.shape[0]
    out_arr = np.empty((dprime, dprime), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t l, m, mtop
    cdef unsigned long long tm = trace_mask, eta, rb, cb
    cdef double complex acc
    for l in range(dprime):
        mtop = l + 1 if mirror else dprime
        for m in range(mtop):
            rb = <unsigned long long> bases[l]
            cb = <unsigned long long> bases[m]
            acc = 0
            eta = 0
            while True:
                acc = acc + rho[<Py_ssize_t> (rb + eta), <Py_ssize_t> (cb + eta)]
                eta = (eta - tm) & tm
                if eta == 0:
                    break
            out[l, m] = acc
            if mirror and m < l:
                out[m, l] = acc.conjugate()
    return out_arr


def powerset_pure(const double complex[::1] psi,
                  const long long[::1] bases,
                  unsigned long long trace_mask,
                  bint mirror):
    """Reduced matrix directly from a state vector; no projector is formed."""
    cdef Py_ssize_t dprime = bases.shape[0]
    out_arr = np.empty((dprime, dprime), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t l, m, mtop
    cdef unsigned long long tm = trace_mask, eta, rb, cb
    cdef double complex acc
    for l in range(dprime):
        mtop = l + 1 if mirror else dprime
        for m in range(mtop):
            rb = <unsigned long long> bases[l]
            cb = <unsigned long long> bases[m]
            acc = 0
            eta = 0
            while True:
                acc = acc + psi[<Py_ssize_t> (rb + eta)] * psi[<Py_ssize_t> (cb + eta)].conjugate()
                eta = (eta - tm) & tm
                if eta == 0:
                    break
            out[l, m] = acc
            if mirror and m < l:
                out[m, l] = acc.conjugate()
    return out_arr


def jacobi_eigh(double complex[:, ::1] a, bint want_vectors, double tol, int max_sweeps):
    """Cyclic Jacobi diagonalization of a Hermitian matrix, in place.

    Zeroes each off-diagonal element with a complex plane rotation;
    sweeps repeat until the off-diagonal Frobenius norm drops below
    tol times the input norm. Returns (eigenvalues, vectors or None),
    unsorted; columns of the vector matrix match the eigenvalue order.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, i, sweep
    w_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] w = w_arr
    v_arr = np.eye(n, dtype=np.complex128) if want_vectors else None
    cdef double complex[:, ::1] v = v_arr if want_vectors else None

    cdef double scale = 0.0, off, thresh
    cdef double app, aqq, babs, theta, t, c, s
    cdef double complex b, f, sigma, aip, aiq, vip, viq

    for p in range(n):
        for q in range(n):
            scale += a[p, q].real ** 2 + a[p, q].imag ** 2
    scale = sqrt(scale)
    if scale == 0.0:
        for p in range(n):
            w[p] = 0.0
        return w_arr, v_arr

    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        off = sqrt(2.0 * off)
        if off <= tol * scale:
            break
        # Elements below thresh cannot push the off-norm past tol*scale.
        thresh = 0.1 * tol * scale / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                babs = sqrt(b.real ** 2 + b.imag ** 2)
                if babs <= thresh:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (app - aqq) / (2.0 * babs)
                if fabs(theta) > 1e150:
                    t = -1.0 / (2.0 * theta)
                else:
                    t = -copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                f = b / babs
                sigma = s * f
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - sigma.conjugate() * aiq
                    a[i, q] = sigma * aip + c * aiq
                    a[p, i] = a[i, p].conjugate()
                    a[q, i] = a[i, q].conjugate()
                a[p, p] = c * c * app + s * s * aqq - 2.0 * c * s * babs
                a[q, q] = s * s * app + c * c * aqq + 2.0 * c * s * babs
                a[p, q] = 0
                a[q, p] = 0
                if want_vectors:
                    for i in range(n):
                        vip = v[i, p]
                        viq = v[i, q]
                        v[i, p] = c * vip - sigma.conjugate() * viq
                        v[i, q] = sigma * vip + c * viq
    else:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")

    for p in range(n):
        w[p] = a[p, p].real
    return w_arr, v_arr
