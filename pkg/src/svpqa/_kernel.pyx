# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled midpoint slice propagator for real-symmetric Hamiltonian pairs.

Runs the whole slice loop in C: build H(s) = (1-s)*H_D + s*H_P into a scratch
buffer, eigendecompose with LAPACK dsyevd, and rotate the state by
exp(-i*w*dt) in the eigenbasis.  LAPACK fills the scratch buffer with
Fortran-order eigenvector columns, i.e. eigenvector j occupies row j of the
row-major view; the two basis changes per slice are BLAS dgemv calls on the
real and imaginary parts.  Everything this simulator builds is real
symmetric; complex-Hermitian inputs take the numpy fallback instead.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin
from scipy.linalg.cython_blas cimport dgemv
from scipy.linalg.cython_lapack cimport dsyevd

cnp.import_array()


def propagate(const double[:, ::1] h_d, const double[:, ::1] h_p,
              const double complex[::1] psi0, double dt, const double[::1] s_mids):
    cdef int n = h_d.shape[0]
    cdef int n_slices = s_mids.shape[0]
    if h_d.shape[1] != n or h_p.shape[0] != n or h_p.shape[1] != n:
        raise ValueError("Hamiltonians must be square matrices of equal size")
    if psi0.shape[0] != n:
        raise ValueError("state dimension does not match the Hamiltonians")

    a_arr = np.empty((n, n), dtype=np.float64)
    w_arr = np.empty(n, dtype=np.float64)
    buf_arr = np.empty((4, n), dtype=np.float64)  # psi and c, re/im parts

    cdef double[:, ::1] a = a_arr
    cdef double[::1] w = w_arr
    cdef double[:, ::1] buf = buf_arr
    cdef double *psi_re = &buf[0, 0]
    cdef double *psi_im = &buf[1, 0]
    cdef double *c_re = &buf[2, 0]
    cdef double *c_im = &buf[3, 0]

    cdef Py_ssize_t i0
    for i0 in range(n):
        psi_re[i0] = psi0[i0].real
        psi_im[i0] = psi0[i0].imag

    # workspace query
    cdef char jobz = b'V'
    cdef char trans_t = b'T'
    cdef char trans_n = b'N'
    cdef char uplo = b'L'
    cdef int lda = n
    cdef int inc = 1
    cdef int info = 0
    cdef int lwork = -1
    cdef int liwork = -1
    cdef double one = 1.0
    cdef double zero = 0.0
    cdef double wkopt = 0.0
    cdef int iwkopt = 0
    dsyevd(&jobz, &uplo, &n, &a[0, 0], &lda, &w[0], &wkopt, &lwork, &iwkopt,
           &liwork, &info)
    if info != 0:
        raise RuntimeError(f"dsyevd workspace query failed (info={info})")
    lwork = <int> wkopt
    liwork = iwkopt
    work_arr = np.empty(lwork, dtype=np.float64)
    iwork_arr = np.empty(liwork, dtype=np.intc)
    cdef double[::1] work = work_arr
    cdef int[::1] iwork = iwork_arr

    cdef Py_ssize_t sl, i, j
    cdef double s, r, ph, cr, ci, tr, ti
    cdef int fail = 0

    with nogil:
        for sl in range(n_slices):
            s = s_mids[sl]
            r = 1.0 - s
            for i in range(n):
                for j in range(n):
                    a[i, j] = r * h_d[i, j] + s * h_p[i, j]
            dsyevd(&jobz, &uplo, &n, &a[0, 0], &lda, &w[0], &work[0], &lwork,
                   &iwork[0], &liwork, &info)
            if info != 0:
                fail = info
                break
            # c = V^T psi (Fortran view of the buffer holds V's columns)
            dgemv(&trans_t, &n, &n, &one, &a[0, 0], &lda, psi_re, &inc, &zero, c_re, &inc)
            dgemv(&trans_t, &n, &n, &one, &a[0, 0], &lda, psi_im, &inc, &zero, c_im, &inc)
            for j in range(n):
                ph = w[j] * dt
                cr = cos(ph)
                ci = -sin(ph)
                tr = c_re[j]
                ti = c_im[j]
                c_re[j] = tr * cr - ti * ci
                c_im[j] = tr * ci + ti * cr
            # psi = V c
            dgemv(&trans_n, &n, &n, &one, &a[0, 0], &lda, c_re, &inc, &zero, psi_re, &inc)
            dgemv(&trans_n, &n, &n, &one, &a[0, 0], &lda, c_im, &inc, &zero, psi_im, &inc)

    if fail != 0:
        raise RuntimeError(f"dsyevd failed during propagation (info={fail})")
    out = np.empty(n, dtype=np.complex128)
    out.real = buf_arr[0]
    out.imag = buf_arr[1]
    return out
