# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 kernel for H(t) = sum_j exp(i w_j t) C_j in sparse COO form."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

ctypedef double complex cplx

cdef inline void _phases(double t, Py_ssize_t nf, const double* freqs,
                         cplx* phase) noexcept nogil:
    cdef Py_ssize_t j
    cdef double arg
    for j in range(nf):
        arg = freqs[j] * t
        phase[j] = cos(arg) + 1j * sin(arg)


cdef inline void _deriv(const cplx* phase, Py_ssize_t nnz, const cnp.int64_t* rows,
                        const cnp.int64_t* cols, const cplx* vals,
                        const cnp.int64_t* fidx, Py_ssize_t d, const cplx* y,
                        cplx* out) noexcept nogil:
    # out = -i H(t) y
    cdef Py_ssize_t j, k
    for j in range(d):
        out[j] = 0
    for k in range(nnz):
        out[rows[k]] += vals[k] * phase[fidx[k]] * y[cols[k]]
    for j in range(d):
        out[j] = -1j * out[j]


def rk4_fourier(double[::1] freqs, cnp.int64_t[::1] rows, cnp.int64_t[::1] cols,
                cplx[::1] vals, cnp.int64_t[::1] fidx, cplx[::1] psi0,
                double t0, double dt, Py_ssize_t nsteps, Py_ssize_t stride):
    """Integrate psi' = -i H(t) psi with classical RK4.

    Returns the states after every ``stride`` steps, starting with psi0 and
    always ending with the final state.
    """
    cdef Py_ssize_t d = psi0.shape[0], nf = freqs.shape[0], nnz = vals.shape[0]
    cdef Py_ssize_t i, j, s = 1
    if stride < 1 or nsteps < 0:
        raise ValueError("stride must be >= 1 and nsteps >= 0")
    cdef Py_ssize_t nsamp = nsteps // stride + 1 + (1 if nsteps % stride else 0)
    samples = np.empty((nsamp, d), dtype=np.complex128)
    work = np.zeros((6, d), dtype=np.complex128)
    phase_buf = np.zeros((3, nf + 1), dtype=np.complex128)
    # keep pointers valid when there are no terms at all
    freq_buf = np.zeros(nf + 1)
    idx_buf = np.zeros((3, nnz + 1), dtype=np.int64)
    val_buf = np.zeros(nnz + 1, dtype=np.complex128)
    freq_buf[:nf] = freqs
    idx_buf[0, :nnz] = rows
    idx_buf[1, :nnz] = cols
    idx_buf[2, :nnz] = fidx
    val_buf[:nnz] = vals
    cdef double[::1] fb = freq_buf
    cdef cnp.int64_t[:, ::1] ib = idx_buf
    cdef cplx[::1] vb = val_buf
    cdef cplx[:, ::1] out = samples
    cdef cplx[:, ::1] w = work
    cdef cplx[:, ::1] phase = phase_buf
    cdef cplx* psi = &w[0, 0]
    cdef cplx* tmp = &w[1, 0]
    cdef cplx* k1 = &w[2, 0]
    cdef cplx* k2 = &w[3, 0]
    cdef cplx* k3 = &w[4, 0]
    cdef cplx* k4 = &w[5, 0]
    cdef const double* pf = &fb[0]
    cdef const cnp.int64_t* pr = &ib[0, 0]
    cdef const cnp.int64_t* pc = &ib[1, 0]
    cdef const cnp.int64_t* pi = &ib[2, 0]
    cdef const cplx* pv = &vb[0]
    cdef cplx* ph0 = &phase[0, 0]
    cdef cplx* ph1 = &phase[1, 0]
    cdef cplx* ph2 = &phase[2, 0]
    cdef cplx* swap
    cdef double t, h2 = 0.5 * dt, h6 = dt / 6.0
    for j in range(d):
        psi[j] = psi0[j]
        out[0, j] = psi[j]
    with nogil:
        _phases(t0, nf, pf, ph0)
        for i in range(nsteps):
            t = t0 + i * dt
            _phases(t + h2, nf, pf, ph1)
            _phases(t + dt, nf, pf, ph2)
            _deriv(ph0, nnz, pr, pc, pv, pi, d, psi, k1)
            for j in range(d):
                tmp[j] = psi[j] + h2 * k1[j]
            _deriv(ph1, nnz, pr, pc, pv, pi, d, tmp, k2)
            for j in range(d):
                tmp[j] = psi[j] + h2 * k2[j]
            _deriv(ph1, nnz, pr, pc, pv, pi, d, tmp, k3)
            for j in range(d):
                tmp[j] = psi[j] + dt * k3[j]
            _deriv(ph2, nnz, pr, pc, pv, pi, d, tmp, k4)
            for j in range(d):
                psi[j] = psi[j] + h6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j])
            # phases at t + dt are the next step's starting phases
            swap = ph0
            ph0 = ph2
            ph2 = swap
            if (i + 1) % stride == 0 or i + 1 == nsteps:
                for j in range(d):
                    out[s, j] = psi[j]
                s += 1
    return samples
