# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled iteration kernels; the fast twin of _pure.py.

Same signatures, same operation order (the build disables FP contraction),
so results agree with the fallback to the last bit on conforming targets.
"""

from libc.math cimport fabs

BACKEND = "native"


def w_iterate(double p, double ms, double mw, double w, long steps):
    """Apply the crumb-mass map ``steps`` times, returning the final mass."""
    cdef long i
    for i in range(steps):
        w = (1.0 - p) * ms * (mw + w) / (ms + p * (mw + w))
    return w


def oreo_orbit(double p, double ms, double mw, double c0, double tol, long max_iter):
    """Run the crumb/creme recursion until both per-step deltas are <= tol."""
    cdef double m = ms / (ms + mw)
    cdef double c = c0
    cdef double w = 0.0
    cdef double w_next, c_next, dc, dw
    cdef long i
    cdef bint converged = False
    cs = [c]
    ws = [w]
    stufs = [m]
    for i in range(max_iter):
        w_next = (1.0 - p) * ms * (mw + w) / (ms + p * (mw + w))
        c_next = p + (1.0 - p) * m * c
        dc = fabs(c_next - c)
        dw = fabs(w_next - w)
        w = w_next
        c = c_next
        m = (ms + w) / (ms + mw + w)
        cs.append(c)
        ws.append(w)
        stufs.append(m)
        if dc <= tol and dw <= tol:
            converged = True
            break
    return converged, cs, ws, stufs


def pair_orbit(double mu, double kappa, double a0, double b0, double tol, long max_iter):
    """Run the coupled mix-in recursion; stop on two-step deltas <= tol."""
    cdef double a = a0
    cdef double b = b0
    cdef double a_next, b_next
    cdef long n
    cdef bint converged = False
    avals = [a]
    bvals = [b]
    for n in range(1, max_iter + 1):
        a_next = mu * (1.0 - b)
        b_next = kappa * (1.0 - a)
        a = a_next
        b = b_next
        avals.append(a)
        bvals.append(b)
        if n >= 2 and fabs(a - <double> avals[n - 2]) <= tol and fabs(b - <double> bvals[n - 2]) <= tol:
            converged = True
            break
    return converged, avals, bvals


def affine_sweeps(double[:, ::1] coef, double[:, ::1] offset,
                  double[:, ::1] state, double[:, ::1] scratch,
                  double tol, long max_iter):
    """Iterate state <- coef @ state + offset in place until the update stalls."""
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t k = state.shape[1]
    cdef Py_ssize_t i, j, t
    cdef long sweep
    cdef double acc, diff, residual = float("inf")
    for sweep in range(1, max_iter + 1):
        residual = 0.0
        for i in range(n):
            for j in range(k):
                acc = offset[i, j]
                for t in range(n):
                    acc = acc + coef[i, t] * state[t, j]
                scratch[i, j] = acc
        for i in range(n):
            for j in range(k):
                diff = fabs(scratch[i, j] - state[i, j])
                if diff > residual:
                    residual = diff
                state[i, j] = scratch[i, j]
        if residual <= tol:
            return True, sweep, residual
    return False, max_iter, residual
