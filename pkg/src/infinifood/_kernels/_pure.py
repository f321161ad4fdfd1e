"""Pure-Python iteration kernels.

These are the reference implementations of the hot loops.  A compiled twin
lives in _native.pyx with identical signatures and identical operation
order; the package picks one at import time (see __init__).  Keep the two
in sync: every arithmetic expression here must match the .pyx source.
"""

import numpy as np

BACKEND = "pure"


def w_iterate(p, ms, mw, w, steps):
    """Apply the crumb-mass map ``steps`` times, returning the final mass."""
    for _ in range(steps):
        w = (1.0 - p) * ms * (mw + w) / (ms + p * (mw + w))
    return w


def oreo_orbit(p, ms, mw, c0, tol, max_iter):
    """Run the crumb/creme recursion until both per-step deltas are <= tol.

    Returns (converged, cs, ws, stufs): parallel lists indexed by iteration
    number, entry 0 holding the initial state (c0, w=0, stuf fraction of the
    plain base cookie).  The creme update uses the previous iteration's stuf
    fraction.
    """
    m = ms / (ms + mw)
    c = c0
    w = 0.0
    cs, ws, stufs = [c], [w], [m]
    converged = False
    for _ in range(max_iter):
        w_next = (1.0 - p) * ms * (mw + w) / (ms + p * (mw + w))
        c_next = p + (1.0 - p) * m * c
        dc = abs(c_next - c)
        dw = abs(w_next - w)
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


def pair_orbit(mu, kappa, a0, b0, tol, max_iter):
    """Run the coupled mix-in recursion with synchronous updates.

    Stops once both two-step deltas |x_n - x_{n-2}| are <= tol (the map
    contracts over two steps, not one).  Returns (converged, avals, bvals).
    """
    a = a0
    b = b0
    avals, bvals = [a], [b]
    converged = False
    for n in range(1, max_iter + 1):
        a, b = mu * (1.0 - b), kappa * (1.0 - a)
        avals.append(a)
        bvals.append(b)
        if n >= 2 and abs(a - avals[n - 2]) <= tol and abs(b - bvals[n - 2]) <= tol:
            converged = True
            break
    return converged, avals, bvals


def affine_sweeps(coef, offset, state, scratch, tol, max_iter):
    """Iterate state <- coef @ state + offset until the update stalls.

    ``state`` is overwritten in place; ``scratch`` must be a same-shaped
    work array.  Returns (converged, sweeps, residual) where residual is the
    largest componentwise change seen in the final sweep.
    """
    residual = float("inf")
    for sweep in range(1, max_iter + 1):
        np.matmul(coef, state, out=scratch)
        scratch += offset
        residual = float(np.max(np.abs(scratch - state)))
        state[...] = scratch
        if residual <= tol:
            return True, sweep, residual
    return False, max_iter, residual
