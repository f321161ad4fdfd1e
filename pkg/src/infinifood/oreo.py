"""The single-cookie recursion: a filling that contains crumbs of itself.

Repeatedly crushing the latest cookie into a fresh base cookie's filling
drives two coupled sequences: the crumb mass w_n carried by the filling and
the creme fraction c_n of the filling.  Each new filling is a fraction p
fresh base creme and a fraction 1-p crushed previous cookie, whose crumbs
ride along in the whipped filling's air pockets (they add mass but displace
no creme, so the creme mass per cookie stays fixed at ``ms``).  That crumb
model is hard-coded; the displacement alternative is contradicted by the
crumb/creme density gap.

Both maps are contractions with factor at most 1-p, so the limits exist and
do not depend on where the sequence starts.  The crumb limit w* is the
positive root of a quadratic, and the creme limit is

    c* = p / (1 - (1-p) * m*)        with  m* = (ms + w*) / (ms + mw + w*).

``solve_infinity_oreo`` returns these closed forms together with the full
iterative trace, run until it demonstrably lands on the same values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .errors import DomainError, NonConvergence

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6


@dataclass(frozen=True)
class OreoParams:
    """Inputs of the crumb-loading recursion.

    ms: grams of creme in the base cookie's filling (> 0).
    mw: grams of wafer in the base cookie, both biscuits together (> 0).
    p:  fraction of each new filling contributed by fresh base creme.
        Iterative solving needs 0 < p < 1; the boundary values are accepted
        here so the closed-form operations can handle degenerate limits.
    c0: creme fraction of the starting filling (pure creme by default).
    """

    ms: float
    mw: float
    p: float
    c0: float = 1.0

    def __post_init__(self):
        for label, value in (("ms", self.ms), ("mw", self.mw)):
            if not value > 0.0:
                raise DomainError(f"{label} must be a positive mass, got {value!r}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"base creme fraction p must lie in [0, 1], got {self.p!r}")
        if not 0.0 <= self.c0 <= 1.0:
            raise DomainError(f"initial creme fraction c0 must lie in [0, 1], got {self.c0!r}")


@dataclass(frozen=True)
class OreoSolution:
    """Closed-form limits plus the iterative trace that corroborates them.

    trace rows are (n, c_n, w_n, m_n) starting at n = 0, one per iteration,
    so the trace doubles as the CSV export including initial conditions.
    """

    p: float
    w_star: float
    m_star: float
    c_star: float
    iterations: int
    trace: tuple[tuple[int, float, float, float], ...]


def m0_from_masses(ms: float, mw: float) -> float:
    """Stuf fraction of the plain base cookie: ms / (ms + mw)."""
    if not ms > 0.0 or not mw > 0.0:
        raise DomainError(f"masses must be positive, got ms={ms!r}, mw={mw!r}")
    return ms / (ms + mw)


def ell_from_package(total_stuf_mass: float, cookie_count: float, base_creme_mass: float) -> float:
    """Creme fraction of a crumb-loaded filling, from package measurements.

    The package holds ``cookie_count`` cookies whose fillings together weigh
    ``total_stuf_mass``; each filling carries ``base_creme_mass`` grams of
    creme, so the rest of the mean filling mass is crumbs.
    """
    if not (total_stuf_mass > 0.0 and cookie_count > 0 and base_creme_mass > 0.0):
        raise DomainError("package measurements must all be positive")
    if base_creme_mass * cookie_count > total_stuf_mass:
        raise DomainError(
            "mean filling mass is below the base creme mass; "
            "crumb mass cannot be negative"
        )
    return base_creme_mass / (total_stuf_mass / cookie_count)


def p_from_ell(ell: float, m0: float) -> float:
    """Base creme fraction pinned down by the loaded-filling measurement.

    Solves c_1 = p + (1-p) * m0 * c_0 for p with c_0 = 1 and c_1 = ell.
    """
    if not 0.0 <= m0 < 1.0:
        raise DomainError(f"m0 must lie in [0, 1), got {m0!r}")
    if ell < m0:
        raise DomainError(
            f"loaded creme fraction {ell!r} below the base stuf fraction {m0!r} "
            "would imply negative base creme"
        )
    return (ell - m0) / (1.0 - m0)


def w_step(w_prev: float, params: OreoParams) -> float:
    """One application of the crumb-mass map."""
    if w_prev < 0.0:
        raise DomainError(f"crumb mass cannot be negative, got {w_prev!r}")
    p, ms, mw = params.p, params.ms, params.mw
    return (1.0 - p) * ms * (mw + w_prev) / (ms + p * (mw + w_prev))


def w_star_closed_form(params: OreoParams) -> tuple[float, float]:
    """Limiting crumb mass and stuf fraction.

    w* is the positive root of p*w^2 + p*(ms+mw)*w - (1-p)*ms*mw = 0,
    evaluated in the cancellation-free conjugate form; m* follows from it.
    Needs p > 0 (at p = 0 the crumb mass grows without bound).
    """
    p, ms, mw = params.p, params.ms, params.mw
    if p == 0.0:
        raise DomainError("p = 0 leaves no base creme; the crumb mass has no finite attractor")
    s = ms + mw
    t = (1.0 - p) / p * ms * mw
    w_star = 2.0 * t / (s + math.sqrt(s * s + 4.0 * t))
    m_star = (ms + w_star) / (ms + mw + w_star)
    return w_star, m_star


def c_step(c_prev: float, m_prev: float, p: float) -> float:
    """One application of the creme-fraction map: p + (1-p) * m_prev * c_prev."""
    return p + (1.0 - p) * m_prev * c_prev


def solve_infinity_oreo(
    params: OreoParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> OreoSolution:
    """Closed-form limits plus an iterative trace run to tolerance.

    The iteration stops once both per-step deltas |c_n - c_{n-1}| and
    |w_n - w_{n-1}| fall under an effective tolerance chosen so the
    remaining distance to the fixed point is provably within 10*tol (the
    contraction factor is at most 1-p, so a stalled step bounds the tail).
    Raises NonConvergence, carrying the partial trace, if ``max_iter`` runs
    out first.
    """
    p = params.p
    if not 0.0 < p < 1.0:
        raise DomainError(f"iterative solving needs 0 < p < 1, got p={p!r}")
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be at least 1, got {max_iter!r}")

    w_star, m_star = w_star_closed_form(params)
    c_star = p / (1.0 - (1.0 - p) * m_star)

    eff_tol = tol * min(1.0, p / (1.0 - p))
    converged, cs, ws, stufs = _kernels.oreo_orbit(
        p, params.ms, params.mw, params.c0, eff_tol, max_iter
    )
    trace = tuple((n, cs[n], ws[n], stufs[n]) for n in range(len(cs)))
    if not converged:
        raise NonConvergence(
            f"no convergence within {max_iter} iterations at tol={tol!r}", partial=trace
        )
    if abs(cs[-1] - c_star) > 10.0 * tol or abs(ws[-1] - w_star) > 10.0 * tol:
        # unreachable when the contraction bound holds; kept as a tripwire
        raise NonConvergence(
            "iterative limit disagrees with the closed form beyond 10*tol", partial=trace
        )
    return OreoSolution(
        p=p,
        w_star=w_star,
        m_star=m_star,
        c_star=c_star,
        iterations=len(cs) - 1,
        trace=trace,
    )


def anderson_cross_check(multiplier: float, s: float) -> float:
    """Stuf fraction implied by a filling multiplier on a known base cookie.

    A variant holding ``multiplier`` times the original filling, with the
    wafer unchanged, has stuf fraction multiplier*s / (multiplier*s + 1 - s)
    where ``s`` is the original cookie's stuf fraction.  Useful as an
    independent estimate next to directly weighed fillings.
    """
    if not multiplier > 0.0:
        raise DomainError(f"multiplier must be positive, got {multiplier!r}")
    if not 0.0 < s < 1.0:
        raise DomainError(f"stuf fraction must lie in (0, 1), got {s!r}")
    return multiplier * s / (multiplier * s + 1.0 - s)
