"""The two-food system: a pair of products that each contain the other.

Let a_n be the foreign-material fraction of the first product (say, candy
material inside a cookie) and b_n the foreign fraction of the second (dough
inside the candy).  Each generation mixes the other product's previous
generation into a fresh base:

    a_{n+1} = mu    * (1 - b_n)
    b_{n+1} = kappa * (1 - a_n)

with mu and kappa the fixed recipe mix-in fractions and starting values
a_0 = mu, b_0 = kappa (the first generation mixes in the plain foreign
food).  Substituting one equation into the other decouples the system over
two steps into an affine recurrence with ratio mu*kappa, so both sequences
converge geometrically to

    a* = mu * (1 - kappa) / (1 - mu*kappa)
    b* = kappa * (1 - mu) / (1 - mu*kappa)

for any starting point.  No measured values of mu and kappa exist, so this
module never assumes defaults for them.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels
from .errors import DomainError, NonConvergence

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6


@dataclass(frozen=True)
class PairParams:
    """Mix-in fractions and starting point of the coupled recursion.

    a0 and b0 default to mu and kappa, matching a first generation built
    from the plain foreign foods.
    """

    mu: float
    kappa: float
    a0: float | None = None
    b0: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.mu <= 1.0:
            raise DomainError(f"mu must lie in [0, 1], got {self.mu!r}")
        if not 0.0 <= self.kappa <= 1.0:
            raise DomainError(f"kappa must lie in [0, 1], got {self.kappa!r}")
        if self.a0 is None:
            object.__setattr__(self, "a0", self.mu)
        if self.b0 is None:
            object.__setattr__(self, "b0", self.kappa)
        if not 0.0 <= self.a0 <= 1.0:
            raise DomainError(f"a0 must lie in [0, 1], got {self.a0!r}")
        if not 0.0 <= self.b0 <= 1.0:
            raise DomainError(f"b0 must lie in [0, 1], got {self.b0!r}")


@dataclass(frozen=True)
class PairSolution:
    """Closed-form fixed point, two-step contraction rate, and the trace.

    trace rows are (n, a_n, b_n) starting at n = 0.
    """

    a_star: float
    b_star: float
    rate: float
    iterations: int
    trace: tuple[tuple[int, float, float], ...]


def pair_step(a: float, b: float, params: PairParams) -> tuple[float, float]:
    """One synchronous update of the coupled recursion."""
    return params.mu * (1.0 - b), params.kappa * (1.0 - a)


def pair_fixed_point(mu: float, kappa: float) -> tuple[float, float]:
    """Closed-form limits (a*, b*); needs mu*kappa < 1."""
    rate = mu * kappa
    if rate >= 1.0:
        raise DomainError(f"mu*kappa must be below 1, got {rate!r}")
    return mu * (1.0 - kappa) / (1.0 - rate), kappa * (1.0 - mu) / (1.0 - rate)


def solve_pair(
    params: PairParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> PairSolution:
    """Iterate the coupled recursion to tolerance and cross-check the limit.

    The even and odd subsequences converge independently (the map contracts
    over two steps with ratio mu*kappa), so the stopping rule requires both
    two-step deltas |a_{n+2} - a_n| and |b_{n+2} - b_n| to fall under an
    effective tolerance scaled so the iterates provably sit within 10*tol
    of the closed-form fixed point when the loop stops.
    """
    mu, kappa = params.mu, params.kappa
    if not (0.0 < mu < 1.0 and 0.0 < kappa < 1.0):
        raise DomainError(
            f"iterative solving needs mu and kappa in the open interval (0, 1), "
            f"got mu={mu!r}, kappa={kappa!r}"
        )
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be at least 1, got {max_iter!r}")

    a_star, b_star = pair_fixed_point(mu, kappa)
    rate = mu * kappa
    eff_tol = tol * min(1.0, (1.0 - rate) / rate)
    converged, avals, bvals = _kernels.pair_orbit(
        mu, kappa, params.a0, params.b0, eff_tol, max_iter
    )
    trace = tuple((n, avals[n], bvals[n]) for n in range(len(avals)))
    if not converged:
        raise NonConvergence(
            f"no convergence within {max_iter} iterations at tol={tol!r}", partial=trace
        )
    if abs(avals[-1] - a_star) > 10.0 * tol or abs(bvals[-1] - b_star) > 10.0 * tol:
        # unreachable when the two-step contraction bound holds; tripwire
        raise NonConvergence(
            "iterative limit disagrees with the closed form beyond 10*tol", partial=trace
        )
    return PairSolution(
        a_star=a_star,
        b_star=b_star,
        rate=rate,
        iterations=len(avals) - 1,
        trace=trace,
    )


def decoupled_check(trace, params: PairParams) -> float:
    """Largest violation of the two-step decoupled recurrences on a trace.

    Exact trajectories satisfy a_{n+2} = mu*(1-kappa) + mu*kappa*a_n and the
    b analogue, so on solver output this is a rounding-level residual; a
    trace that was not produced by the recursion shows up with a visibly
    positive value.
    """
    rows = list(trace)
    if len(rows) < 3:
        raise DomainError(f"need at least 3 trace rows, got {len(rows)}")
    mu, kappa = params.mu, params.kappa
    rate = mu * kappa
    worst = 0.0
    for i in range(len(rows) - 2):
        _, a_n, b_n = rows[i]
        _, a_nn, b_nn = rows[i + 2]
        res_a = abs(a_nn - mu * (1.0 - kappa) - rate * a_n)
        res_b = abs(b_nn - kappa * (1.0 - mu) - rate * b_n)
        worst = max(worst, res_a, res_b)
    return worst
