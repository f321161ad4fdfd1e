"""General mixing graphs and their limit compositions.

A quiver is a directed multigraph whose vertices are foods and whose edges
say "this product mixes the source food into the destination food at mass
fraction f".  An edge may carry a carrier transform (alpha, filler): the
thing mixed in is then alpha parts the source's current state plus
(1-alpha) parts pure filler, which is how a self-loop models "crush the
whole cookie, shell included, back into its own filling".

The stationary compositions solve, for every food v,

    x_v = (1 - sum_e f_e) * base_v + sum_{e: u->v} f_e * (alpha_e * x_u + (1-alpha_e) * e_filler)

which is affine in the stacked composition matrix and, because incoming
fractions sum below 1 at every vertex, a strict contraction.  Two
independent routes compute it: synchronous fixed-point sweeps
(``system_fixed_point``) and direct linear elimination (``direct_solve``);
they must agree, and the tests hold them to that.

Cycles are what make a quiver interesting: a self-loop is a one-food
recursion, a two-cycle is a coupled pair, longer cycles generalize them.
``enumerate_simple_cycles`` lists every simple directed cycle with its
class and the contraction factor accumulated around it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from . import _kernels
from .composition import Composition, Food, IngredientBasis
from .errors import (
    BasisError,
    DomainError,
    NonConvergence,
    QuiverError,
    SolveError,
    UnknownVertexError,
)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6


@dataclass(frozen=True)
class MixEdge:
    """A directed mixing relation: src is incorporated into dst at fraction f.

    carrier_alpha defaults to 1 (the source's state goes in as-is) and must
    come with a carrier_filler ingredient exactly when it is below 1.
    """

    src: str
    dst: str
    f: float
    carrier_alpha: float = 1.0
    carrier_filler: str | None = None
    label: str | None = None

    def __post_init__(self):
        if not 0.0 < self.f < 1.0:
            raise QuiverError(f"edge {self.src}->{self.dst}: f must lie strictly in (0, 1), got {self.f!r}")
        if not 0.0 <= self.carrier_alpha <= 1.0:
            raise QuiverError(
                f"edge {self.src}->{self.dst}: carrier fraction must lie in [0, 1], got {self.carrier_alpha!r}"
            )
        has_filler = self.carrier_filler is not None
        if (self.carrier_alpha < 1.0) != has_filler:
            raise QuiverError(
                f"edge {self.src}->{self.dst}: a carrier filler is required exactly when "
                f"the carrier fraction is below 1"
            )


@dataclass(frozen=True)
class Quiver:
    """A validated mixing graph over a shared ingredient basis.

    Foods and edges are stored in canonical order (foods by name, edges by
    src/dst/label), so two quivers assembled in different orders compare
    equal and serialization is deterministic.  Solvers are synchronous, so
    the ordering never affects results.
    """

    basis: IngredientBasis
    foods: tuple[Food, ...]
    edges: tuple[MixEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "foods", tuple(sorted(self.foods, key=lambda f: f.name)))
        object.__setattr__(
            self, "edges", tuple(sorted(self.edges, key=lambda e: (e.src, e.dst, e.label or "")))
        )
        names = [food.name for food in self.foods]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise QuiverError(f"duplicate food names: {', '.join(dupes)}")
        for food in self.foods:
            if food.base.basis.names != self.basis.names:
                raise QuiverError(
                    f"food {food.name!r} uses a different ingredient basis than the quiver"
                )
        known = set(names)
        incoming: dict[str, float] = {name: 0.0 for name in names}
        for edge in self.edges:
            for endpoint in (edge.src, edge.dst):
                if endpoint not in known:
                    raise QuiverError(f"edge {edge.src}->{edge.dst} names unknown food {endpoint!r}")
            if edge.carrier_filler is not None and edge.carrier_filler not in self.basis:
                raise QuiverError(
                    f"edge {edge.src}->{edge.dst}: unknown carrier filler {edge.carrier_filler!r}"
                )
            incoming[edge.dst] += edge.f
        for name, total in incoming.items():
            if total >= 1.0:
                raise QuiverError(
                    f"incoming fractions into {name!r} sum to {total!r}; the sum must stay below 1"
                )

    def food(self, name: str) -> Food:
        for food in self.foods:
            if food.name == name:
                return food
        raise UnknownVertexError(f"no food named {name!r} in the quiver")

    @property
    def food_names(self) -> tuple[str, ...]:
        return tuple(food.name for food in self.foods)


@dataclass(frozen=True)
class CycleReport:
    """A simple directed cycle in canonical form.

    vertices starts at the lexicographically smallest name on the cycle;
    contraction is the product of f*alpha around the cycle (parallel edges
    between the same pair add their coefficients first, because that is how
    they act on the dynamics).
    """

    vertices: tuple[str, ...]
    length: int
    infinity_class: str
    contraction: float


@dataclass(frozen=True)
class SystemSolution:
    """Limit compositions for every food, with solver metadata."""

    compositions: dict[str, Composition]
    iterations: int
    residual: float


@dataclass(frozen=True)
class VertexDelta:
    """How one food's limit composition differs between two quivers."""

    vertex: str
    first: Composition
    second: Composition
    deltas: dict[str, float]
    max_abs_delta: float
    cycles_first: int
    cycles_second: int


def _class_for_length(length: int) -> str:
    if length == 1:
        return "mono"
    if length == 2:
        return "bi"
    if length == 3:
        return "tri"
    return f"{length}-inf"


def classify(cycle: CycleReport) -> str:
    """Infinity class of a cycle: mono, bi, tri, or k-inf for k > 3."""
    if cycle.length < 1:
        raise DomainError(f"cycle length must be at least 1, got {cycle.length!r}")
    return _class_for_length(cycle.length)


def _coefficients(q: Quiver) -> dict[tuple[str, str], float]:
    """Summed f*alpha per ordered vertex pair (parallel edges superpose)."""
    coeff: dict[tuple[str, str], float] = {}
    for edge in q.edges:
        key = (edge.src, edge.dst)
        coeff[key] = coeff.get(key, 0.0) + edge.f * edge.carrier_alpha
    return coeff


def _canonical(cycle: list[str]) -> tuple[str, ...]:
    pivot = cycle.index(min(cycle))
    return tuple(cycle[pivot:] + cycle[:pivot])


def _johnson_cycles(adjacency: dict[str, list[str]]) -> list[list[str]]:
    """All simple directed cycles of length >= 2 (Johnson's blocked search).

    ``adjacency`` must be loop-free with deduplicated neighbor lists.
    """
    order = {name: i for i, name in enumerate(sorted(adjacency))}
    cycles: list[list[str]] = []

    for start in sorted(adjacency, key=order.__getitem__):
        # restrict the search to vertices at or after the start, so every
        # cycle is produced exactly once, rooted at its smallest vertex
        allowed = {v for v in adjacency if order[v] >= order[start]}
        succ = {v: [w for w in adjacency[v] if w in allowed] for v in allowed}
        blocked: set[str] = {start}
        block_map: dict[str, set[str]] = {v: set() for v in allowed}
        path = [start]
        stack = [iter(succ[start])]
        closed = [False]

        def unblock(v: str) -> None:
            pending = {v}
            while pending:
                u = pending.pop()
                if u in blocked:
                    blocked.remove(u)
                    pending.update(block_map[u])
                    block_map[u].clear()

        while stack:
            advanced = False
            for w in stack[-1]:
                if w == start:
                    cycles.append(path.copy())
                    closed[-1] = True
                elif w not in blocked:
                    path.append(w)
                    blocked.add(w)
                    stack.append(iter(succ[w]))
                    closed.append(False)
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            v = path.pop()
            if closed.pop():
                if closed:
                    closed[-1] = True
                unblock(v)
            else:
                for w in succ[v]:
                    block_map[w].add(v)
    return cycles


def enumerate_simple_cycles(q: Quiver) -> list[CycleReport]:
    """Every simple directed cycle, canonicalized and sorted.

    Self-loops appear as length-1 cycles.  Each cycle is rotated to start at
    its lexicographically smallest vertex, and the list is sorted by
    (length, vertex sequence) so the output is stable for golden tests.
    """
    coeff = _coefficients(q)
    adjacency: dict[str, list[str]] = {name: [] for name in q.food_names}
    loops: set[str] = set()
    for (src, dst) in coeff:
        if src == dst:
            loops.add(src)
        elif dst not in adjacency[src]:
            adjacency[src].append(dst)

    raw: list[list[str]] = [[v] for v in sorted(loops)]
    raw.extend(_johnson_cycles(adjacency))

    reports = []
    for cycle in raw:
        vertices = _canonical(cycle)
        contraction = 1.0
        for i, src in enumerate(vertices):
            dst = vertices[(i + 1) % len(vertices)]
            contraction *= coeff[(src, dst)]
        reports.append(
            CycleReport(
                vertices=vertices,
                length=len(vertices),
                infinity_class=_class_for_length(len(vertices)),
                contraction=contraction,
            )
        )
    reports.sort(key=lambda r: (r.length, r.vertices))
    return reports


def _build_affine(q: Quiver) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Affine form of the stationarity system: x' = coef @ x + offset.

    The carrier transform is affine in the source state, so the coefficient
    matrix acts per vertex (one V x V matrix shared by every ingredient
    column) and the fillers fold into the offset together with the scaled
    bases.  Returns (coef, offset, base) with base the stacked start state.
    """
    names = q.food_names
    index = {name: i for i, name in enumerate(names)}
    nv, nk = len(names), len(q.basis)
    coef = np.zeros((nv, nv))
    offset = np.zeros((nv, nk))
    base = np.zeros((nv, nk))
    for i, food in enumerate(q.foods):
        base[i] = food.base.weights

    incoming = np.zeros(nv)
    for edge in q.edges:
        i, j = index[edge.dst], index[edge.src]
        coef[i, j] += edge.f * edge.carrier_alpha
        incoming[i] += edge.f
        if edge.carrier_filler is not None:
            k = q.basis.index(edge.carrier_filler)
            offset[i, k] += edge.f * (1.0 - edge.carrier_alpha)
    offset += (1.0 - incoming)[:, None] * base
    return coef, offset, base


def _as_solution(q: Quiver, state: np.ndarray, iterations: int, residual: float) -> SystemSolution:
    compositions = {
        food.name: Composition(q.basis, tuple(state[i])) for i, food in enumerate(q.foods)
    }
    return SystemSolution(compositions=compositions, iterations=iterations, residual=residual)


def system_fixed_point(
    q: Quiver,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SystemSolution:
    """Stationary compositions by synchronous fixed-point sweeps.

    Starts every food at its base composition and applies the full update
    simultaneously (so the result is independent of food ordering) until
    the largest componentwise change in a sweep is at most ``tol``; that
    final change is reported as the residual.
    """
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be at least 1, got {max_iter!r}")
    if not q.foods:
        return SystemSolution(compositions={}, iterations=0, residual=0.0)
    coef, offset, base = _build_affine(q)
    state = base.copy()
    scratch = np.empty_like(state)
    converged, sweeps, residual = _kernels.affine_sweeps(coef, offset, state, scratch, tol, max_iter)
    if not converged:
        raise NonConvergence(
            f"no convergence within {max_iter} sweeps at tol={tol!r}",
            partial=_as_solution(q, state, sweeps, residual),
        )
    return _as_solution(q, state, sweeps, residual)


def direct_solve(q: Quiver) -> SystemSolution:
    """Stationary compositions by linear elimination; the exact cross-check.

    Solves (I - coef) X = offset for the stacked composition matrix.  The
    incoming-fraction invariant makes I - coef strictly diagonally dominant,
    so the system is nonsingular; a singular matrix is still guarded and
    reported as SolveError.  The residual is the defect of the returned
    state under one update sweep.
    """
    if not q.foods:
        return SystemSolution(compositions={}, iterations=0, residual=0.0)
    coef, offset, _ = _build_affine(q)
    eye = np.eye(coef.shape[0])
    try:
        state = np.linalg.solve(eye - coef, offset)
    except np.linalg.LinAlgError as exc:
        raise SolveError(f"stationary system is singular: {exc}") from exc
    residual = float(np.max(np.abs(coef @ state + offset - state))) if state.size else 0.0
    return _as_solution(q, state, 0, residual)


def iterate_system(q: Quiver, steps: int) -> list[SystemSolution]:
    """Snapshots of the synchronous iteration, one per sweep.

    Entry 0 is the start state (every food at its base composition); entry
    k is the state after k sweeps, with the residual recording that sweep's
    largest componentwise change.
    """
    if steps < 0:
        raise DomainError(f"steps must be non-negative, got {steps!r}")
    coef, offset, base = _build_affine(q)
    state = base.copy()
    snapshots = [_as_solution(q, state, 0, float("inf"))]
    for sweep in range(1, steps + 1):
        new_state = coef @ state + offset
        residual = float(np.max(np.abs(new_state - state))) if state.size else 0.0
        state = new_state
        snapshots.append(_as_solution(q, state, sweep, residual))
    return snapshots


def cycles_through(q: Quiver, vertex: str) -> int:
    """How many simple cycles pass through the given food."""
    q.food(vertex)
    return sum(1 for report in enumerate_simple_cycles(q) if vertex in report.vertices)


def compare_vertex(
    q1: Quiver,
    q2: Quiver,
    vertex: str,
    tol: float = DEFAULT_TOL,
) -> VertexDelta:
    """Contrast one food's limit composition between two quivers.

    Solves both systems to ``tol`` and reports per-ingredient differences
    (second minus first) together with the simple-cycle counts through the
    vertex, the raw material for studying how added cycles move a limit.
    """
    if q1.basis.names != q2.basis.names:
        raise BasisError("the two quivers use different ingredient bases")
    first = system_fixed_point(q1, tol=tol).compositions[q1.food(vertex).name]
    second = system_fixed_point(q2, tol=tol).compositions[q2.food(vertex).name]
    deltas = {
        name: second.weights[i] - first.weights[i]
        for i, name in enumerate(q1.basis.names)
    }
    return VertexDelta(
        vertex=vertex,
        first=first,
        second=second,
        deltas=deltas,
        max_abs_delta=max(abs(d) for d in deltas.values()),
        cycles_first=cycles_through(q1, vertex),
        cycles_second=cycles_through(q2, vertex),
    )


def with_edge_fractions(q: Quiver, updates: Iterable[tuple[str, str, float]]) -> Quiver:
    """A copy of the quiver with selected edge fractions replaced.

    Each update names one (src, dst) pair that must match exactly one edge;
    used by the CLI to substitute unmeasured preset fractions at load time.
    """
    edges = list(q.edges)
    for src, dst, f in updates:
        matches = [i for i, e in enumerate(edges) if e.src == src and e.dst == dst]
        if not matches:
            raise UnknownVertexError(f"no edge {src}->{dst} in the quiver")
        if len(matches) > 1:
            raise QuiverError(f"edge {src}->{dst} is ambiguous: {len(matches)} parallel edges")
        edges[matches[0]] = replace(edges[matches[0]], f=float(f))
    return Quiver(q.basis, q.foods, tuple(edges))
