"""Fixed-point engine for self-referential food products.

Computes the limiting compositions of foods that contain versions of
themselves: a cookie whose filling carries crumbs of the previous cookie
(``oreo``), two products that each mix in the other (``pair``), and general
directed mixing graphs with arbitrary cycles (``quiver``), all with exact
closed forms cross-checked against iterative solvers.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .composition import Composition, Food, IngredientBasis, carrier_expand, mix, product_kind
from .errors import (
    BasisError,
    DomainError,
    InfinifoodError,
    NonConvergence,
    QuiverError,
    QuiverParseError,
    SolveError,
    UnknownVertexError,
)
from .oreo import (
    OreoParams,
    OreoSolution,
    anderson_cross_check,
    c_step,
    ell_from_package,
    m0_from_masses,
    p_from_ell,
    solve_infinity_oreo,
    w_star_closed_form,
    w_step,
)
from .pair import PairParams, PairSolution, decoupled_check, pair_fixed_point, pair_step, solve_pair
from .quiver import (
    CycleReport,
    MixEdge,
    Quiver,
    SystemSolution,
    VertexDelta,
    classify,
    compare_vertex,
    cycles_through,
    direct_solve,
    enumerate_simple_cycles,
    iterate_system,
    system_fixed_point,
    with_edge_fractions,
)
from .quiverfile import ParseDiagnostic, parse, parse_number, serialize

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "IngredientBasis", "Composition", "Food", "mix", "carrier_expand", "product_kind",
    "InfinifoodError", "DomainError", "BasisError", "NonConvergence", "SolveError",
    "QuiverError", "UnknownVertexError", "QuiverParseError",
    "OreoParams", "OreoSolution", "m0_from_masses", "ell_from_package", "p_from_ell",
    "w_step", "w_star_closed_form", "c_step", "solve_infinity_oreo", "anderson_cross_check",
    "PairParams", "PairSolution", "pair_step", "pair_fixed_point", "solve_pair", "decoupled_check",
    "Quiver", "MixEdge", "CycleReport", "SystemSolution", "VertexDelta",
    "enumerate_simple_cycles", "classify", "system_fixed_point", "direct_solve",
    "iterate_system", "compare_vertex", "cycles_through", "with_edge_fractions",
    "ParseDiagnostic", "parse", "serialize", "parse_number",
]
