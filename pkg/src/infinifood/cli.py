"""Command-line surface for the solvers, cycle census, and trace export.

Exit codes: 0 success, 1 usage error, 2 file parse/validation error,
3 non-convergence.  Output is plain ASCII and byte-deterministic; every
numeric table value is also available as CSV at 15 significant digits via
--csv, and per-iteration traces are written as CSV files via --trace.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import constants, quiverfile
from .errors import (
    BasisError,
    DomainError,
    NonConvergence,
    QuiverError,
    QuiverParseError,
    UnknownVertexError,
)
from .oreo import (
    OreoParams,
    ell_from_package,
    m0_from_masses,
    p_from_ell,
    solve_infinity_oreo,
)
from .pair import PairParams, solve_pair
from .quiver import (
    Quiver,
    enumerate_simple_cycles,
    iterate_system,
    compare_vertex,
    system_fixed_point,
    with_edge_fractions,
)

_FMT = "{:.15g}"


class _UsageError(Exception):
    pass


class _Exit(Exception):
    def __init__(self, code: int):
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract here is 1
    def error(self, message):
        raise _UsageError(message)


def _number(token: str) -> float:
    return quiverfile.parse_number(token)


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return _FMT.format(value)


def _print_table(rows: list[tuple[str, object]], csv: bool) -> None:
    if csv:
        print("quantity,value")
        for name, value in rows:
            print(f"{name},{_fmt(value)}")
    else:
        width = max(len(name) for name, _ in rows)
        for name, value in rows:
            print(f"{name:<{width}}  {_fmt(value)}")


def _write_csv(path: str, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if not isinstance(v, str) else v for v in row) + "\n")


def _load_text(path: str) -> tuple[str, str]:
    """Resolve a file path, falling back to the shipped presets directory.

    Lets the documented invocations like ``presets/figure_quiver.quiver``
    work from any working directory once the package is installed.
    """
    p = Path(path)
    if p.is_file():
        return path, p.read_text(encoding="utf-8")
    try:
        return path, constants.read_preset(p.name)
    except FileNotFoundError:
        raise _UsageError(f"no such file or shipped preset: {path}") from None


def _parse_quiver(path: str) -> Quiver:
    display, text = _load_text(path)
    try:
        return quiverfile.parse(text)
    except QuiverParseError as err:
        for d in err.diagnostics:
            print(f"{display}:{d.line}:{d.column}: {d.kind}: {d.message}", file=sys.stderr)
        raise _Exit(2) from err


_PARAM_KEYS = ("ms", "mw", "stuf_total", "cookie_count", "c0")


def _read_params_file(path: str) -> dict[str, float]:
    display, text = _load_text(path)
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, token = line.partition("=")
        key = key.strip()
        if not sep or key not in _PARAM_KEYS:
            print(
                f"{display}:{lineno}:1: SyntaxError: expected '<key> = <number>' "
                f"with key one of {', '.join(_PARAM_KEYS)}",
                file=sys.stderr,
            )
            raise _Exit(2)
        try:
            values[key] = _number(token)
        except ValueError as err:
            print(f"{display}:{lineno}:1: SyntaxError: {err}", file=sys.stderr)
            raise _Exit(2) from None
    return values


def _cmd_solve_oreo(args) -> int:
    values = {
        "ms": constants.MEGA_STUF_CREME_G,
        "mw": constants.MEGA_STUF_WAFER_G,
        "stuf_total": constants.LOADED_PACKAGE_STUF_G,
        "cookie_count": float(constants.LOADED_PACKAGE_COOKIES),
        "c0": 1.0,
    }
    if args.params:
        values.update(_read_params_file(args.params))
    for key in ("ms", "mw", "c0"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    if args.stuf_total is not None:
        values["stuf_total"] = args.stuf_total
    if args.count is not None:
        values["cookie_count"] = args.count
    if args.ell is not None and (args.stuf_total is not None or args.count is not None):
        raise _UsageError("give either --ell or --stuf-total/--count, not both")

    if args.ell is not None:
        ell = args.ell
    else:
        ell = ell_from_package(values["stuf_total"], values["cookie_count"], values["ms"])
    m0 = m0_from_masses(values["ms"], values["mw"])
    p = p_from_ell(ell, m0)
    if p <= 0.0:
        print(
            "non-convergence: p = 0 leaves no base creme, so the crumb mass "
            "grows without bound and no finite attractor exists",
            file=sys.stderr,
        )
        return 3
    if p >= 1.0:
        raise _UsageError("p = 1 means a pure-creme filling; the recursion has nothing to do")

    params = OreoParams(ms=values["ms"], mw=values["mw"], p=p, c0=values["c0"])
    solution = solve_infinity_oreo(params, tol=args.tol, max_iter=args.max_iter)
    rows = [
        ("p", solution.p),
        ("w_star_g", solution.w_star),
        ("m_star", solution.m_star),
        ("c_star", solution.c_star),
        ("ell", ell),
        ("c_star_minus_ell", solution.c_star - ell),
        ("iterations", solution.iterations),
    ]
    _print_table(rows, args.csv)
    if args.trace:
        _write_csv(args.trace, "n,c_n,w_n,m_n", solution.trace)
    return 0


def _cmd_solve_pair(args) -> int:
    params = PairParams(mu=args.mu, kappa=args.kappa, a0=args.a0, b0=args.b0)
    solution = solve_pair(params, tol=args.tol, max_iter=args.max_iter)
    rows = [
        ("a_star", solution.a_star),
        ("b_star", solution.b_star),
        ("one_minus_a_star", 1.0 - solution.a_star),
        ("one_minus_b_star", 1.0 - solution.b_star),
        ("rate", solution.rate),
        ("iterations", solution.iterations),
    ]
    _print_table(rows, args.csv)
    if args.trace:
        _write_csv(args.trace, "n,a_n,b_n", solution.trace)
    return 0


def _pair_edge_targets(q: Quiver) -> tuple[tuple[str, str], tuple[str, str]]:
    """Which edges --mu and --kappa refer to in a two-food quiver.

    The mix-in fraction of the cookie-kind receiver is mu; the edge feeding
    the other food carries kappa.  Anything more complicated needs --set.
    """
    if len(q.foods) != 2 or len(q.edges) != 2:
        raise _UsageError(
            "--mu/--kappa apply to quivers with exactly two foods and two edges; "
            "use --set SRC->DST=VALUE instead"
        )
    cookies = [f.name for f in q.foods if f.kind == "cookie"]
    if len(cookies) != 1:
        raise _UsageError(
            "--mu/--kappa need exactly one food of kind 'cookie'; use --set instead"
        )
    cookie = cookies[0]
    other = next(f.name for f in q.foods if f.name != cookie)
    pairs = {(e.src, e.dst) for e in q.edges}
    if pairs != {(other, cookie), (cookie, other)}:
        raise _UsageError(
            "--mu/--kappa need the two edges to form a two-cycle; use --set instead"
        )
    return (other, cookie), (cookie, other)


def _apply_overrides(q: Quiver, args) -> Quiver:
    updates: list[tuple[str, str, float]] = []
    if args.mu is not None or args.kappa is not None:
        mu_edge, kappa_edge = _pair_edge_targets(q)
        if args.mu is not None:
            updates.append((*mu_edge, args.mu))
        if args.kappa is not None:
            updates.append((*kappa_edge, args.kappa))
    for spec in args.set or ():
        head, sep, num = spec.rpartition("=")
        src, arrow, dst = head.partition("->")
        if not sep or not arrow:
            raise _UsageError(f"--set expects SRC->DST=VALUE, got {spec!r}")
        try:
            value = _number(num)
        except ValueError as err:
            raise _UsageError(f"--set {spec!r}: {err}") from None
        updates.append((src.strip(), dst.strip(), value))
    if not updates:
        return q
    return with_edge_fractions(q, updates)


def _cmd_quiver_check(args) -> int:
    q = _parse_quiver(args.path)
    cycles = enumerate_simple_cycles(q)
    print(f"valid: {len(q.foods)} foods, {len(q.edges)} edges, {len(cycles)} cycles")
    return 0


def _cmd_quiver_cycles(args) -> int:
    q = _parse_quiver(args.path)
    reports = enumerate_simple_cycles(q)
    if args.csv:
        print("length,class,contraction,vertices")
        for r in reports:
            print(f"{r.length},{r.infinity_class},{_fmt(r.contraction)},{'->'.join(r.vertices)}")
    else:
        print(f"{len(reports)} simple cycle(s)")
        for r in reports:
            route = " -> ".join(r.vertices + (r.vertices[0],)) if r.length > 1 else r.vertices[0]
            print(f"length {r.length}  {r.infinity_class:<6} contraction {_fmt(r.contraction):<22} {route}")
    return 0


def _cmd_quiver_fixpoint(args) -> int:
    q = _apply_overrides(_parse_quiver(args.path), args)
    solution = system_fixed_point(q, tol=args.tol, max_iter=args.max_iter)
    if args.csv:
        print("food,ingredient,fraction")
        for name in sorted(solution.compositions):
            comp = solution.compositions[name]
            for ingredient, weight in zip(q.basis.names, comp.weights):
                print(f"{name},{ingredient},{_fmt(weight)}")
    else:
        print(f"converged in {solution.iterations} sweeps, residual {_fmt(solution.residual)}")
        width = max((len(n) for n in solution.compositions), default=4)
        for name in sorted(solution.compositions):
            comp = solution.compositions[name]
            for ingredient, weight in zip(q.basis.names, comp.weights):
                print(f"{name:<{width}}  {ingredient:<12}  {_fmt(weight)}")
    if args.trace:
        snapshots = iterate_system(q, solution.iterations)
        rows = []
        for sweep, snap in enumerate(snapshots):
            for name in sorted(snap.compositions):
                comp = snap.compositions[name]
                for ingredient, weight in zip(q.basis.names, comp.weights):
                    rows.append((sweep, name, ingredient, weight))
        _write_csv(args.trace, "sweep,food,ingredient,fraction", rows)
    return 0


def _cmd_quiver_compare(args) -> int:
    q1 = _parse_quiver(args.path)
    q2 = _parse_quiver(args.path2)
    delta = compare_vertex(q1, q2, args.vertex, tol=args.tol)
    if args.csv:
        print("field,first,second,delta")
        for i, ingredient in enumerate(q1.basis.names):
            print(
                f"{ingredient},{_fmt(delta.first.weights[i])},"
                f"{_fmt(delta.second.weights[i])},{_fmt(delta.deltas[ingredient])}"
            )
        print(f"cycles_through_vertex,{delta.cycles_first},{delta.cycles_second},"
              f"{delta.cycles_second - delta.cycles_first}")
    else:
        print(f"vertex {delta.vertex}: max |delta| = {_fmt(delta.max_abs_delta)}")
        width = max(len(n) for n in q1.basis.names)
        for i, ingredient in enumerate(q1.basis.names):
            print(
                f"{ingredient:<{width}}  first {_fmt(delta.first.weights[i]):<22} "
                f"second {_fmt(delta.second.weights[i]):<22} delta {_fmt(delta.deltas[ingredient])}"
            )
        print(f"cycles through {delta.vertex}: first {delta.cycles_first}, second {delta.cycles_second}")
    return 0


def _cmd_presets(args) -> int:
    if args.show:
        try:
            sys.stdout.write(constants.read_preset(args.show))
        except FileNotFoundError as err:
            raise _UsageError(str(err)) from None
    else:
        for name in constants.preset_names():
            print(name)
    return 0


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=_number, default=1e-12, help="stopping tolerance")
    parser.add_argument("--max-iter", type=int, default=10**6, help="iteration cap")
    parser.add_argument("--trace", metavar="PATH", help="write the per-iteration CSV trace here")
    parser.add_argument("--csv", action="store_true", help="emit CSV instead of a table")


def _build_parser() -> _Parser:
    parser = _Parser(prog="infinifood", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    oreo = sub.add_parser("solve-oreo", help="limit composition of the self-loaded cookie filling")
    oreo.add_argument("--ms", type=_number, help="grams of creme in the base filling")
    oreo.add_argument("--mw", type=_number, help="grams of wafer in the base cookie")
    oreo.add_argument("--ell", type=_number, help="creme fraction of the loaded filling")
    oreo.add_argument("--stuf-total", type=_number, help="grams of filling in one package")
    oreo.add_argument("--count", type=int, help="cookies per package")
    oreo.add_argument("--c0", type=_number, help="starting creme fraction")
    oreo.add_argument("--params", metavar="PATH", help="read defaults from a .params file")
    _add_solver_flags(oreo)
    oreo.set_defaults(handler=_cmd_solve_oreo)

    pair = sub.add_parser("solve-pair", help="limits of the two-food mix-in recursion")
    pair.add_argument("--mu", type=_number, required=True, help="mix-in fraction of the first food")
    pair.add_argument("--kappa", type=_number, required=True, help="mix-in fraction of the second food")
    pair.add_argument("--a0", type=_number, help="starting foreign fraction of the first food")
    pair.add_argument("--b0", type=_number, help="starting foreign fraction of the second food")
    _add_solver_flags(pair)
    pair.set_defaults(handler=_cmd_solve_pair)

    quiver = sub.add_parser("quiver", help="operate on .quiver files")
    qsub = quiver.add_subparsers(dest="subcommand", required=True)

    check = qsub.add_parser("check", help="validate a quiver file")
    check.add_argument("path")
    check.set_defaults(handler=_cmd_quiver_check)

    cycles = qsub.add_parser("cycles", help="list simple cycles with classes and contractions")
    cycles.add_argument("path")
    cycles.add_argument("--csv", action="store_true")
    cycles.set_defaults(handler=_cmd_quiver_cycles)

    fixpoint = qsub.add_parser("fixpoint", help="solve the quiver's stationary compositions")
    fixpoint.add_argument("path")
    fixpoint.add_argument("--mu", type=_number, help="substitute the cookie-side mix-in fraction")
    fixpoint.add_argument("--kappa", type=_number, help="substitute the other mix-in fraction")
    fixpoint.add_argument(
        "--set", action="append", metavar="SRC->DST=VALUE",
        help="substitute one edge's mix fraction (repeatable)",
    )
    _add_solver_flags(fixpoint)
    fixpoint.set_defaults(handler=_cmd_quiver_fixpoint)

    compare = qsub.add_parser("compare", help="contrast one food's limit between two quivers")
    compare.add_argument("path")
    compare.add_argument("path2")
    compare.add_argument("--vertex", required=True, help="food to compare")
    compare.add_argument("--tol", type=_number, default=1e-12)
    compare.add_argument("--csv", action="store_true")
    compare.set_defaults(handler=_cmd_quiver_compare)

    presets = sub.add_parser("presets", help="list or dump the shipped preset files")
    presets.add_argument("--show", metavar="NAME", help="print one preset file")
    presets.set_defaults(handler=_cmd_presets)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except _Exit as err:
        return err.code
    except NonConvergence as err:
        print(f"non-convergence: {err}", file=sys.stderr)
        return 3
    except (DomainError, BasisError, QuiverError, UnknownVertexError) as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
