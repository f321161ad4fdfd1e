"""Reader and writer for the line-oriented .quiver format.

One declaration per line; ``#`` starts a comment outside quotes and blank
lines are skipped:

    ingredients: <name> (, <name>)*
    food <name> kind=<kind> base <ingredient>=<number> (, <ingredient>=<number>)*
    edge <src> -> <dst> f=<number> [carrier=<ingredient>:<number>] [label="<text>"]

The ingredients line must be the first declaration and appear exactly once.
Identifiers match [A-Za-z0-9_&-]+ (so M&M is a legal food name).  Numbers
are decimals or p/q rationals; a rational costs exactly one division, which
keeps ratios of small integers at 1 ulp.  Base weights omitted from a food
line are 0, and the listed ones must sum to 1 within 1e-9; nothing is ever
renormalized silently.

Parsing never raises on malformed text mid-way: every violation becomes a
ParseDiagnostic with a 1-based line and column, all diagnostics are
collected, and only then does parse() fail with QuiverParseError.  A
carrier written as ``ingredient:1`` is equivalent to no carrier at all
(the filler share is zero) and is normalized away.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .composition import Composition, Food, IngredientBasis, SUM_TOL
from .errors import DomainError, QuiverError, QuiverParseError
from .quiver import MixEdge, Quiver

UNKNOWN_INGREDIENT = "UnknownIngredient"
UNKNOWN_FOOD = "UnknownFood"
DUPLICATE_NAME = "DuplicateName"
FRACTION_OUT_OF_RANGE = "FractionOutOfRange"
SUM_EXCEEDS_ONE = "SumExceedsOne"
SYNTAX_ERROR = "SyntaxError"
MISSING_CARRIER_FILLER = "MissingCarrierFiller"

_IDENT_RE = re.compile(r"[A-Za-z0-9_&-]+")
_NUMBER_RE = re.compile(r"\d+/\d+|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True)
class ParseDiagnostic:
    """One located problem in a .quiver source."""

    line: int
    column: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, col {self.column}: {self.kind}: {self.message}"


class _LineError(Exception):
    """Internal: aborts one line's parse with a located diagnostic."""

    def __init__(self, column: int, kind: str, message: str):
        self.column = column
        self.kind = kind
        self.message = message


class _Cursor:
    """Tracks a parse position within one comment-stripped line."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    @property
    def column(self) -> int:
        return self.pos + 1

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def take(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def take_keyword(self, word: str) -> bool:
        # like take(), but the keyword must not run into an identifier
        # (a food named "foodie" is not the "food" keyword)
        self.skip_ws()
        if self.text.startswith(word, self.pos):
            end = self.pos + len(word)
            if end >= len(self.text) or not _IDENT_RE.match(self.text[end]):
                self.pos = end
                return True
        return False

    def expect(self, literal: str, what: str) -> None:
        if not self.take(literal):
            raise _LineError(self.column, SYNTAX_ERROR, f"expected {what}")

    def take_ident(self) -> tuple[str, int] | None:
        self.skip_ws()
        m = _IDENT_RE.match(self.text, self.pos)
        if m is None:
            return None
        self.pos = m.end()
        return m.group(), m.start() + 1

    def expect_ident(self, what: str) -> tuple[str, int]:
        got = self.take_ident()
        if got is None:
            raise _LineError(self.column, SYNTAX_ERROR, f"expected {what}")
        return got

    def looks_like_number(self) -> bool:
        self.skip_ws()
        return bool(_NUMBER_RE.match(self.text, self.pos))

    def expect_number(self, what: str) -> tuple[float, int]:
        self.skip_ws()
        m = _NUMBER_RE.match(self.text, self.pos)
        if m is None:
            raise _LineError(self.column, SYNTAX_ERROR, f"expected a number for {what}")
        column = m.start() + 1
        self.pos = m.end()
        if self.pos < len(self.text) and _IDENT_RE.match(self.text[self.pos]):
            raise _LineError(self.column, SYNTAX_ERROR, f"malformed number for {what}")
        token = m.group()
        if "/" in token:
            num, den = token.split("/")
            if int(den) == 0:
                raise _LineError(column, SYNTAX_ERROR, "zero denominator in rational literal")
            return int(num) / int(den), column
        return float(token), column

    def expect_end(self) -> None:
        if not self.at_end():
            raise _LineError(self.column, SYNTAX_ERROR, "unexpected trailing text")


@dataclass
class _FoodDecl:
    line: int
    name: str
    name_col: int
    kind: str
    base_col: int
    weights: list[tuple[str, int, float, int]] = field(default_factory=list)


@dataclass
class _EdgeDecl:
    line: int
    src: str
    src_col: int
    dst: str
    dst_col: int
    f: float
    f_col: int
    alpha: float = 1.0
    alpha_col: int = 0
    filler: str | None = None
    filler_col: int = 0
    label: str | None = None


def _strip_comment(raw: str) -> str:
    in_quotes = False
    for i, ch in enumerate(raw):
        if ch == '"':
            in_quotes = not in_quotes
        elif ch == "#" and not in_quotes:
            return raw[:i]
    return raw


def _parse_ingredients(cur: _Cursor, lineno: int) -> list[tuple[str, int]]:
    names = [cur.expect_ident("an ingredient name")]
    while cur.take(","):
        names.append(cur.expect_ident("an ingredient name"))
    cur.expect_end()
    return names


def _parse_food(cur: _Cursor, lineno: int) -> _FoodDecl:
    name, name_col = cur.expect_ident("a food name")
    cur.expect("kind=", "kind=<kind>")
    kind, _ = cur.expect_ident("a kind")
    cur.skip_ws()
    base_col = cur.column
    cur.expect("base", "the base keyword")
    decl = _FoodDecl(line=lineno, name=name, name_col=name_col, kind=kind, base_col=base_col)
    while True:
        ing, ing_col = cur.expect_ident("an ingredient name")
        cur.expect("=", "'=' after the ingredient name")
        value, value_col = cur.expect_number(f"the {ing} weight")
        decl.weights.append((ing, ing_col, value, value_col))
        if not cur.take(","):
            break
    cur.expect_end()
    return decl


_SRC_BEFORE_ARROW_RE = re.compile(r"[A-Za-z0-9_&-]+?(?=\s*->)")


def _parse_edge(cur: _Cursor, lineno: int) -> _EdgeDecl:
    # identifiers may contain '-', so read the source with an arrow lookahead
    # lest "A->B" lose its last character to the name
    cur.skip_ws()
    m = _SRC_BEFORE_ARROW_RE.match(cur.text, cur.pos)
    if m is not None:
        src, src_col = m.group(), m.start() + 1
        cur.pos = m.end()
    else:
        src, src_col = cur.expect_ident("a source food name")
    cur.expect("->", "'->'")
    dst, dst_col = cur.expect_ident("a destination food name")
    cur.expect("f=", "f=<number>")
    f, f_col = cur.expect_number("the mix fraction f")
    decl = _EdgeDecl(
        line=lineno, src=src, src_col=src_col, dst=dst, dst_col=dst_col, f=f, f_col=f_col
    )
    while not cur.at_end():
        if cur.take("carrier="):
            if cur.looks_like_number():
                raise _LineError(
                    cur.column,
                    MISSING_CARRIER_FILLER,
                    "carrier needs a filler ingredient: carrier=<ingredient>:<number>",
                )
            filler, filler_col = cur.expect_ident("a carrier filler ingredient")
            cur.expect(":", "':' between the carrier filler and fraction")
            alpha, alpha_col = cur.expect_number("the carrier fraction")
            decl.filler, decl.filler_col = filler, filler_col
            decl.alpha, decl.alpha_col = alpha, alpha_col
        elif cur.take('label="'):
            end = cur.text.find('"', cur.pos)
            if end < 0:
                raise _LineError(cur.column, SYNTAX_ERROR, "unterminated label string")
            decl.label = cur.text[cur.pos : end]
            cur.pos = end + 1
        else:
            raise _LineError(cur.column, SYNTAX_ERROR, "expected carrier=..., label=\"...\", or end of line")
    return decl


def parse(text: str) -> Quiver:
    """Parse .quiver source into a validated Quiver.

    Raises QuiverParseError carrying every collected ParseDiagnostic if the
    source has any problem; never raises anything else, whatever the input.
    """
    diagnostics: list[ParseDiagnostic] = []
    ingredient_decl: list[tuple[str, int]] | None = None
    ingredient_line = 0
    food_decls: list[_FoodDecl] = []
    edge_decls: list[_EdgeDecl] = []
    first_decl_seen = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        cur = _Cursor(line)
        if cur.at_end():
            continue
        try:
            if cur.take("ingredients:"):
                if ingredient_decl is not None:
                    raise _LineError(
                        1, SYNTAX_ERROR, f"duplicate ingredients line (first on line {ingredient_line})"
                    )
                if first_decl_seen:
                    raise _LineError(1, SYNTAX_ERROR, "the ingredients line must come first")
                ingredient_decl = _parse_ingredients(cur, lineno)
                ingredient_line = lineno
            elif cur.take_keyword("food"):
                food_decls.append(_parse_food(cur, lineno))
            elif cur.take_keyword("edge"):
                edge_decls.append(_parse_edge(cur, lineno))
            else:
                raise _LineError(
                    cur.column, SYNTAX_ERROR, "expected an ingredients:, food, or edge declaration"
                )
        except _LineError as err:
            diagnostics.append(ParseDiagnostic(lineno, err.column, err.kind, err.message))
        first_decl_seen = True

    def diag(line: int, col: int, kind: str, message: str) -> None:
        diagnostics.append(ParseDiagnostic(line, col, kind, message))

    if ingredient_decl is None:
        diag(1, 1, SYNTAX_ERROR, "missing ingredients declaration")
        raise QuiverParseError(diagnostics)

    ingredient_names: list[str] = []
    for name, col in ingredient_decl:
        if name in ingredient_names:
            diag(ingredient_line, col, DUPLICATE_NAME, f"duplicate ingredient {name!r}")
        else:
            ingredient_names.append(name)

    foods: list[Food] = []
    food_names: set[str] = set()
    basis = IngredientBasis(tuple(ingredient_names))
    for decl in food_decls:
        if decl.name in food_names:
            diag(decl.line, decl.name_col, DUPLICATE_NAME, f"duplicate food {decl.name!r}")
            continue
        food_names.add(decl.name)
        weights = dict.fromkeys(ingredient_names, 0.0)
        ok = True
        seen_ings: set[str] = set()
        for ing, ing_col, value, value_col in decl.weights:
            if ing not in weights:
                diag(decl.line, ing_col, UNKNOWN_INGREDIENT, f"unknown ingredient {ing!r}")
                ok = False
                continue
            if ing in seen_ings:
                diag(decl.line, ing_col, DUPLICATE_NAME, f"ingredient {ing!r} listed twice")
                ok = False
                continue
            seen_ings.add(ing)
            if not 0.0 <= value <= 1.0:
                diag(
                    decl.line, value_col, FRACTION_OUT_OF_RANGE,
                    f"base weight {value!r} outside [0, 1]",
                )
                ok = False
                continue
            weights[ing] = value
        total = sum(weights.values())
        if ok and abs(total - 1.0) > SUM_TOL:
            diag(
                decl.line, decl.base_col, SUM_EXCEEDS_ONE,
                f"base weights sum to {total!r}, expected 1 within {SUM_TOL}",
            )
            ok = False
        if ok:
            foods.append(
                Food(decl.name, decl.kind, Composition(basis, tuple(weights[n] for n in ingredient_names)))
            )

    edges: list[MixEdge] = []
    incoming: dict[str, float] = dict.fromkeys(food_names, 0.0)
    overfull: set[str] = set()
    for decl in edge_decls:
        ok = True
        for endpoint, col in ((decl.src, decl.src_col), (decl.dst, decl.dst_col)):
            if endpoint not in food_names:
                diag(decl.line, col, UNKNOWN_FOOD, f"unknown food {endpoint!r}")
                ok = False
        if not 0.0 < decl.f < 1.0:
            diag(
                decl.line, decl.f_col, FRACTION_OUT_OF_RANGE,
                f"mix fraction {decl.f!r} outside the open interval (0, 1)",
            )
            ok = False
        if decl.filler is not None:
            if not 0.0 <= decl.alpha <= 1.0:
                diag(
                    decl.line, decl.alpha_col, FRACTION_OUT_OF_RANGE,
                    f"carrier fraction {decl.alpha!r} outside [0, 1]",
                )
                ok = False
            elif decl.filler not in ingredient_names:
                diag(decl.line, decl.filler_col, UNKNOWN_INGREDIENT, f"unknown ingredient {decl.filler!r}")
                ok = False
        if not ok:
            continue
        if decl.dst in incoming:
            incoming[decl.dst] += decl.f
            if incoming[decl.dst] >= 1.0 and decl.dst not in overfull:
                overfull.add(decl.dst)
                diag(
                    decl.line, decl.f_col, SUM_EXCEEDS_ONE,
                    f"incoming fractions into {decl.dst!r} reach {incoming[decl.dst]!r}; "
                    "the sum must stay below 1",
                )
                continue
        if decl.filler is not None and decl.alpha < 1.0:
            edges.append(
                MixEdge(decl.src, decl.dst, decl.f, decl.alpha, decl.filler, decl.label)
            )
        else:
            edges.append(MixEdge(decl.src, decl.dst, decl.f, label=decl.label))

    if diagnostics:
        raise QuiverParseError(diagnostics)
    try:
        return Quiver(basis, tuple(foods), tuple(edges))
    except QuiverError as exc:  # all invariants are pre-checked; safety net
        diag(1, 1, SYNTAX_ERROR, str(exc))
        raise QuiverParseError(diagnostics) from exc


def _format_number(value: float) -> str:
    return repr(float(value))


def _check_ident(name: str, what: str) -> str:
    if _IDENT_RE.fullmatch(name) is None:
        raise DomainError(f"{what} {name!r} cannot be written in the quiver format")
    return name


def serialize(q: Quiver) -> str:
    """Canonical text for a quiver: foods sorted by name, edges by (src, dst, label).

    Numbers are rendered as shortest round-trip decimals, so parse(serialize(q))
    reproduces the quiver exactly, field for field.
    """
    lines = ["ingredients: " + ", ".join(_check_ident(n, "ingredient") for n in q.basis.names)]
    for food in sorted(q.foods, key=lambda f: f.name):
        parts = [
            f"{name}={_format_number(w)}"
            for name, w in zip(q.basis.names, food.base.weights)
            if w != 0.0
        ]
        lines.append(
            f"food {_check_ident(food.name, 'food name')} "
            f"kind={_check_ident(food.kind, 'kind')} base " + ", ".join(parts)
        )
    for edge in sorted(q.edges, key=lambda e: (e.src, e.dst, e.label or "")):
        piece = f"edge {edge.src} -> {edge.dst} f={_format_number(edge.f)}"
        if edge.carrier_alpha < 1.0:
            piece += f" carrier={edge.carrier_filler}:{_format_number(edge.carrier_alpha)}"
        if edge.label is not None:
            if '"' in edge.label or "\n" in edge.label:
                raise DomainError(f"label {edge.label!r} cannot be written in the quiver format")
            piece += f' label="{edge.label}"'
        lines.append(piece)
    return "\n".join(lines) + "\n"


def parse_number(token: str) -> float:
    """Parse a decimal or p/q rational exactly like the file format does.

    Raises ValueError on anything else, which argparse converts into a
    usage error when used as a flag type.
    """
    token = token.strip()
    m = _NUMBER_RE.fullmatch(token)
    if m is None:
        raise ValueError(f"not a number: {token!r}")
    if "/" in token:
        num, den = token.split("/")
        if int(den) == 0:
            raise ValueError("zero denominator in rational literal")
        return int(num) / int(den)
    return float(token)
