import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import INVALID_QUIVER_FIXTURES, random_quiver
from infinifood import (
    Quiver,
    QuiverParseError,
    constants,
    enumerate_simple_cycles,
    parse,
    parse_number,
    serialize,
)

PRESET_QUIVERS = ("figure_quiver.quiver", "mnm_cookie.quiver", "tri_birthday.quiver")


def test_all_shipped_presets_parse():
    for name in PRESET_QUIVERS:
        q = parse(constants.read_preset(name))
        assert isinstance(q, Quiver)
    assert sorted(constants.preset_names()) == [
        "figure_quiver.quiver",
        "mnm_cookie.quiver",
        "oreo.params",
        "tri_birthday.quiver",
    ]


def test_pair_preset_has_one_bi_cycle():
    q = parse(constants.read_preset("mnm_cookie.quiver"))
    reports = enumerate_simple_cycles(q)
    assert [r.infinity_class for r in reports] == ["bi"]


def test_round_trip_on_presets():
    for name in PRESET_QUIVERS:
        q = parse(constants.read_preset(name))
        assert parse(serialize(q)) == q


def test_round_trip_on_random_quivers():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        q = random_quiver(rng)
        text = serialize(q)
        again = parse(text)
        assert again == q
        assert serialize(again) == text


def test_serialized_figure_quiver_is_canonical():
    q = parse(constants.read_preset("figure_quiver.quiver"))
    lines = serialize(q).strip().split("\n")
    assert lines[0].startswith("ingredients: ")
    foods = [ln for ln in lines if ln.startswith("food ")]
    edges = [ln for ln in lines if ln.startswith("edge ")]
    assert len(foods) == 5
    assert len(edges) == 9
    assert foods == sorted(foods)
    assert edges == sorted(edges)


def test_single_food_quiver_serializes_to_two_lines():
    q = parse("ingredients: a\nfood A kind=x base a=1\n")
    assert serialize(q).strip().split("\n") == ["ingredients: a", "food A kind=x base a=1.0"]


def test_rational_literals_are_one_division():
    q = parse(
        "ingredients: a, b\n"
        "food A kind=x base a=1/4, b=3/4\n"
        "food B kind=y base b=1\n"
        "edge A -> B f=1/3\n"
    )
    assert q.food("A").base["a"] == 0.25
    assert q.edges[0].f == 1 / 3


def test_whitespace_arrow_and_crlf_tolerance():
    q = parse("ingredients: a\r\nfood A kind=x base a=1\r\nedge A->A f=0.5\r\n")
    assert q.edges[0].src == "A" and q.edges[0].dst == "A"


def test_comments_and_quoted_hashes():
    q = parse(
        "# leading comment\n"
        "ingredients: a   # trailing comment\n"
        "food A kind=x base a=1\n"
        'edge A -> A f=0.5 label="see #5"  # the label keeps its hash\n'
    )
    assert q.edges[0].label == "see #5"


def test_ampersand_names_are_legal():
    q = parse(constants.read_preset("mnm_cookie.quiver"))
    assert "M&M" in q.food_names


def test_carrier_at_full_strength_normalizes_away():
    q = parse(
        "ingredients: a, b\n"
        "food A kind=x base a=1\n"
        "edge A -> A f=0.5 carrier=b:1\n"
    )
    assert q.edges[0].carrier_alpha == 1.0
    assert q.edges[0].carrier_filler is None


@pytest.mark.parametrize("source,line,kind", INVALID_QUIVER_FIXTURES)
def test_invalid_fixture_yields_a_located_diagnostic(source, line, kind):
    with pytest.raises(QuiverParseError) as excinfo:
        parse(source)
    hits = [d for d in excinfo.value.diagnostics if d.kind == kind]
    assert hits, f"no {kind} diagnostic in {excinfo.value.diagnostics}"
    assert any(d.line == line for d in hits)
    for d in excinfo.value.diagnostics:
        assert d.line >= 1 and d.column >= 1


def test_diagnostic_columns_point_at_the_offending_token():
    source = (
        "ingredients: a, b\n"
        "food A kind=x base a=1\n"
        "food B kind=y base b=1\n"
        "edge A -> B f=1.5\n"
    )
    with pytest.raises(QuiverParseError) as excinfo:
        parse(source)
    (diag,) = excinfo.value.diagnostics
    assert (diag.line, diag.kind) == (4, "FractionOutOfRange")
    assert diag.column == source.splitlines()[3].index("1.5") + 1


def test_all_diagnostics_are_collected_before_failing():
    source = (
        "ingredients: a, b\n"
        "food A kind=x base a=0.9\n"        # bad sum
        "food A kind=y base a=1\n"          # duplicate
        "edge A -> Ghost f=2\n"             # unknown food and bad fraction
    )
    with pytest.raises(QuiverParseError) as excinfo:
        parse(source)
    kinds = {(d.line, d.kind) for d in excinfo.value.diagnostics}
    assert (2, "SumExceedsOne") in kinds
    assert (3, "DuplicateName") in kinds
    assert (4, "UnknownFood") in kinds
    assert (4, "FractionOutOfRange") in kinds


def test_missing_ingredients_line_is_reported():
    with pytest.raises(QuiverParseError) as excinfo:
        parse("")
    assert excinfo.value.diagnostics[0].kind == "SyntaxError"
    with pytest.raises(QuiverParseError):
        parse("# only a comment\n")


def test_duplicate_ingredients_line_is_reported():
    with pytest.raises(QuiverParseError) as excinfo:
        parse("ingredients: a\ningredients: b\nfood A kind=x base a=1\n")
    assert any(d.kind == "SyntaxError" and d.line == 2 for d in excinfo.value.diagnostics)


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=300))
def test_parsing_is_total(source):
    try:
        parse(source)
    except QuiverParseError:
        pass


@settings(deadline=None)
@given(st.text(alphabet="ingredients:foodedge ->=,#\"/.0123456789abc\r\n\t", max_size=200))
def test_parsing_is_total_on_grammar_shaped_noise(source):
    try:
        parse(source)
    except QuiverParseError:
        pass


def test_parse_number_accepts_the_same_grammar_as_files():
    assert parse_number("1/4") == 0.25
    assert parse_number("0.25") == 0.25
    assert parse_number("1e-3") == 0.001
    for bad in ("", "x", "1/0", "-0.5", "1.5.2"):
        with pytest.raises(ValueError):
            parse_number(bad)
