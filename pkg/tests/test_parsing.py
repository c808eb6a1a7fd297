import pytest
from hypothesis import given

from curvelimits.errors import ParseError
from curvelimits.germs import Germ
from curvelimits.parsing import parse_curve, parse_matrix_entries, parse_vector
from strategies import forms


@given(forms())
def test_printed_forms_parse_back(F):
    assert parse_curve(str(F)) == F


def test_operators_and_precedence():
    F = parse_curve("-(x+y)^2/2 + 3*x*y ** 1 + z*z")
    assert F == parse_curve("-1/2*x^2 + 2*x*y - 1/2*y^2 + z^2")
    assert parse_curve("-x^2") == parse_curve("-(x^2)")
    assert parse_curve("2*-x") == parse_curve("-2*x")


def test_division_by_constant_only():
    assert parse_curve("x/3") == parse_curve("1/3*x")
    with pytest.raises(ParseError):
        parse_curve("x/y")
    with pytest.raises(ParseError):
        parse_curve("x/0")


@pytest.mark.parametrize("text, position", [
    ("x + ", 4),
    ("x + $", 4),
    ("x*(y", 4),
    ("x + w", 4),
    ("x^y", 2),
])
def test_errors_report_positions(text, position):
    with pytest.raises(ParseError) as info:
        parse_curve(text)
    assert info.value.position == position


@pytest.mark.parametrize("text", ["", "0", "x - x", "3", "x + y^2"])
def test_not_a_curve(text):
    with pytest.raises(ParseError):
        parse_curve(text)


def test_field_header():
    F = parse_curve("adjoin r: r^2 + r + 1 = 0\ny^2*(y^2 - (r+2)*x*z)")
    assert F.tower.names == ("r",)
    r = F.tower.generator_by_name("r")
    assert F.coefficient((1, 2, 1)) == -(r + 2)
    assert F.coefficient((0, 4, 0)) == 1
    G = parse_curve("adjoin r: r^2 + r + 1 = 0; adjoin s: s^2 - 2 = 0; x*r + s*y")
    assert G.tower.names == ("r", "s")


@pytest.mark.parametrize("header", [
    "adjoin r: r^2 - 4 = 0",       # reducible
    "adjoin r: r + 1 = 0",         # linear
    "adjoin x: x^2 + 1 = 0",       # reserved name
    "adjoin r: r^2 + 1 = 1",       # not '= 0'
    "adjoin r r^2 + 1 = 0",        # missing colon
])
def test_bad_headers(header):
    with pytest.raises(ParseError):
        parse_curve(header + "\nx")


def test_germ_grammar():
    tower, m = parse_matrix_entries("[[1,0,0],[t,1,0],[0,0,1]]*diag(1,t,t^2)")
    g = Germ(m, tower)
    assert g.format() == "[[1, 0, 0], [t, t, 0], [0, 0, t^2]]"
    tower, m = parse_matrix_entries("(diag(1,t,t) * diag(1,t,1))")
    assert Germ(m, tower).format() == "[[1, 0, 0], [0, t^2, 0], [0, 0, t]]"


@pytest.mark.parametrize("text", ["[[1,0],[0,1]]", "diag(1,t)", "[[1,0,0],[0,1,0],[0,0,x]]",
                                  "[[1,0,0],[0,1,0],[0,0,1]] + 1"])
def test_bad_germs(text):
    with pytest.raises(ParseError):
        parse_matrix_entries(text)


def test_vectors():
    assert [str(v) for v in parse_vector("[1, -1/2, 0]")] == ["1", "-1/2", "0"]
    assert [str(v) for v in parse_vector("(1:2:3)")] == ["1", "2", "3"]
    assert [str(v) for v in parse_vector("1,2,3")] == ["1", "2", "3"]
    with pytest.raises(ParseError):
        parse_vector("[1,2]")
