import pytest

from betasheaf.grammar import FormSyntaxError, format_form, parse_form

VARS = ("x", "y", "z")


def p(text, **kw):
    return parse_form(text, VARS, pole_vars=("z",), **kw)


def test_antisymmetric_terms_combine():
    assert p("dx^dy - dy^dx") == p("2*dx^dy")


def test_repeated_differential_vanishes():
    assert p("x*dx^dx").is_zero()


def test_precedence_and_division():
    assert p("x*dy/z^2 + dz") == p("dz + (x/z^2)*dy")
    assert p("(x + y)^2*dz") == p("x^2*dz + 2*x*y*dz + y^2*dz")
    assert p("-dx") == p("(-1)*dx")


def test_printed_forms_are_canonical():
    assert format_form(p("y*dx/z^2 + x*dy/z^2")) == format_form(p("x*dy/z^2 + y*dx/z^2"))


def test_degree_zero_literal():
    assert p("0", degree=2).degree == 2


@pytest.mark.parametrize("text, where", [
    ("dx^^dy", 3),
    ("x*dw", 3),
    ("dx/(x+y)", 3),
    ("x/y*dz", 2),
    ("dx + dx^dy", 3),
    ("x^(-1)", 2),
    ("(dx", 3),
])
def test_syntax_errors_point_at_the_problem(text, where):
    with pytest.raises(FormSyntaxError) as info:
        p(text)
    err = info.value
    assert 0 <= err.pos <= len(text)
    lines = str(err).splitlines()
    assert lines[1].strip() == text
    assert lines[2].index("^") - lines[1].index(text[0]) == err.pos
    assert abs(err.pos - where) <= 2


def test_degree_mismatch_reported():
    with pytest.raises(FormSyntaxError, match="expected a 2-form"):
        p("dx", degree=2)
