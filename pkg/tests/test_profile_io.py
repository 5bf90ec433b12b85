import pytest

from condorcet_axioms.profile_io import ParseError, format_profile_text, parse_order, parse_profile

from util import P


def test_linear_profile():
    parsed = parse_profile("a>b>c\nc>a>b")
    assert parsed.profile == P("a>b>c", "c>a>b")
    assert parsed.names == ("a", "b", "c")


def test_multiplicity_and_ties():
    parsed = parse_profile("2: a>b=c")
    assert parsed.profile == P("a>b=c", "a>b=c")


def test_first_appearance_indexing():
    parsed = parse_profile("z > y\ny > z\n")
    assert parsed.names == ("z", "y")
    assert parsed.profile == ((0, 1), (1, 0))


def test_comments_and_blank_lines():
    parsed = parse_profile("# header\n\na>b>c  # first\n 3 : c = a > b\n")
    assert len(parsed.profile) == 4
    assert parsed.format() == ["a>b>c", "a=c>b", "a=c>b", "a=c>b"]


def test_format_roundtrip():
    text = format_profile_text(P("a>b=c", "c>a>b"))
    assert parse_profile(text).profile == P("a>b=c", "c>a>b")


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("a>b\na>b>c", 2, "inconsistent alternative sets"),
        ("a>b>c\na>b>d", 2, "inconsistent alternative sets"),
        ("", 1, "empty"),
        ("# only comments\n", 1, "empty"),
        ("a>b>a", 1, "twice"),
        ("a>>b", 1, "expected an alternative"),
        ("a>b;c", 1, "unexpected token"),
        ("a>b>", 1, "ends without"),
        ("0: a>b", 1, "multiplicity"),
    ],
)
def test_parse_errors(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_profile(text)
    assert err.value.line == line
    assert fragment in str(err.value)


def test_error_column():
    with pytest.raises(ParseError) as err:
        parse_profile("a>b>c\na>b;c")
    assert (err.value.line, err.value.column) == (2, 4)


def test_parse_order_over_known_names():
    assert parse_order("c>a>b", ["a", "b", "c"]) == (1, 2, 0)
    with pytest.raises(ParseError):
        parse_order("a>b", ["a", "b", "c"])
