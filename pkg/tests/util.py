"""Small constructors shared by the test modules."""

from condorcet_axioms.preferences import alt_names
from condorcet_axioms.profile_io import parse_profile_lines


def P(*lines, m=3):
    """Profile from ranking strings over a, b, c, ... (indices in alphabetical order)."""
    return parse_profile_lines(lines, alt_names(m))


def O(line, m=3):
    return P(line, m=m)[0]


def S(text):
    """Alternative set from a string such as "ac"."""
    return frozenset(ord(ch) - ord("a") for ch in text)


CYCLE = ("a>b>c", "b>c>a", "c>a>b")
