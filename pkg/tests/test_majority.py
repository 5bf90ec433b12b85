import pytest

from condorcet_axioms.majority import beats, condorcet_winners, in_condorcet_domain, majority_matrix, margin
from condorcet_axioms.preferences import PreconditionError, top_shift_profile

from oracles import naive_cw, naive_margin
from util import CYCLE, P, S

a, b, c = 0, 1, 2


def test_margin_examples():
    R = P("a>b>c", "c>a>b")
    assert margin(R, a, b) == 2
    assert margin(R, a, c) == 1
    assert margin(P("a=b>c"), a, b) == 0
    assert naive_margin(R, a, b) == 2


def test_margin_needs_distinct_alternatives():
    with pytest.raises(PreconditionError):
        margin(P("a>b>c"), a, a)


def test_beats_examples():
    assert beats(P("a>b>c", "c>a>b"), a, b)
    assert not beats(P("a>b>c", "c>a>b"), a, c)
    assert not beats(P("a>b>c", "b>a>c"), a, b)


def test_condorcet_winners_examples():
    assert condorcet_winners(P("a>b>c", "a>b>c")) == S("a")
    assert condorcet_winners(P(*CYCLE)) == frozenset()
    assert condorcet_winners(P("a>b>c", "c>a>b")) == S("ac")


def test_condorcet_domain_examples():
    assert not in_condorcet_domain(P(*CYCLE))
    assert in_condorcet_domain(P("a>b>c", "b>a>c"))
    assert in_condorcet_domain(P("b>a>c", "b>a>c"))
    assert in_condorcet_domain(top_shift_profile(P(*CYCLE), a, c))


def test_majority_matrix_examples():
    assert majority_matrix(P("a>b>c")) == ((0, 1, 1), (0, 0, 1), (0, 0, 0))
    M = majority_matrix(P(*CYCLE))
    for x in range(3):
        for y in range(3):
            if x != y:
                assert {M[x][y], M[y][x]} == {1, 2}


def test_tie_identity_on_weak_profile():
    R = P("a=b>c", "c>a=b", "b>a=c")
    M = majority_matrix(R)
    for x in range(3):
        for y in range(3):
            if x != y:
                ties = sum(1 for o in R if o[x] == o[y])
                assert M[x][y] + M[y][x] + ties == len(R)


def test_cw_matches_oracle_on_small_space():
    from condorcet_axioms.preferences import DomainSpec, enumerate_profiles

    for R in enumerate_profiles(DomainSpec(3, 2)):
        assert condorcet_winners(R) == naive_cw(R)
