import itertools

import pytest

from condorcet_axioms.preferences import (
    BudgetError,
    DomainError,
    DomainSpec,
    PreconditionError,
    apply_alternative_permutation,
    apply_voter_permutation,
    bottom_shift_profile,
    enumerate_orders,
    enumerate_profiles,
    format_order,
    inverse_permutation,
    is_additional_support,
    is_two_profile,
    iter_profiles,
    never_worse,
    ordered_bell,
    permute_set,
    profile_at,
    profile_index,
    rank_rg,
    restrict,
    strictly_prefers,
    top_shift_profile,
    transposition,
    weakly_prefers,
)

from oracles import count_weak_orders_by_partition, ordered_bell_recurrence
from util import O, P, S

a, b, c = 0, 1, 2


@pytest.mark.parametrize("order,x,expected", [("a>b>c", a, 1), ("a>b>c", c, 3), ("b>a>c", a, 2)])
def test_rank_rg(order, x, expected):
    assert rank_rg(O(order), x) == expected


def test_rank_rg_needs_linear_order():
    with pytest.raises(DomainError):
        rank_rg(O("a=b>c"), a)


@pytest.mark.parametrize(
    "order,x,y,expected",
    [("a>b=c", a, b, True), ("a>b=c", b, c, False), ("c>a>b", a, c, False)],
)
def test_strictly_prefers(order, x, y, expected):
    assert strictly_prefers(O(order), x, y) is expected


def test_strict_preference_needs_distinct_alternatives():
    with pytest.raises(PreconditionError):
        strictly_prefers(O("a>b>c"), a, a)


def test_weak_preference_is_complete():
    o = O("a>b=c")
    assert weakly_prefers(o, b, c) and weakly_prefers(o, c, b)
    assert not weakly_prefers(o, c, a)


def test_restrict():
    # the result is indexed over sorted(subset)
    assert format_order(restrict(O("a>b>c"), {b, c}), ["b", "c"]) == "b>c"
    assert format_order(restrict(O("a=b>c"), {a, b})) == "a=b"
    assert format_order(restrict(O("c>a>b"), {a, c}), ["a", "c"]) == "c>a"


def test_top_shift_examples():
    assert top_shift_profile(P("c>a>b"), a, b) == P("a>b>c")
    assert top_shift_profile(P("c>a=b"), a, b) == P("a=b>c")
    assert top_shift_profile(P("a>b>c", "c>a>b"), c, b) == P("b>c>a", "c>b>a")


def test_bottom_shift_examples():
    assert bottom_shift_profile(P("a>b>c"), a, b) == P("c>a>b")
    assert bottom_shift_profile(P("c>a>b"), a, b) == P("c>a>b")
    assert bottom_shift_profile(P("b>a>c"), b, c) == P("a>b>c")


def test_top_shift_with_tail_ties():
    R = P("a=c=d>b", m=4)
    assert top_shift_profile(R, a, b) == P("a>b>c=d", m=4)


def test_is_two_profile():
    assert set(is_two_profile(P("a>b>c", "b>a>c"))) == {a, b}
    assert is_two_profile(P("a>b>c", "c>a>b")) is None
    assert is_two_profile(P("a=b=c")) is None
    # two profile needs the pair strictly above the rest, ties inside the pair are fine
    assert set(is_two_profile(P("a=b>c", "b>a>c"))) == {a, b}


def test_voter_permutation():
    R = P("a>b>c", "c>a>b")
    assert apply_voter_permutation(R, [1, 0]) == P("c>a>b", "a>b>c")
    assert apply_voter_permutation(R, [0, 1]) == R
    pi = transposition(2, 0, 1)
    assert apply_voter_permutation(apply_voter_permutation(R, pi), pi) == R


def test_alternative_permutation():
    sigma = transposition(3, a, b)
    assert apply_alternative_permutation(P("a>b>c"), sigma) == P("b>a>c")
    assert apply_alternative_permutation(P("c>a>b"), [0, 1, 2]) == P("c>a>b")
    assert permute_set(S("ac"), sigma) == S("bc")


def test_conjugation_example():
    sigma = transposition(3, a, c)
    R = P("c>a>b")
    lhs = top_shift_profile(apply_alternative_permutation(R, sigma), sigma[a], sigma[b])
    rhs = apply_alternative_permutation(top_shift_profile(R, a, b), sigma)
    assert lhs == rhs == P("c>b>a")


def test_inverse_permutation():
    p = [2, 0, 1]
    q = inverse_permutation(p)
    assert [p[q[i]] for i in range(3)] == [0, 1, 2]


@pytest.mark.parametrize(
    "R,Q,x,y,expected",
    [
        ("a>b>c", "a>c>b", c, b, True),
        ("a>b>c", "a>b>c", a, b, False),
        ("a>b>c", "b>a>c", a, b, False),
    ],
)
def test_additional_support(R, Q, x, y, expected):
    assert is_additional_support(P(R), P(Q), x, y) is expected


def test_never_worse():
    assert never_worse(O("a>b>c"), O("a>c>b"), c)
    assert not never_worse(O("a>b>c"), O("b>a>c"), a)
    assert never_worse(O("a=b>c"), O("a>b>c"), a)
    assert not never_worse(O("a>b>c"), O("a=b>c"), a)


def test_order_counts():
    assert len(enumerate_orders(3, "linear")) == 6
    assert len(enumerate_orders(3, "weak")) == 13
    assert len(enumerate_orders(1, "weak")) == 1
    for m in range(1, 6):
        assert ordered_bell(m) == ordered_bell_recurrence(m) == count_weak_orders_by_partition(m)
        assert len(enumerate_orders(m, "weak")) == ordered_bell(m)


def test_orders_are_canonically_sorted_and_dense():
    orders = enumerate_orders(3, "weak")
    assert list(orders) == sorted(orders)
    for o in orders:
        assert set(o) == set(range(max(o) + 1))


@pytest.mark.parametrize(
    "m,n,kind,count", [(3, 2, "weak", 169), (3, 2, "linear", 36), (3, 3, "weak", 2197)]
)
def test_profile_counts(m, n, kind, count):
    spec = DomainSpec(m, n, kind)
    assert spec.cardinality == count
    assert len(enumerate_profiles(spec)) == count


def test_profiles_in_canonical_order_voter_one_most_significant():
    profiles = enumerate_profiles(DomainSpec(3, 2))
    assert list(profiles) == sorted(profiles)
    assert list(profiles) == list(itertools.product(enumerate_orders(3), repeat=2))


def test_profile_index_roundtrip():
    for i, R in enumerate(enumerate_profiles(DomainSpec(3, 2, "linear"))):
        assert profile_index(R, "linear") == i
        assert profile_at(i, 3, 2, "linear") == R


def test_sample_mode_only_over_budget():
    with pytest.raises(DomainError):
        DomainSpec(3, 2, sample=10)
    spec = DomainSpec(4, 4, sample=50, seed=3)
    drawn = list(iter_profiles(spec))
    assert len(drawn) == 50 and drawn == sorted(set(drawn))
    assert drawn == list(iter_profiles(DomainSpec(4, 4, sample=50, seed=3)))
    assert drawn != list(iter_profiles(DomainSpec(4, 4, sample=50, seed=4)))


def test_exhaustive_over_budget_refuses():
    with pytest.raises(BudgetError) as err:
        next(iter_profiles(DomainSpec(4, 4)))
    assert err.value.cardinality == 75**4


def test_restricted_domains():
    cond = enumerate_profiles(DomainSpec(3, 3, restriction="condorcet"))
    assert P(*("a>b>c", "b>c>a", "c>a>b")) not in cond
    assert 0 < len(cond) < 2197
    two = enumerate_profiles(DomainSpec(3, 2, restriction="two-profiles"))
    assert all(is_two_profile(R) for R in two)


def test_domain_validation():
    with pytest.raises(DomainError):
        DomainSpec(3, 2, orders="partial")
    with pytest.raises(DomainError):
        DomainSpec(3, 2, restriction="nope")
    with pytest.raises(DomainError):
        DomainSpec(0, 2)
