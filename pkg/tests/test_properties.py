"""Property tests for structural invariants, over random weak and linear profiles."""

from hypothesis import given, settings
from hypothesis import strategies as st

from condorcet_axioms.axioms import nice_set
from condorcet_axioms.majority import condorcet_winners, majority_matrix, margin
from condorcet_axioms.preferences import (
    apply_alternative_permutation,
    apply_voter_permutation,
    densify,
    format_profile,
    inverse_permutation,
    is_two_profile,
    never_worse,
    permute_set,
    top_shift_profile,
)
from condorcet_axioms.profile_io import parse_profile_lines
from condorcet_axioms.rules import catalog_ids, rule_from_id, scoring_winners

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@st.composite
def profiles(draw, m=None, n=None, linear=False):
    m = m or draw(st.integers(3, 5))
    n = n or draw(st.integers(1, 5))
    voters = []
    for _ in range(n):
        if linear:
            voters.append(densify(draw(st.permutations(range(m)))))
        else:
            voters.append(densify(draw(st.lists(st.integers(0, m - 1), min_size=m, max_size=m))))
    return tuple(voters)


@st.composite
def profile_and_pair(draw, **kw):
    R = draw(profiles(**kw))
    m = len(R[0])
    x, y = draw(st.lists(st.integers(0, m - 1), min_size=2, max_size=2, unique=True))
    return R, x, y


@given(profile_and_pair())
def test_top_shift_idempotent_and_two_profile(case):
    R, x, y = case
    S = top_shift_profile(R, x, y)
    assert top_shift_profile(S, x, y) == S
    assert top_shift_profile(R, y, x) == S
    assert set(is_two_profile(S)) == {x, y}


@given(profile_and_pair())
def test_top_shift_keeps_pair_relation_and_tail(case):
    R, x, y = case
    S = top_shift_profile(R, x, y)
    m = len(R[0])
    for r, s in zip(R, S):
        assert (r[x] < r[y]) == (s[x] < s[y]) and (r[x] == r[y]) == (s[x] == s[y])
        for u in range(m):
            for v in range(m):
                if {u, v}.isdisjoint({x, y}):
                    assert (r[u] < r[v]) == (s[u] < s[v])


@given(profile_and_pair(), st.data())
def test_conjugation(case, data):
    R, x, y = case
    m = len(R[0])
    sigma = data.draw(st.permutations(range(m)))
    lhs = top_shift_profile(apply_alternative_permutation(R, sigma), sigma[x], sigma[y])
    rhs = apply_alternative_permutation(top_shift_profile(R, x, y), sigma)
    assert lhs == rhs


@given(profiles(), st.data())
def test_voter_permutation_inverse(R, data):
    pi = data.draw(st.permutations(range(len(R))))
    back = apply_voter_permutation(apply_voter_permutation(R, pi), inverse_permutation(pi))
    assert back == R


@given(profile_and_pair())
def test_cw_of_top_shift_lies_in_pair(case):
    R, x, y = case
    cw = condorcet_winners(top_shift_profile(R, x, y))
    assert cw and cw <= {x, y}


@given(profiles())
def test_margin_identity(R):
    M = majority_matrix(R)
    m = len(R[0])
    for x in range(m):
        for y in range(m):
            if x != y:
                ties = sum(1 for o in R if o[x] == o[y])
                assert M[x][y] + M[y][x] + ties == len(R)
                assert M[x][y] == margin(R, x, y)


@given(profiles(), st.data())
def test_cw_anonymous_and_neutral(R, data):
    pi = data.draw(st.permutations(range(len(R))))
    sigma = data.draw(st.permutations(range(len(R[0]))))
    cw = condorcet_winners(R)
    assert condorcet_winners(apply_voter_permutation(R, pi)) == cw
    assert condorcet_winners(apply_alternative_permutation(R, sigma)) == permute_set(cw, sigma)


@given(profiles(), st.data())
def test_margins_monotone_under_improvement(R, data):
    m = len(R[0])
    x = data.draw(st.integers(0, m - 1))
    Q = data.draw(profiles(m=m, n=len(R)))
    if all(never_worse(r, q, x) for r, q in zip(R, Q)):
        for y in range(m):
            if y != x:
                assert margin(Q, x, y) >= margin(R, x, y)
                assert margin(Q, y, x) <= margin(R, y, x)
        if x in condorcet_winners(R):
            assert x in condorcet_winners(Q)


@given(profiles(m=3, linear=True), st.data())
def test_scoring_affine_invariance(R, data):
    alpha = sorted(data.draw(st.lists(st.integers(0, 9), min_size=3, max_size=3)), reverse=True)
    if alpha[0] == alpha[-1]:
        alpha[0] += 1
    k = data.draw(st.integers(1, 5))
    c = data.draw(st.integers(-5, 5))
    assert scoring_winners(alpha, R) == scoring_winners([k * a + c for a in alpha], R)


@given(profiles(m=3, n=3), st.sampled_from(catalog_ids(3)))
def test_rules_non_empty(R, rid):
    out = rule_from_id(rid)(R)
    assert out and out <= set(range(3))


@given(profiles(m=3, linear=True))
def test_scoring_rules_non_empty(R):
    for rid in ("score:2,1,0", "score:1,0,0", "score:1,1,0"):
        assert rule_from_id(rid)(R)


@given(profiles(m=3), st.sampled_from(["cw-else-all", "cw-else-copeland", "cw-else-maximin"]))
def test_nice_set_is_cw_for_cc_rules(R, rid):
    cw = condorcet_winners(R)
    nice = nice_set(rid, R)
    assert nice == cw
    if cw:
        assert rule_from_id(rid)(R) == nice


@given(profiles())
def test_format_parse_roundtrip(R):
    from condorcet_axioms.preferences import alt_names

    assert parse_profile_lines(format_profile(R), alt_names(len(R[0]))) == R
