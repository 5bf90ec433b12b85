"""Social decision rules behind one evaluation contract.

Every rule maps a profile to a non-empty frozenset of alternative indices.
Rules are built from stable string identifiers (see :func:`rule_from_id`) so
they can be shipped to worker processes and named in certificates.

Identifiers::

    cw-else-all  cw-else-copeland  cw-else-maximin   Condorcet-consistent completions
    copeland-raw  maximin-raw                          majority rules without the CW branch
    score:<a1,...,am>                                  positional scoring (linear profiles only)
    c1  c2  c3:<alt>  c4  c5                           independence counterexamples
    c4-strong  c4-literal                              strong Pareto and strict-formula readings of c4
    random:<m>:<n>:<kind>:<seed>                       seeded table rule (uniform non-empty outputs)
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Optional, Sequence

from .majority import condorcet_winners, majority_matrix
from .preferences import (
    DomainError,
    Profile,
    alt_name,
    enumerate_orders,
    is_linear_profile,
    is_two_profile,
    profile_index,
    restrict_profile,
    top_set,
)

Outcome = frozenset


class UnknownRuleError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    """A named social decision rule.

    ``admissible`` is ``"weak"`` for rules defined on every profile and
    ``"linear"`` for rules only defined on profiles of linear orders.
    ``m`` pins the number of alternatives for rules whose parameters depend on it.
    """

    id: str
    func: Callable[[Profile], frozenset] = field(compare=False, repr=False)
    admissible: str = "weak"
    claimed_cc: bool = False
    m: Optional[int] = None
    version: str = "1"

    @property
    def hash(self) -> str:
        return rule_hash(self.id, self.version)

    def __call__(self, profile: Profile) -> frozenset:
        return evaluate(self, profile)


def rule_hash(rule_id: str, version: str) -> str:
    return hashlib.sha256(f"{rule_id}|{version}".encode()).hexdigest()[:16]


def check_admissible(rule: Rule, profile: Profile) -> None:
    if rule.m is not None and len(profile[0]) != rule.m:
        raise DomainError(f"rule {rule.id} is defined for m={rule.m}, profile has m={len(profile[0])}")
    if rule.admissible == "linear" and not is_linear_profile(profile):
        raise DomainError(
            f"rule {rule.id} is only defined on L^N (profiles of linear orders); "
            "the profile contains indifference"
        )


def evaluate(rule: Rule, profile: Profile) -> frozenset:
    check_admissible(rule, profile)
    out = rule.func(profile)
    if not out:
        raise RuntimeError(f"rule {rule.id} returned the empty set on {profile}")
    return out


# ---------------------------------------------------------------------------
# Majority-based rules
# ---------------------------------------------------------------------------


def _argmax(scores: Sequence) -> frozenset:
    best = max(scores)
    return frozenset(x for x, s in enumerate(scores) if s == best)


def copeland_raw(profile: Profile) -> frozenset:
    """Alternatives maximising (#rivals beaten - #rivals beating them)."""
    counts = majority_matrix(profile)
    m = len(counts)
    scores = [
        sum((counts[x][y] > counts[y][x]) - (counts[y][x] > counts[x][y]) for y in range(m) if y != x)
        for x in range(m)
    ]
    return _argmax(scores)


def maximin_raw(profile: Profile) -> frozenset:
    """Alternatives maximising their worst pairwise support ``min_y n(x, y)``."""
    counts = majority_matrix(profile)
    m = len(counts)
    if m == 1:
        return frozenset({0})
    return _argmax([min(counts[x][y] for y in range(m) if y != x) for x in range(m)])


def cw_else_all(profile: Profile) -> frozenset:
    return condorcet_winners(profile) or frozenset(range(len(profile[0])))


def cw_else_copeland(profile: Profile) -> frozenset:
    return condorcet_winners(profile) or copeland_raw(profile)


def cw_else_maximin(profile: Profile) -> frozenset:
    return condorcet_winners(profile) or maximin_raw(profile)


# ---------------------------------------------------------------------------
# Scoring rules
# ---------------------------------------------------------------------------


def validate_scoring_vector(alpha: Sequence) -> tuple[Fraction, ...]:
    alpha = tuple(Fraction(a) for a in alpha)
    if len(alpha) < 2:
        raise DomainError("a scoring vector needs at least two weights")
    if any(a < b for a, b in zip(alpha, alpha[1:])):
        raise DomainError(f"scoring vector {format_alpha(alpha)} is not non-increasing")
    if not alpha[0] > alpha[-1]:
        raise DomainError(f"scoring vector {format_alpha(alpha)} needs first weight > last weight")
    return alpha


def format_alpha(alpha: Sequence) -> str:
    return ",".join(str(Fraction(a)) for a in alpha)


def scores(alpha: Sequence, profile: Profile) -> list:
    """Positional score of every alternative; the profile must be linear."""
    m = len(profile[0])
    if len(alpha) != m:
        raise DomainError(f"scoring vector has {len(alpha)} weights for {m} alternatives")
    if not is_linear_profile(profile):
        raise DomainError("scores are only defined on L^N (profiles of linear orders)")
    total = [0] * m
    for o in profile:
        for x in range(m):
            # dense rank r of a linear order is rg - 1
            total[x] += alpha[o[x]]
    return total


def scoring_winners(alpha: Sequence, profile: Profile) -> frozenset:
    return _argmax(scores(alpha, profile))


# ---------------------------------------------------------------------------
# Independence counterexamples
# ---------------------------------------------------------------------------


def c1_two_profile_cw(profile: Profile) -> frozenset:
    """CW on 2-profiles, everything otherwise."""
    if is_two_profile(profile) is not None:
        return condorcet_winners(profile)
    return frozenset(range(len(profile[0])))


def c2_serial_dictatorship(profile: Profile) -> frozenset:
    """Voter 1 picks their top set, each later voter keeps their favourites within it."""
    chosen = top_set(profile[0])
    for o in profile[1:]:
        chosen = top_set(o, chosen)
    return chosen


def c3_excluded_alternative(profile: Profile, excluded: int = 0) -> frozenset:
    m = len(profile[0])
    if m < 3:
        raise DomainError("c3 needs at least three alternatives")
    rest = [x for x in range(m) if x != excluded]
    winners = condorcet_winners(restrict_profile(profile, rest))
    if winners:
        return frozenset(rest[k] for k in winners)
    return frozenset(rest)


def c4_pareto(profile: Profile) -> frozenset:
    """Weakly Pareto optimal alternatives: those no rival beats for every voter.

    Equivalently, x is kept when for each rival y some voter ranks x at least
    as high as y. On linear profiles this is the strict formula of
    :func:`c4_literal`; on weak profiles it is never empty.
    """
    m = len(profile[0])
    return frozenset(
        x
        for x in range(m)
        if all(any(o[x] <= o[y] for o in profile) for y in range(m) if y != x)
    )


def c4_strong_pareto(profile: Profile) -> frozenset:
    """Pareto optimal alternatives: those no rival weakly dominates with one strict gain."""
    m = len(profile[0])
    return frozenset(
        x
        for x in range(m)
        if not any(
            all(o[y] <= o[x] for o in profile) and any(o[y] < o[x] for o in profile)
            for y in range(m)
            if y != x
        )
    )


def c4_literal(profile: Profile) -> frozenset:
    """Alternatives strictly preferred to each rival by some voter; all alternatives if none."""
    m = len(profile[0])
    found = frozenset(
        x
        for x in range(m)
        if all(any(o[x] < o[y] for o in profile) for y in range(m) if y != x)
    )
    return found or frozenset(range(m))


def c5_topshift_complement(profile: Profile) -> frozenset:
    m = len(profile[0])
    if m < 3:
        raise DomainError("c5 needs at least three alternatives")
    pair = is_two_profile(profile)
    if pair is not None:
        return frozenset(range(m)) - frozenset(pair)
    return frozenset(range(m))


# ---------------------------------------------------------------------------
# Random table rules
# ---------------------------------------------------------------------------


def _table_rule(table: tuple[int, ...], kind: str, n: int, profile: Profile) -> frozenset:
    if len(profile) != n:
        raise DomainError(f"table rule is defined for n={n}, profile has n={len(profile)}")
    mask = table[profile_index(profile, kind)]
    return frozenset(x for x in range(len(profile[0])) if mask >> x & 1)


def random_rule(m: int, n: int, kind: str, seed: int) -> Rule:
    """Table rule drawing a uniform non-empty outcome for every profile of the space."""
    rng = random.Random(seed)
    size = len(enumerate_orders(m, kind)) ** n
    table = tuple(rng.randrange(1, 2**m) for _ in range(size))
    rid = f"random:{m}:{n}:{kind}:{seed}"
    return Rule(rid, partial(_table_rule, table, kind, n), admissible=kind, m=m)


# ---------------------------------------------------------------------------
# Identifiers
# ---------------------------------------------------------------------------

_SIMPLE = {
    "cw-else-all": (cw_else_all, True),
    "cw-else-copeland": (cw_else_copeland, True),
    "cw-else-maximin": (cw_else_maximin, True),
    "copeland-raw": (copeland_raw, False),
    "maximin-raw": (maximin_raw, False),
    "c1": (c1_two_profile_cw, False),
    "c2": (c2_serial_dictatorship, False),
    "c4": (c4_pareto, False),
    "c4-strong": (c4_strong_pareto, False),
    "c4-literal": (c4_literal, False),
    "c5": (c5_topshift_complement, False),
}

CC_COMPLETIONS = ("cw-else-all", "cw-else-copeland", "cw-else-maximin")
INDEPENDENCE_RULES = ("c1", "c2", "c3:a", "c4", "c5")


def _parse_alternative(token: str) -> int:
    token = token.strip()
    if token.isdigit():
        return int(token)
    if len(token) == 1 and token.isalpha() and token.islower():
        return ord(token) - ord("a")
    if token.startswith("x") and token[1:].isdigit():
        return int(token[1:])
    raise UnknownRuleError(f"cannot read alternative {token!r}")


def rule_from_id(rule_id: str) -> Rule:
    rule_id = rule_id.strip()
    if rule_id in _SIMPLE:
        func, cc = _SIMPLE[rule_id]
        return Rule(rule_id, func, claimed_cc=cc)
    head, _, arg = rule_id.partition(":")
    if head == "score" and arg:
        try:
            alpha = validate_scoring_vector(arg.split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise UnknownRuleError(f"bad scoring vector in {rule_id!r}: {exc}") from exc
        return Rule(
            f"score:{format_alpha(alpha)}",
            partial(scoring_winners, alpha),
            admissible="linear",
            m=len(alpha),
        )
    if head == "c3":
        excluded = _parse_alternative(arg) if arg else 0
        return Rule(
            f"c3:{alt_name(excluded)}", partial(c3_excluded_alternative, excluded=excluded)
        )
    if head == "random":
        try:
            m, n, kind, seed = arg.split(":")
            return random_rule(int(m), int(n), kind, int(seed))
        except ValueError as exc:
            raise UnknownRuleError(f"random rules are named random:<m>:<n>:<kind>:<seed>, got {rule_id!r}") from exc
    raise UnknownRuleError(f"unknown rule id {rule_id!r}")


def standard_scoring_ids(m: int) -> list[str]:
    """Borda, plurality and antiplurality identifiers for ``m`` alternatives."""
    borda = ",".join(str(m - 1 - k) for k in range(m))
    plurality = ",".join(["1"] + ["0"] * (m - 1))
    anti = ",".join(["1"] * (m - 1) + ["0"])
    return [f"score:{borda}", f"score:{plurality}", f"score:{anti}"]


def catalog_ids(m: int = 3, kind: str = "weak") -> list[str]:
    """Every catalog rule admissible on profiles with ``m`` alternatives of the given kind."""
    ids = list(_SIMPLE)
    ids.insert(ids.index("c4"), "c3:a")
    if kind == "linear":
        ids += standard_scoring_ids(m)
    return ids
