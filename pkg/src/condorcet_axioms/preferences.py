"""Weak orders, profiles, profile transforms and enumeration of profile spaces.

A weak order over ``m`` alternatives is a tuple of dense tie-ranks: ``ranks[x]``
is the rank of alternative ``x`` (0 is most preferred, equal ranks are
indifference, and the used rank values are exactly ``0..k-1``). A profile is a
tuple of weak orders, one per voter. Both are plain tuples so they hash, compare
and pickle cheaply; every function here is pure.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

WeakOrder = tuple[int, ...]
Profile = tuple[WeakOrder, ...]

ORDER_KINDS = ("weak", "linear")
RESTRICTIONS = ("all", "condorcet", "two-profiles")
DEFAULT_PROFILE_BUDGET = 1_000_000


class DomainError(ValueError):
    """Input lies outside the domain on which an operation is defined."""


class PreconditionError(ValueError):
    """A documented precondition (such as ``x != y``) was violated."""


class BudgetError(RuntimeError):
    """An exhaustive request exceeds the configured cardinality budget."""

    def __init__(self, message: str, cardinality: int):
        super().__init__(message)
        self.cardinality = cardinality


# ---------------------------------------------------------------------------
# Alternatives
# ---------------------------------------------------------------------------


def alt_name(x: int) -> str:
    return chr(ord("a") + x) if x < 26 else f"x{x}"


def alt_names(m: int) -> list[str]:
    return [alt_name(x) for x in range(m)]


def format_set(alts: Iterable[int]) -> str:
    return " ".join(alt_name(x) for x in sorted(alts))


# ---------------------------------------------------------------------------
# Weak orders
# ---------------------------------------------------------------------------


def densify(values: Sequence[int]) -> WeakOrder:
    """Map arbitrary comparable rank values onto dense ranks 0..k-1."""
    levels = {v: i for i, v in enumerate(sorted(set(values)))}
    return tuple(levels[v] for v in values)


def make_order(ranks: Sequence[int]) -> WeakOrder:
    """Validate a dense rank array and return it as a WeakOrder."""
    ranks = tuple(int(r) for r in ranks)
    if not ranks:
        raise DomainError("a weak order needs at least one alternative")
    if set(ranks) != set(range(max(ranks) + 1)):
        raise DomainError(f"ranks {ranks} are not dense")
    return ranks


def order_from_ranking(ranking: Sequence[Sequence[int]], m: int) -> WeakOrder:
    """Build an order from indifference classes listed best first.

    >>> order_from_ranking([[0], [1, 2]], 3)
    (0, 1, 1)
    """
    ranks = [-1] * m
    for level, group in enumerate(ranking):
        for x in group:
            if ranks[x] != -1:
                raise DomainError(f"alternative {alt_name(x)} listed twice")
            ranks[x] = level
    if -1 in ranks:
        raise DomainError("ranking does not cover every alternative")
    return make_order(ranks)


def format_order(order: WeakOrder, names: Optional[Sequence[str]] = None) -> str:
    """Render an order as ``a>b=c``."""
    names = names or alt_names(len(order))
    classes: list[list[str]] = [[] for _ in range(max(order) + 1)]
    for x, r in enumerate(order):
        classes[r].append(names[x])
    return ">".join("=".join(c) for c in classes)


def format_profile(profile: Profile, names: Optional[Sequence[str]] = None) -> list[str]:
    return [format_order(o, names) for o in profile]


def is_linear(order: WeakOrder) -> bool:
    return len(set(order)) == len(order)


def is_linear_profile(profile: Profile) -> bool:
    return all(is_linear(o) for o in profile)


def rank_rg(order: WeakOrder, x: int) -> int:
    """Number of alternatives weakly preferred to ``x`` (1 is the top).

    Only defined on linear orders.
    """
    if not is_linear(order):
        raise DomainError("rank is only defined on linear orders")
    return sum(1 for r in order if r <= order[x])


def _distinct(x: int, y: int) -> None:
    if x == y:
        raise PreconditionError(f"expected two distinct alternatives, got {alt_name(x)} twice")


def strictly_prefers(order: WeakOrder, x: int, y: int) -> bool:
    _distinct(x, y)
    return order[x] < order[y]


def weakly_prefers(order: WeakOrder, x: int, y: int) -> bool:
    return order[x] <= order[y]


def top_set(order: WeakOrder, among: Optional[Iterable[int]] = None) -> frozenset[int]:
    """Most preferred alternatives of ``order`` within ``among`` (default: all)."""
    among = range(len(order)) if among is None else list(among)
    best = min(order[x] for x in among)
    return frozenset(x for x in among if order[x] == best)


def restrict(order: WeakOrder, subset: Iterable[int]) -> WeakOrder:
    """Restriction of ``order`` to ``subset``.

    The result is an order over ``sorted(subset)``: its position ``k`` holds the
    dense rank of the ``k``-th smallest member of the subset.
    """
    members = sorted(set(subset))
    if not members:
        raise DomainError("cannot restrict to an empty set of alternatives")
    return densify([order[x] for x in members])


def restrict_profile(profile: Profile, subset: Iterable[int]) -> Profile:
    members = sorted(set(subset))
    return tuple(restrict(o, members) for o in profile)


def _shift_pair(order: WeakOrder, x: int, y: int, to_top: bool) -> WeakOrder:
    _distinct(x, y)
    rx, ry = order[x], order[y]
    pair_ranks = densify((rx, ry))
    others = [z for z in range(len(order)) if z != x and z != y]
    other_ranks = densify([order[z] for z in others])
    new = [0] * len(order)
    if to_top:
        pair_offset, other_offset = 0, max(pair_ranks) + 1
    else:
        pair_offset, other_offset = (max(other_ranks) + 1 if others else 0), 0
    new[x], new[y] = pair_ranks[0] + pair_offset, pair_ranks[1] + pair_offset
    for z, r in zip(others, other_ranks):
        new[z] = r + other_offset
    return tuple(new)


def top_shift_order(order: WeakOrder, x: int, y: int) -> WeakOrder:
    return _shift_pair(order, x, y, to_top=True)


def top_shift_profile(profile: Profile, x: int, y: int) -> Profile:
    """Move ``x`` and ``y`` to the top of every voter's order, keeping their relative ranking."""
    return tuple(_shift_pair(o, x, y, True) for o in profile)


def bottom_shift_profile(profile: Profile, x: int, y: int) -> Profile:
    """Move ``x`` and ``y`` to the bottom of every voter's order, keeping their relative ranking."""
    return tuple(_shift_pair(o, x, y, False) for o in profile)


def is_two_profile(profile: Profile) -> Optional[tuple[int, int]]:
    """Return the pair ranked strictly above every other alternative by all voters.

    For ``m >= 3`` the pair is unique when it exists. Returns None otherwise.
    """
    m = len(profile[0])
    if m < 2:
        return None
    for x, y in itertools.combinations(range(m), 2):
        if all(
            o[x] < o[z] and o[y] < o[z]
            for o in profile
            for z in range(m)
            if z != x and z != y
        ):
            return (x, y)
    return None


def apply_voter_permutation(profile: Profile, pi: Sequence[int]) -> Profile:
    """Voter ``i`` receives the order of voter ``pi[i]``."""
    if sorted(pi) != list(range(len(profile))):
        raise DomainError(f"{list(pi)} is not a permutation of the {len(profile)} voters")
    return tuple(profile[pi[i]] for i in range(len(profile)))


def apply_alternative_permutation(profile: Profile, sigma: Sequence[int]) -> Profile:
    """Relabel alternative ``a`` as ``sigma[a]`` in every order."""
    m = len(profile[0])
    if sorted(sigma) != list(range(m)):
        raise DomainError(f"{list(sigma)} is not a permutation of the {m} alternatives")
    out = []
    for o in profile:
        new = [0] * m
        for a in range(m):
            new[sigma[a]] = o[a]
        out.append(tuple(new))
    return tuple(out)


def permute_set(alts: Iterable[int], sigma: Sequence[int]) -> frozenset[int]:
    return frozenset(sigma[a] for a in alts)


def inverse_permutation(p: Sequence[int]) -> list[int]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return inv


def transposition(size: int, i: int, j: int) -> list[int]:
    p = list(range(size))
    p[i], p[j] = j, i
    return p


def never_worse(r: WeakOrder, q: WeakOrder, x: int) -> bool:
    """``x``'s standing against every rival does not deteriorate from ``r`` to ``q``."""
    for z in range(len(r)):
        if z == x:
            continue
        if r[x] < r[z] and not q[x] < q[z]:
            return False
        if r[x] == r[z] and not q[x] <= q[z]:
            return False
    return True


def is_additional_support(R: Profile, Q: Profile, x: int, y: int) -> bool:
    """True iff ``Q`` is an additional support of ``x`` against ``y`` from ``R``."""
    _distinct(x, y)
    if len(R) != len(Q) or len(R[0]) != len(Q[0]):
        raise DomainError("profiles have different dimensions")
    if not all(never_worse(r, q, x) for r, q in zip(R, Q)):
        return False
    return any(r[y] <= r[x] and q[x] < q[y] for r, q in zip(R, Q))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def ordered_bell(m: int) -> int:
    """Number of weak orders on ``m`` labelled alternatives."""
    a = [1]
    for k in range(1, m + 1):
        a.append(sum(math.comb(k, j) * a[k - j] for j in range(1, k + 1)))
    return a[m]


@lru_cache(maxsize=None)
def enumerate_orders(m: int, kind: str = "weak") -> tuple[WeakOrder, ...]:
    """All orders of the given kind, lexicographic on their rank arrays."""
    if m < 1:
        raise DomainError("need at least one alternative")
    if kind == "linear":
        return tuple(itertools.permutations(range(m)))
    if kind != "weak":
        raise DomainError(f"unknown order kind {kind!r}")
    out = []
    for ranks in itertools.product(range(m), repeat=m):
        top = max(ranks)
        if len(set(ranks)) == top + 1:
            out.append(ranks)
    return tuple(out)


@lru_cache(maxsize=None)
def order_index(m: int, kind: str = "weak") -> dict[WeakOrder, int]:
    return {o: i for i, o in enumerate(enumerate_orders(m, kind))}


def profile_index(profile: Profile, kind: str = "weak") -> int:
    """Position of ``profile`` in the canonical product order (voter 1 most significant)."""
    m = len(profile[0])
    idx = order_index(m, kind)
    k = len(idx)
    out = 0
    for o in profile:
        out = out * k + idx[o]
    return out


def profile_at(index: int, m: int, n: int, kind: str = "weak") -> Profile:
    orders = enumerate_orders(m, kind)
    k = len(orders)
    digits = []
    for _ in range(n):
        index, d = divmod(index, k)
        digits.append(orders[d])
    return tuple(reversed(digits))


@dataclass(frozen=True)
class DomainSpec:
    """A profile space: ``m`` alternatives, ``n`` voters, order kind, restriction, mode.

    ``sample`` switches to sample mode (``sample`` profiles drawn without
    replacement from ``seed``); it is only accepted when the exhaustive space is
    larger than ``budget``.
    """

    m: int
    n: int
    orders: str = "weak"
    restriction: str = "all"
    sample: Optional[int] = None
    seed: int = 0
    budget: int = DEFAULT_PROFILE_BUDGET

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DomainError("need m >= 1 and n >= 1")
        if self.orders not in ORDER_KINDS:
            raise DomainError(f"unknown order kind {self.orders!r}")
        if self.restriction not in RESTRICTIONS:
            raise DomainError(f"unknown restriction {self.restriction!r}")
        if self.sample is not None:
            if self.sample < 1:
                raise DomainError("sample size must be positive")
            if self.cardinality <= self.budget:
                raise DomainError(
                    f"sample mode requested but the exhaustive space has only "
                    f"{self.cardinality} profiles (budget {self.budget}); use exhaustive mode"
                )

    @property
    def cardinality(self) -> int:
        """Size of the unrestricted product space."""
        return len(enumerate_orders(self.m, self.orders)) ** self.n

    @property
    def exhaustive(self) -> bool:
        return self.sample is None

    def with_restriction(self, restriction: str) -> "DomainSpec":
        return DomainSpec(self.m, self.n, self.orders, restriction, self.sample, self.seed, self.budget)

    def describe(self) -> dict:
        out = {"m": self.m, "n": self.n, "orders": self.orders, "restriction": self.restriction}
        out["mode"] = "exhaustive" if self.sample is None else f"sample({self.sample}, seed={self.seed})"
        return out

    def label(self) -> str:
        base = f"m{self.m}n{self.n}-{self.orders}-{self.restriction}"
        return base if self.sample is None else f"{base}-sample{self.sample}s{self.seed}"


def _restriction_filter(restriction: str):
    if restriction == "all":
        return None
    if restriction == "two-profiles":
        return lambda p: is_two_profile(p) is not None
    from .majority import in_condorcet_domain

    return in_condorcet_domain


def iter_profiles(spec: DomainSpec) -> Iterator[Profile]:
    """Lazily yield the profiles of ``spec`` in canonical order."""
    keep = _restriction_filter(spec.restriction)
    if spec.sample is None:
        if spec.cardinality > spec.budget:
            raise BudgetError(
                f"exhaustive enumeration of {spec.label()} needs {spec.cardinality} profiles "
                f"(budget {spec.budget}); use sample mode",
                spec.cardinality,
            )
        orders = enumerate_orders(spec.m, spec.orders)
        for profile in itertools.product(orders, repeat=spec.n):
            if keep is None or keep(profile):
                yield profile
        return
    for index in _sample_indices(spec, keep):
        yield profile_at(index, spec.m, spec.n, spec.orders)


def _sample_indices(spec: DomainSpec, keep) -> list[int]:
    rng = random.Random(spec.seed)
    total = spec.cardinality
    seen: set[int] = set()
    chosen: list[int] = []
    while len(chosen) < spec.sample and len(seen) < total:
        index = rng.randrange(total)
        if index in seen:
            continue
        seen.add(index)
        if keep is None or keep(profile_at(index, spec.m, spec.n, spec.orders)):
            chosen.append(index)
    return sorted(chosen)


@lru_cache(maxsize=32)
def enumerate_profiles(spec: DomainSpec) -> tuple[Profile, ...]:
    """Materialised profile sequence of ``spec`` (canonical order, cached)."""
    return tuple(iter_profiles(spec))
