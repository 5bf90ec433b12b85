"""Pairwise majority margins and (weak) Condorcet winners."""

from __future__ import annotations

from .preferences import Profile, PreconditionError, alt_name


def margin(profile: Profile, x: int, y: int) -> int:
    """Number of voters who strictly prefer ``x`` to ``y``."""
    if x == y:
        raise PreconditionError(f"margin needs two distinct alternatives, got {alt_name(x)} twice")
    return sum(1 for o in profile if o[x] < o[y])


def beats(profile: Profile, x: int, y: int) -> bool:
    return margin(profile, x, y) > margin(profile, y, x)


def majority_matrix(profile: Profile) -> tuple[tuple[int, ...], ...]:
    """Entry ``[x][y]`` is ``margin(profile, x, y)``; the diagonal is zero."""
    m = len(profile[0])
    counts = [[0] * m for _ in range(m)]
    for o in profile:
        for x in range(m):
            ox = o[x]
            row = counts[x]
            for y in range(m):
                if ox < o[y]:
                    row[y] += 1
    return tuple(tuple(row) for row in counts)


def condorcet_winners(profile: Profile) -> frozenset[int]:
    """Alternatives that are never strictly beaten in a pairwise majority vote."""
    counts = majority_matrix(profile)
    m = len(counts)
    return frozenset(
        x for x in range(m) if all(counts[x][y] >= counts[y][x] for y in range(m) if y != x)
    )


def in_condorcet_domain(profile: Profile) -> bool:
    return bool(condorcet_winners(profile))
