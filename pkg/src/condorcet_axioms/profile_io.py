"""Reading and writing profile files.

One voter per line, best alternative first::

    # three-voter cycle
    a>b>c
    b>c>a
    2: c>a=b      # two voters indifferent between a and b

Alternatives are identifiers; ``>`` is strict preference, ``=`` indifference,
an optional ``k:`` prefix repeats the line ``k`` times and ``#`` starts a
comment. Alternatives are numbered in order of first appearance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .preferences import Profile, WeakOrder, format_order

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_COUNT = re.compile(r"\s*(\d+)\s*:")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class NamedProfile:
    profile: Profile
    names: tuple[str, ...]

    def format(self) -> list[str]:
        return [format_order(o, self.names) for o in self.profile]


def _parse_ranking(text: str, line: int, offset: int) -> list[tuple[list[str], int]]:
    """Split ``a>b=c`` into indifference classes, remembering each class's column."""
    classes: list[tuple[list[str], int]] = []
    current: list[str] = []
    pos = 0
    expect_name = True
    start_col = offset + 1
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        col = offset + pos + 1
        if expect_name:
            match = _IDENT.match(text, pos)
            if not match:
                raise ParseError(f"expected an alternative, found {ch!r}", line, col)
            if not current:
                start_col = col
            current.append(match.group())
            pos = match.end()
            expect_name = False
        elif ch in ">=":
            if ch == ">":
                classes.append((current, start_col))
                current = []
            pos += 1
            expect_name = True
        else:
            raise ParseError(f"unexpected token {ch!r}", line, col)
    if expect_name:
        raise ParseError("ranking ends without an alternative", line, offset + len(text) + 1)
    classes.append((current, start_col))
    return classes


def parse_profile(text: str) -> NamedProfile:
    names: list[str] = []
    index: dict[str, int] = {}
    voters: list[WeakOrder] = []
    first_line: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        count = 1
        offset = 0
        match = _COUNT.match(body)
        if match:
            count = int(match.group(1))
            if count < 1:
                raise ParseError("multiplicity must be positive", lineno, match.start(1) + 1)
            offset = match.end()
        classes = _parse_ranking(body[offset:], lineno, offset)
        seen: dict[str, int] = {}
        for level, (members, col) in enumerate(classes):
            for name in members:
                if name in seen:
                    raise ParseError(f"alternative {name!r} appears twice", lineno, col)
                seen[name] = level
        if first_line is None:
            first_line = lineno
            for members, _ in classes:
                for name in members:
                    index[name] = len(names)
                    names.append(name)
        elif set(seen) != set(names):
            unknown = sorted(set(seen) - set(names))
            missing = [n for n in names if n not in seen]
            detail = []
            if unknown:
                detail.append("unknown " + ", ".join(unknown))
            if missing:
                detail.append("missing " + ", ".join(missing))
            raise ParseError(
                f"inconsistent alternative sets across voters ({'; '.join(detail)})",
                lineno,
                offset + 1,
            )
        order = [0] * len(names)
        for name, level in seen.items():
            order[index[name]] = level
        voters.extend([tuple(order)] * count)
    if not voters:
        raise ParseError("empty profile", 1, 1)
    return NamedProfile(tuple(voters), tuple(names))


def parse_order(text: str, names: Sequence[str]) -> WeakOrder:
    """Parse a single ranking over a known, ordered list of alternative names."""
    parsed = parse_profile(text)
    if len(parsed.profile) != 1:
        raise ParseError("expected a single ranking", 1, 1)
    if set(parsed.names) != set(names):
        raise ParseError(f"ranking {text!r} does not cover exactly {list(names)}", 1, 1)
    order = parsed.profile[0]
    lookup = {name: order[i] for i, name in enumerate(parsed.names)}
    return tuple(lookup[name] for name in names)


def parse_profile_lines(lines: Sequence[str], names: Sequence[str]) -> Profile:
    return tuple(parse_order(line, names) for line in lines)


def format_profile_text(profile: Profile, names: Optional[Sequence[str]] = None) -> str:
    return "\n".join(format_order(o, names) for o in profile) + "\n"
