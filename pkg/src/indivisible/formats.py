"""Text formats for games, owner lists, ballots, and regional vote tables.

All formats are line based, use ``#`` for comment lines, and round-trip
bit-exactly: formatting a parsed value and reparsing it reproduces the
same in-memory object.  Player indices are 0-based and written ascending.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ParseError
from .games import Game, make_game, members
from .elections import ApprovalProfile, Region, RegionalVotes
from .matching import OwnerList


def format_value(value: Fraction) -> str:
    """Canonical rendering: integers bare, other rationals as num/den."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_fraction(token: str, source: str, lineno: int) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(source, lineno, f"bad rational value {token!r}") from None
    return value


def _parse_indices(token: str, n: int, source: str, lineno: int) -> int:
    mask = 0
    prev = -1
    for part in token.split(","):
        try:
            idx = int(part)
        except ValueError:
            raise ParseError(source, lineno, f"bad player index {part!r}") from None
        if idx <= prev:
            raise ParseError(
                source, lineno, f"player indices must be strictly ascending, got {token!r}"
            )
        if idx < 0 or idx >= n:
            raise ParseError(source, lineno, f"player index {idx} outside 0..{n - 1}")
        prev = idx
        mask |= 1 << idx
    return mask


def _parse_header(line: str, keyword: str, source: str, lineno: int) -> list[str]:
    parts = line.split()
    if not parts or parts[0] != keyword:
        raise ParseError(source, lineno, f"expected '{keyword} ...', got {line!r}")
    if len(parts) < 2:
        raise ParseError(source, lineno, f"missing count after '{keyword}'")
    try:
        count = int(parts[1])
    except ValueError:
        raise ParseError(source, lineno, f"bad count {parts[1]!r}") from None
    if count < 1:
        raise ParseError(source, lineno, f"count must be >= 1, got {count}")
    return parts


def parse_game(text: str, source: str = "<game>") -> Game:
    """Parse the game format: a ``players <n>`` header, then one
    ``<i1>,...,<ik> <value>`` line per nonzero coalition."""
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError(source, 1, "empty game file") from None
    n = int(_parse_header(header, "players", source, lineno)[1])
    entries = []
    seen = set()
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(source, lineno, f"expected '<players> <value>', got {line!r}")
        mask = _parse_indices(parts[0], n, source, lineno)
        if mask in seen:
            raise ParseError(source, lineno, f"coalition {parts[0]} listed twice")
        seen.add(mask)
        entries.append((mask, _parse_fraction(parts[1], source, lineno)))
    return make_game(n, entries)


def format_game(g: Game) -> str:
    lines = [f"players {g.n}"]
    for mask in range(1, 1 << g.n):
        if g.values[mask] != 0:
            indices = ",".join(str(i) for i in members(mask))
            lines.append(f"{indices} {format_value(g.values[mask])}")
    return "\n".join(lines) + "\n"


def parse_owner_list(text: str, source: str = "<owners>") -> OwnerList:
    """Parse the owner-list format: a ``players <n>`` header, then one
    comma-separated owner coalition per object."""
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError(source, 1, "empty owner file") from None
    n = int(_parse_header(header, "players", source, lineno)[1])
    owners = []
    for lineno, line in lines:
        if len(line.split()) != 1:
            raise ParseError(source, lineno, f"expected one owner coalition, got {line!r}")
        owners.append(_parse_indices(line, n, source, lineno))
    return OwnerList(n, tuple(owners))


def format_owner_list(ol: OwnerList) -> str:
    lines = [f"players {ol.n}"]
    for mask in ol.owners:
        lines.append(",".join(str(i) for i in members(mask)))
    return "\n".join(lines) + "\n"


def parse_approval_profile(text: str, source: str = "<ballots>") -> ApprovalProfile:
    """Parse the ballot format: ``parties <m> <name0> <name1> ...``, then one
    ``<count> <i1>,<i2>,...`` line per distinct approval set."""
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError(source, 1, "empty ballot file") from None
    parts = _parse_header(header, "parties", source, lineno)
    m = int(parts[1])
    names = parts[2:]
    if len(names) != m:
        raise ParseError(source, lineno, f"expected {m} party names, got {len(names)}")
    ballots = []
    for lineno, line in lines:
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(source, lineno, f"expected '<count> <parties>', got {line!r}")
        try:
            mult = int(fields[0])
        except ValueError:
            raise ParseError(source, lineno, f"bad ballot count {fields[0]!r}") from None
        if mult < 1:
            raise ParseError(source, lineno, f"ballot count must be >= 1, got {mult}")
        ballots.append((_parse_indices(fields[1], m, source, lineno), mult))
    return ApprovalProfile(tuple(names), tuple(ballots))


def format_approval_profile(profile: ApprovalProfile) -> str:
    lines = ["parties " + str(len(profile.parties)) + " " + " ".join(profile.parties)]
    for mask, mult in profile.ballots:
        lines.append(f"{mult} " + ",".join(str(i) for i in members(mask)))
    return "\n".join(lines) + "\n"


def parse_regional(
    text: str, source: str = "<regional>"
) -> tuple[tuple[str, ...], RegionalVotes, tuple[tuple[int, ...], ...]]:
    """Parse the regional format: ``parties <m> <names...>``, then one
    ``region <seats> <v0> ... <vm-1> | <outsider totals...>`` line per
    region (the bar and outsider totals may be omitted)."""
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError(source, 1, "empty regional file") from None
    parts = _parse_header(header, "parties", source, lineno)
    m = int(parts[1])
    names = parts[2:]
    if len(names) != m:
        raise ParseError(source, lineno, f"expected {m} party names, got {len(names)}")
    regions = []
    outsiders = []
    for lineno, line in lines:
        fields = line.split()
        if not fields or fields[0] != "region":
            raise ParseError(source, lineno, f"expected 'region ...', got {line!r}")
        body = fields[1:]
        if "|" in body:
            bar = body.index("|")
            vote_fields, out_fields = body[:bar], body[bar + 1 :]
        else:
            vote_fields, out_fields = body, []
        if len(vote_fields) != m + 1:
            raise ParseError(
                source, lineno, f"expected seats plus {m} vote totals, got {len(vote_fields)}"
            )
        try:
            numbers = [int(f) for f in vote_fields]
            outs = tuple(int(f) for f in out_fields)
        except ValueError:
            raise ParseError(source, lineno, "vote totals must be integers") from None
        regions.append(Region(numbers[0], tuple(numbers[1:])))
        outsiders.append(outs)
    if not regions:
        raise ParseError(source, lineno, "regional file lists no regions")
    return tuple(names), RegionalVotes(tuple(regions)), tuple(outsiders)


def format_regional(
    names: Sequence[str], rv: RegionalVotes, outsiders: Sequence[Sequence[int]]
) -> str:
    lines = ["parties " + str(len(names)) + " " + " ".join(names)]
    for region, outs in zip(rv.regions, outsiders):
        line = f"region {region.seats} " + " ".join(str(v) for v in region.votes)
        if outs:
            line += " | " + " ".join(str(v) for v in outs)
        lines.append(line)
    return "\n".join(lines) + "\n"


def parse_vector(token: str, source: str = "<vector>") -> tuple[Fraction, ...]:
    """Parse a comma-separated list of rationals, e.g. ``1/2,1,0``."""
    return tuple(_parse_fraction(part, source, 1) for part in token.split(","))
