"""Exact coalitional games: construction, dividends, Shapley values, core tests.

Coalitions are bit sets stored as plain ints: bit ``i`` is player ``i``.
A game holds the full value table, one exact rational per coalition, so
every operation here is exact; nothing is rounded.  Full tables are capped
at :data:`MAX_TABLE_PLAYERS` players by default because the table has
``2**n`` entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    DuplicateCoalition,
    EmptySupportCoalition,
    LengthMismatch,
    NegativePayoff,
    NonzeroEmptySet,
    PlayerCountMismatch,
    PlayerOutOfRange,
    TooManyPlayers,
)

MAX_TABLE_PLAYERS = 20

RationalVector = tuple[Fraction, ...]
IntVector = tuple[int, ...]


def coalition(players: Iterable[int]) -> int:
    """Bit mask of the given player indices."""
    mask = 0
    for p in players:
        mask |= 1 << p
    return mask


def members(mask: int) -> tuple[int, ...]:
    """Players in the coalition, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Game:
    """A coalitional game: player count plus a full table of exact values.

    ``values[mask]`` is the worth of the coalition encoded by ``mask``;
    ``values[0]`` is always zero.  Instances are immutable and safe to
    share between threads.
    """

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != 1 << self.n:
            raise LengthMismatch(
                f"value table has {len(self.values)} entries, expected {1 << self.n}"
            )
        if self.values[0] != 0:
            raise NonzeroEmptySet("the empty coalition must have value 0")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def grand_value(self) -> Fraction:
        return self.values[self.full]

    def value(self, mask: int) -> Fraction:
        return self.values[mask]


def _check_player_cap(n: int, max_players: int) -> None:
    if n > max_players:
        raise TooManyPlayers(
            f"full value tables support at most {max_players} players, got {n}"
        )


def make_game(
    n: int,
    entries: Iterable[tuple[int, Fraction]] = (),
    *,
    max_players: int = MAX_TABLE_PLAYERS,
) -> Game:
    """Build a game from (coalition mask, value) pairs; unlisted coalitions are 0."""
    if n < 1:
        raise PlayerOutOfRange(f"player count must be >= 1, got {n}")
    _check_player_cap(n, max_players)
    table = [Fraction(0)] * (1 << n)
    seen = set()
    for mask, value in entries:
        if mask < 0 or mask >= 1 << n:
            raise PlayerOutOfRange(f"coalition {bin(mask)} has players outside 0..{n - 1}")
        if mask in seen:
            raise DuplicateCoalition(f"coalition {members(mask)} listed twice")
        seen.add(mask)
        value = _as_fraction(value)
        if mask == 0:
            if value != 0:
                raise NonzeroEmptySet("the empty coalition must have value 0")
            continue
        table[mask] = value
    return Game(n, tuple(table))


def unanimity_game(n: int, support: int, *, max_players: int = MAX_TABLE_PLAYERS) -> Game:
    """The game worth 1 on every superset of ``support`` and 0 elsewhere."""
    if support == 0:
        raise EmptySupportCoalition("unanimity games need a nonempty support coalition")
    if n < 1:
        raise PlayerOutOfRange(f"player count must be >= 1, got {n}")
    if support >= 1 << n:
        raise PlayerOutOfRange(f"support {members(support)} has players outside 0..{n - 1}")
    _check_player_cap(n, max_players)
    one = Fraction(1)
    zero = Fraction(0)
    table = tuple(one if mask & support == support else zero for mask in range(1 << n))
    return Game(n, table)


def game_linear(a: Fraction, g1: Game, b: Fraction, g2: Game) -> Game:
    """Pointwise combination ``a*g1 + b*g2`` of two games on the same players."""
    if g1.n != g2.n:
        raise PlayerCountMismatch(f"cannot combine games on {g1.n} and {g2.n} players")
    a = _as_fraction(a)
    b = _as_fraction(b)
    table = tuple(a * x + b * y for x, y in zip(g1.values, g2.values))
    return Game(g1.n, table)


def harsanyi_dividends(g: Game) -> tuple[Fraction, ...]:
    """Harsanyi dividend of every coalition, indexed by mask.

    Computed by Moebius inversion over the subset lattice; rebuilding the
    game as a dividend-weighted sum of unanimity games reproduces every
    table entry exactly.
    """
    d = list(g.values)
    for i in range(g.n):
        bit = 1 << i
        for mask in range(1 << g.n):
            if mask & bit:
                d[mask] -= d[mask ^ bit]
    return tuple(d)


def shapley_exact(g: Game) -> RationalVector:
    """Exact Shapley value: each coalition's dividend split equally among members."""
    dividends = harsanyi_dividends(g)
    sv = [Fraction(0)] * g.n
    for mask in range(1, 1 << g.n):
        d = dividends[mask]
        if d == 0:
            continue
        share = d / mask.bit_count()
        for i in members(mask):
            sv[i] += share
    return tuple(sv)


def shapley_matrix_exact(g: Game) -> tuple[RationalVector, ...]:
    """Exact synergy matrix: entry (i, j) sums dividends of coalitions
    containing both players, each divided by the squared coalition size.

    The matrix is symmetric and row ``i`` sums to the Shapley value of ``i``.
    """
    dividends = harsanyi_dividends(g)
    mat = [[Fraction(0)] * g.n for _ in range(g.n)]
    for mask in range(1, 1 << g.n):
        d = dividends[mask]
        if d == 0:
            continue
        share = d / (mask.bit_count() ** 2)
        ms = members(mask)
        for i in ms:
            row = mat[i]
            for j in ms:
                row[j] += share
    return tuple(tuple(row) for row in mat)


def is_convex(g: Game) -> bool:
    """True iff marginal contributions weakly grow with the coalition.

    Uses full pairwise supermodularity (all coalition pairs, O(4^n)) on
    small tables and the equivalent two-player local criterion above that;
    both decide the same predicate.
    """
    if g.n <= 8:
        return _is_convex_pairs(g)
    return _is_convex_local(g)


def _is_convex_pairs(g: Game) -> bool:
    v = g.values
    size = 1 << g.n
    for a in range(size):
        va = v[a]
        for b in range(a + 1, size):
            if va + v[b] > v[a | b] + v[a & b]:
                return False
    return True


def _is_convex_local(g: Game) -> bool:
    # v supermodular iff for all i < j and S avoiding both:
    # v(S+i+j) + v(S) >= v(S+i) + v(S+j)
    v = g.values
    for i in range(g.n):
        bi = 1 << i
        for j in range(i + 1, g.n):
            bj = 1 << j
            both = bi | bj
            avoid = g.full ^ both
            s = avoid
            while True:
                if v[s | both] + v[s] < v[s | bi] + v[s | bj]:
                    return False
                if s == 0:
                    break
                s = (s - 1) & avoid
    return True


def is_positive(g: Game) -> bool:
    """True iff every Harsanyi dividend is nonnegative."""
    return all(d >= 0 for d in harsanyi_dividends(g))


def is_size_bounded(g: Game) -> bool:
    """True iff every nonempty coalition is worth strictly less than its size."""
    return all(g.values[mask] < mask.bit_count() for mask in range(1, 1 << g.n))


def coalition_sums(g_n: int, x: Sequence[Fraction]) -> list[Fraction]:
    """Payoff of every coalition under vector ``x``, indexed by mask."""
    sums = [Fraction(0)] * (1 << g_n)
    for mask in range(1, 1 << g_n):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + x[low.bit_length() - 1]
    return sums


def in_core(g: Game, x: Sequence) -> bool:
    """True iff ``x`` is efficient and no coalition is paid less than its worth."""
    if len(x) != g.n:
        raise LengthMismatch(f"payoff vector has {len(x)} entries, game has {g.n} players")
    xv = [_as_fraction(e) for e in x]
    sums = coalition_sums(g.n, xv)
    if sums[g.full] != g.grand_value:
        return False
    return all(sums[mask] >= g.values[mask] for mask in range(1, 1 << g.n))


class ReducedGame(NamedTuple):
    """A reduced game plus the original label of each surviving player."""

    game: Game
    players: tuple[int, ...]


def reduced_game(g: Game, i: int, c: Fraction) -> ReducedGame:
    """Pay player ``i`` the amount ``c`` and remove it from the game.

    The grand coalition of the result is worth ``v(N) - c``; every other
    coalition may either keep its old value or absorb ``i`` at price ``c``,
    whichever is larger.  Surviving players are densely reindexed;
    ``players[new]`` gives the original index.
    """
    if i < 0 or i >= g.n:
        raise PlayerOutOfRange(f"player {i} outside 0..{g.n - 1}")
    c = _as_fraction(c)
    if c < 0:
        raise NegativePayoff(f"reduction payoff must be >= 0, got {c}")
    m = g.n - 1
    low_mask = (1 << i) - 1
    bit = 1 << i
    v = g.values
    table = [Fraction(0)] * (1 << m)
    full_new = (1 << m) - 1
    for mask in range(1, 1 << m):
        old = (mask & low_mask) | ((mask & ~low_mask) << 1)
        if mask == full_new:
            table[mask] = g.grand_value - c
        else:
            with_i = v[old | bit] - c
            table[mask] = with_i if with_i > v[old] else v[old]
    if m == 0:
        # removing the only player: the empty game must still be worth 0
        if g.grand_value != c:
            raise NonzeroEmptySet(
                f"reducing the last player by {c} leaves value {g.grand_value - c}"
            )
    kept = tuple(p for p in range(g.n) if p != i)
    return ReducedGame(Game(m, tuple(table)) if m else _EMPTY_GAME, kept)


# the zero-player game (worth nothing); reachable only through reductions
_EMPTY_GAME = Game(0, (Fraction(0),))


def floor_values(g: Game) -> Game:
    """Round every coalition value down to an integer."""
    return Game(g.n, tuple(Fraction(math.floor(v)) for v in g.values))
