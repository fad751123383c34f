import random
from fractions import Fraction

import pytest

from indivisible import (
    ApprovalProfile,
    Region,
    RegionalVotes,
    apportion_isv,
    coalition,
    coalition_game_from_regions,
    dhondt,
    game_from_approvals,
    indivisible_shapley,
    shapley_exact,
)
from indivisible.errors import (
    AllZeroVotes,
    EmptySupportCoalition,
    InvalidRange,
    NoBallots,
)

from oracles import two_goods_game

F = Fraction


def profile(ballots, parties=None):
    if parties is None:
        m = max(mask.bit_length() for mask, _ in ballots)
        parties = tuple(chr(ord("A") + i) for i in range(m))
    return ApprovalProfile(tuple(parties), tuple(ballots))


def dhondt_reference(votes, seats):
    """All quotients up front, take the best `seats` with the tie rule."""
    quotients = [
        (F(v, d), v, -i)
        for i, v in enumerate(votes)
        for d in range(1, seats + 1)
    ]
    quotients.sort(reverse=True)
    alloc = [0] * len(votes)
    for _, v, negi in quotients[:seats]:
        alloc[-negi] += 1
    return tuple(alloc)


class TestApprovalGame:
    def test_two_party_shares(self):
        p = profile([(0b01, 3), (0b11, 1)])
        g = game_from_approvals(p, 4)
        assert g.values[0b01] == 3
        assert g.values[0b10] == 0
        assert g.values[0b11] == 4

    def test_unanimous_pair(self):
        p = profile([(0b11, 10)])
        g = game_from_approvals(p, 3)
        assert g.values[0b01] == 0 and g.values[0b10] == 0 and g.values[0b11] == 3

    def test_single_ballot_additive(self):
        g = game_from_approvals(profile([(0b1, 1)], parties=("A",)), 7)
        assert g.values == (F(0), F(7))

    def test_monotone_and_grand_seats(self):
        rng = random.Random(501)
        for _ in range(15):
            m = rng.randint(1, 5)
            ballots = [
                (rng.randint(1, (1 << m) - 1), rng.randint(1, 5))
                for _ in range(rng.randint(1, 8))
            ]
            seats = rng.randint(1, 10)
            g = game_from_approvals(profile(ballots, parties=tuple("ABCDE"[:m])), seats)
            assert g.grand_value == seats
            for mask in range(1 << m):
                for i in range(m):
                    if not mask >> i & 1:
                        assert g.values[mask] <= g.values[mask | (1 << i)]

    def test_empty_ballot_rejected(self):
        with pytest.raises(EmptySupportCoalition):
            profile([(0, 1)], parties=("A",))

    def test_no_ballots_rejected(self):
        with pytest.raises(NoBallots):
            game_from_approvals(ApprovalProfile(("A",), ()), 1)


class TestApportion:
    def test_majority_takes_remainder(self):
        assert apportion_isv(profile([(0b01, 3), (0b11, 1)]), 4) == (4, 0)

    def test_block_structure(self):
        # 66 voters approve the triple {A,B,C}, 33 the pair {D,E}: the
        # induced game is exactly the two-goods game, so the pair block
        # keeps one of the three seats
        p = profile([(coalition([0, 1, 2]), 66), (coalition([3, 4]), 33)])
        g = game_from_approvals(p, 3)
        assert g == two_goods_game()
        seats = apportion_isv(p, 3)
        assert seats == (1, 1, 0, 1, 0)
        assert seats[3] + seats[4] == 1
        assert seats[0] + seats[1] + seats[2] == 2

    def test_single_party(self):
        assert apportion_isv(profile([(0b1, 5)], parties=("A",)), 9) == (9,)

    def test_random_profiles_efficient_within_quotas(self):
        import math

        rng = random.Random(507)
        for _ in range(15):
            m = rng.randint(1, 5)
            ballots = [
                (rng.randint(1, (1 << m) - 1), rng.randint(1, 6))
                for _ in range(rng.randint(1, 8))
            ]
            seats = rng.randint(1, 9)
            p = profile(ballots, parties=tuple("ABCDE"[:m]))
            sv = shapley_exact(game_from_approvals(p, seats))
            alloc = apportion_isv(p, seats)
            assert sum(alloc) == seats
            for s, a in zip(sv, alloc):
                assert math.floor(s) <= a <= math.ceil(s)


class TestDhondt:
    def test_classic_split(self):
        assert dhondt((100, 80, 30), 8) == (4, 3, 1)

    def test_shutout(self):
        assert dhondt((1, 0), 5) == (5, 0)

    def test_even_tie(self):
        assert dhondt((50, 50), 2) == (1, 1)

    def test_matches_quotient_enumeration(self):
        rng = random.Random(503)
        for _ in range(40):
            m = rng.randint(1, 6)
            votes = [rng.randint(0, 60) for _ in range(m)]
            if not any(votes):
                votes[rng.randrange(m)] = 1
            seats = rng.randint(1, 12)
            assert dhondt(votes, seats) == dhondt_reference(votes, seats)

    def test_house_monotone(self):
        rng = random.Random(509)
        for _ in range(20):
            votes = [rng.randint(1, 50) for _ in range(rng.randint(2, 5))]
            prev = dhondt(votes, 1)
            for seats in range(2, 10):
                cur = dhondt(votes, seats)
                assert all(c >= p for c, p in zip(cur, prev))
                prev = cur

    def test_all_zero_rejected(self):
        with pytest.raises(AllZeroVotes):
            dhondt((0, 0), 3)

    def test_seats_positive(self):
        with pytest.raises(InvalidRange):
            dhondt((10,), 0)


class TestCoalitionGame:
    def test_single_region_merged_list(self):
        rv = RegionalVotes((Region(3, (100, 80)),))
        g = coalition_game_from_regions(rv, (0, 1), [(30,)])
        assert g.values[0b11] == 3
        assert g.values[0b01] == dhondt((100, 30), 3)[0]
        assert g.values[0b10] == dhondt((80, 30), 3)[0]

    def test_single_member_standalone(self):
        rv = RegionalVotes((Region(5, (40, 25, 10)),))
        g = coalition_game_from_regions(rv, (1,), [(40, 10)])
        assert g.values[0b1] == dhondt((25, 40, 10), 5)[0]

    def test_monotone(self):
        rng = random.Random(521)
        for _ in range(10):
            m = rng.randint(1, 4)
            regions = []
            outsiders = []
            for _ in range(rng.randint(1, 3)):
                votes = tuple(rng.randint(0, 50) for _ in range(m))
                regions.append(Region(rng.randint(1, 6), votes if any(votes) else (1,) * m))
                outsiders.append(tuple(rng.randint(0, 40) for _ in range(rng.randint(0, 2))))
            g = coalition_game_from_regions(RegionalVotes(tuple(regions)), range(m), outsiders)
            for mask in range(1 << m):
                for i in range(m):
                    if not mask >> i & 1:
                        assert g.values[mask] <= g.values[mask | (1 << i)]

    def test_pooling_gains_seats(self):
        # two regions where separate lists waste votes against a large rival
        rv = RegionalVotes((Region(3, (30, 25)), Region(3, (30, 25))))
        outsiders = [(100,), (100,)]
        g = coalition_game_from_regions(rv, (0, 1), outsiders)
        separate = g.values[0b01] + g.values[0b10]
        assert g.values[0b11] > separate
        payoffs = indivisible_shapley(g).payoffs
        assert sum(payoffs) == g.grand_value
        sv = shapley_exact(g)
        assert sum(sv) == g.grand_value
