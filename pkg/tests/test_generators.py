"""Synthetic instances, profile realization, and the two gadget reductions."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from beatpath.core import build_tournament, majority_margins, WeightedTournament
from beatpath.generators import (
    mcgarvey_profile,
    random_digraph,
    random_emas_instance,
    random_profile,
    random_tournament,
    reduce_emas,
    reduce_reachability,
)
from beatpath.oracles import (
    _adjacency,
    _reachable,
    emas,
    ranked_pairs,
    schulze_winners_seq,
)


class TestMcGarvey:
    def test_sample4_ballot_count(self, sample4):
        profile = mcgarvey_profile(sample4)
        # One ballot pair per two units of weight: sum of weights = 42.
        assert len(profile.voters) == 42
        assert profile.total_weight == 42

    def test_sample4_round_trip(self, sample4):
        rebuilt = build_tournament(majority_margins(mcgarvey_profile(sample4)))
        assert rebuilt == sample4

    def test_rejects_odd_weight(self):
        t = WeightedTournament.from_edges(2, [(0, 1, 3)])
        with pytest.raises(ValueError, match="odd weight"):
            mcgarvey_profile(t)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 12), st.floats(0.1, 1.0), st.integers(0, 10**6))
    def test_round_trip_random(self, m, density, seed):
        t = random_tournament(m, density, 12, seed)
        profile = mcgarvey_profile(t)
        assert build_tournament(majority_margins(profile)) == t
        assert len(profile.voters) == int(t.w.sum())


class TestRandomTournament:
    def test_deterministic_per_seed(self):
        a = random_tournament(30, 0.5, 10, 7)
        b = random_tournament(30, 0.5, 10, 7)
        assert a == b

    def test_seed_changes_instance(self):
        assert random_tournament(30, 0.5, 10, 7) != random_tournament(30, 0.5, 10, 8)

    def test_density_one_is_complete(self):
        t = random_tournament(12, 1.0, 10, 0)
        assert t.edge_count == 12 * 11 // 2

    def test_weights_even_and_bounded(self):
        t = random_tournament(25, 0.8, 14, 3)
        w = t.w
        assert (w % 2 == 0).all() and w.min() >= 2 and w.max() <= 14

    def test_expected_edge_count(self):
        t = random_tournament(100, 0.94, 10, 0)
        pairs = 100 * 99 // 2
        # Binomial(4950, 0.94): stay within 5 standard deviations.
        sd = (pairs * 0.94 * 0.06) ** 0.5
        assert abs(t.edge_count - pairs * 0.94) < 5 * sd

    def test_rejects_bad_density(self):
        with pytest.raises(ValueError):
            random_tournament(5, 0.0, 10, 0)

    def test_rejects_odd_max_weight(self):
        with pytest.raises(ValueError):
            random_tournament(5, 0.5, 9, 0)


class TestRandomProfile:
    def test_shapes_and_determinism(self):
        p = random_profile(6, 11, 4)
        assert p.m == 6 and len(p.voters) == 11
        assert p == random_profile(6, 11, 4)
        for order in p.voters:
            assert len(order.tiers) == 6  # strict linear orders


class TestReachabilityReduction:
    def test_direct_edge_reachable(self):
        t = reduce_reachability(2, [(0, 1)], 0, 1)
        assert schulze_winners_seq(t) == {0}

    def test_no_edges_unreachable(self):
        t = reduce_reachability(2, [], 0, 1)
        assert schulze_winners_seq(t) != {0}

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 8), st.floats(0.0, 0.75), st.integers(0, 10**6))
    def test_iff_reachability(self, n, density, seed):
        n, edges = random_digraph(n, density, seed)
        a, b = 0, n - 1
        t = reduce_reachability(n, edges, a, b)
        adj = _adjacency(n, [u for u, _ in edges], [v for _, v in edges])
        assert (schulze_winners_seq(t) == {a}) == _reachable(adj, a, b)


class TestEmasReduction:
    def test_instance_cleanup_subdivides(self):
        inst_edges = [(0, 1), (1, 0)]  # 2-cycle: later edge gets a midpoint
        from beatpath.generators import emas_from_digraph

        inst = emas_from_digraph(2, inst_edges, f_index=0)
        assert inst.f == (0, 1)
        assert len(inst.edges) == 3

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 7), st.integers(1, 12), st.integers(0, 10**6))
    def test_iff_emas(self, n, n_edges, seed):
        max_edges = n * (n - 1) // 2
        inst = random_emas_instance(n, min(n_edges, max_edges), seed)
        margins, tb = reduce_emas(inst)
        result = ranked_pairs(margins, tb)
        _, f_kept = emas(inst)
        assert (result.winner == 0) == (not f_kept)

    def test_margins_descend_with_position(self):
        inst = random_emas_instance(5, 6, 1)
        margins, _ = reduce_emas(inst)
        values = []
        for i, (u, v) in enumerate(inst.edges):
            if i == inst.f_index:
                values.append(margins[u + 1, 0])
            else:
                values.append(margins[u + 1, v + 1])
        assert values == sorted(values, reverse=True)
