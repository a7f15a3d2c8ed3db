"""Engine contract: supersteps, barriers, halting, combining, determinism."""

import numpy as np
import pytest

from beatpath.core import WeightedTournament
from beatpath.pregel import (
    ComputeContext,
    ContractViolation,
    DirectedGraph,
    aggregate,
    resolve_threads,
    run,
)


def path_graph(n: int) -> DirectedGraph:
    edges = [(i, i + 1, 1) for i in range(n - 1)]
    t = WeightedTournament.from_edges(n, edges)
    return DirectedGraph.from_tournament(t)


def min_flood(vid, state, inbox, ctx):
    """Spread the smallest id downstream; superstep 1 announces own id."""
    best = state if inbox is None else min(state, inbox)
    nbrs, _ = ctx.out_edges()
    if best < state:
        for u in nbrs.tolist():
            ctx.send(u, best)
        return best, True
    if ctx.superstep == 1:
        for u in nbrs.tolist():
            ctx.send(u, state)
    return state, True


class TestDirectedGraph:
    def test_adjacency_views(self, sample4):
        g = DirectedGraph.from_tournament(sample4)
        nbr, w = g.out_edges(0)
        assert nbr.tolist() == [1, 2] and w.tolist() == [4, 6]
        nbr, w = g.in_edges(1)
        assert nbr.tolist() == [0, 3] and w.tolist() == [4, 12]

    def test_is_neighbor_either_direction(self, sample4):
        g = DirectedGraph.from_tournament(sample4)
        assert g.is_neighbor(0, 1)
        assert g.is_neighbor(1, 0)  # edge 0 -> 1 makes them adjacent both ways
        t = WeightedTournament.from_edges(3, [(0, 1, 1)])
        g2 = DirectedGraph.from_tournament(t)
        assert not g2.is_neighbor(0, 2)

    def test_zero_in_edges_updates_both_views(self, sample4):
        g = DirectedGraph.from_tournament(sample4)
        zeroed = g.zero_in_edges([1])  # kill 0->1 and 3->1
        assert zeroed == 2
        _, w_in = g.in_edges(1)
        assert w_in.tolist() == [0, 0]
        nbr, w_out = g.out_edges(0)
        assert w_out.tolist()[nbr.tolist().index(1)] == 0
        assert g.positive_edge_count() == 4
        # Already-zero edges are not counted twice.
        assert g.zero_in_edges([1]) == 0


class TestRun:
    def test_empty_graph_halts_after_one_superstep(self):
        g = DirectedGraph.from_tournament(WeightedTournament.from_edges(3, []))
        result = run(g, [10, 11, 12], lambda v, s, i, c: (s, True), min, threads=1)
        assert result.supersteps == 1
        assert result.states == [10, 11, 12]

    def test_min_flood_on_path_takes_five_supersteps(self):
        g = path_graph(5)
        result = run(g, list(range(5)), min_flood, min, threads=1)
        assert result.states == [0, 0, 0, 0, 0]
        assert result.supersteps == 5

    def test_messages_cross_one_barrier_only(self):
        # Two-vertex path: the value moves exactly one hop per superstep.
        g = path_graph(3)
        result = run(g, [0, 5, 9], min_flood, min, threads=1)
        assert result.states == [0, 0, 0]
        assert result.supersteps == 3

    def test_initial_messages_delivered_first(self):
        g = path_graph(2)
        program_calls = []

        def program(vid, state, inbox, ctx):
            program_calls.append((ctx.superstep, vid, inbox))
            return state, True

        run(g, [0, 1], program, min, threads=1, initial_messages={1: 99})
        assert (1, 1, 99) in program_calls

    def test_halted_vertex_reactivated_by_message(self):
        g = path_graph(2)
        seen = []

        def program(vid, state, inbox, ctx):
            seen.append((ctx.superstep, vid))
            if vid == 0 and ctx.superstep == 1:
                ctx.send(1, 42)
            return state, True

        run(g, [0, 0], program, min, threads=1)
        # Vertex 1 halted in superstep 1 but runs again in superstep 2.
        assert (2, 1) in seen and (2, 0) not in seen

    def test_send_to_non_neighbor_raises(self):
        g = path_graph(3)

        def program(vid, state, inbox, ctx):
            if vid == 0:
                ctx.send(2, 1)  # 0 and 2 are not adjacent
            return state, True

        with pytest.raises(ContractViolation, match="non-neighbor"):
            run(g, [0, 1, 2], program, min, threads=1)

    def test_combiner_collapses_inbox(self):
        # Both in-neighbors of vertex 1 in sample4 message it; the program
        # must observe a single combined value.
        t = WeightedTournament.from_edges(3, [(0, 2, 1), (1, 2, 1)])
        g = DirectedGraph.from_tournament(t)
        observed = {}

        def program(vid, state, inbox, ctx):
            if ctx.superstep == 1 and vid != 2:
                ctx.send(2, vid + 10)
            if inbox is not None:
                observed[vid] = inbox
            return state, True

        run(g, [0, 0, 0], program, min, threads=1)
        assert observed == {2: 10}

    def test_quiescence_on_rerun(self):
        g = path_graph(4)
        result = run(g, list(range(4)), min_flood, min, threads=1)
        again = run(g, result.states, lambda v, s, i, c: (s, True), min, threads=1)
        assert again.supersteps == 1
        assert again.states == result.states

    def test_max_supersteps_guard(self):
        t = WeightedTournament.from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
        g = DirectedGraph.from_tournament(t)

        def chatty(vid, state, inbox, ctx):
            # Forward on every activation, so the ring never quiesces.
            nbrs, _ = ctx.out_edges()
            for u in nbrs.tolist():
                ctx.send(u, 0)
            return state, True

        with pytest.raises(ContractViolation, match="exceeded"):
            run(g, [0, 1, 2], chatty, min, threads=1, max_supersteps=5)

    def test_partitions_must_cover(self):
        g = path_graph(3)
        with pytest.raises(ValueError, match="partitions"):
            run(g, [0, 1, 2], min_flood, min, partitions=[[0, 1]])
        with pytest.raises(ValueError, match="partitions"):
            run(g, [0, 1, 2], min_flood, min, partitions=[[0, 1], [1, 2]])

    def test_determinism_across_threads_and_partitions(self):
        rng = np.random.default_rng(5)
        for trial in range(8):
            m = int(rng.integers(3, 25))
            density = float(rng.uniform(0.2, 1.0))
            from beatpath.generators import random_tournament

            t = random_tournament(m, density, 10, trial)
            g = DirectedGraph.from_tournament(t)
            base = run(g, list(range(m)), min_flood, min, threads=1)
            for threads in (2, 4, 8):
                r = run(g, list(range(m)), min_flood, min, threads=threads)
                assert r.states == base.states
                assert r.supersteps == base.supersteps
            for _ in range(3):
                parts = np.array_split(rng.permutation(m), 3)
                r = run(
                    g,
                    list(range(m)),
                    min_flood,
                    min,
                    threads=3,
                    partitions=[p.tolist() for p in parts],
                )
                assert r.states == base.states
                assert r.supersteps == base.supersteps

    def test_trace_rows(self):
        g = path_graph(3)
        trace = []
        run(g, [0, 1, 2], min_flood, min, threads=1, trace=trace)
        assert [row[0] for row in trace] == [1, 2, 3]
        assert all(len(row) == 3 for row in trace)


class TestAggregate:
    def test_count_matching(self):
        states = ["loser", "loser", "unknown"]
        count = aggregate(states, lambda s: int(s == "unknown"), lambda a, b: a + b)
        assert count == 1

    def test_all_loser_zero(self):
        states = ["loser"] * 4
        assert aggregate(states, lambda s: int(s == "unknown"), lambda a, b: a + b) == 0

    def test_max_matches_sequential(self):
        values = [3, 9, 1, 7]
        assert aggregate(values, lambda v: v, max) == max(values)

    def test_empty_returns_sentinel(self):
        assert aggregate([], lambda v: v, max, empty=0) == 0


class TestResolveThreads:
    def test_explicit_wins(self, monkeypatch):
        monkeypatch.setenv("BEATPATH_THREADS", "6")
        assert resolve_threads(3) == 3

    def test_env_var_default(self, monkeypatch):
        monkeypatch.setenv("BEATPATH_THREADS", "6")
        assert resolve_threads(None) == 6

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            resolve_threads(0)
