"""Parallel computation of widest-path winners on a weighted tournament.

Every candidate is a vertex.  The driver repeats a four-phase round until no
vertex is undecided:

1. preprocess: undecided vertices label themselves as path sources/sinks and
   seed messages; decided vertices become relays.
2. propagate: a bulk-synchronous fixpoint.  Each vertex tracks the least
   undecided vertex that reaches it (``s``, forward along edges) and that it
   reaches (``t``, backward), together with the widest such path widths
   (``ws``/``wt``).  On improvement it re-broadcasts with the path width
   clamped by the edge weight.
3. postprocess: compares the source/sink labels to finalize at least one
   vertex per round; asymmetric labels or width comparisons mark losers,
   and a vertex that heads its own strongly connected component wins.
4. prune (optional): once a component is known to contain no winner, edges
   entering it are zeroed so later rounds skip it entirely.

Vertices never learn global state; every decision uses only per-vertex
fields and messages from adjacent vertices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .core import WeightedTournament, borda_id_order, relabel_tournament
from .pregel import ComputeContext, DirectedGraph, resolve_threads
from . import pregel

__all__ = [
    "INF",
    "Status",
    "SchulzeVertexState",
    "PropMessage",
    "combine_messages",
    "initialise",
    "preprocess",
    "propagate",
    "postprocess",
    "PostprocessOutcome",
    "prune_dominated",
    "SchulzeRunResult",
    "schulze_run",
    "schulze_winners",
    "top_k",
]

# Larger than any real width or id, and min(INF, w) == w for all edge
# weights, so messages never carry it and one sentinel serves both fields.
INF = 2**62

DENSE_EDGE_THRESHOLD = 250_000


class Status(enum.Enum):
    UNKNOWN = "unknown"
    WINNER = "winner"
    LOSER = "loser"


@dataclass(frozen=True)
class SchulzeVertexState:
    """Per-candidate state.

    s/ws: least undecided vertex with a path to this one, and the widest
    width of such a path.  t/wt: the mirror along outgoing edges.  scc is
    the component label assigned during postprocessing (None if none).
    """

    id: int
    status: Status = Status.UNKNOWN
    s: int = INF
    ws: int = 0
    t: int = INF
    wt: int = 0
    scc: int | None = None


@dataclass(frozen=True)
class PropMessage:
    """A propagation message: candidate source/sink ``v`` with path width
    ``w``, travelling forward (along edges) or backward (against them)."""

    direction: str
    v: int
    w: int

    def as_value(self) -> tuple[tuple[int, int] | None, tuple[int, int] | None]:
        if self.direction == "forward":
            return ((self.v, self.w), None)
        if self.direction == "backward":
            return (None, (self.v, self.w))
        raise ValueError(f"unknown direction {self.direction!r}")


MessageValue = tuple[tuple[int, int] | None, tuple[int, int] | None]


def _merge_direction(
    a: tuple[int, int] | None, b: tuple[int, int] | None
) -> tuple[int, int] | None:
    if a is None:
        return b
    if b is None:
        return a
    if a[0] != b[0]:
        return a if a[0] < b[0] else b
    return a if a[1] >= b[1] else b


def combine_messages(x: MessageValue, y: MessageValue) -> MessageValue:
    """Commutative, associative combiner: per direction keep the least
    vertex id, breaking ties by the widest width."""
    return (_merge_direction(x[0], y[0]), _merge_direction(x[1], y[1]))


def initialise(t: WeightedTournament) -> list[SchulzeVertexState]:
    """Mark as losers all candidates whose strongest incoming defeat exceeds
    their strongest outgoing one; such a candidate can never be a winner."""
    in_max = np.zeros(t.m, dtype=np.int64)
    out_max = np.zeros(t.m, dtype=np.int64)
    np.maximum.at(in_max, t.dst, t.w)
    np.maximum.at(out_max, t.src, t.w)
    return [
        SchulzeVertexState(
            id=v,
            status=Status.LOSER if in_max[v] > out_max[v] else Status.UNKNOWN,
        )
        for v in range(t.m)
    ]


def preprocess(
    states: Sequence[SchulzeVertexState], graph: DirectedGraph
) -> tuple[list[SchulzeVertexState], dict[int, MessageValue]]:
    """Reset per-round fields and seed the propagation.

    Undecided vertices label themselves (s = t = id, widths unbounded) and
    message every neighbor; decided vertices become pure relays.
    """
    new_states: list[SchulzeVertexState] = []
    messages: dict[int, MessageValue] = {}

    def deliver(dst: int, value: MessageValue) -> None:
        if dst in messages:
            messages[dst] = combine_messages(messages[dst], value)
        else:
            messages[dst] = value

    for st in states:
        if st.status is Status.UNKNOWN:
            new_states.append(replace(st, s=st.id, ws=INF, t=st.id, wt=INF, scc=None))
            nbr, w = graph.out_edges(st.id)
            for u, we in zip(nbr.tolist(), w.tolist()):
                if we > 0:
                    deliver(u, ((st.id, we), None))
            nbr, w = graph.in_edges(st.id)
            for u, we in zip(nbr.tolist(), w.tolist()):
                if we > 0:
                    deliver(u, (None, (st.id, we)))
        else:
            new_states.append(replace(st, s=INF, ws=0, t=INF, wt=0, scc=None))
    return new_states, messages


def _prop_program(
    vid: int,
    st: SchulzeVertexState,
    inbox: MessageValue | None,
    ctx: ComputeContext,
) -> tuple[SchulzeVertexState, bool]:
    if inbox is None:
        return st, True
    fwd, bwd = inbox
    s, ws, t, wt = st.s, st.ws, st.t, st.wt
    if fwd is not None:
        v, w = fwd
        if v < s or (v == s and w > ws):
            s, ws = v, w
    if bwd is not None:
        v, w = bwd
        if v < t or (v == t and w > wt):
            t, wt = v, w
    changed_f = (s, ws) != (st.s, st.ws)
    changed_b = (t, wt) != (st.t, st.wt)
    if not (changed_f or changed_b):
        return st, True
    if changed_f:
        nbr, wgt = ctx.out_edges()
        for u, we in zip(nbr.tolist(), wgt.tolist()):
            if we > 0:
                ctx.send(u, ((s, min(ws, we)), None))
    if changed_b:
        nbr, wgt = ctx.in_edges()
        for u, we in zip(nbr.tolist(), wgt.tolist()):
            if we > 0:
                ctx.send(u, (None, (t, min(wt, we))))
    return replace(st, s=s, ws=ws, t=t, wt=wt), True


def propagate(
    graph: DirectedGraph,
    states: Sequence[SchulzeVertexState],
    messages: dict[int, MessageValue],
    *,
    threads: int | None = None,
    partitions: Sequence[Sequence[int]] | None = None,
    trace: list[tuple[int, int, int]] | None = None,
) -> tuple[list[SchulzeVertexState], int]:
    """Run the label propagation to its fixpoint; returns (states, supersteps)."""
    result = pregel.run(
        graph,
        states,
        _prop_program,
        combine_messages,
        threads=threads,
        initial_messages=messages,
        partitions=partitions,
        trace=trace,
        max_supersteps=4 * graph.m + 4,
    )
    return result.states, result.supersteps


@dataclass
class PostprocessOutcome:
    finalized: int
    winners: list[int]
    losers: list[int]
    dead_components: list[int]


def postprocess(
    states: list[SchulzeVertexState], graph: DirectedGraph
) -> PostprocessOutcome:
    """Decide fates from the propagation fixpoint.

    Three sub-phases with a barrier between each: (1) label comparisons at
    each vertex mark losers and assign component labels; (2) one message
    exchange compares labels across edges, killing whole components that a
    lesser component reaches; (3) an undecided vertex heading its own
    component becomes a winner.  Loser marks are collected first and applied
    together so the order of vertex execution cannot matter.
    """
    m = graph.m
    loser_requests: set[int] = set()

    # Phase 1: per-vertex label comparison.
    for st in states:
        if st.s < st.t:
            loser_requests.add(st.id)
        elif st.s > st.t:
            loser_requests.add(st.t)
        elif st.s != INF:
            states[st.id] = replace(st, scc=st.s)
            if st.ws > st.wt:
                loser_requests.add(st.id)
            elif st.ws < st.wt:
                loser_requests.add(st.s)

    # Phase 2: one exchange across edges; a label mismatch means the
    # receiver's whole component is reachable from a lesser source.
    dead_components: set[int] = set()
    for c in range(m):
        nbr, w = graph.in_edges(c)
        sc = states[c]
        for u, we in zip(nbr.tolist(), w.tolist()):
            if we <= 0:
                continue
            su = states[u]
            if (su.s, su.t) != (sc.s, sc.t):
                if sc.s == sc.t:
                    if sc.s != INF:
                        dead_components.add(sc.s)
                else:
                    loser_requests.add(c)
                break

    for label in dead_components:
        for st in states:
            if st.scc == label:
                loser_requests.add(st.id)

    losers: list[int] = []
    for vid in sorted(loser_requests):
        if states[vid].status is Status.UNKNOWN:
            states[vid] = replace(states[vid], status=Status.LOSER)
            losers.append(vid)

    # Phase 3: surviving self-headed components win.
    winners: list[int] = []
    for st in states:
        if st.status is Status.UNKNOWN and st.scc == st.id:
            states[st.id] = replace(st, status=Status.WINNER)
            winners.append(st.id)

    return PostprocessOutcome(
        finalized=len(winners) + len(losers),
        winners=winners,
        losers=losers,
        dead_components=sorted(dead_components),
    )


def prune_dominated(
    states: Sequence[SchulzeVertexState],
    graph: DirectedGraph,
    dead_components: Sequence[int],
) -> int:
    """Zero edges entering components ruled out this round; they can no
    longer influence any undecided vertex.  Returns edges zeroed."""
    dead = set(dead_components)
    members = [st.id for st in states if st.scc in dead]
    if not members:
        return 0
    return graph.zero_in_edges(members)


@dataclass
class SchulzeRunResult:
    """Outcome of a full run, reported in original candidate ids."""

    winners: frozenset[int]
    iterations: int
    supersteps: int
    undecided_after_preprocessing: int
    finalized_per_round: tuple[int, ...]
    pruned_edges: int
    engine: str
    final_states: list[SchulzeVertexState]
    id_order: tuple[int, ...]


def _run_generic(
    t: WeightedTournament,
    threads: int,
    prune: bool,
    partitions: Sequence[Sequence[int]] | None,
    trace: list[tuple[int, int, int]] | None,
) -> tuple[list[SchulzeVertexState], int, int, int, list[int], int]:
    graph = DirectedGraph.from_tournament(t)
    states = initialise(t)
    undecided = sum(1 for st in states if st.status is Status.UNKNOWN)
    iterations = 0
    supersteps = 0
    pruned = 0
    finalized: list[int] = []
    while any(st.status is Status.UNKNOWN for st in states):
        iterations += 1
        if iterations > t.m:
            raise RuntimeError("round count exceeded the candidate count")
        states, messages = preprocess(states, graph)
        states, ss = propagate(
            graph, states, messages, threads=threads, partitions=partitions, trace=trace
        )
        supersteps += ss
        outcome = postprocess(states, graph)
        if outcome.finalized < 1:
            raise RuntimeError("a round finalized no vertex")
        finalized.append(outcome.finalized)
        if prune and outcome.dead_components:
            pruned += prune_dominated(states, graph, outcome.dead_components)
    return states, iterations, supersteps, undecided, finalized, pruned


def schulze_run(
    t: WeightedTournament,
    threads: int | None = None,
    *,
    engine: str = "auto",
    prune: bool = True,
    relabel: bool = True,
    partitions: Sequence[Sequence[int]] | None = None,
    trace: list[tuple[int, int, int]] | None = None,
) -> SchulzeRunResult:
    """Compute the winner set of a weighted tournament.

    ``engine`` selects the vertex-program implementation: "generic" runs the
    message-passing engine one vertex at a time, "dense" runs the same
    algorithm over columnar arrays with compiled kernels, and "auto" picks
    by instance size.  Both produce identical results; ``threads`` and
    ``partitions`` never affect the output.

    ``relabel`` renumbers candidates by descending net edge weight first,
    which tightens the round bound on typical instances; results are always
    reported in original ids.
    """
    if t.m == 0:
        raise ValueError("tournament has no candidates")
    threads = resolve_threads(threads)
    if engine not in ("auto", "generic", "dense"):
        raise ValueError(f"unknown engine {engine!r}")
    if relabel:
        order = borda_id_order(t)
        t_run = relabel_tournament(t, order)
    else:
        order = tuple(range(t.m))
        t_run = t

    use_dense = engine == "dense" or (
        engine == "auto" and t.edge_count >= DENSE_EDGE_THRESHOLD
    )
    if use_dense:
        from . import _dense

        if partitions is not None:
            raise ValueError("explicit partitions require the generic engine")
        states, iterations, supersteps, undecided, finalized, pruned = _dense.dense_run(
            t_run, threads=threads, prune=prune, trace=trace
        )
        engine_used = "dense"
    else:
        states, iterations, supersteps, undecided, finalized, pruned = _run_generic(
            t_run, threads, prune, partitions, trace
        )
        engine_used = "generic"

    winners = frozenset(order[st.id] for st in states if st.status is Status.WINNER)
    return SchulzeRunResult(
        winners=winners,
        iterations=iterations,
        supersteps=supersteps,
        undecided_after_preprocessing=undecided,
        finalized_per_round=tuple(finalized),
        pruned_edges=pruned,
        engine=engine_used,
        final_states=states,
        id_order=order,
    )


def schulze_winners(
    t: WeightedTournament, threads: int | None = None, **kwargs
) -> frozenset[int]:
    return schulze_run(t, threads, **kwargs).winners


def top_k(
    t: WeightedTournament, k: int, threads: int | None = None, **kwargs
) -> list[frozenset[int]]:
    """Ranked prefix: compute winners, remove them, recompute, until at
    least k candidates have been emitted or none remain.  Each entry is one
    winner set (ties stay together, so the last set may overshoot k)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    alive = np.arange(t.m, dtype=np.int64)
    src, dst, w = t.src.astype(np.int64), t.dst.astype(np.int64), t.w
    tiers: list[frozenset[int]] = []
    emitted = 0
    while emitted < k and alive.size:
        sub = WeightedTournament(int(alive.size), src, dst, w)
        winners_sub = schulze_run(sub, threads, **kwargs).winners
        tiers.append(frozenset(int(alive[i]) for i in winners_sub))
        emitted += len(winners_sub)
        keep = np.ones(alive.size, dtype=bool)
        keep[list(winners_sub)] = False
        remap = np.full(alive.size, -1, dtype=np.int64)
        remap[keep] = np.arange(int(keep.sum()))
        alive = alive[keep]
        edge_keep = keep[src] & keep[dst]
        src, dst, w = remap[src[edge_keep]], remap[dst[edge_keep]], w[edge_keep]
    return tiers
