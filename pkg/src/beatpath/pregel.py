"""A generic single-machine vertex-centric bulk-synchronous engine.

Computation proceeds in supersteps: every active vertex (or any vertex with
pending messages) runs the vertex program, which may update its own state,
send values to adjacent vertices, and vote to halt.  Messages sent in
superstep k are combined per destination and delivered at superstep k+1; a
halted vertex is woken by an incoming message.  The engine terminates when
every vertex has halted and no messages are in flight.

Vertex states are partition-owned (contiguous id blocks by default), message
buffers are per-partition and merged at the barrier, and the combiner must be
commutative and associative; together this makes results independent of
thread count and partition assignment.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .core import WeightedTournament

__all__ = [
    "ContractViolation",
    "DirectedGraph",
    "ComputeContext",
    "RunResult",
    "run",
    "aggregate",
    "resolve_threads",
]

THREADS_ENV_VAR = "BEATPATH_THREADS"


class ContractViolation(RuntimeError):
    """A vertex program broke an engine rule (e.g. messaged a non-neighbor)."""


def resolve_threads(threads: int | None) -> int:
    """Explicit argument, else BEATPATH_THREADS, else available cores."""
    if threads is None:
        env = os.environ.get(THREADS_ENV_VAR)
        if env is not None:
            threads = int(env)
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise ValueError("thread count must be at least 1")
    return threads


class DirectedGraph:
    """Adjacency for the engine: flat per-vertex (neighbor, weight) arrays,
    both directions precomputed.  Weights are mutable only through
    :meth:`zero_in_edges`, which keeps the two directional views in sync."""

    __slots__ = (
        "m",
        "_out_ptr",
        "_out_nbr",
        "_out_w",
        "_in_ptr",
        "_in_nbr",
        "_in_w",
        "_in_to_out",
    )

    def __init__(self, m: int, src: np.ndarray, dst: np.ndarray, w: np.ndarray) -> None:
        self.m = m
        src = np.asarray(src, dtype=np.int32)
        dst = np.asarray(dst, dtype=np.int32)
        w = np.asarray(w, dtype=np.int64)
        # Canonical (src, dst) order doubles as the out-CSR; the in-CSR keeps
        # a cross-index so zeroing an edge updates both views.
        order = np.lexsort((dst, src))
        src, dst, w = src[order], dst[order], w[order]
        self._out_ptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=m), out=self._out_ptr[1:])
        self._out_nbr = dst
        self._out_w = w.copy()
        in_order = np.lexsort((src, dst))
        self._in_ptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(np.bincount(dst, minlength=m), out=self._in_ptr[1:])
        self._in_nbr = src[in_order]
        self._in_w = w[in_order]
        self._in_to_out = in_order.astype(np.int64)

    @classmethod
    def from_tournament(cls, t: WeightedTournament) -> "DirectedGraph":
        return cls(t.m, t.src, t.dst, t.w)

    def out_edges(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self._out_ptr[v], self._out_ptr[v + 1]
        return self._out_nbr[lo:hi], self._out_w[lo:hi]

    def in_edges(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self._in_ptr[v], self._in_ptr[v + 1]
        return self._in_nbr[lo:hi], self._in_w[lo:hi]

    def is_neighbor(self, v: int, u: int) -> bool:
        """True if an edge exists between v and u in either direction."""
        for nbr, _ in (self.out_edges(v), self.in_edges(v)):
            pos = np.searchsorted(nbr, u)
            if pos < nbr.size and nbr[pos] == u:
                return True
        return False

    @property
    def edge_count(self) -> int:
        return int(self._out_nbr.size)

    def positive_edge_count(self) -> int:
        return int(np.count_nonzero(self._out_w))

    def zero_in_edges(self, members: Iterable[int]) -> int:
        """Zero every positive edge entering ``members`` from outside.

        Returns the number of edges newly zeroed.  A zero-weight edge
        carries no messages in either direction.
        """
        member_mask = np.zeros(self.m, dtype=bool)
        member_mask[np.fromiter(members, dtype=np.int64)] = True
        zeroed = 0
        for v in np.flatnonzero(member_mask):
            lo, hi = self._in_ptr[v], self._in_ptr[v + 1]
            crossing = ~member_mask[self._in_nbr[lo:hi]] & (self._in_w[lo:hi] > 0)
            idx = lo + np.flatnonzero(crossing)
            if idx.size:
                self._in_w[idx] = 0
                self._out_w[self._in_to_out[idx]] = 0
                zeroed += int(idx.size)
        return zeroed


class ComputeContext:
    """Per-partition view handed to the vertex program."""

    __slots__ = ("superstep", "_graph", "_vid", "_outbox", "_combiner", "_sent")

    def __init__(self, graph: DirectedGraph, combiner: Callable[[Any, Any], Any]) -> None:
        self.superstep = 0
        self._graph = graph
        self._vid = -1
        self._outbox: dict[int, Any] = {}
        self._combiner = combiner
        self._sent = 0

    def out_edges(self) -> tuple[np.ndarray, np.ndarray]:
        return self._graph.out_edges(self._vid)

    def in_edges(self) -> tuple[np.ndarray, np.ndarray]:
        return self._graph.in_edges(self._vid)

    def send(self, dst: int, value: Any) -> None:
        """Queue a message for delivery at the next superstep.

        Only adjacent vertices may be addressed; combining happens eagerly.
        """
        if not self._graph.is_neighbor(self._vid, dst):
            raise ContractViolation(
                f"vertex {self._vid} attempted to message non-neighbor {dst}"
            )
        self._sent += 1
        if dst in self._outbox:
            self._outbox[dst] = self._combiner(self._outbox[dst], value)
        else:
            self._outbox[dst] = value


@dataclass
class RunResult:
    states: list[Any]
    supersteps: int
    messages_sent: int


VertexProgram = Callable[[int, Any, Any, ComputeContext], tuple[Any, bool]]


def _default_partitions(m: int, threads: int) -> list[np.ndarray]:
    bounds = np.linspace(0, m, threads + 1).astype(np.int64)
    return [np.arange(bounds[i], bounds[i + 1]) for i in range(threads)]


def run(
    graph: DirectedGraph,
    initial_states: Sequence[Any],
    vertex_program: VertexProgram,
    combiner: Callable[[Any, Any], Any],
    *,
    threads: int | None = None,
    initial_messages: dict[int, Any] | None = None,
    partitions: Sequence[Sequence[int]] | None = None,
    trace: list[tuple[int, int, int]] | None = None,
    max_supersteps: int | None = None,
) -> RunResult:
    """Execute the vertex program to quiescence and return final states.

    ``vertex_program(vid, state, inbox, ctx) -> (new_state, vote_to_halt)``
    must be a pure function of its arguments; ``inbox`` is the combined
    message (or None).  ``trace`` receives one (superstep, vertices_run,
    messages_sent) row per superstep when provided.
    """
    threads = resolve_threads(threads)
    m = graph.m
    states = list(initial_states)
    if len(states) != m:
        raise ValueError("one initial state per vertex required")
    if partitions is None:
        parts = _default_partitions(m, threads)
    else:
        parts = [np.asarray(p, dtype=np.int64) for p in partitions]
        flat = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
        if not np.array_equal(np.sort(flat), np.arange(m)):
            raise ValueError("partitions must cover every vertex exactly once")

    active = np.ones(m, dtype=bool)
    inbox: dict[int, Any] = dict(initial_messages or {})
    supersteps = 0
    messages_total = 0
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while inbox or active.any():
            supersteps += 1
            if max_supersteps is not None and supersteps > max_supersteps:
                raise ContractViolation(f"exceeded {max_supersteps} supersteps")

            def step(part: np.ndarray) -> tuple[dict[int, Any], int, int]:
                ctx = ComputeContext(graph, combiner)
                ctx.superstep = supersteps
                ran = 0
                for vid_ in part:
                    vid = int(vid_)
                    if not active[vid] and vid not in inbox:
                        continue
                    ctx._vid = vid
                    new_state, halt = vertex_program(vid, states[vid], inbox.get(vid), ctx)
                    states[vid] = new_state
                    active[vid] = not halt
                    ran += 1
                return ctx._outbox, ctx._sent, ran

            if executor is None:
                results = [step(part) for part in parts]
            else:
                results = list(executor.map(step, parts))

            next_inbox: dict[int, Any] = {}
            sent = 0
            ran_total = 0
            for outbox, n_sent, n_ran in results:
                sent += n_sent
                ran_total += n_ran
                for dst, value in outbox.items():
                    if dst in next_inbox:
                        next_inbox[dst] = combiner(next_inbox[dst], value)
                    else:
                        next_inbox[dst] = value
            messages_total += sent
            if trace is not None:
                trace.append((supersteps, ran_total, sent))
            inbox = next_inbox
    finally:
        if executor is not None:
            executor.shutdown(wait=True)
    return RunResult(states, supersteps, messages_total)


def aggregate(
    states: Sequence[Any],
    value: Callable[[Any], Any],
    combine: Callable[[Any, Any], Any],
    empty: Any = None,
) -> Any:
    """Deterministic barrier-level reduction over vertex states.

    ``combine`` must be commutative and associative, so any grouping of the
    per-partition partial results yields the same summary.
    """
    acc = empty
    first = True
    for state in states:
        v = value(state)
        if first:
            acc = v
            first = False
        else:
            acc = combine(acc, v)
    return acc
