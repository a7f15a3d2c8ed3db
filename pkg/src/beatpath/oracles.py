"""Sequential reference implementations of the voting-theoretic ground truth.

Everything here is deliberately simple and single-threaded: max-min
Floyd-Warshall widest paths, Schulze winners/ranking read off the width
matrix, width-threshold reachability, ranked pairs with an explicit
tie-break order, the Schwartz set via strongly connected components, and
greedy edge-maximal acyclic subgraphs.  The parallel engine is validated
against these functions, so they must not share code with it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import MarginMatrix, WeakOrder, WeightedTournament, dominance_graph

__all__ = [
    "WidestPathMatrix",
    "TieBreakOrder",
    "EmasInstance",
    "RankedPairsResult",
    "widest_paths",
    "wp_geq",
    "wp_gt",
    "schulze_winners_seq",
    "schulze_ranking",
    "ranked_pairs",
    "schwartz_set",
    "emas",
]


class WidestPathMatrix:
    """Pairwise widest-path widths; 0 encodes "no path", diagonal unused."""

    __slots__ = ("p",)

    def __init__(self, p: np.ndarray) -> None:
        p = np.asarray(p, dtype=np.int64).copy()
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("width matrix must be square")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("WidestPathMatrix is immutable")

    @property
    def m(self) -> int:
        return self.p.shape[0]

    def __getitem__(self, key: tuple[int, int]) -> int:
        return int(self.p[key])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WidestPathMatrix):
            return NotImplemented
        return np.array_equal(self.p, other.p)

    def __repr__(self) -> str:
        return f"WidestPathMatrix(m={self.m})"


@dataclass(frozen=True)
class TieBreakOrder:
    """A fixed total order over candidates; ``order[0]`` wins every tie."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("tie-break order must be a permutation of 0..m-1")

    @classmethod
    def identity(cls, m: int) -> "TieBreakOrder":
        return cls(tuple(range(m)))

    def ranks(self) -> list[int]:
        rank = [0] * len(self.order)
        for r, c in enumerate(self.order):
            rank[c] = r
        return rank


@dataclass(frozen=True)
class EmasInstance:
    """A digraph with a total edge order and one designated edge.

    Clean instances have no self-loops and no 2-cycles; raw digraphs are
    brought into this shape by ``generators.emas_from_digraph``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    f_index: int

    def __post_init__(self) -> None:
        if not 0 <= self.f_index < len(self.edges):
            raise ValueError("designated edge must be one of the listed edges")
        seen: set[tuple[int, int]] = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) endpoint out of range")
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) not allowed")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            if (v, u) in seen:
                raise ValueError(f"2-cycle between {u} and {v} not allowed")
            seen.add((u, v))

    @property
    def f(self) -> tuple[int, int]:
        return self.edges[self.f_index]


@dataclass(frozen=True)
class RankedPairsResult:
    """Final ranking, its top element, and the keep/omit decision trace."""

    ranking: tuple[int, ...]
    winner: int
    trace: tuple[tuple[int, int, int, bool], ...]  # (from, to, margin, kept)


def widest_paths(t: WeightedTournament) -> WidestPathMatrix:
    """Max-min Floyd-Warshall: p(a,b) = max over paths of the min edge weight."""
    m = t.m
    p = np.zeros((m, m), dtype=np.int64)
    p[t.src, t.dst] = t.w
    for k in range(m):
        np.maximum(p, np.minimum(p[:, k, None], p[None, k, :]), out=p)
    np.fill_diagonal(p, 0)
    return WidestPathMatrix(p)


def _adjacency(m: int, src: Iterable[int], dst: Iterable[int]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(m)]
    for a, b in zip(src, dst):
        adj[int(a)].append(int(b))
    return adj


def _reachable(adj: Sequence[Sequence[int]], start: int, goal: int) -> bool:
    if start == goal:
        return True
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v == goal:
                return True
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return False


def _thresholded(t: WeightedTournament, s: int, d: int, keep: np.ndarray) -> bool:
    if not 0 <= s < t.m or not 0 <= d < t.m:
        raise ValueError("source or destination out of range")
    if s == d:
        raise ValueError("source and destination must differ")
    adj = _adjacency(t.m, t.src[keep], t.dst[keep])
    return _reachable(adj, s, d)


def wp_geq(t: WeightedTournament, s: int, d: int, w: int) -> bool:
    """Is there a path s -> d of width at least w?

    Decided as plain reachability over the subgraph of edges with weight
    >= w, independently of the width matrix.
    """
    return _thresholded(t, s, d, t.w >= w)


def wp_gt(t: WeightedTournament, s: int, d: int, w: int) -> bool:
    """Is there a path s -> d of width strictly greater than w?"""
    return _thresholded(t, s, d, t.w > w)


def schulze_winners_seq(t: WeightedTournament) -> set[int]:
    """Candidates a with no b such that p(b,a) > p(a,b)."""
    p = widest_paths(t).p
    beaten = (p > p.T).any(axis=0)
    return {int(a) for a in np.flatnonzero(~beaten)}


def schulze_ranking(t: WeightedTournament) -> WeakOrder:
    """The relation R = {(a,b) : p(a,b) >= p(b,a)} as ranked tiers.

    R is complete by construction; transitivity is checked, not assumed,
    and a violation raises.  The top tier equals the Schulze winners.
    """
    p = widest_paths(t).p
    r = p >= p.T
    np.fill_diagonal(r, True)
    closure_gap = (r @ r) & ~r
    if closure_gap.any():
        a, b = np.argwhere(closure_gap)[0]
        raise ValueError(f"Schulze relation is not transitive at ({a},{b})")
    dominated_counts = r.sum(axis=1)
    tiers: list[tuple[int, ...]] = []
    for count in sorted(set(dominated_counts.tolist()), reverse=True):
        tiers.append(tuple(int(c) for c in np.flatnonzero(dominated_counts == count)))
    return WeakOrder(tuple(tiers))


def ranked_pairs(margins: MarginMatrix, tb: TieBreakOrder) -> RankedPairsResult:
    """Lock pairs by descending margin, skipping any that closes a cycle.

    All ordered pairs with margin >= 0 are considered; equal margins are
    ordered by the tie-break ranks of (from, to).  The kept relation is a
    DAG whose transitive closure is total, so peeling unique sources yields
    the final linear ranking.
    """
    m = margins.m
    if len(tb.order) != m:
        raise ValueError("tie-break order size must match candidate count")
    rank = tb.ranks()
    mu = margins.mu
    pairs = [(a, b) for a in range(m) for b in range(m) if a != b and mu[a, b] >= 0]
    pairs.sort(key=lambda ab: (-int(mu[ab[0], ab[1]]), rank[ab[0]], rank[ab[1]]))

    kept_adj: list[list[int]] = [[] for _ in range(m)]
    kept_in: list[int] = [0] * m
    trace: list[tuple[int, int, int, bool]] = []
    for a, b in pairs:
        keep = not _reachable(kept_adj, b, a)
        if keep:
            kept_adj[a].append(b)
            kept_in[b] += 1
        trace.append((a, b, int(mu[a, b]), keep))

    ranking: list[int] = []
    remaining = set(range(m))
    in_deg = kept_in[:]
    while remaining:
        sources = [c for c in remaining if in_deg[c] == 0]
        if len(sources) != 1:
            raise ValueError("kept relation does not induce a unique ranking")
        top = sources[0]
        ranking.append(top)
        remaining.discard(top)
        for b in kept_adj[top]:
            in_deg[b] -= 1
    return RankedPairsResult(tuple(ranking), ranking[0], tuple(trace))


def _strongly_connected_components(m: int, adj: Sequence[Sequence[int]]) -> list[int]:
    """Iterative Tarjan; returns a component id per vertex."""
    index = [-1] * m
    lowlink = [0] * m
    on_stack = [False] * m
    comp = [-1] * m
    stack: list[int] = []
    next_index = 0
    n_comps = 0
    for root in range(m):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, child_i = work[-1]
            if child_i == 0:
                index[v] = lowlink[v] = next_index
                next_index += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            neighbors = adj[v]
            while child_i < len(neighbors):
                u = neighbors[child_i]
                child_i += 1
                if index[u] == -1:
                    work[-1] = (v, child_i)
                    work.append((u, 0))
                    advanced = True
                    break
                if on_stack[u]:
                    lowlink[v] = min(lowlink[v], index[u])
            if advanced:
                continue
            work.pop()
            if lowlink[v] == index[v]:
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp[u] = n_comps
                    if u == v:
                        break
                n_comps += 1
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return comp


def schwartz_set(t: WeightedTournament) -> set[int]:
    """Union of strongly connected components with no incoming edge."""
    dom = dominance_graph(t)
    adj = _adjacency(dom.m, dom.src, dom.dst)
    comp = _strongly_connected_components(dom.m, adj)
    dominated = set()
    for a, b in dom.edges():
        if comp[a] != comp[b]:
            dominated.add(comp[b])
    return {c for c in range(t.m) if comp[c] not in dominated}


def emas(inst: EmasInstance) -> tuple[tuple[tuple[int, int], ...], bool]:
    """Greedy edge-maximal acyclic subgraph in the instance's edge order.

    Returns the kept edges and whether the designated edge was kept.
    """
    kept_adj: list[list[int]] = [[] for _ in range(inst.n)]
    kept: list[tuple[int, int]] = []
    f_kept = False
    for i, (u, v) in enumerate(inst.edges):
        if not _reachable(kept_adj, v, u):
            kept_adj[u].append(v)
            kept.append((u, v))
            if i == inst.f_index:
                f_kept = True
    return tuple(kept), f_kept
