"""Core types: preference profiles, majority margins, weighted tournaments.

A profile collects voters' weak orders over candidates ``0..m-1``.  Pairwise
majority margins induce a weighted tournament graph: for each candidate pair
at most one directed edge, weighted by the positive margin.  All types here
are immutable after construction and safe to share across threads; edge and
margin storage is numpy-backed so the same types serve both the hand-sized
oracle instances and benchmark graphs with tens of millions of edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Candidate",
    "WeakOrder",
    "PreferenceProfile",
    "MarginMatrix",
    "WeightedTournament",
    "DominanceGraph",
    "majority_margins",
    "build_tournament",
    "dominance_graph",
    "margins_from_tournament",
    "borda_id_order",
    "relabel_tournament",
]


@dataclass(frozen=True)
class Candidate:
    """A candidate: dense integer id plus an opaque external label."""

    id: int
    label: str


@dataclass(frozen=True)
class WeakOrder:
    """A transitive, complete preference order stored as ranked tiers.

    ``tiers[0]`` holds the most-preferred candidates; members of one tier are
    tied.  Tiers must be non-empty and disjoint; completeness over the
    candidate set is checked by :class:`PreferenceProfile`, which knows ``m``.
    """

    tiers: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for tier in self.tiers:
            if not tier:
                raise ValueError("empty tier in weak order")
            for c in tier:
                if c in seen:
                    raise ValueError(f"candidate {c} appears in two tiers")
                seen.add(c)

    @classmethod
    def from_ranking(cls, ranking: Sequence[int]) -> "WeakOrder":
        """Strict linear order, most preferred first."""
        return cls(tuple((int(c),) for c in ranking))

    def candidates(self) -> set[int]:
        return {c for tier in self.tiers for c in tier}

    def positions(self, m: int) -> np.ndarray:
        """Tier index per candidate (lower index = more preferred)."""
        pos = np.full(m, -1, dtype=np.int64)
        for rank, tier in enumerate(self.tiers):
            for c in tier:
                pos[c] = rank
        if (pos < 0).any():
            missing = int(np.flatnonzero(pos < 0)[0])
            raise ValueError(f"weak order does not rank candidate {missing}")
        return pos


class PreferenceProfile:
    """A multiset of weak orders with positive integer voter weights."""

    __slots__ = ("m", "voters", "weights")

    def __init__(
        self,
        m: int,
        voters: Sequence[WeakOrder],
        weights: Sequence[int] | None = None,
    ) -> None:
        if m < 0:
            raise ValueError("candidate count must be non-negative")
        voters = tuple(voters)
        if weights is None:
            weights = (1,) * len(voters)
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(voters):
            raise ValueError("one weight per voter required")
        if any(w <= 0 for w in weights):
            raise ValueError("voter weights must be positive")
        universe = set(range(m))
        for i, order in enumerate(voters):
            if order.candidates() != universe:
                raise ValueError(f"ballot {i} is not complete over 0..{m - 1}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "voters", voters)
        object.__setattr__(self, "weights", weights)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("PreferenceProfile is immutable")

    def __len__(self) -> int:
        return len(self.voters)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PreferenceProfile):
            return NotImplemented
        return (
            self.m == other.m
            and self.voters == other.voters
            and self.weights == other.weights
        )

    def __hash__(self) -> int:
        return hash((self.m, self.voters, self.weights))

    def __repr__(self) -> str:
        return f"PreferenceProfile(m={self.m}, voters={len(self.voters)})"


class MarginMatrix:
    """Full signed majority margins; antisymmetric with zero diagonal."""

    __slots__ = ("mu",)

    def __init__(self, mu: np.ndarray) -> None:
        mu = np.asarray(mu)
        if mu.ndim != 2 or mu.shape[0] != mu.shape[1]:
            raise ValueError("margin matrix must be square")
        if not np.issubdtype(mu.dtype, np.integer):
            raise ValueError("margins must be integers")
        mu = mu.astype(np.int64, copy=True)
        if np.diagonal(mu).any():
            raise ValueError("margin diagonal must be zero")
        if not np.array_equal(mu, -mu.T):
            raise ValueError("margins must be antisymmetric")
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("MarginMatrix is immutable")

    @property
    def m(self) -> int:
        return self.mu.shape[0]

    def __getitem__(self, key: tuple[int, int]) -> int:
        return int(self.mu[key])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MarginMatrix):
            return NotImplemented
        return np.array_equal(self.mu, other.mu)

    def __hash__(self) -> int:
        return hash((self.m, self.mu.tobytes()))

    def __repr__(self) -> str:
        return f"MarginMatrix(m={self.m})"


def _as_edge_arrays(
    m: int,
    src: np.ndarray,
    dst: np.ndarray,
    w: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Validate and canonicalize edge arrays: sorted by (src, dst).

    Endpoints are stored as int32 (ids stay well under 2**31 even at
    benchmark scale) and weights as int64; this halves the footprint of
    multi-ten-million-edge graphs.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    if not (src.shape == dst.shape == w.shape) or src.ndim != 1:
        raise ValueError("edge arrays must be 1-d and of equal length")
    if src.size:
        if src.min() < 0 or src.max() >= m or dst.min() < 0 or dst.max() >= m:
            raise ValueError("edge endpoint out of range")
        if (src == dst).any():
            raise ValueError("self-loops are not allowed")
        order = np.lexsort((dst, src))
        src = src[order].astype(np.int32)
        dst = dst[order].astype(np.int32)
        w = w[order]
        # One edge per unordered pair covers both duplicates and 2-cycles.
        pair_key = np.minimum(src, dst).astype(np.int64) * m + np.maximum(src, dst)
        pair_key.sort()
        if pair_key.size > 1 and (pair_key[1:] == pair_key[:-1]).any():
            raise ValueError("at most one edge per candidate pair is allowed")
    else:
        src = src.astype(np.int32)
        dst = dst.astype(np.int32)
    for arr in (src, dst, w):
        arr.setflags(write=False)
    return src, dst, w


class WeightedTournament:
    """Candidates plus positive-margin edges, at most one per pair.

    Edges are stored as parallel numpy arrays sorted by ``(src, dst)`` so
    instances compare and round-trip deterministically.
    """

    __slots__ = ("m", "src", "dst", "w")

    def __init__(self, m: int, src: np.ndarray, dst: np.ndarray, w: np.ndarray) -> None:
        if m < 0:
            raise ValueError("candidate count must be non-negative")
        src, dst, w = _as_edge_arrays(m, src, dst, w)
        if w.size and w.min() <= 0:
            raise ValueError("tournament weights must be strictly positive")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "w", w)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("WeightedTournament is immutable")

    @classmethod
    def from_edges(
        cls, m: int, edges: Iterable[tuple[int, int, int]]
    ) -> "WeightedTournament":
        rows = list(edges)
        if rows:
            src, dst, w = (np.array(col, dtype=np.int64) for col in zip(*rows))
        else:
            src = dst = w = np.empty(0, dtype=np.int64)
        return cls(m, src, dst, w)

    @property
    def edge_count(self) -> int:
        return int(self.src.size)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for a, b, weight in zip(self.src, self.dst, self.w):
            yield int(a), int(b), int(weight)

    def edge_dict(self) -> dict[tuple[int, int], int]:
        return {(int(a), int(b)): int(weight) for a, b, weight in zip(self.src, self.dst, self.w)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedTournament):
            return NotImplemented
        return (
            self.m == other.m
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.w, other.w)
        )

    def __hash__(self) -> int:
        return hash((self.m, self.src.tobytes(), self.dst.tobytes(), self.w.tobytes()))

    def __repr__(self) -> str:
        return f"WeightedTournament(m={self.m}, edges={self.edge_count})"


class DominanceGraph:
    """Weight-erased view of a tournament: who beats whom."""

    __slots__ = ("m", "src", "dst")

    def __init__(self, m: int, src: np.ndarray, dst: np.ndarray) -> None:
        src, dst, _ = _as_edge_arrays(m, src, dst, np.zeros(len(src), dtype=np.int64))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("DominanceGraph is immutable")

    @property
    def edge_count(self) -> int:
        return int(self.src.size)

    def edges(self) -> Iterator[tuple[int, int]]:
        for a, b in zip(self.src, self.dst):
            yield int(a), int(b)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DominanceGraph):
            return NotImplemented
        return (
            self.m == other.m
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
        )

    def __hash__(self) -> int:
        return hash((self.m, self.src.tobytes(), self.dst.tobytes()))

    def __repr__(self) -> str:
        return f"DominanceGraph(m={self.m}, edges={self.edge_count})"


def majority_margins(profile: PreferenceProfile) -> MarginMatrix:
    """Pairwise majority margins mu(a,b) = (weight for a over b) - (reverse).

    Antisymmetry holds by construction; an empty profile yields all zeros.
    """
    m = profile.m
    mu = np.zeros((m, m), dtype=np.int64)
    for order, weight in zip(profile.voters, profile.weights):
        pos = order.positions(m)
        prefers = (pos[:, None] < pos[None, :]).astype(np.int64)
        mu += weight * (prefers - prefers.T)
    return MarginMatrix(mu)


def build_tournament(margins: MarginMatrix) -> WeightedTournament:
    """Edges (a, b, mu(a,b)) for every strictly positive margin."""
    pos = np.argwhere(margins.mu > 0)
    src = pos[:, 0]
    dst = pos[:, 1]
    w = margins.mu[src, dst]
    return WeightedTournament(margins.m, src, dst, w)


def dominance_graph(t: WeightedTournament) -> DominanceGraph:
    """Erase weights, keep the edge set."""
    return DominanceGraph(t.m, t.src.copy(), t.dst.copy())


def margins_from_tournament(t: WeightedTournament) -> MarginMatrix:
    """Expand edges back to the full matrix; absent pairs have margin 0."""
    mu = np.zeros((t.m, t.m), dtype=np.int64)
    mu[t.src, t.dst] = t.w
    mu[t.dst, t.src] = -t.w
    return MarginMatrix(mu)


def _borda_scores(t: WeightedTournament) -> np.ndarray:
    """Sum of signed margins per candidate (absent pairs contribute 0)."""
    scores = np.zeros(t.m, dtype=np.int64)
    np.add.at(scores, t.src, t.w)
    np.subtract.at(scores, t.dst, t.w)
    return scores


def borda_id_order(t: WeightedTournament) -> tuple[int, ...]:
    """Candidates by descending Borda score, ties by ascending id.

    ``order[k]`` is the original id that receives new id ``k``; the top
    scorer becomes vertex 0.
    """
    scores = _borda_scores(t)
    order = np.lexsort((np.arange(t.m), -scores))
    return tuple(int(c) for c in order)


def relabel_tournament(
    t: WeightedTournament, order: Sequence[int]
) -> WeightedTournament:
    """Apply a relabeling: candidate ``order[k]`` becomes id ``k``."""
    order_arr = np.asarray(order, dtype=np.int64)
    if order_arr.size != t.m or set(order_arr.tolist()) != set(range(t.m)):
        raise ValueError("relabeling must be a permutation of candidate ids")
    new_id = np.empty(t.m, dtype=np.int64)
    new_id[order_arr] = np.arange(t.m)
    if t.edge_count == 0:
        return WeightedTournament(t.m, t.src.copy(), t.dst.copy(), t.w.copy())
    return WeightedTournament(t.m, new_id[t.src], new_id[t.dst], t.w.copy())
