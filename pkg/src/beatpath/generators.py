"""Synthetic instance generation and the two hardness-reduction gadgets.

McGarvey profiles realize a prescribed even-weight tournament with the
minimum Σ μ(e) linear ballots; random tournaments/profiles feed the property
suites and the benchmark harness; ``reduce_reachability`` and
``reduce_emas`` build the constructions that tie Schulze winner membership
to graph reachability and ranked-pairs winner membership to greedy acyclic
subgraph membership.  Everything is a pure function of its arguments and
seed.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import MarginMatrix, PreferenceProfile, WeakOrder, WeightedTournament
from .oracles import EmasInstance, TieBreakOrder

__all__ = [
    "mcgarvey_profile",
    "random_tournament",
    "random_profile",
    "random_digraph",
    "reduce_reachability",
    "emas_from_digraph",
    "random_emas_instance",
    "reduce_emas",
]

# Upper bound on pairs drawn per RNG chunk; fixed so that a given seed
# yields the same tournament regardless of the host.
_PAIRS_PER_CHUNK = 1 << 22


def mcgarvey_profile(t: WeightedTournament) -> PreferenceProfile:
    """A profile of exactly Σ μ(e) linear orders whose margins rebuild ``t``.

    Per edge (a, b) with weight w, emit w/2 ballot pairs: ``a > b > rest``
    (rest ascending) and ``rest-descending > a > b``.  The pair agrees on
    a > b and cancels on every other comparison.
    """
    m = t.m
    voters: list[WeakOrder] = []
    for a, b, w in t.edges():
        if w % 2 != 0:
            raise ValueError(f"edge ({a},{b}) has odd weight {w}")
        rest = [c for c in range(m) if c != a and c != b]
        first = WeakOrder.from_ranking([a, b] + rest)
        second = WeakOrder.from_ranking(rest[::-1] + [a, b])
        voters.extend([first, second] * (w // 2))
    return PreferenceProfile(m, voters)


def random_tournament(
    m: int, density: float, max_even_weight: int, seed: int
) -> WeightedTournament:
    """Random tournament: each pair gets an edge with probability ``density``,
    uniform direction, uniform even weight in [2, max_even_weight]."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if not 0 < density <= 1:
        raise ValueError("density must be in (0, 1]")
    if max_even_weight < 2 or max_even_weight % 2 != 0:
        raise ValueError("max_even_weight must be an even integer >= 2")
    rng = np.random.default_rng(seed)
    srcs: list[np.ndarray] = []
    dsts: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    row = 0
    while row < m:
        # Group rows so each chunk holds a bounded number of pairs.
        row_end = row
        pairs = 0
        while row_end < m and (pairs == 0 or pairs + (m - 1 - row_end) <= _PAIRS_PER_CHUNK):
            pairs += m - 1 - row_end
            row_end += 1
        if pairs:
            i = np.repeat(np.arange(row, row_end, dtype=np.int32),
                          np.arange(m - 1 - row, m - 1 - row_end, -1, dtype=np.int64))
            j = np.concatenate(
                [np.arange(r + 1, m, dtype=np.int32) for r in range(row, row_end)]
            )
            present = rng.random(pairs) < density
            forward = rng.random(pairs) < 0.5
            w = 2 * rng.integers(1, max_even_weight // 2, size=pairs,
                                 endpoint=True, dtype=np.int64)
            i, j, forward, w = i[present], j[present], forward[present], w[present]
            srcs.append(np.where(forward, i, j))
            dsts.append(np.where(forward, j, i))
            weights.append(w)
        row = row_end
    if not srcs:
        return WeightedTournament.from_edges(m, [])
    return WeightedTournament(
        m, np.concatenate(srcs), np.concatenate(dsts), np.concatenate(weights)
    )


def random_profile(m: int, n: int, seed: int) -> PreferenceProfile:
    """n uniform random linear orders over m candidates (impartial culture)."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be at least 1")
    rng = np.random.default_rng(seed)
    voters = [WeakOrder.from_ranking(rng.permutation(m).tolist()) for _ in range(n)]
    return PreferenceProfile(m, voters)


def random_digraph(
    n: int, density: float, seed: int
) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Random simple digraph: every ordered pair (u != v) independently
    present with probability ``density``.  2-cycles are allowed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 <= density <= 1:
        raise ValueError("density must be in [0, 1]")
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < density
    np.fill_diagonal(mask, False)
    edges = tuple((int(u), int(v)) for u, v in np.argwhere(mask))
    return n, edges


def reduce_reachability(
    n: int, edges: Sequence[tuple[int, int]], a: int, b: int
) -> WeightedTournament:
    """Reachability gadget: ``a`` is the unique Schulze winner of the output
    iff the input digraph has a path a -> b.

    Construction: drop in-edges of a and out-edges of b; break each
    remaining symmetric pair by routing the higher-source edge through a
    fresh midpoint; give b a two-hop route (b, r_u), (r_u, u) to every other
    vertex.  Every edge has weight 4 except (r_a, a) with weight 2, so a's
    only incoming width is 2 while a path a -> b yields width-4 routes from
    a to everything.
    """
    if not (0 <= a < n and 0 <= b < n):
        raise ValueError("a and b must be vertices of the digraph")
    if a == b:
        raise ValueError("a and b must differ")
    base: set[tuple[int, int]] = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) endpoint out of range")
        if u != v and v != a and u != b:
            base.add((u, v))

    out_edges: list[tuple[int, int, int]] = []
    next_id = n
    for u, v in sorted(base):
        if (v, u) in base and u > v:
            mid = next_id
            next_id += 1
            out_edges.append((u, mid, 4))
            out_edges.append((mid, v, 4))
        else:
            out_edges.append((u, v, 4))

    for u in range(next_id):
        if u == b:
            continue
        r_u = next_id + u if u < b else next_id + u - 1
        out_edges.append((b, r_u, 4))
        out_edges.append((r_u, u, 2 if u == a else 4))
    total = next_id + next_id - 1
    return WeightedTournament.from_edges(total, out_edges)


def emas_from_digraph(
    n: int, edges: Sequence[tuple[int, int]], f_index: int
) -> EmasInstance:
    """Clean up a raw ordered digraph into a valid EMAS instance.

    The later edge of each 2-cycle is subdivided through a fresh midpoint:
    edge (u, v) becomes (u, z) immediately followed by (z, v).  The first
    piece can never close a cycle at its turn, and the second piece closes
    one exactly when the original would have, so greedy acyclic-subgraph
    membership is preserved.  Self-loops take two midpoints (one would just
    re-create a 2-cycle); their final piece is always rejected, like the
    loop itself.  If the designated edge is subdivided, its last piece
    becomes the designated edge.
    """
    if not 0 <= f_index < len(edges):
        raise ValueError("designated edge index out of range")
    seen: set[tuple[int, int]] = set()
    out: list[tuple[int, int]] = []
    new_f = -1
    next_id = n
    for idx, (u, v) in enumerate(edges):
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) endpoint out of range")
        if (u, v) in seen:
            raise ValueError(f"duplicate edge ({u},{v})")
        seen.add((u, v))
        if u == v:
            z1, z2 = next_id, next_id + 1
            next_id += 2
            out.extend([(u, z1), (z1, z2), (z2, v)])
        elif (v, u) in seen:
            z = next_id
            next_id += 1
            out.extend([(u, z), (z, v)])
        else:
            out.append((u, v))
        if idx == f_index:
            new_f = len(out) - 1
    return EmasInstance(next_id, tuple(out), new_f)


def random_emas_instance(n: int, n_edges: int, seed: int) -> EmasInstance:
    """A random clean EMAS instance (no self-loops or 2-cycles) with a
    uniformly chosen designated edge."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    pool = [(u, v) for u in range(n) for v in range(n) if u != v]
    rng.shuffle(pool)
    chosen: list[tuple[int, int]] = []
    taken: set[tuple[int, int]] = set()
    for u, v in pool:
        if len(chosen) == n_edges:
            break
        if (v, u) in taken:
            continue
        taken.add((u, v))
        chosen.append((u, v))
    if not chosen:
        raise ValueError("could not place any edge")
    return EmasInstance(n, tuple(chosen), int(rng.integers(len(chosen))))


def reduce_emas(inst: EmasInstance) -> tuple[MarginMatrix, TieBreakOrder]:
    """EMAS gadget: ranked pairs on the output elects candidate 0 iff the
    designated edge is *not* in the greedy acyclic subgraph.

    Candidates are the instance vertices shifted up by one plus a fresh
    candidate 0.  Edge e_i (1-based) gets margin M-i+1; the designated edge
    f = (u, v) at position j is replaced by margin M-j+1 on (u, 0) and the
    unique maximum M+1 on (0, v); everything else stays at margin 0 and is
    settled by the tie-break order, which ranks 0 first.
    """
    n_edges = len(inst.edges)
    size = inst.n + 1
    mu = np.zeros((size, size), dtype=np.int64)

    def set_margin(x: int, y: int, value: int) -> None:
        if mu[x, y] != 0 or mu[y, x] != 0:
            raise ValueError("margin cell written twice; malformed instance")
        mu[x, y] = value
        mu[y, x] = -value

    for i, (u, v) in enumerate(inst.edges, start=1):
        if i - 1 == inst.f_index:
            set_margin(u + 1, 0, n_edges - i + 1)
            set_margin(0, v + 1, n_edges + 1)
        else:
            set_margin(u + 1, v + 1, n_edges - i + 1)
    return MarginMatrix(mu), TieBreakOrder(tuple(range(size)))
