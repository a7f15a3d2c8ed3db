"""Columnar execution of the propagation rounds for large instances.

Runs the same algorithm as the generic engine but over double-buffered
arrays and compiled kernels.  The message rule is pull-based: instead of a
changed vertex pushing to its neighbors' inboxes, each receiver scans its
incoming edges and combines the values of senders flagged as changed in the
previous superstep.  With an eagerly-combining inbox the two formulations
deliver identical values in identical supersteps, so results (states,
winners, round and superstep counts) match the generic engine exactly.

Kernel blocks cover disjoint vertex ranges and read only previous-superstep
buffers, so thread count and block boundaries cannot affect the outcome.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, wait

import numpy as np
from numba import njit

from .core import WeightedTournament
from .schulze import INF, SchulzeVertexState, Status

__all__ = ["dense_run"]

_UNKNOWN, _WINNER, _LOSER = 0, 1, 2
_STATUS = {_UNKNOWN: Status.UNKNOWN, _WINNER: Status.WINNER, _LOSER: Status.LOSER}


@njit(nogil=True, cache=True)
def _pull_kernel(lo, hi, ptr, nbr, wgt, lab_prev, wid_prev, chg_prev, lab_next, wid_next, chg_next):
    """One superstep for one direction over receivers [lo, hi).

    Combines (least label, then widest width) over changed senders, clamping
    each sender's width by the edge weight, then applies the update rule.
    """
    for c in range(lo, hi):
        best_v = np.int64(-1)
        best_w = np.int64(0)
        for e in range(ptr[c], ptr[c + 1]):
            u = nbr[e]
            if chg_prev[u] == 0:
                continue
            we = wgt[e]
            if we <= 0:
                continue
            v = lab_prev[u]
            w = wid_prev[u]
            if we < w:
                w = we
            if best_v == -1 or v < best_v or (v == best_v and w > best_w):
                best_v = v
                best_w = w
        lab = lab_prev[c]
        wid = wid_prev[c]
        changed = np.uint8(0)
        if best_v != -1:
            if best_v < lab:
                lab = best_v
                wid = best_w
                changed = np.uint8(1)
            elif best_v == lab and best_w > wid:
                wid = best_w
                changed = np.uint8(1)
        lab_next[c] = lab
        wid_next[c] = wid
        chg_next[c] = changed


@njit(nogil=True, cache=True)
def _push_kernel(
    frontier, ptr, nbr, wgt, lab_prev, wid_prev, lab_next, wid_next, chg_next,
    msg_v, msg_w, msg_has, touched,
):
    """Sparse-frontier variant of one superstep for one direction.

    Scatters from changed senders instead of scanning every receiver;
    ``lab_next``/``wid_next`` must be pre-copied from the previous buffers.
    The combined inbox is identical to the pull kernel's, so the choice of
    kernel never affects results.  Single-threaded; scratch arrays are
    reset before returning.
    """
    n_touched = 0
    for idx in range(frontier.size):
        u = frontier[idx]
        v_u = lab_prev[u]
        w_u = wid_prev[u]
        for e in range(ptr[u], ptr[u + 1]):
            we = wgt[e]
            if we <= 0:
                continue
            c = nbr[e]
            w = w_u if w_u < we else we
            if msg_has[c] == 0:
                msg_has[c] = 1
                msg_v[c] = v_u
                msg_w[c] = w
                touched[n_touched] = c
                n_touched += 1
            elif v_u < msg_v[c] or (v_u == msg_v[c] and w > msg_w[c]):
                msg_v[c] = v_u
                msg_w[c] = w
    for i in range(n_touched):
        c = touched[i]
        msg_has[c] = 0
        v = msg_v[c]
        w = msg_w[c]
        lab = lab_prev[c]
        wid = wid_prev[c]
        if v < lab:
            lab_next[c] = v
            wid_next[c] = w
            chg_next[c] = np.uint8(1)
        elif v == lab and w > wid:
            wid_next[c] = w
            chg_next[c] = np.uint8(1)


@njit(nogil=True, cache=True)
def _mismatch_kernel(lo, hi, ptr, nbr, wgt, s, t, inf, dead_mask, else_mask):
    """Label-comparison exchange: a receiver whose (s, t) differs from any
    in-neighbor's marks its component dead (when s == t) or itself (else)."""
    for c in range(lo, hi):
        sc = s[c]
        tc = t[c]
        for e in range(ptr[c], ptr[c + 1]):
            if wgt[e] <= 0:
                continue
            u = nbr[e]
            if s[u] != sc or t[u] != tc:
                if sc == tc:
                    if sc < inf:
                        dead_mask[sc] = 1
                else:
                    else_mask[c] = 1
                break


def _vertex_bounds(ptr: np.ndarray, blocks: int) -> np.ndarray:
    """Contiguous vertex ranges with roughly equal edge counts."""
    m = ptr.size - 1
    targets = np.linspace(0, ptr[-1], blocks + 1)
    bounds = np.searchsorted(ptr, targets).astype(np.int64)
    bounds[0] = 0
    bounds[-1] = m
    return np.maximum.accumulate(bounds)


def _segment_max(ptr: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Per-vertex max over CSR segments; empty segments give 0."""
    m = ptr.size - 1
    out = np.zeros(m, dtype=np.int64)
    nonempty = np.flatnonzero(np.diff(ptr) > 0)
    if nonempty.size:
        out[nonempty] = np.maximum.reduceat(vals, ptr[nonempty])
    return out


def dense_run(
    t: WeightedTournament,
    *,
    threads: int,
    prune: bool,
    trace: list[tuple[int, int, int]] | None = None,
) -> tuple[list[SchulzeVertexState], int, int, int, list[int], int]:
    """Run all rounds to completion; see :func:`beatpath.schulze.schulze_run`.

    Returns (final_states, iterations, supersteps, undecided_after_first_
    preprocess, finalized_per_round, pruned_edges).
    """
    m = t.m
    ids = np.arange(m, dtype=np.int64)
    src_c = t.src
    dst_c = t.dst

    # Out-CSR is the canonical (src, dst) order; the in-CSR permutation
    # doubles as a cross-index so pruning zeroes an edge in both views.
    out_ptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(np.bincount(src_c, minlength=m), out=out_ptr[1:])
    out_w = t.w.astype(np.int64, copy=True)
    in_to_out = np.lexsort((src_c, dst_c))
    in_ptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(np.bincount(dst_c, minlength=m), out=in_ptr[1:])
    in_src = src_c[in_to_out].copy()
    in_w = out_w[in_to_out]

    status = np.zeros(m, dtype=np.int8)
    in_max = _segment_max(in_ptr, in_w)
    out_max = _segment_max(out_ptr, out_w)
    status[in_max > out_max] = _LOSER
    undecided = int(np.count_nonzero(status == _UNKNOWN))

    s0, s1 = np.zeros(m, np.int64), np.zeros(m, np.int64)
    ws0, ws1 = np.zeros(m, np.int64), np.zeros(m, np.int64)
    t0, t1 = np.zeros(m, np.int64), np.zeros(m, np.int64)
    wt0, wt1 = np.zeros(m, np.int64), np.zeros(m, np.int64)
    cf0, cf1 = np.zeros(m, np.uint8), np.zeros(m, np.uint8)
    cb0, cb1 = np.zeros(m, np.uint8), np.zeros(m, np.uint8)
    scc = np.full(m, INF, dtype=np.int64)

    # Positive degrees let each superstep count the messages it would send;
    # propagation stops after the first superstep that sends none.
    pos_out = np.diff(out_ptr)
    pos_in = np.diff(in_ptr)

    sparse_cutoff = max(1, t.edge_count // 4)
    fmsg_v, fmsg_w = np.zeros(m, np.int64), np.zeros(m, np.int64)
    bmsg_v, bmsg_w = np.zeros(m, np.int64), np.zeros(m, np.int64)
    fmsg_has, bmsg_has = np.zeros(m, np.uint8), np.zeros(m, np.uint8)
    ftouched, btouched = np.zeros(m, np.int64), np.zeros(m, np.int64)

    fwd_bounds = _vertex_bounds(in_ptr, threads)
    bwd_bounds = _vertex_bounds(out_ptr, threads)
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None

    def _run_blocks(calls: list[tuple]) -> None:
        if executor is None:
            for fn, *args in calls:
                fn(*args)
        else:
            futures = [executor.submit(fn, *args) for fn, *args in calls]
            wait(futures)
            for f in futures:
                f.result()

    iterations = 0
    supersteps = 0
    pruned = 0
    finalized: list[int] = []
    try:
        while (status == _UNKNOWN).any():
            iterations += 1
            if iterations > m:
                raise RuntimeError("round count exceeded the candidate count")

            unk = status == _UNKNOWN
            s0[:] = INF
            s0[unk] = ids[unk]
            ws0[:] = 0
            ws0[unk] = INF
            t0[:] = s0
            wt0[:] = ws0
            scc[:] = INF
            cf0[:] = unk
            cb0[:] = unk

            while True:
                supersteps += 1
                calls = []
                # Per direction: scatter from the frontier when it is small,
                # otherwise scan all receivers in parallel blocks.
                fwd_frontier = np.flatnonzero(cf0)
                if int(pos_out[fwd_frontier].sum()) < sparse_cutoff:
                    s1[:] = s0
                    ws1[:] = ws0
                    cf1[:] = 0
                    calls.append(
                        (_push_kernel, fwd_frontier, out_ptr, dst_c, out_w,
                         s0, ws0, s1, ws1, cf1, fmsg_v, fmsg_w, fmsg_has, ftouched)
                    )
                else:
                    for b in range(len(fwd_bounds) - 1):
                        calls.append(
                            (_pull_kernel, fwd_bounds[b], fwd_bounds[b + 1],
                             in_ptr, in_src, in_w, s0, ws0, cf0, s1, ws1, cf1)
                        )
                bwd_frontier = np.flatnonzero(cb0)
                if int(pos_in[bwd_frontier].sum()) < sparse_cutoff:
                    t1[:] = t0
                    wt1[:] = wt0
                    cb1[:] = 0
                    calls.append(
                        (_push_kernel, bwd_frontier, in_ptr, in_src, in_w,
                         t0, wt0, t1, wt1, cb1, bmsg_v, bmsg_w, bmsg_has, btouched)
                    )
                else:
                    for b in range(len(bwd_bounds) - 1):
                        calls.append(
                            (_pull_kernel, bwd_bounds[b], bwd_bounds[b + 1],
                             out_ptr, dst_c, out_w, t0, wt0, cb0, t1, wt1, cb1)
                        )
                _run_blocks(calls)
                s0, s1 = s1, s0
                ws0, ws1 = ws1, ws0
                t0, t1 = t1, t0
                wt0, wt1 = wt1, wt0
                cf0, cf1 = cf1, cf0
                cb0, cb1 = cb1, cb0
                sends = int(pos_out[cf0 != 0].sum() + pos_in[cb0 != 0].sum())
                if trace is not None:
                    trace.append(
                        (supersteps, int((cf0 != 0).sum() + (cb0 != 0).sum()), sends)
                    )
                if sends == 0:
                    break

            # Per-vertex label comparison (collect loser marks, assign
            # component labels), then one mismatch exchange, then apply.
            req = np.zeros(m, dtype=bool)
            lt = s0 < t0
            req[lt] = True
            gt = s0 > t0
            req[t0[gt]] = True
            eq = ~lt & ~gt & (s0 < INF)
            scc[eq] = s0[eq]
            req |= eq & (ws0 > wt0)
            req[s0[eq & (ws0 < wt0)]] = True

            dead_mask = np.zeros(m, dtype=np.uint8)
            else_mask = np.zeros(m, dtype=np.uint8)
            calls = [
                (_mismatch_kernel, fwd_bounds[b], fwd_bounds[b + 1],
                 in_ptr, in_src, in_w, s0, t0, INF, dead_mask, else_mask)
                for b in range(len(fwd_bounds) - 1)
            ]
            _run_blocks(calls)
            dead_labels = np.flatnonzero(dead_mask)
            kill = else_mask != 0
            if dead_labels.size:
                kill |= np.isin(scc, dead_labels)

            newly = (req | kill) & (status == _UNKNOWN)
            status[newly] = _LOSER
            win = (status == _UNKNOWN) & (scc == ids)
            status[win] = _WINNER
            count = int(newly.sum() + win.sum())
            if count < 1:
                raise RuntimeError("a round finalized no vertex")
            finalized.append(count)

            if prune and dead_labels.size:
                member_mask = np.isin(scc, dead_labels)
                for v in np.flatnonzero(member_mask):
                    lo, hi = in_ptr[v], in_ptr[v + 1]
                    crossing = (scc[in_src[lo:hi]] != scc[v]) & (in_w[lo:hi] > 0)
                    pos = lo + np.flatnonzero(crossing)
                    if pos.size:
                        in_w[pos] = 0
                        out_w[in_to_out[pos]] = 0
                        pruned += int(pos.size)
                pos_out = np.bincount(src_c[out_w > 0], minlength=m)
                pos_in = np.bincount(dst_c[out_w > 0], minlength=m)
    finally:
        if executor is not None:
            executor.shutdown(wait=True)

    states = [
        SchulzeVertexState(
            id=v,
            status=_STATUS[int(status[v])],
            s=int(s0[v]),
            ws=int(ws0[v]),
            t=int(t0[v]),
            wt=int(wt0[v]),
            scc=None if scc[v] == INF else int(scc[v]),
        )
        for v in range(m)
    ]
    return states, iterations, supersteps, undecided, finalized, pruned
