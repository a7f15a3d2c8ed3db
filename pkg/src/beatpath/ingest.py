"""Reading and writing preference profiles, tournaments, and chart data.

Profile format: a header ``candidates: a, b, c`` naming the candidates in id
order, then one ballot per line.  Tiers are separated by ``>``, tied
candidates within a tier by ``=``, and a leading ``<count>:`` repeats the
ballot.  Candidates a ballot leaves out are tied below all listed ones.
``#`` starts a comment; blank lines are ignored; LF and CRLF both work.

Tournament format: a header ``m <count>``, then one ``from,to,weight`` line
per edge with integer ids.  Writing sorts edges by (from, to), and
write-then-parse is the identity.

Chart records (group key, rank, item) become one voter per group: listed
items by ascending rank, everything else in one bottom tier.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import PreferenceProfile, WeakOrder, WeightedTournament

__all__ = [
    "ParseError",
    "parse_profile",
    "write_profile",
    "parse_tournament",
    "write_tournament",
    "ChartRecord",
    "profile_from_charts",
    "read_chart_csv",
    "default_labels",
]


class ParseError(ValueError):
    """Input file is malformed; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _significant_lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def default_labels(m: int) -> tuple[str, ...]:
    return tuple(f"c{i}" for i in range(m))


def parse_profile(text: str) -> tuple[PreferenceProfile, tuple[str, ...]]:
    """Parse the profile format; returns (profile, labels in id order)."""
    lines = iter(_significant_lines(text))
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("missing 'candidates:' header") from None
    if not header.startswith("candidates:"):
        raise ParseError("first line must be a 'candidates:' header", lineno)
    labels = tuple(tok.strip() for tok in header[len("candidates:"):].split(","))
    if any(not lab for lab in labels):
        raise ParseError("empty candidate label", lineno)
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate candidate label", lineno)
    ids = {lab: i for i, lab in enumerate(labels)}
    m = len(labels)

    voters: list[WeakOrder] = []
    weights: list[int] = []
    for lineno, line in lines:
        head, sep, rest = line.partition(":")
        if sep and head.strip().isdigit():
            count = int(head)
            if count <= 0:
                raise ParseError("ballot multiplicity must be positive", lineno)
            body = rest
        else:
            count = 1
            body = line
        tiers: list[tuple[int, ...]] = []
        seen: set[int] = set()
        for tier_text in body.split(">"):
            members: list[int] = []
            for lab in tier_text.split("="):
                lab = lab.strip()
                if not lab:
                    raise ParseError("malformed tier syntax", lineno)
                if lab not in ids:
                    raise ParseError(f"unknown candidate label {lab!r}", lineno)
                c = ids[lab]
                if c in seen:
                    raise ParseError(f"candidate {lab!r} listed twice", lineno)
                seen.add(c)
                members.append(c)
            tiers.append(tuple(members))
        if not tiers or not seen:
            raise ParseError("empty ballot", lineno)
        unlisted = tuple(sorted(set(range(m)) - seen))
        if unlisted:
            tiers.append(unlisted)
        voters.append(WeakOrder(tuple(tiers)))
        weights.append(count)
    return PreferenceProfile(m, voters, weights), labels


def write_profile(
    profile: PreferenceProfile, labels: Sequence[str] | None = None
) -> str:
    """Emit the profile format; parse_profile inverts it exactly."""
    if labels is None:
        labels = default_labels(profile.m)
    labels = tuple(str(lab) for lab in labels)
    if len(labels) != profile.m:
        raise ValueError("one label per candidate required")
    for lab in labels:
        if not lab or lab != lab.strip() or any(ch in lab for ch in ",>=#:"):
            raise ValueError(f"label {lab!r} is not writable in the profile format")
    out = ["candidates: " + ", ".join(labels)]
    for order, weight in zip(profile.voters, profile.weights):
        body = " > ".join(
            " = ".join(labels[c] for c in tier) for tier in order.tiers
        )
        out.append(f"{weight}: {body}" if weight != 1 else body)
    return "\n".join(out) + "\n"


def parse_tournament(text: str) -> WeightedTournament:
    """Parse the edge-list format into a tournament."""
    lines = iter(_significant_lines(text))
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("missing 'm <count>' header") from None
    parts = header.split()
    if len(parts) != 2 or parts[0] != "m" or not parts[1].isdigit():
        raise ParseError("header must be 'm <count>'", lineno)
    m = int(parts[1])
    src: list[int] = []
    dst: list[int] = []
    w: list[int] = []
    for lineno, line in lines:
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 3:
            raise ParseError("edge line must be 'from,to,weight'", lineno)
        try:
            a, b, weight = (int(f) for f in fields)
        except ValueError:
            raise ParseError("edge fields must be integers", lineno) from None
        if weight <= 0:
            raise ParseError("edge weight must be positive", lineno)
        src.append(a)
        dst.append(b)
        w.append(weight)
    try:
        return WeightedTournament(
            m,
            np.array(src, dtype=np.int64),
            np.array(dst, dtype=np.int64),
            np.array(w, dtype=np.int64),
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def write_tournament(t: WeightedTournament) -> str:
    """Emit the edge-list format, edges sorted by (from, to)."""
    buf = io.StringIO()
    buf.write(f"m {t.m}\n")
    for a, b, weight in t.edges():
        buf.write(f"{a},{b},{weight}\n")
    return buf.getvalue()


@dataclass(frozen=True)
class ChartRecord:
    """One chart entry: a group (one voter), a rank, and an item label."""

    group_key: str
    rank: int
    item_label: str


def profile_from_charts(
    records: Sequence[ChartRecord],
    universe: Sequence[str] | None = None,
) -> tuple[PreferenceProfile, tuple[str, ...]]:
    """One voter per group: listed items by ascending rank, then one bottom
    tier of everything that group never listed.  Returns (profile, labels).

    ``universe`` widens the candidate set beyond the items that appear in
    the records; by default only those items are candidates."""
    seen = {r.item_label for r in records}
    if universe is None:
        labels = tuple(sorted(seen))
    else:
        labels = tuple(sorted(set(universe)))
        stray = seen - set(labels)
        if stray:
            raise ValueError(f"items not in the universe: {', '.join(sorted(stray))}")
    ids = {lab: i for i, lab in enumerate(labels)}
    m = len(labels)
    groups: dict[str, list[ChartRecord]] = {}
    for r in records:
        groups.setdefault(r.group_key, []).append(r)
    voters: list[WeakOrder] = []
    for key in sorted(groups):
        entries = groups[key]
        ranks = [r.rank for r in entries]
        if len(set(ranks)) != len(ranks):
            raise ValueError(f"group {key!r} repeats a rank")
        listed = [ids[r.item_label] for r in sorted(entries, key=lambda r: r.rank)]
        tiers: list[tuple[int, ...]] = [(c,) for c in listed]
        unlisted = tuple(sorted(set(range(m)) - set(listed)))
        if unlisted:
            tiers.append(unlisted)
        voters.append(WeakOrder(tuple(tiers)))
    return PreferenceProfile(m, voters), labels


def read_chart_csv(
    text: str,
    group_cols: Sequence[str],
    rank_col: str,
    item_col: str,
) -> list[ChartRecord]:
    """Read chart records from CSV with configurable column names."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise ParseError("empty chart CSV")
    missing = [c for c in [*group_cols, rank_col, item_col] if c not in reader.fieldnames]
    if missing:
        raise ParseError(f"chart CSV is missing columns: {', '.join(missing)}")
    records: list[ChartRecord] = []
    for rowno, row in enumerate(reader, start=2):
        try:
            rank = int(row[rank_col])
        except (TypeError, ValueError):
            raise ParseError("rank must be an integer", rowno) from None
        if rank <= 0:
            raise ParseError("rank must be positive", rowno)
        key = "|".join(str(row[c]) for c in group_cols)
        records.append(ChartRecord(key, rank, str(row[item_col])))
    return records
