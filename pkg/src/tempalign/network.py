"""Temporal network data model, snapshot materialization and event-list I/O."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple

HEADER_RE = re.compile(r"^#temporal-net\s+(.*)$")


class NetworkFormatError(ValueError):
    """Raised for malformed event-list files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Event(NamedTuple):
    u: int
    v: int
    start: int
    end: int

    @property
    def duration(self) -> int:
        return self.end - self.start + 1


def pair_key(u: int, v: int, directed: bool) -> tuple[int, int]:
    if directed or u < v:
        return (u, v)
    return (v, u)


def merge_events(events: Iterable[tuple[int, int, int, int]], directed: bool) -> tuple[Event, ...]:
    """Normalize pairs and merge same-pair events whose intervals overlap or touch."""
    by_pair: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for u, v, s, f in events:
        by_pair[pair_key(u, v, directed)].append((s, f))
    merged = []
    for (u, v), intervals in by_pair.items():
        intervals.sort()
        cur_s, cur_f = intervals[0]
        for s, f in intervals[1:]:
            if s <= cur_f + 1:
                cur_f = max(cur_f, f)
            else:
                merged.append(Event(u, v, cur_s, cur_f))
                cur_s, cur_f = s, f
        merged.append(Event(u, v, cur_s, cur_f))
    merged.sort()
    return tuple(merged)


@dataclass(frozen=True)
class Snapshot:
    t: int
    n_nodes: int
    directed: bool
    edges: frozenset

    @cached_property
    def out_adj(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n_nodes)]
        for u, v in self.edges:
            adj[u].add(v)
            if not self.directed:
                adj[v].add(u)
        return adj

    @cached_property
    def in_adj(self) -> list[set[int]]:
        if not self.directed:
            return self.out_adj
        adj: list[set[int]] = [set() for _ in range(self.n_nodes)]
        for u, v in self.edges:
            adj[v].add(u)
        return adj

    @cached_property
    def neighbors(self) -> list[set[int]]:
        """Underlying undirected neighborhoods (weak connectivity)."""
        if not self.directed:
            return self.out_adj
        return [o | i for o, i in zip(self.out_adj, self.in_adj)]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out_adj[u]


class TemporalNetwork:
    """Node set plus interval events over snapshots ``1..T``.

    Events are normalized on construction: undirected pairs are stored with
    ``u < v`` and same-pair events with overlapping or adjacent intervals are
    merged. Instances are treated as immutable.
    """

    def __init__(self, n_nodes: int, T: int, directed: bool, events: Iterable[tuple[int, int, int, int]] = ()):
        if T < 1:
            raise ValueError("T must be >= 1")
        events = list(events)
        for u, v, s, f in events:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (1 <= s <= f <= T):
                raise ValueError(f"invalid interval [{s}, {f}] for T={T}")
            if not (0 <= u < n_nodes and 0 <= v < n_nodes):
                raise ValueError(f"node id out of range in event {(u, v, s, f)}")
        self.n_nodes = n_nodes
        self.T = T
        self.directed = directed
        self.events = merge_events(events, directed)

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"TemporalNetwork(n_nodes={self.n_nodes}, T={self.T}, {kind}, events={len(self.events)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalNetwork):
            return NotImplemented
        return (self.n_nodes, self.T, self.directed, self.events) == (
            other.n_nodes, other.T, other.directed, other.events)

    def __hash__(self) -> int:
        return hash((self.n_nodes, self.T, self.directed, self.events))

    @cached_property
    def _snapshots(self) -> list[Snapshot]:
        live: list[set] = [set() for _ in range(self.T + 1)]
        for u, v, s, f in self.events:
            for t in range(s, f + 1):
                live[t].add((u, v))
        return [Snapshot(t, self.n_nodes, self.directed, frozenset(live[t])) for t in range(1, self.T + 1)]

    def snapshot_at(self, t: int) -> Snapshot:
        if not 1 <= t <= self.T:
            raise IndexError(f"snapshot {t} out of range 1..{self.T}")
        return self._snapshots[t - 1]

    def snapshots(self) -> list[Snapshot]:
        return list(self._snapshots)

    @cached_property
    def events_by_pair(self) -> dict[tuple[int, int], tuple[Event, ...]]:
        index: dict[tuple[int, int], list[Event]] = defaultdict(list)
        for e in self.events:
            index[(e.u, e.v)].append(e)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def aggregate_neighbors(self) -> list[tuple[int, ...]]:
        """Neighbors in the union of all snapshots, ignoring direction."""
        nbrs: list[set[int]] = [set() for _ in range(self.n_nodes)]
        for u, v, _, _ in self.events:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return [tuple(sorted(s)) for s in nbrs]

    @property
    def total_duration(self) -> int:
        return sum(e.duration for e in self.events)


def edge_density(snap: Snapshot, n_nodes: int) -> float:
    if n_nodes < 2:
        raise ValueError("edge density needs at least 2 nodes")
    possible = n_nodes * (n_nodes - 1)
    if not snap.directed:
        possible //= 2
    return len(snap.edges) / possible


def _parse_header(text: str, lineno: int) -> dict[str, int]:
    fields = {}
    for token in text.split():
        if "=" not in token:
            raise NetworkFormatError(f"malformed header token {token!r}", lineno)
        key, value = token.split("=", 1)
        try:
            fields[key] = int(value)
        except ValueError:
            raise NetworkFormatError(f"non-integer header value {token!r}", lineno) from None
    return fields


def parse_network(text: str, directed: bool | None = None) -> TemporalNetwork:
    """Parse the event-list format; ``directed=None`` defers to the header."""
    header: dict[str, int] = {}
    raw: list[tuple[int, int, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = HEADER_RE.match(line)
            if m:
                header = _parse_header(m.group(1), lineno)
            continue
        parts = line.split()
        if len(parts) != 4:
            raise NetworkFormatError(f"expected 4 fields '<u> <v> <start> <end>', got {len(parts)}", lineno)
        try:
            u, v, s, f = (int(p) for p in parts)
        except ValueError:
            raise NetworkFormatError(f"non-integer field in {line!r}", lineno) from None
        if min(u, v) < 0:
            raise NetworkFormatError("negative node id", lineno)
        if u == v:
            raise NetworkFormatError(f"self-loop on node {u}", lineno)
        if s < 1:
            raise NetworkFormatError("snapshot indices start at 1", lineno)
        if s > f:
            raise NetworkFormatError(f"start {s} > end {f}", lineno)
        raw.append((u, v, s, f))

    if directed is None:
        directed = bool(header.get("directed", 0))
    T = header.get("snapshots", max((e[3] for e in raw), default=1))
    for u, v, s, f in raw:
        if f > T:
            raise NetworkFormatError(f"event end {f} exceeds snapshots={T}")

    ids = sorted({x for e in raw for x in e[:2]})
    n_header = header.get("nodes", 0)
    if ids and ids[-1] >= n_header:
        # ids not covered by the declared node count: compact to [0, N)
        remap = {x: i for i, x in enumerate(ids)}
        raw = [(remap[u], remap[v], s, f) for u, v, s, f in raw]
        n_nodes = max(n_header, len(ids))
    else:
        n_nodes = n_header
    return TemporalNetwork(n_nodes, T, directed, raw)


def load_network(path: str | Path, directed: bool | None = None) -> TemporalNetwork:
    try:
        return parse_network(Path(path).read_text(), directed)
    except NetworkFormatError as exc:
        raise NetworkFormatError(f"{path}: {exc}") from None


def format_network(net: TemporalNetwork, comments: Iterable[str] = ()) -> str:
    lines = [f"#temporal-net nodes={net.n_nodes} snapshots={net.T} directed={int(net.directed)}"]
    lines += [f"# {c}" for c in comments]
    lines += [f"{e.u} {e.v} {e.start} {e.end}" for e in net.events]
    return "\n".join(lines) + "\n"


def save_network(net: TemporalNetwork, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_network(net, comments))


def load_alignment(path: str | Path) -> dict[int, int]:
    mapping = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise NetworkFormatError("expected '<u> <v>'", lineno)
        mapping[int(parts[0])] = int(parts[1])
    return mapping
