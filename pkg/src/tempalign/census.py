"""Connected induced k-node subgraph census with per-node orbit labels."""

from __future__ import annotations

import itertools
from typing import Iterator, NamedTuple

from .network import Snapshot
from .orbits import OrbitCatalog, classify, is_connected

BRUTE_FORCE_MAX_NODES = 25


class OrbitOccurrence(NamedTuple):
    nodes: tuple[int, ...]
    t: int
    orbits: tuple[int, ...]


def _code(nodes: tuple[int, ...], out_adj: list[set[int]]) -> int:
    code = 0
    bit = 0
    for a in nodes:
        row = out_adj[a]
        for b in nodes:
            if a == b:
                continue
            if b in row:
                code |= 1 << bit
            bit += 1
    return code


def connected_sets(nbrs: list[set[int]], k: int) -> Iterator[tuple[int, ...]]:
    """Yield every connected k-node set exactly once (ESU with exclusive neighborhoods)."""

    def extend(sub: list[int], ext: list[int], root: int, closed: set[int]):
        if len(sub) == k:
            yield tuple(sorted(sub))
            return
        ext = sorted(ext)
        while ext:
            w = ext.pop(0)
            new_ext = list(ext)
            added = []
            for u in nbrs[w]:
                if u > root and u not in closed:
                    new_ext.append(u)
                    added.append(u)
            closed.update(added)
            sub.append(w)
            yield from extend(sub, new_ext, root, closed)
            sub.pop()
            closed.difference_update(added)

    for v in range(len(nbrs)):
        if not nbrs[v] and k > 1:
            continue
        ext = [u for u in nbrs[v] if u > v]
        closed = set(nbrs[v]) | {v}
        yield from extend([v], ext, v, closed)


def enumerate_occurrences(snap: Snapshot, catalog: OrbitCatalog) -> list[OrbitOccurrence]:
    if catalog.directed and not snap.directed:
        raise ValueError("directed catalog requires a directed snapshot")
    # undirected catalogs see the underlying undirected graph
    out_adj = snap.out_adj if catalog.directed else snap.neighbors
    lookup = catalog.lookup
    t = snap.t
    return [OrbitOccurrence(nodes, t, lookup[_code(nodes, out_adj)])
            for nodes in connected_sets(snap.neighbors, catalog.k)]


def induced_adjacency(snap: Snapshot, nodes: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(b in snap.out_adj[a]) for b in nodes) for a in nodes)


def brute_force_census(snap: Snapshot, catalog: OrbitCatalog) -> list[OrbitOccurrence]:
    """Reference census over all C(n, k) node subsets."""
    if snap.n_nodes > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force census limited to {BRUTE_FORCE_MAX_NODES} nodes")
    if catalog.directed and not snap.directed:
        raise ValueError("directed catalog requires a directed snapshot")
    result = []
    for nodes in itertools.combinations(range(snap.n_nodes), catalog.k):
        adj = induced_adjacency(snap, nodes)
        if not catalog.directed and snap.directed:
            adj = tuple(tuple(adj[i][j] | adj[j][i] for j in range(len(nodes))) for i in range(len(nodes)))
        if is_connected(adj):
            result.append(OrbitOccurrence(nodes, snap.t, classify(adj, catalog)))
    return result


def format_occurrences(occs: list[OrbitOccurrence]) -> str:
    lines = ["t\tnodes\torbits"]
    for o in sorted(occs):
        lines.append(f"{o.t}\t{','.join(map(str, o.nodes))}\t{','.join(map(str, o.orbits))}")
    return "\n".join(lines) + "\n"
