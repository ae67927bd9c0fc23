"""Connected graphlet catalogs with automorphism orbits.

Canonical forms are the lexicographically smallest off-diagonal adjacency
string over all ``k!`` relabelings, which is exact and cheap for ``k <= 4``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

MODES = ("undirected", "directed")

Adjacency = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Graphlet:
    graphlet_id: int
    k: int
    adjacency: Adjacency
    canonical_key: tuple[int, ...]
    position_orbits: tuple[int, ...]  # global orbit id of each canonical position


@dataclass(frozen=True)
class Orbit:
    orbit_id: int
    graphlet_id: int
    positions: tuple[int, ...]


@dataclass(frozen=True)
class OrbitCatalog:
    mode: str
    k: int
    graphlets: tuple[Graphlet, ...]
    orbits: tuple[Orbit, ...]
    # adjacency code (see adjacency_code) -> orbit id per position
    lookup: dict = field(repr=False, compare=False)
    by_key: dict = field(repr=False, compare=False)

    @property
    def total_orbits(self) -> int:
        return len(self.orbits)

    @property
    def directed(self) -> bool:
        return self.mode == "directed"


def _pairs(k: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(k) for j in range(k) if i != j]


def adjacency_code(adj: Adjacency) -> int:
    """Bitmask over ordered off-diagonal cells in row-major order."""
    k = len(adj)
    code = 0
    for bit, (i, j) in enumerate(_pairs(k)):
        if adj[i][j]:
            code |= 1 << bit
    return code


def _key(adj: Adjacency) -> tuple[int, ...]:
    return tuple(adj[i][j] for i, j in _pairs(len(adj)))


def permute(adj: Adjacency, perm: tuple[int, ...]) -> Adjacency:
    """Relabel so that new position ``i`` is old node ``perm[i]``."""
    k = len(adj)
    return tuple(tuple(adj[perm[i]][perm[j]] for j in range(k)) for i in range(k))


def is_connected(adj: Adjacency) -> bool:
    """Weak connectivity (direction ignored)."""
    k = len(adj)
    if k == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(k):
            if j not in seen and (adj[i][j] or adj[j][i]):
                seen.add(j)
                stack.append(j)
    return len(seen) == k


@lru_cache(maxsize=1 << 16)
def canonical_form(adj: Adjacency) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Return ``(canonical_key, perm)`` with ``permute(adj, perm)`` canonical."""
    best = None
    best_perm = None
    for perm in itertools.permutations(range(len(adj))):
        key = _key(permute(adj, perm))
        if best is None or key < best:
            best, best_perm = key, perm
    return best, best_perm


def _from_key(key: tuple[int, ...], k: int) -> Adjacency:
    rows = [[0] * k for _ in range(k)]
    for bit, (i, j) in zip(key, _pairs(k)):
        rows[i][j] = bit
    return tuple(tuple(r) for r in rows)


def automorphisms(adj: Adjacency) -> list[tuple[int, ...]]:
    return [p for p in itertools.permutations(range(len(adj))) if permute(adj, p) == adj]


def position_classes(adj: Adjacency) -> list[tuple[int, ...]]:
    """Partition positions into automorphism orbits, ordered by minimum position."""
    k = len(adj)
    label = list(range(k))
    for p in automorphisms(adj):
        for i in range(k):
            a, b = label[i], label[p[i]]
            if a != b:
                lo, hi = min(a, b), max(a, b)
                label = [lo if x == hi else x for x in label]
    classes: dict[int, list[int]] = {}
    for i in range(k):
        classes.setdefault(label[i], []).append(i)
    return sorted(tuple(c) for c in classes.values())


def _all_adjacencies(k: int, directed: bool):
    if directed:
        cells = _pairs(k)
    else:
        cells = [(i, j) for i in range(k) for j in range(i + 1, k)]
    for bits in itertools.product((0, 1), repeat=len(cells)):
        rows = [[0] * k for _ in range(k)]
        for b, (i, j) in zip(bits, cells):
            if b:
                rows[i][j] = 1
                if not directed:
                    rows[j][i] = 1
        yield tuple(tuple(r) for r in rows)


@lru_cache(maxsize=None)
def build_catalog(k: int, mode: str = "undirected") -> OrbitCatalog:
    if not 2 <= k <= 4:
        raise ValueError(f"unsupported graphlet size k={k} (need 2 <= k <= 4)")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    directed = mode == "directed"

    forms = {}
    for adj in _all_adjacencies(k, directed):
        if is_connected(adj):
            forms[adj] = canonical_form(adj)
    keys = sorted({key for key, _ in forms.values()})

    graphlets = []
    orbits = []
    orbit_by_key = {}
    for gid, key in enumerate(keys):
        canon = _from_key(key, k)
        pos_orbit = [0] * k
        for positions in position_classes(canon):
            oid = len(orbits)
            orbits.append(Orbit(oid, gid, positions))
            for p in positions:
                pos_orbit[p] = oid
        orbit_by_key[key] = tuple(pos_orbit)
        graphlets.append(Graphlet(gid, k, canon, key, tuple(pos_orbit)))

    lookup = {}
    for adj, (key, perm) in forms.items():
        canon_orbits = orbit_by_key[key]
        per_node = [0] * k
        for i in range(k):
            per_node[perm[i]] = canon_orbits[i]
        lookup[adjacency_code(adj)] = tuple(per_node)

    by_key = {g.canonical_key: g for g in graphlets}
    return OrbitCatalog(mode, k, tuple(graphlets), tuple(orbits), lookup, by_key)


def classify(adj, catalog: OrbitCatalog) -> tuple[int, ...]:
    """Orbit id of every position of a connected induced adjacency matrix.

    Computed from scratch via the canonical relabeling (no lookup table), so it
    doubles as the reference for the census fast path.
    """
    adj = tuple(tuple(int(bool(x)) for x in row) for row in adj)
    k = len(adj)
    if k != catalog.k:
        raise ValueError(f"adjacency has {k} nodes, catalog expects {catalog.k}")
    if not catalog.directed and any(adj[i][j] != adj[j][i] for i in range(k) for j in range(k)):
        raise ValueError("asymmetric adjacency for an undirected catalog")
    if any(adj[i][i] for i in range(k)):
        raise ValueError("self-loops are not allowed")
    if not is_connected(adj):
        raise ValueError("adjacency is not connected")
    key, perm = canonical_form(adj)
    canon_orbits = catalog.by_key[key].position_orbits
    result = [0] * k
    for i in range(k):
        result[perm[i]] = canon_orbits[i]
    return tuple(result)


def graphlet_of_orbit(catalog: OrbitCatalog, orbit_id: int) -> Graphlet:
    return catalog.graphlets[catalog.orbits[orbit_id].graphlet_id]


def dump_catalog(catalog: OrbitCatalog) -> str:
    """TSV rows: graphlet id, adjacency rows, orbit partition as ``orbit:positions``."""
    lines = [f"# mode={catalog.mode} k={catalog.k} graphlets={len(catalog.graphlets)} "
             f"orbits={catalog.total_orbits}",
             "graphlet\tadjacency\torbits"]
    for g in catalog.graphlets:
        adj = "/".join("".join(str(x) for x in row) for row in g.adjacency)
        parts = [f"{o.orbit_id}:{','.join(map(str, o.positions))}"
                 for o in catalog.orbits if o.graphlet_id == g.graphlet_id]
        lines.append(f"{g.graphlet_id}\t{adj}\t{' '.join(parts)}")
    return "\n".join(lines) + "\n"
