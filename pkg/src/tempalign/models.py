"""Growing temporal network models with a fixed per-snapshot edge density.

All randomness comes from numpy's PCG64 generator seeded with ``rng_seed``;
directed orientation uses a separate child stream so the undirected topology
does not depend on the ``directed`` flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.distance import pdist

from .network import TemporalNetwork

MODELS = ("Random", "ScaleFree", "SmallWorld", "GeoGD", "ScaleFreeGD")
ARRIVAL = {
    "Random": "linear",
    "ScaleFree": "exponential",
    "SmallWorld": "linear",
    "GeoGD": "linear",
    "ScaleFreeGD": "exponential",
}
# fallback to unconditional acceptance after this many rejections per quota edge
SCALEFREE_REJECTION_FACTOR = 50


@dataclass(frozen=True)
class ModelSpec:
    model: str
    n_start: int = 100
    n_end: int = 1000
    T: int = 24
    density: float = 0.01
    beta: float = 0.2          # SmallWorld rewiring probability
    epsilon: float = 5e-2      # GeoGD squared-distance threshold
    k_seed: int = 5            # GeoGD seed nodes
    p_cut: float = 0.2         # GeoGD cut-off probability
    p: float = 0.3             # ScaleFreeGD child-father link probability
    q: float = 0.7             # ScaleFreeGD edge inheritance probability
    rng_seed: int = 0
    directed: bool = False

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODELS}")
        if not 2 <= self.n_start <= self.n_end:
            raise ValueError("need 2 <= n_start <= n_end")
        if not 0 < self.density <= 1:
            raise ValueError("density must be in (0, 1]")
        if self.T < 1:
            raise ValueError("T must be >= 1")


PROFILES = {
    "desk": dict(n_start=50, n_end=200, T=8),
    "paper": dict(n_start=100, n_end=1000, T=24),
}


def _round(x: float) -> int:
    return int(math.floor(x + 0.5))


def node_count_at(spec: ModelSpec, t: int) -> int:
    if not 1 <= t <= spec.T:
        raise ValueError(f"t={t} outside 1..{spec.T}")
    n1, nT = spec.n_start, spec.n_end
    if ARRIVAL[spec.model] == "linear":
        if spec.T == 1:
            return n1
        return _round((nT - n1) / (spec.T - 1) * (t - 1) + n1)
    return _round(min(nT, n1 * math.exp((t - 1) / 10)))


def edge_quota(n: int, density: float) -> int:
    return _round(density * n * (n - 1) / 2)


@dataclass
class Simulation:
    """Raw model output: one undirected edge set per snapshot plus model state."""

    spec: ModelSpec
    node_counts: list[int]
    snapshots: list[set] = field(default_factory=list)
    positions: np.ndarray | None = None
    fathers: list[int] | None = None
    cut_off: list[bool] | None = None


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _random_pair(rng, n: int) -> tuple[int, int] | None:
    u, v = (int(x) for x in rng.integers(n, size=2))
    return None if u == v else _edge(u, v)


def _fill_random(edges: set, n: int, quota: int, rng) -> None:
    while len(edges) < quota:
        e = _random_pair(rng, n)
        if e is not None:
            edges.add(e)


def _trim_random(edges: set, quota: int, rng) -> set:
    if len(edges) <= quota:
        return edges
    ordered = sorted(edges)
    keep = rng.choice(len(ordered), size=quota, replace=False)
    return {ordered[i] for i in sorted(keep)}


def ring_edges(n: int, half_degree: int) -> set:
    """Ring lattice: node ``i`` linked to its ``half_degree`` successors (and predecessors)."""
    edges = set()
    for i in range(n):
        for j in range(1, half_degree + 1):
            w = (i + j) % n
            if w != i:
                edges.add(_edge(i, w))
    return edges


def _random_model(spec, rng, sim):
    edges: set = set()
    for n in sim.node_counts:
        _fill_random(edges, n, edge_quota(n, spec.density), rng)
        sim.snapshots.append(set(edges))


def _scale_free(spec, rng, sim):
    edges: set = set()
    deg: dict[int, int] = {}
    for n in sim.node_counts:
        quota = edge_quota(n, spec.density)
        limit = SCALEFREE_REJECTION_FACTOR * max(1, quota)
        rejected = 0
        while len(edges) < quota:
            e = _random_pair(rng, n)
            if e is None or e in edges:
                continue
            if edges and rejected < limit:
                ratio = max(deg.get(e[0], 0), deg.get(e[1], 0)) / len(edges)
                if not ratio > rng.random():
                    rejected += 1
                    continue
            edges.add(e)
            deg[e[0]] = deg.get(e[0], 0) + 1
            deg[e[1]] = deg.get(e[1], 0) + 1
        sim.snapshots.append(set(edges))


def _rewire(edges: set, n: int, beta: float, rng) -> set:
    out = set(edges)
    for u, v in sorted(edges):
        if rng.random() >= beta:
            continue
        for _ in range(20):
            w = int(rng.integers(n))
            e = _edge(u, w)
            if w != u and e not in out:
                out.discard((u, v))
                out.add(e)
                break
    return out


def _small_world(spec, rng, sim):
    edges: set = set()
    for n in sim.node_counts:
        quota = edge_quota(n, spec.density)
        half = max(1, quota // n)
        union = _trim_random(edges | ring_edges(n, half), quota, rng)
        _fill_random(union, n, quota, rng)
        edges = _rewire(union, n, spec.beta, rng)
        sim.snapshots.append(set(edges))


def _geo_gd(spec, rng, sim):
    eps = spec.epsilon
    r_near = math.sqrt(eps)
    r_far = math.sqrt(10 * eps)
    pos: list[tuple[float, float]] = []
    fathers: list[int] = []
    cut: list[bool] = []
    for n in sim.node_counts:
        while len(pos) < n:
            if not pos:
                pos.append(tuple(rng.random(2)))
                fathers.append(-1)
                cut.append(False)
                continue
            if len(pos) < spec.k_seed:
                # seed cluster: within r_near / 2 of the first node, so pairwise d^2 < eps
                f, lo, hi, is_cut = 0, 0.0, r_near / 2, False
            else:
                f = int(rng.integers(len(pos)))
                is_cut = bool(rng.random() < spec.p_cut)
                lo, hi = (r_near, r_far) if is_cut else (0.0, r_near)
            dist = hi - (hi - lo) * rng.random()  # in (lo, hi]
            angle = 2 * math.pi * rng.random()
            fx, fy = pos[f]
            pos.append((fx + dist * math.cos(angle), fy + dist * math.sin(angle)))
            fathers.append(f)
            cut.append(is_cut)
        quota = edge_quota(n, spec.density)
        d2 = pdist(np.asarray(pos[:n]), "sqeuclidean")
        iu, ju = np.triu_indices(n, k=1)
        order = np.argsort(d2, kind="stable")[:quota]
        sim.snapshots.append({(int(iu[i]), int(ju[i])) for i in order})
    sim.positions = np.asarray(pos)
    sim.fathers = fathers
    sim.cut_off = cut


def _scale_free_gd(spec, rng, sim):
    adj: dict[int, set[int]] = {}
    edges: set = set()

    def add(a, b):
        edges.add(_edge(a, b))
        adj[a].add(b)
        adj[b].add(a)

    def remove(a, b):
        edges.discard(_edge(a, b))
        adj[a].discard(b)
        adj[b].discard(a)

    n_seed = min(3, sim.node_counts[0])
    for i in range(n_seed):
        adj[i] = set()
    for i in range(n_seed):
        for j in range(i + 1, n_seed):
            add(i, j)

    for n in sim.node_counts:
        while len(adj) < n:
            child = len(adj)
            adj[child] = set()
            father = int(rng.integers(child))
            for x in sorted(adj[father]):
                if rng.random() < spec.q:
                    add(child, x)
                elif rng.random() < 0.5:
                    # child steals the father's connection
                    remove(father, x)
                    add(child, x)
            if rng.random() < spec.p:
                add(child, father)
        quota = edge_quota(n, spec.density)
        if len(edges) > quota:
            kept = _trim_random(edges, quota, rng)
            for e in sorted(edges - kept):
                remove(*e)
        while len(edges) < quota:
            # degree-proportional fill keeps the heavy tail
            u = int(rng.integers(n))
            if edges:
                ordered = sorted(edges)
                v = ordered[int(rng.integers(len(ordered)))][int(rng.integers(2))]
            else:
                v = int(rng.integers(n))
            if u != v and _edge(u, v) not in edges:
                add(u, v)
        sim.snapshots.append(set(edges))


_BUILDERS = {
    "Random": _random_model,
    "ScaleFree": _scale_free,
    "SmallWorld": _small_world,
    "GeoGD": _geo_gd,
    "ScaleFreeGD": _scale_free_gd,
}


def simulate(spec: ModelSpec) -> Simulation:
    rng = np.random.default_rng(np.random.SeedSequence(spec.rng_seed).spawn(2)[0])
    sim = Simulation(spec, [node_count_at(spec, t) for t in range(1, spec.T + 1)])
    _BUILDERS[spec.model](spec, rng, sim)
    return sim


def snapshots_to_events(snapshots: list[set]) -> list[tuple[int, int, int, int]]:
    events = []
    open_since: dict[tuple[int, int], int] = {}
    prev: set = set()
    for t, cur in enumerate(snapshots, start=1):
        for e in sorted(prev - cur):
            events.append((e[0], e[1], open_since.pop(e), t - 1))
        for e in sorted(cur - prev):
            open_since[e] = t
        prev = cur
    T = len(snapshots)
    for e in sorted(open_since):
        events.append((e[0], e[1], open_since[e], T))
    return sorted(events)


def generate(spec: ModelSpec) -> TemporalNetwork:
    sim = simulate(spec)
    events = snapshots_to_events(sim.snapshots)
    if spec.directed:
        orient = np.random.default_rng(np.random.SeedSequence(spec.rng_seed).spawn(2)[1])
        flips = {}
        for u, v, _, _ in events:
            if (u, v) not in flips:
                flips[u, v] = bool(orient.random() < 0.5)
        events = [(v, u, s, f) if flips[u, v] else (u, v, s, f) for u, v, s, f in events]
    return TemporalNetwork(max(sim.node_counts), spec.T, spec.directed, events)


@dataclass(frozen=True)
class LabeledNetwork:
    name: str
    label: str
    seed: int
    network: TemporalNetwork


def instance_seed(base_seed: int, model_index: int, instance: int) -> int:
    return base_seed + 1000 * model_index + instance


def generate_suite(models=MODELS, instances_per_model: int = 10, base_seed: int = 0,
                   **overrides) -> list[LabeledNetwork]:
    if instances_per_model < 1:
        raise ValueError("instances_per_model must be >= 1")
    suite = []
    for mi, model in enumerate(models):
        for i in range(instances_per_model):
            seed = instance_seed(base_seed, MODELS.index(model), i)
            spec = replace(ModelSpec(model, **overrides), rng_seed=seed)
            suite.append(LabeledNetwork(f"{model}-{i}", model, seed, generate(spec)))
    return suite
