"""Graphlet-orbit transition (GoT) extraction.

Occurrences of every snapshot are scanned in snapshot order; each node set
remembers its previous occurrence, which is equivalent to sorting all
occurrences by ``(nodes, t)`` and pairing neighbours in that order.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .census import enumerate_occurrences
from .network import Snapshot, TemporalNetwork
from .orbits import build_catalog

# named feature sets: (mode, ks)
K_SETS = {
    "u3": ("undirected", (3,)),
    "u4": ("undirected", (4,)),
    "u34": ("undirected", (3, 4)),
    "d3": ("directed", (3,)),
    "d4": ("directed", (4,)),
    "d34": ("directed", (3, 4)),
}


def resolve_k_set(name: str, include_k2: bool = False) -> tuple[str, tuple[int, ...]]:
    try:
        mode, ks = K_SETS[name]
    except KeyError:
        raise ValueError(f"unknown k-set {name!r}; choose from {sorted(K_SETS)}") from None
    if include_k2:
        ks = (2,) + ks
    return mode, ks


@dataclass(frozen=True)
class GoTTensor:
    """Per-node transition counts; ``matrices[k]`` is ``n_nodes x |O_k|^2`` (row-major cells)."""

    mode: str
    n_nodes: int
    matrices: dict
    orbit_counts: dict

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(sorted(self.matrices))

    def matrix(self, node: int, k: int) -> np.ndarray:
        n_orb = self.orbit_counts[k]
        return self.matrices[k][node].toarray().reshape(n_orb, n_orb)


def _census(args):
    snap, k, mode = args
    occs = enumerate_occurrences(snap, build_catalog(k, mode))
    return [(o.nodes, o.orbits) for o in occs]


def _occurrences_by_snapshot(snaps: list[Snapshot], k: int, mode: str, threads: int):
    jobs = [(s, k, mode) for s in snaps]
    if threads > 1 and len(snaps) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(_census, jobs)
    else:
        for job in jobs:
            yield _census(job)


def extract_gots(net: TemporalNetwork, ks: int | Iterable[int], mode: str = "undirected",
                 strict_consecutive: bool = False, threads: int = 1) -> GoTTensor:
    """Count orbit transitions between consecutive occurrences of the same node set.

    With ``strict_consecutive`` a transition additionally requires the two
    occurrences to be in adjacent snapshots ``t`` and ``t + 1``.
    """
    if isinstance(ks, int):
        ks = (ks,)
    if mode == "directed" and not net.directed:
        raise ValueError("directed GoTs need a directed network")
    matrices = {}
    orbit_counts = {}
    snaps = net.snapshots()
    for k in sorted(set(ks)):
        n_orb = build_catalog(k, mode).total_orbits
        last: dict[tuple[int, ...], tuple[int, tuple[int, ...]]] = {}
        counts: dict[tuple[int, int], int] = defaultdict(int)
        for snap, occs in zip(snaps, _occurrences_by_snapshot(snaps, k, mode, threads)):
            t = snap.t
            for nodes, orbits in occs:
                prev = last.get(nodes)
                if prev is not None and (not strict_consecutive or prev[0] == t - 1):
                    for node, a, b in zip(nodes, prev[1], orbits):
                        counts[node, a * n_orb + b] += 1
                last[nodes] = (t, orbits)
        if counts:
            keys = sorted(counts)
            rows = np.fromiter((r for r, _ in keys), dtype=np.int64, count=len(keys))
            cols = np.fromiter((c for _, c in keys), dtype=np.int64, count=len(keys))
            data = np.fromiter((counts[x] for x in keys), dtype=np.int64, count=len(keys))
        else:
            rows = cols = data = np.zeros(0, dtype=np.int64)
        matrices[k] = sp.csr_matrix((data, (rows, cols)), shape=(net.n_nodes, n_orb * n_orb), dtype=np.int64)
        orbit_counts[k] = n_orb
    return GoTTensor(mode, net.n_nodes, matrices, orbit_counts)


def flatten(tensor: GoTTensor, ks: Iterable[int] | None = None) -> sp.csr_matrix:
    """Row-major flattening of each k's matrices, concatenated in ascending k."""
    ks = tensor.ks if ks is None else tuple(sorted(ks))
    missing = [k for k in ks if k not in tensor.matrices]
    if missing:
        raise KeyError(f"tensor has no GoTs for k={missing}")
    return sp.hstack([tensor.matrices[k] for k in ks], format="csr", dtype=np.int64)


def feature_length(tensor: GoTTensor, ks: Iterable[int] | None = None) -> int:
    ks = tensor.ks if ks is None else ks
    return sum(tensor.orbit_counts[k] ** 2 for k in ks)


def format_features(tensor: GoTTensor, ks: Iterable[int] | None = None, header: Iterable[str] = ()) -> str:
    flat = flatten(tensor, ks)
    lines = [f"# {h}" for h in header]
    for node in range(flat.shape[0]):
        row = flat[node].toarray().ravel()
        lines.append(str(node) + "\t" + "\t".join(map(str, row.tolist())))
    return "\n".join(lines) + "\n"


def parse_features(text: str) -> np.ndarray:
    rows = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        rows[int(parts[0])] = [float(x) for x in parts[1:]]
    n = max(rows) + 1 if rows else 0
    width = len(next(iter(rows.values()))) if rows else 0
    m = np.zeros((n, width))
    for i, r in rows.items():
        m[i] = r
    return m
