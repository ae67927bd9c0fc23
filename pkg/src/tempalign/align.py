"""Seed-and-extend alignment maximizing ``alpha * S_E + (1 - alpha) * S_N``."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .network import Event, TemporalNetwork, pair_key


@dataclass(frozen=True)
class ObjectiveScore:
    s_n: float
    s_e: float
    alpha: float

    @property
    def total(self) -> float:
        return self.alpha * self.s_e + (1.0 - self.alpha) * self.s_n


@dataclass(frozen=True)
class Alignment:
    """Injective map from G's nodes (by index) into H's nodes."""

    mapping: tuple[int, ...]
    alpha: float = 0.0

    def __post_init__(self):
        if any(h < 0 for h in self.mapping):
            raise ValueError("alignment must be total over V(G)")
        if len(set(self.mapping)) != len(self.mapping):
            raise ValueError("alignment must be injective")

    @classmethod
    def from_dict(cls, mapping: Mapping[int, int], n_g: int, alpha: float = 0.0) -> "Alignment":
        missing = [g for g in range(n_g) if g not in mapping]
        if missing:
            raise ValueError(f"alignment is missing G nodes {missing[:5]}")
        return cls(tuple(mapping[g] for g in range(n_g)), alpha)

    @classmethod
    def identity(cls, n: int, alpha: float = 0.0) -> "Alignment":
        return cls(tuple(range(n)), alpha)

    def __getitem__(self, g: int) -> int:
        return self.mapping[g]

    def __len__(self) -> int:
        return len(self.mapping)


def _mapping(f) -> Sequence[int]:
    return f.mapping if isinstance(f, Alignment) else f


def interval_overlap(a: Event, b: Event) -> int:
    return max(0, min(a.end, b.end) - max(a.start, b.start) + 1)


def conserved_mass(a: Event, b: Event) -> float:
    """Overlap length times interval Jaccard; equals the duration for identical intervals."""
    ov = interval_overlap(a, b)
    if ov == 0:
        return 0.0
    union = a.duration + b.duration - ov
    return ov * ov / union


def _event_mass_denominator(g: TemporalNetwork, h: TemporalNetwork) -> int:
    return min(g.total_duration, h.total_duration)


def score_node_conservation(f, sim: np.ndarray) -> float:
    mapping = _mapping(f)
    if len(mapping) == 0:
        return 0.0
    return float(np.mean(sim[np.arange(len(mapping)), np.asarray(mapping)]))


def score_edge_conservation(f, g: TemporalNetwork, h: TemporalNetwork, sim: np.ndarray) -> float:
    """Similarity-weighted conserved event mass, normalized by the smaller total duration."""
    mapping = _mapping(f)
    denom = _event_mass_denominator(g, h)
    if denom == 0:
        return 0.0
    h_index = h.events_by_pair
    total = 0.0
    for e in g.events:
        fu, fv = mapping[e.u], mapping[e.v]
        matches = h_index.get(pair_key(fu, fv, h.directed))
        if not matches:
            continue
        weight = (sim[e.u, fu] + sim[e.v, fv]) / 2.0
        for e2 in matches:
            total += conserved_mass(e, e2) * weight
    return min(1.0, max(0.0, total / denom))


def score(f, g: TemporalNetwork, h: TemporalNetwork, sim: np.ndarray, alpha: float) -> ObjectiveScore:
    s_n = score_node_conservation(f, sim)
    return ObjectiveScore(s_n, score_edge_conservation(f, g, h, sim), alpha)


def ideal_score(g: TemporalNetwork, h: TemporalNetwork, true_map, sim: np.ndarray, alpha: float) -> ObjectiveScore:
    """Objective of a known ground-truth mapping."""
    mapping = _mapping(true_map)
    Alignment(tuple(mapping), alpha)  # validates totality and injectivity
    return score(mapping, g, h, sim, alpha)


class _Aligner:
    def __init__(self, g: TemporalNetwork, h: TemporalNetwork, sim: np.ndarray, alpha: float):
        self.g, self.h, self.sim, self.alpha = g, h, sim, alpha
        self.n_g, self.n_h = sim.shape
        self.mapping = [-1] * self.n_g
        self.h_used = np.zeros(self.n_h, dtype=bool)
        self.masked = np.array(sim, dtype=float, copy=True)
        self.denom = _event_mass_denominator(g, h)
        self.heap: list[tuple[float, int, int]] = []
        self.best: dict[tuple[int, int], float] = {}

    def _pair_events(self, net: TemporalNetwork, a: int, b: int):
        index = net.events_by_pair
        if net.directed:
            return index.get((a, b), ()), index.get((b, a), ())
        return index.get(pair_key(a, b, False), ()), ()

    def edge_gain(self, g: int, h: int) -> float:
        if self.denom == 0:
            return 0.0
        sim = self.sim
        gain = 0.0
        for g2 in self.g.aggregate_neighbors[g]:
            h2 = self.mapping[g2]
            if h2 < 0:
                continue
            weight = (sim[g, h] + sim[g2, h2]) / 2.0
            for ge, he in zip(self._pair_events(self.g, g, g2), self._pair_events(self.h, h, h2)):
                for e in ge:
                    for e2 in he:
                        gain += conserved_mass(e, e2) * weight
        return gain / self.denom

    def priority(self, g: int, h: int) -> float:
        p = (1.0 - self.alpha) * self.sim[g, h]
        if self.alpha > 0:
            p += self.alpha * self.edge_gain(g, h)
        return p

    def commit(self, g: int, h: int) -> None:
        self.mapping[g] = h
        self.h_used[h] = True
        self.masked[g, :] = -np.inf
        self.masked[:, h] = -np.inf
        h_nbrs = [x for x in self.h.aggregate_neighbors[h] if not self.h_used[x]]
        if not h_nbrs:
            return
        for g2 in self.g.aggregate_neighbors[g]:
            if self.mapping[g2] >= 0:
                continue
            for h2 in h_nbrs:
                p = self.priority(g2, h2)
                self.best[g2, h2] = p
                heapq.heappush(self.heap, (-p, g2, h2))

    def pop_frontier(self):
        while self.heap:
            neg_p, g, h = heapq.heappop(self.heap)
            if self.mapping[g] >= 0 or self.h_used[h] or self.best.get((g, h)) != -neg_p:
                continue
            return g, h
        return None

    def reseed(self) -> tuple[int, int]:
        flat = int(np.argmax(self.masked))
        return divmod(flat, self.n_h)

    def run(self) -> list[int]:
        aligned = 0
        while aligned < self.n_g:
            pair = self.pop_frontier()
            if pair is None:
                pair = self.reseed()
            self.commit(*pair)
            aligned += 1
        return self.mapping


def align(g: TemporalNetwork, h: TemporalNetwork, sim: np.ndarray, alpha: float = 0.0, seed: int = 0) -> Alignment:
    """Greedy seed-and-extend alignment of G into H.

    Seeds with the most similar pair, then repeatedly commits the best pair
    ``(g', h')`` where ``g'`` neighbours an aligned G node and ``h'`` neighbours
    its image; reseeds from the best unaligned pair when that frontier is
    exhausted. Ties break on ``(g, h)`` order, so the result is deterministic;
    ``seed`` is accepted for interface stability only.
    """
    sim = np.asarray(sim, dtype=float)
    if sim.shape != (g.n_nodes, h.n_nodes):
        raise ValueError(f"similarity shape {sim.shape} does not match ({g.n_nodes}, {h.n_nodes})")
    if g.n_nodes > h.n_nodes:
        raise ValueError("G must not have more nodes than H")
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must be in [0, 1]")
    if g.directed != h.directed:
        raise ValueError("cannot align a directed network with an undirected one")
    mapping = _Aligner(g, h, sim, alpha).run()
    return Alignment(tuple(mapping), alpha)


def format_alignment(f: Alignment, obj: ObjectiveScore, header=()) -> str:
    lines = [f"# {x}" for x in header]
    lines += [f"{gn}\t{hn}" for gn, hn in enumerate(f.mapping)]
    lines.append(f"# s_n={obj.s_n:.12g} s_e={obj.s_e:.12g} total={obj.total:.12g}")
    return "\n".join(lines) + "\n"
