"""Event randomization schemes used to build noisy copies of a network."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import Event, TemporalNetwork, pair_key

SCHEMES = ("undirected", "directed", "pure_directed")
DEFAULT_LEVELS = tuple(round(0.02 * i, 2) for i in range(11))
PARTNER_ATTEMPTS = 20


@dataclass(frozen=True)
class NoiseSpec:
    scheme: str
    p: float
    gamma: float = 0.5
    rng_seed: int = 0
    swap_timestamps: bool = False

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if not 0 <= self.p <= 1:
            raise ValueError("p must be in [0, 1]")
        if not 0 <= self.gamma <= 1:
            raise ValueError("gamma must be in [0, 1]")


class _EventPool:
    """Mutable event list with a per-pair index for collision checks."""

    def __init__(self, net: TemporalNetwork):
        self.directed = net.directed
        self.events = list(net.events)
        self.by_pair: dict[tuple[int, int], set[int]] = {}
        for i, e in enumerate(self.events):
            self.by_pair.setdefault(pair_key(e.u, e.v, self.directed), set()).add(i)

    def _key(self, e) -> tuple[int, int]:
        return pair_key(e[0], e[1], self.directed)

    def collides(self, e, ignore: tuple[int, ...]) -> bool:
        """Would ``e`` be a self-loop or touch/overlap a same-pair event (merging on load)?"""
        if e[0] == e[1]:
            return True
        for j in self.by_pair.get(self._key(e), ()):
            if j in ignore:
                continue
            other = self.events[j]
            if e[2] <= other.end + 1 and other.start <= e[3] + 1:
                return True
        return False

    def replace(self, i: int, e) -> None:
        old = self.events[i]
        self.by_pair[self._key(old)].discard(i)
        new = Event(*pair_key(e[0], e[1], self.directed), e[2], e[3])
        self.events[i] = new
        self.by_pair.setdefault(self._key(new), set()).add(i)


def _crossover(e1: Event, e2: Event, variant: int, swap_timestamps: bool):
    u, v = e1.u, e1.v
    u2, v2 = e2.u, e2.v
    s2, f2 = (e1.start, e1.end) if swap_timestamps else (e2.start, e2.end)
    if variant == 0:
        return (u, v2, e1.start, e1.end), (u2, v, s2, f2)
    return (u, u2, e1.start, e1.end), (v, v2, s2, f2)


def _compatible(e1, e2, pool: _EventPool, i: int, j: int) -> bool:
    if e1[0] == e1[1] or e2[0] == e2[1]:
        return False
    if pool._key(e1) == pool._key(e2) and e1[2] <= e2[3] + 1 and e2[2] <= e1[3] + 1:
        return False
    return not (pool.collides(e1, (i, j)) or pool.collides(e2, (i, j)))


def _rewire(net: TemporalNetwork, spec: NoiseSpec, rng) -> list[Event]:
    pool = _EventPool(net)
    todo = [int(x) for x in rng.permutation(len(pool.events))]
    while todo:
        i = todo.pop()
        if not todo or rng.random() >= spec.p:
            continue
        for _ in range(PARTNER_ATTEMPTS):
            pos = int(rng.integers(len(todo)))
            j = todo[pos]
            variant = int(rng.integers(2))
            new1, new2 = _crossover(pool.events[i], pool.events[j], variant, spec.swap_timestamps)
            if not _compatible(new1, new2, pool, i, j):
                continue
            pool.replace(i, new1)
            pool.replace(j, new2)
            if spec.scheme == "directed":
                for idx in (i, j):
                    if rng.random() < spec.gamma:
                        e = pool.events[idx]
                        flipped = (e.v, e.u, e.start, e.end)
                        if not pool.collides(flipped, (idx,)):
                            pool.replace(idx, flipped)
            todo[pos] = todo[-1]
            todo.pop()
            break
    return pool.events


def _pure_directed(net: TemporalNetwork, spec: NoiseSpec, rng) -> list[Event]:
    events = list(net.events)
    flip = rng.random(len(events)) < spec.p
    # a flip that would merge with an unflipped reciprocal event is undone; repeat to a fixed point
    while True:
        live: dict[tuple[int, int], list[int]] = {}
        for i, e in enumerate(events):
            key = (e.v, e.u) if flip[i] else (e.u, e.v)
            live.setdefault(key, []).append(i)
        undo = set()
        for idxs in live.values():
            if len(idxs) < 2:
                continue
            idxs = sorted(idxs, key=lambda i: (events[i].start, i))
            for a, b in zip(idxs, idxs[1:]):
                if events[b].start <= events[a].end + 1:
                    undo.update(i for i in (a, b) if flip[i])
        if not undo:
            break
        for i in undo:
            flip[i] = False
    return [Event(e.v, e.u, e.start, e.end) if f else e for e, f in zip(events, flip)]


def randomize(net: TemporalNetwork, spec: NoiseSpec) -> TemporalNetwork:
    if spec.scheme in ("directed", "pure_directed") and not net.directed:
        raise ValueError(f"scheme {spec.scheme!r} needs a directed network")
    if spec.scheme == "undirected" and net.directed:
        raise ValueError("scheme 'undirected' needs an undirected network")
    rng = np.random.default_rng(spec.rng_seed)
    if spec.p == 0:
        return TemporalNetwork(net.n_nodes, net.T, net.directed, net.events)
    if spec.scheme == "pure_directed":
        events = _pure_directed(net, spec, rng)
    else:
        events = _rewire(net, spec, rng)
    out = TemporalNetwork(net.n_nodes, net.T, net.directed, events)
    assert len(out.events) == len(net.events), "randomization changed the event count"
    return out


@dataclass(frozen=True)
class NoisyCopy:
    level: float
    instance: int
    seed: int
    network: TemporalNetwork


def ladder_seed(base_seed: int, level_index: int, instance: int) -> int:
    return base_seed + 100 * level_index + instance


def noise_ladder(net: TemporalNetwork, scheme: str, levels=DEFAULT_LEVELS, instances_per_level: int = 5,
                 base_seed: int = 0, gamma: float = 0.5, swap_timestamps: bool = False) -> list[NoisyCopy]:
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    out = []
    for li, level in enumerate(levels):
        for inst in range(instances_per_level):
            seed = ladder_seed(base_seed, li, inst)
            spec = NoiseSpec(scheme, level, gamma, seed, swap_timestamps)
            out.append(NoisyCopy(level, inst, seed, randomize(net, spec)))
    return out
