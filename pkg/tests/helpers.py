"""Random network factories shared by the tests."""

import random

from hypothesis import strategies as st

from tempalign.network import TemporalNetwork


def random_network(rng: random.Random, n: int, T: int, density: float, directed: bool) -> TemporalNetwork:
    events = []
    for t in range(1, T + 1):
        for u in range(n):
            for v in range(n):
                if u != v and (directed or u < v) and rng.random() < density:
                    events.append((u, v, t, t))
    return TemporalNetwork(n, T, directed, events)


@st.composite
def temporal_networks(draw, max_nodes=8, max_T=4, directed=None):
    n = draw(st.integers(2, max_nodes))
    T = draw(st.integers(1, max_T))
    d = draw(st.booleans()) if directed is None else directed
    event = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(1, T), st.integers(0, T - 1))
    raw = draw(st.lists(event, max_size=3 * n * T))
    events = [(u, v, s, min(T, s + extra)) for u, v, s, extra in raw if u != v]
    return TemporalNetwork(n, T, d, events)
