import itertools
import random

import networkx as nx
import networkx.algorithms.isomorphism as iso
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_network, temporal_networks
from oracles import to_nx
from tempalign.census import (brute_force_census, connected_sets, enumerate_occurrences, format_occurrences,
                              induced_adjacency)
from tempalign.network import TemporalNetwork
from tempalign.orbits import build_catalog


def _nx_census(snap, catalog):
    """Classify each connected induced subgraph by networkx isomorphism onto a catalog graphlet."""
    directed = catalog.directed
    templates = [(g, to_nx(g.adjacency, directed)) for g in catalog.graphlets]
    out = []
    for nodes in itertools.combinations(range(snap.n_nodes), catalog.k):
        sub = to_nx(induced_adjacency(snap, nodes), directed)
        ok = nx.is_weakly_connected(sub) if directed else nx.is_connected(sub)
        if not ok:
            continue
        for g, tmpl in templates:
            matcher = iso.DiGraphMatcher(sub, tmpl) if directed else iso.GraphMatcher(sub, tmpl)
            if matcher.is_isomorphic():
                out.append((nodes, tuple(g.position_orbits[matcher.mapping[i]] for i in range(len(nodes)))))
                break
    return sorted(out)


@pytest.mark.parametrize("mode, directed", [("undirected", False), ("directed", True)])
def test_matches_networkx_classification(mode, directed):
    rng = random.Random(5)
    for _ in range(10):
        net = random_network(rng, rng.randint(4, 9), 1, rng.uniform(0.2, 0.6), directed)
        snap = net.snapshot_at(1)
        for k in (3, 4):
            cat = build_catalog(k, mode)
            ours = sorted((o.nodes, o.orbits) for o in enumerate_occurrences(snap, cat))
            assert ours == _nx_census(snap, cat)


def test_triangle_and_chain():
    net = TemporalNetwork(3, 2, False, [(0, 1, 1, 2), (1, 2, 1, 2), (0, 2, 1, 1)])
    cat = build_catalog(3)
    assert [o.orbits for o in enumerate_occurrences(net.snapshot_at(1), cat)] == [(2, 2, 2)]
    assert [o.orbits for o in enumerate_occurrences(net.snapshot_at(2), cat)] == [(0, 1, 0)]


def test_empty_snapshot_has_no_occurrences():
    net = TemporalNetwork(5, 1, False)
    assert enumerate_occurrences(net.snapshot_at(1), build_catalog(3)) == []


def test_undirected_catalog_on_directed_snapshot_uses_underlying_graph():
    net = TemporalNetwork(3, 1, True, [(0, 1, 1, 1), (2, 1, 1, 1)])
    occ = enumerate_occurrences(net.snapshot_at(1), build_catalog(3))
    assert [o.orbits for o in occ] == [(0, 1, 0)]


def test_directed_catalog_needs_directed_snapshot():
    net = TemporalNetwork(3, 1, False, [(0, 1, 1, 1)])
    with pytest.raises(ValueError):
        enumerate_occurrences(net.snapshot_at(1), build_catalog(3, "directed"))


def test_brute_force_size_limit():
    with pytest.raises(ValueError):
        brute_force_census(TemporalNetwork(30, 1, False).snapshot_at(1), build_catalog(3))


def test_format_occurrences():
    net = TemporalNetwork(3, 1, False, [(0, 1, 1, 1), (1, 2, 1, 1)])
    text = format_occurrences(enumerate_occurrences(net.snapshot_at(1), build_catalog(3)))
    assert text == "t\tnodes\torbits\n1\t0,1,2\t0,1,0\n"


def test_connected_sets_counts_each_subset_once():
    g = nx.gnp_random_graph(12, 0.3, seed=3)
    nbrs = [set(g[v]) for v in range(12)]
    for k in (2, 3, 4):
        found = list(connected_sets(nbrs, k))
        assert len(found) == len(set(found))
        expected = {c for c in itertools.combinations(range(12), k) if nx.is_connected(g.subgraph(c))}
        assert set(found) == expected


@given(temporal_networks(max_nodes=9, max_T=1), st.sampled_from([2, 3, 4]), st.booleans())
def test_enumeration_equals_brute_force(net, k, directed_catalog):
    mode = "directed" if directed_catalog and net.directed else "undirected"
    cat = build_catalog(k, mode)
    snap = net.snapshot_at(1)
    assert sorted(enumerate_occurrences(snap, cat)) == sorted(brute_force_census(snap, cat))
