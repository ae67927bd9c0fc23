import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import temporal_networks
from oracles import got_oracle
from tempalign.census import enumerate_occurrences
from tempalign.gots import (extract_gots, feature_length, flatten, format_features, parse_features,
                            resolve_k_set)
from tempalign.network import TemporalNetwork
from tempalign.orbits import build_catalog

PERIPHERY, CENTER, TRIANGLE = 0, 1, 2


def triangle_to_chain():
    # t=1 triangle {0,1,2}; t=2 chain 0-1-2 (edge 0-2 removed)
    return TemporalNetwork(3, 2, False, [(0, 1, 1, 2), (1, 2, 1, 2), (0, 2, 1, 1)])


def test_triangle_to_chain_transitions():
    t = extract_gots(triangle_to_chain(), 3)
    expected = {0: (TRIANGLE, PERIPHERY), 1: (TRIANGLE, CENTER), 2: (TRIANGLE, PERIPHERY)}
    for node, cell in expected.items():
        m = t.matrix(node, 3)
        assert m[cell] == 1
        assert m.sum() == 1


def test_static_triangle_only_self_transitions():
    T = 5
    net = TemporalNetwork(4, T, False, [(0, 1, 1, T), (1, 2, 1, T), (0, 2, 1, T)])
    t = extract_gots(net, 3)
    for v in range(3):
        m = t.matrix(v, 3)
        assert m[TRIANGLE, TRIANGLE] == T - 1
        assert m.sum() == T - 1
    assert t.matrix(3, 3).sum() == 0


def test_vanishing_subgraph_gives_no_transition():
    net = TemporalNetwork(3, 2, False, [(0, 1, 1, 1), (1, 2, 1, 1)])
    assert flatten(extract_gots(net, 3)).nnz == 0


def test_gap_still_pairs_unless_strict():
    net = TemporalNetwork(3, 3, False, [(0, 1, 1, 1), (1, 2, 1, 1), (0, 1, 3, 3), (1, 2, 3, 3)])
    assert extract_gots(net, 3).matrix(1, 3)[CENTER, CENTER] == 1
    assert flatten(extract_gots(net, 3, strict_consecutive=True)).nnz == 0


def test_flatten_lengths():
    t = extract_gots(triangle_to_chain(), (3, 4))
    assert flatten(t).shape == (3, 130)
    assert feature_length(t) == 130
    assert flatten(t, [3]).shape == (3, 9)
    with pytest.raises(KeyError):
        flatten(t, [2])


def test_isolated_node_has_zero_vector():
    net = TemporalNetwork(4, 2, False, [(0, 1, 1, 2), (1, 2, 1, 2)])
    assert flatten(extract_gots(net, (3, 4)))[3].nnz == 0


def test_directed_features():
    net = TemporalNetwork(3, 2, True, [(0, 1, 1, 2), (1, 2, 1, 1), (2, 1, 2, 2)])
    t = extract_gots(net, 3, "directed")
    assert t.orbit_counts[3] == 30
    assert np.array_equal(np.stack([t.matrix(v, 3) for v in range(3)]), got_oracle(net, 3, "directed"))
    with pytest.raises(ValueError):
        extract_gots(TemporalNetwork(3, 1, False), 3, "directed")


def test_k_sets():
    assert resolve_k_set("u34") == ("undirected", (3, 4))
    assert resolve_k_set("d3") == ("directed", (3,))
    assert resolve_k_set("u4", include_k2=True) == ("undirected", (2, 4))
    with pytest.raises(ValueError):
        resolve_k_set("x5")


def test_features_round_trip():
    t = extract_gots(triangle_to_chain(), (3, 4))
    text = format_features(t, header=["k-set=u34"])
    assert text.startswith("# k-set=u34\n0\t")
    assert np.array_equal(parse_features(text), flatten(t).toarray())


def test_threads_do_not_change_counts():
    net = TemporalNetwork(6, 3, False, [(0, 1, 1, 3), (1, 2, 1, 2), (2, 3, 2, 3), (0, 2, 1, 1), (3, 4, 1, 3)])
    a = extract_gots(net, (3, 4), threads=1)
    b = extract_gots(net, (3, 4), threads=2)
    assert (flatten(a) != flatten(b)).nnz == 0


def _dense(net, k, mode="undirected"):
    t = extract_gots(net, k, mode)
    return np.stack([t.matrix(v, k) for v in range(net.n_nodes)])


@given(temporal_networks(max_nodes=7, max_T=4), st.sampled_from([3, 4]))
def test_matches_pair_and_count_oracle(net, k):
    assert np.array_equal(_dense(net, k), got_oracle(net, k, "undirected"))
    if net.directed and k == 3:
        assert np.array_equal(_dense(net, k, "directed"), got_oracle(net, k, "directed"))


@given(temporal_networks(max_nodes=7, max_T=4), st.data())
def test_relabelling_permutes_rows(net, data):
    perm = data.draw(st.permutations(range(net.n_nodes)))
    moved = TemporalNetwork(net.n_nodes, net.T, net.directed,
                            [(perm[e.u], perm[e.v], e.start, e.end) for e in net.events])
    a, b = _dense(net, 3), _dense(moved, 3)
    for v in range(net.n_nodes):
        assert np.array_equal(a[v], b[perm[v]])


@given(temporal_networks(max_nodes=7, max_T=4))
def test_time_reversal_transposes(net):
    T = net.T
    rev = TemporalNetwork(net.n_nodes, T, net.directed,
                          [(e.u, e.v, T + 1 - e.end, T + 1 - e.start) for e in net.events])
    assert np.array_equal(_dense(rev, 3), _dense(net, 3).transpose(0, 2, 1))


@given(temporal_networks(max_nodes=7, max_T=4), st.sampled_from([3, 4]))
def test_mass_is_k_times_matched_pairs(net, k):
    cat = build_catalog(k)
    seen, pairs = set(), 0
    for snap in net.snapshots():
        sets = {o.nodes for o in enumerate_occurrences(snap, cat)}
        pairs += len(sets & seen)
        seen |= sets
    assert _dense(net, k).sum() == k * pairs
