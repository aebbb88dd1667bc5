import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from majvote.dynamics import run, voting_time
from majvote.graph import Graph, GraphError, complete, cycle, path, star, turan
from majvote.potential import bound_E, bound_half_E
from majvote.search import exact_worst_case
from majvote.symmetry import (
    asymmetric_graph,
    bound_asym,
    bound_asym_details,
    families,
    families_bruteforce,
)

from conftest import graphs, random_graph


def as_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def planted_graph(rng, n_base, p):
    """Random graph whose nodes are blown up into random true/false twin groups."""
    base = random_graph(rng, n_base, p)
    sizes = rng.integers(1, 4, n_base)
    kinds = rng.integers(0, 2, n_base)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    edges = []
    for v in range(n_base):
        members = range(offsets[v], offsets[v + 1])
        if kinds[v]:
            edges += [(a, b) for a in members for b in members if a < b]
        for u in base.neighbors(v):
            if u > v:
                edges += [(a, b) for a in members for b in range(offsets[u], offsets[u + 1])]
    return Graph.from_edges(int(offsets[-1]), edges)


def test_family_examples():
    for n in (2, 5, 8):
        part = families(complete(n).graph)
        assert len(part) == 1 and part.classes[0].kind == "clique" and part.classes[0].size == n
    part = families(star(4).graph)
    assert [c.members for c in part.classes] == [(0,), (1, 2, 3, 4)]
    assert part.classes[1].kind == "independent" and part.classes[1].odd
    part = families(cycle(4).graph)
    assert [(c.members, c.kind, c.degree) for c in part.classes] == [
        ((0, 2), "independent", 2),
        ((1, 3), "independent", 2),
    ]
    with pytest.raises(GraphError):
        families(cycle(4).graph.with_loop_flags([1, 0, 0, 0]))


def test_families_match_bruteforce(rng):
    for _ in range(80):
        g = planted_graph(rng, int(rng.integers(1, 20)), float(rng.random()))
        assert families(g) == families_bruteforce(g)


@settings(max_examples=100, deadline=None)
@given(graphs(max_nodes=12))
def test_partition_invariants(g):
    part = families(g)
    nbs = [set(int(u) for u in g.neighbors(v)) for v in range(g.n)]
    seen = sorted(v for c in part.classes for v in c.members)
    assert seen == list(range(g.n))
    for idx, c in enumerate(part.classes):
        for u in c.members:
            assert part.class_of[u] == idx
            assert len(nbs[u]) == c.degree
            for v in c.members:
                if u != v:
                    assert nbs[u] - {v} == nbs[v] - {u}
                    assert (v in nbs[u]) == (c.kind == "clique")
    reps = [c.members[0] for c in part.classes]
    for i, u in enumerate(reps):
        for v in reps[i + 1 :]:
            assert nbs[u] - {v} != nbs[v] - {u}


def test_gdelta_examples():
    for n in (2, 3, 7):
        red = asymmetric_graph(complete(n).graph)
        assert red.g_delta == complete(2).graph and red.kept_nodes == (0, 1)
    for k in (3, 4, 7):
        red = asymmetric_graph(star(k).graph)
        assert red.g_delta == complete(2).graph and red.kept_nodes == (0, 1)
    red = asymmetric_graph(turan(9, 3).graph)
    assert red.stats == {"nodes": 6, "edges": 12, "v_odd": 0, "v_even": 6}
    assert nx.is_isomorphic(as_nx(red.g_delta), as_nx(turan(6, 3).graph))


def test_gdelta_keep_counts(rng):
    for _ in range(50):
        g = planted_graph(rng, int(rng.integers(2, 12)), 0.4)
        red = asymmetric_graph(g)
        kept = set(red.kept_nodes)
        for c in red.partition.classes:
            k = len(kept & set(c.members))
            if c.size == 1:
                assert k == 1
            elif c.kind == "independent" and c.odd:
                assert k == 1
            else:
                assert k == 2
        assert red.g_delta == g.induced_subgraph(list(red.kept_nodes))


def test_representative_choice_irrelevant(rng):
    for _ in range(40):
        g = planted_graph(rng, int(rng.integers(2, 10)), 0.5)
        a = asymmetric_graph(g).g_delta
        b = asymmetric_graph(g, choose=lambda members, k: members[-k:]).g_delta
        assert nx.is_isomorphic(as_nx(a), as_nx(b))


def test_bound_asym_examples():
    for n in range(2, 11):
        assert bound_asym(complete(n).graph) == 1
    assert bound_asym(star(3).graph) == 1
    assert exact_worst_case(star(3).graph).max_voting_time <= 1
    for n in (9, 12, 24):
        d = bound_asym_details(turan(n, 3).graph)
        assert (d.branch_E, d.value, d.ceiling) == (12, 13, 13)


@settings(max_examples=100, deadline=None)
@given(graphs(max_nodes=10))
def test_bound_asym_against_plain_bounds(g):
    b = bound_asym(g)
    assert b <= min(bound_E(g), bound_half_E(g))
    if asymmetric_graph(g).g_delta.n == g.n:
        assert b == min(bound_E(g), bound_half_E(g))


def test_family_synchronisation(rng):
    for _ in range(100):
        g = planted_graph(rng, int(rng.integers(2, 8)), 0.5)
        part = families(g)
        traj = run(g, rng.integers(0, 2, g.n, dtype=np.uint8), trace=True)
        states = np.stack(traj.states)
        for c in part.proper:
            m = list(c.members)
            for a in m:
                for b in m:
                    agree = states[:, a] == states[:, b]
                    first = np.argmax(agree) if agree.any() else len(agree)
                    assert agree[first:].all()


def test_two_sets_share_trajectories(rng):
    for _ in range(100):
        g = planted_graph(rng, int(rng.integers(2, 8)), 0.5)
        f = rng.integers(0, 2, g.n, dtype=np.uint8)
        states = np.stack(run(g, f, trace=True).states)
        for c in families(g).proper:
            for colour in (0, 1):
                s = [v for v in c.members if f[v] == colour]
                for v in s[1:]:
                    assert np.array_equal(states[:, v], states[:, s[0]])


def test_gdelta_can_converge_faster_per_assignment():
    # not a theorem: only the worst case is dominated
    g = Graph.from_edges(3, [(0, 1), (0, 2)])
    red = asymmetric_graph(g)
    f = np.array([0, 1, 0], np.uint8)
    assert voting_time(g, f) == 1
    assert voting_time(red.g_delta, f[list(red.kept_nodes)]) == 0
    assert exact_worst_case(red.g_delta).max_voting_time <= exact_worst_case(g).max_voting_time


@pytest.mark.parametrize(
    "edges,witness,kept",
    [
        ([(0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 7), (3, 7), (4, 7)], "01101000", (0, 1, 2, 3, 5, 7)),
        ([(0, 1), (0, 3), (0, 4), (1, 2), (1, 4), (1, 7), (2, 5), (2, 6), (5, 7), (6, 7)], "00011111", (0, 1, 2, 3, 4, 5, 6)),
    ],
)
def test_single_node_contraction_undercounts(edges, witness, kept):
    # Contracting an odd-degree independent family to one node loses rounds on
    # these graphs: the worst case exceeds the asymmetric bound.
    g = Graph.from_edges(8, edges)
    d = bound_asym_details(g)
    assert d.reduction.kept_nodes == kept
    assert d.value == 5
    assert voting_time(g, witness) == 6
    assert exact_worst_case(g).max_voting_time == 6
    assert exact_worst_case(d.reduction.g_delta).max_voting_time == 4
    assert 6 <= bound_E(g)
