"""Shared helpers: a dict-of-sets reference simulator and random graph sources."""
import itertools
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from majvote.graph import Graph


def ref_step(adj, loops, f):
    """Majority update written straight from the rule, no vectorisation."""
    out = list(f)
    for v, nbrs in enumerate(adj):
        white = sum(f[u] for u in nbrs) + (f[v] if loops[v] else 0)
        total = len(nbrs) + (1 if loops[v] else 0)
        if 2 * white > total:
            out[v] = 1
        elif 2 * white < total:
            out[v] = 0
    return out


def ref_voting_time(adj, loops, f):
    seq = [list(f), ref_step(adj, loops, f)]
    t = 0
    while True:
        nxt = ref_step(adj, loops, seq[-1])
        if nxt == seq[t]:
            return t
        seq.append(nxt)
        t += 1


def adj_sets(g: Graph):
    return [set(int(u) for u in g.neighbors(v)) for v in range(g.n)]


def ref_worst_case(g: Graph):
    adj, loops = adj_sets(g), [int(x) for x in g.loops]
    return max(ref_voting_time(adj, loops, bits) for bits in itertools.product((0, 1), repeat=g.n))


def random_graph(rng, n, p, loops=False):
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    g = Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))
    if loops:
        g = g.with_loop_flags(rng.random(n) < 0.5)
    return g


def random_connected_graph(rng, n, p):
    """Random spanning tree plus independent extra edges (always connected)."""
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        a, b = int(order[i]), int(order[rng.integers(i)])
        edges.add((min(a, b), max(a, b)))
    iu, ju = np.triu_indices(n, k=1)
    extra = rng.random(iu.size) < p
    edges.update(zip(iu[extra].tolist(), ju[extra].tolist()))
    return Graph.from_edges(n, sorted(edges))


@st.composite
def graphs(draw, max_nodes=10, allow_loops=False):
    n = draw(st.integers(1, max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    g = Graph.from_edges(n, chosen)
    if allow_loops:
        flags = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        g = g.with_loop_flags(flags)
    return g


@st.composite
def graph_and_opinions(draw, max_nodes=10, allow_loops=False):
    g = draw(graphs(max_nodes, allow_loops))
    f = draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    return g, np.array(f, dtype=np.uint8)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
