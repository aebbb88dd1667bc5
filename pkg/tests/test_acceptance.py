"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py``.
"""
import itertools
import sys
from fractions import Fraction
from math import ceil

import networkx as nx
import numpy as np
import pytest

from majvote.dynamics import is_qfundamentalist, is_qswap, run, step, voting_time
from majvote.graph import Graph, complete, diameter, grid, is_bipartite, path, star_plus_path, turan
from majvote.potential import (
    arrow_consistent_assignments,
    bad_arrows,
    bound_E,
    bound_half_E,
    initial_potential,
    potential_trajectory,
    with_self_loops,
)
from majvote.reduction import CnfFormula, sample_unsat_ceiling, verify_satisfiable_direction
from majvote.search import exact_worst_case, serpentine_opinions
from majvote.symmetry import bound_asym

RESULTS: dict[int, str] = {}


def report(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[num] = line
    print(line)
    assert ok, line


def _random_graph(rng, n, p):
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def _random_connected(rng, n, p):
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        a, b = int(order[i]), int(order[rng.integers(i)])
        edges.add((min(a, b), max(a, b)))
    iu, ju = np.triu_indices(n, k=1)
    extra = rng.random(iu.size) < p
    edges.update(zip(iu[extra].tolist(), ju[extra].tolist()))
    return Graph.from_edges(n, sorted(edges))


def connected_graphs_up_to_8():
    """Every connected graph on <= 8 nodes up to isomorphism, with repeats.

    Sizes <= 7 come from the graph atlas.  A connected 8-node graph minus a
    non-cut vertex is a connected 7-node graph, so attaching a new node to
    every non-empty subset of each connected atlas graph on 7 nodes reaches
    all of them.
    """
    sevens = []
    for G in nx.graph_atlas_g()[1:]:
        if not nx.is_connected(G):
            continue
        edges = list(G.edges())
        yield Graph.from_edges(G.number_of_nodes(), edges)
        if G.number_of_nodes() == 7:
            sevens.append(edges)
    for edges in sevens:
        for mask in range(1, 1 << 7):
            yield Graph.from_edges(8, edges + [(v, 7) for v in range(7) if mask >> v & 1])


@pytest.mark.slow
def test_criterion_01_exhaustive_soundness():
    checked, assignments, bad = 0, 0, []
    for g in connected_graphs_up_to_8():
        worst = exact_worst_case(g, halve=False)
        asym, be, bh = bound_asym(g), bound_E(g), ceil(bound_half_E(g))
        if not (worst.max_voting_time <= asym and worst.max_voting_time <= be and worst.max_voting_time <= bh):
            bad.append((g.edges(), worst.max_voting_time, asym, be, bh))
        checked += 1
        assignments += worst.explored
    report(1, not bad and checked > 100_000,
           f"{checked} connected graphs (n<=8), {assignments} assignments, {len(bad)} violations")


def test_criterion_02_complete_graph():
    worst = {n: exact_worst_case(complete(n).graph).max_voting_time for n in range(2, 11)}
    asym = {n: bound_asym(complete(n).graph) for n in range(2, 11)}
    off = {n: t for n, t in worst.items() if t != 1}
    ok = not off and all(v == 1 for v in asym.values())
    report(2, ok, f"worst case {worst}; bound_asym all 1: {all(v == 1 for v in asym.values())}; "
                  f"mismatches {off}")


def test_criterion_03_turan_scaling():
    ns = (9, 12, 24, 48)
    asym = [bound_asym(turan(n, 3).graph) for n in ns]
    be = [bound_E(turan(n, 3).graph) for n in ns]
    ok = len(set(asym)) == 1 and asym[0] == 13 and all(a < b for a, b in zip(be, be[1:]))
    report(3, ok, f"bound_asym {[str(a) for a in asym]} (pinned 13); bound_E {be}")


def test_criterion_04_path_tightness():
    rows, ok = [], True
    for n in range(4, 13):
        g = path(n).graph
        f = [(i + 1) % 2 for i in range(n - 1)]
        f.append(f[-1])  # alternate except for the last two nodes
        t = voting_time(g, f)
        worst = exact_worst_case(g).max_voting_time
        ok &= t >= bound_E(g) - 2 and t == n - 2 and worst == n - 2
        rows.append(f"P{n}:T={t},worst={worst},bE={bound_E(g)}")
    report(4, ok, " ".join(rows))


def test_criterion_05_potential_monotonicity():
    rng = np.random.default_rng(5)
    instances, violations = 10_000, 0
    for _ in range(instances):
        n = int(rng.integers(1, 33))
        g = _random_graph(rng, n, float(rng.random()) * min(1.0, 6 / max(n, 1)))
        f = rng.integers(0, 2, n, dtype=np.uint8)
        T, phis = potential_trajectory(g, f)
        odd = int(np.count_nonzero(g.degrees % 2))
        strict = all(a > b for a, b in zip(phis[:T], phis[1 : T + 1]))
        if not (strict and phis[T] == phis[T + 1] and phis[0] <= g.edge_count - Fraction(odd, 2)):
            violations += 1
    report(5, violations == 0, f"{instances} instances, {violations} violations")


def test_criterion_06_g_gstar_equivalence():
    rng = np.random.default_rng(6)
    violations = 0
    for _ in range(1000):
        n = int(rng.integers(1, 25))
        g = _random_graph(rng, n, float(rng.random()) * 0.5)
        f = rng.integers(0, 2, n, dtype=np.uint8)
        a, b = run(g, f, trace=True), run(with_self_loops(g), f, trace=True)
        same = a.voting_time == b.voting_time and all(np.array_equal(x, y) for x, y in zip(a.states, b.states))
        violations += not same
    report(6, violations == 0, f"1000 instances, {violations} violations")


def _random_formula(rng, n, m):
    clauses = []
    for _ in range(m):
        vs = rng.integers(1, n + 1, 3)
        sg = rng.choice([-1, 1], 3)
        clauses.append(tuple(int(v * s) for v, s in zip(vs, sg)))
    return CnfFormula(n, tuple(clauses))


def test_criterion_07_reduction_satisfiable():
    rng = np.random.default_rng(7)
    done, failures, sizes = 0, [], []
    while done < 24:
        n, m = int(rng.integers(2, 5)), int(rng.integers(2, 7))
        phi = _random_formula(rng, n, m)
        sats = list(phi.satisfying_assignments())
        if not sats:
            continue
        a = sats[int(rng.integers(len(sats)))]
        try:
            rep = verify_satisfiable_direction(phi, a)
            if rep.voting_time != 4 + 4 * n:
                failures.append((phi, a, rep.voting_time))
        except Exception as exc:  # a schedule deviation is a failure of this criterion
            failures.append((phi, a, str(exc)))
        done += 1
        sizes.append(4 + 4 * n)
    report(7, not failures, f"{done} satisfiable formulas, T=4+4n in {done - len(failures)}; failures {failures[:2]}")


UNSAT = [
    CnfFormula(1, ((1, 1, 1), (-1, -1, -1))),
    CnfFormula(2, ((1, 2, 2), (1, -2, -2), (-1, 2, 2), (-1, -2, -2))),
    CnfFormula(2, ((1, 1, 1), (-1, 2, 2), (-1, -2, -2), (2, 1, -1), (1, 2, -2))),
    CnfFormula(3, tuple(tuple(s * v for s, v in zip(signs, (1, 2, 3))) for signs in itertools.product((1, -1), repeat=3))),
    CnfFormula(3, ((1, 2, 2), (1, -2, -2), (-1, 3, 3), (-1, -3, -3), (2, 3, -1))),
]


def test_criterion_08_reduction_unsat_sampling():
    rows, ok = [], True
    for i, phi in enumerate(UNSAT):
        assert not phi.is_satisfiable()
        try:
            rep = sample_unsat_ceiling(phi, 1000, seed=100 + i)
            rows.append(f"max {rep.max_voting_time} < {rep.threshold}")
            ok &= rep.hits == 0 and rep.samples >= 1000
        except Exception as exc:
            rows.append(str(exc))
            ok = False
    report(8, ok, f"{len(UNSAT)} unsat formulas x 1000 samples: " + "; ".join(rows))


def test_criterion_09_more_arrows_faster_convergence():
    g = star_plus_path(17, 3).graph
    bad = np.zeros(21, np.uint8)
    bad[1:9] = 1
    good = np.zeros(21, np.uint8)
    good[18:] = [1, 0, 1]
    tb, tg = voting_time(g, bad), voting_time(g, good)
    pb, pg = initial_potential(g, bad), initial_potential(g, good)
    report(9, tb == 1 and tg == 3 and pb > pg, f"T(bad)={tb} T(good)={tg} phi0(bad)={pb} phi0(good)={pg}")


def test_criterion_10_arrow_reconstruction():
    rng = np.random.default_rng(10)
    counts = {"bipartite": {}, "non-bipartite": {}}
    wrong, unverified = 0, 0
    for _ in range(200):
        n = int(rng.integers(2, 17))
        g = _random_connected(rng, n, float(rng.random()) * 0.4)
        f = rng.integers(0, 2, n, dtype=np.uint8)
        beta = bad_arrows(g, f, step(g, f))
        found = arrow_consistent_assignments(g, beta, "g")
        for h in found:
            if bad_arrows(g, h, step(g, h)).arrows != beta.arrows:
                unverified += 1
        key = "bipartite" if is_bipartite(g) else "non-bipartite"
        counts[key][len(found)] = counts[key].get(len(found), 0) + 1
        wrong += len(found) != (4 if key == "bipartite" else 2)
    report(10, wrong == 0 and unverified == 0,
           f"candidate counts {counts}; {wrong} graphs off the claimed count; {unverified} unverified")


def test_criterion_11_qswap_and_fundamentalist():
    rng = np.random.default_rng(11)
    swap_viol = fund_viol = fund_seen = 0
    for _ in range(1000):
        n = int(rng.integers(2, 20))
        g = _random_graph(rng, n, float(rng.random()) * 0.5)
        q = int(rng.integers(2))
        f = rng.integers(0, 2, n, dtype=np.uint8)
        fp = np.where(rng.random(n) < 0.3, q, f).astype(np.uint8)
        traj = run(g, f, trace=True)
        a, b = f, fp
        for _ in range(len(traj.states) + 2):
            swap_viol += not is_qswap(a, b, q)
            a, b = step(g, a), step(g, b)
        for t, s in enumerate(traj.states):
            for qq in (0, 1):
                if is_qfundamentalist(g, s, qq):
                    fund_seen += 1
                    fund_viol += voting_time(g, s) > 2 * int(np.count_nonzero(s != qq))
    report(11, swap_viol == 0 and fund_viol == 0,
           f"1000 trajectories: {swap_viol} q-swap violations; {fund_seen} fundamentalist states, {fund_viol} slow")


def test_criterion_12_grid_serpentine():
    ks = (2, 3, 4)
    times = [voting_time(grid(2 * k, 2 * k).graph, serpentine_opinions(2 * k, 2 * k)) for k in ks]
    sizes = [(2 * k) ** 2 for k in ks]
    c = min(Fraction(t, s) for t, s in zip(times, sizes))
    diams = [diameter(grid(2 * k, 2 * k).graph) for k in ks]
    increasing = all(a < b for a, b in zip(times, times[1:]))
    linear_diam = all(2 * k <= d <= 4 * k for k, d in zip(ks, diams))
    ok = increasing and c > 0 and c == Fraction(11, 36) and linear_diam
    report(12, ok, f"T={times} for n={sizes}; fitted c={c} ({float(c):.3f}); diameters {diams}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
