"""Bad-arrow potential, the self-loop graph G*, and closed-form voting-time bounds."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import kernels
from .dynamics import run, step
from .graph import (
    Graph,
    GraphError,
    ParseError,
    _read_text,
    as_opinions,
    components,
    degree_parity_counts,
    is_connected,
)

MODES = ("gstar", "g")


@dataclass(frozen=True)
class ArrowSet:
    """Directed arrows ``(v, u)``; ``(v, v)`` stands for a self-loop arrow."""

    arrows: frozenset[tuple[int, int]]

    @property
    def count(self) -> int:
        return len(self.arrows)

    def __len__(self) -> int:
        return len(self.arrows)

    def __contains__(self, arrow) -> bool:
        return tuple(arrow) in self.arrows

    def sorted(self) -> list[tuple[int, int]]:
        return sorted(self.arrows)

    def to_text(self) -> str:
        return "".join(f"{v} {u}\n" for v, u in self.sorted())

    def check_against(self, g: Graph) -> None:
        for v, u in self.arrows:
            if v == u:
                if not (0 <= v < g.n and g.loops[v]):
                    raise GraphError(f"loop arrow ({v}, {v}) but node {v} has no self-loop")
            elif not (0 <= v < g.n and 0 <= u < g.n and g.has_edge(v, u)):
                raise GraphError(f"arrow ({v}, {u}) is not an edge")


def parse_arrows(text: str) -> ArrowSet:
    arrows = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'v u', got {line!r}", lineno)
        try:
            arrows.add((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"non-integer node id in {line!r}", lineno) from None
    return ArrowSet(frozenset(arrows))


def read_arrows(source) -> ArrowSet:
    return parse_arrows(_read_text(source))


def with_self_loops(g: Graph) -> Graph:
    """G*: flag a self-loop on every even-degree node."""
    if g.has_loops:
        raise GraphError("graph already carries loop flags")
    return g.with_loop_flags(g.degrees % 2 == 0)


def _resolve(g: Graph, mode: str) -> Graph:
    if mode not in MODES:
        raise GraphError(f"mode must be one of {MODES}")
    if mode == "gstar" and not g.has_loops:
        return with_self_loops(g)
    return g


def bad_arrows(g: Graph, f_t, f_next) -> ArrowSet:
    """Arrows ``(v, u)`` with ``f_next[u] != f_t[v]``, loops included when flagged."""
    f_t = as_opinions(f_t, g.n)
    f_next = as_opinions(f_next, g.n)
    src = np.repeat(np.arange(g.n), g.degrees)
    hit = f_next[g.indices] != f_t[src]
    arrows = set(zip(src[hit].tolist(), g.indices[hit].tolist()))
    loop_hit = np.flatnonzero(g.loops.astype(bool) & (f_next != f_t))
    arrows.update((int(v), int(v)) for v in loop_hit)
    return ArrowSet(frozenset(arrows))


def count_bad_arrows(g: Graph, f_t, f_next) -> int:
    return int(kernels.count_bad_arrows(g.indptr, g.indices, g.loops, f_t, f_next))


def initial_potential(g: Graph, f0, mode: str = "gstar") -> int:
    """Number of bad arrows between ``f0`` and its successor."""
    h = _resolve(g, mode)
    f0 = as_opinions(f0, g.n)
    return count_bad_arrows(h, f0, step(h, f0))


def potential_trajectory(g: Graph, f0) -> tuple[int, list[int]]:
    """Return ``(T, [phi_0, ..., phi_{T+1}])`` with phi measured on G*."""
    gs = with_self_loops(g)
    traj = run(g, f0, trace=True).require()
    states = list(traj.states) + [traj.states[traj.voting_time]]
    phis = [count_bad_arrows(gs, a, b) for a, b in zip(states, states[1:])]
    return traj.voting_time, phis


# --- closed-form bounds ---------------------------------------------------


def bound_two_E(g: Graph) -> int:
    return 2 * g.edge_count + 1


def bound_badarrows(g: Graph, f0) -> int:
    return 1 + initial_potential(g, f0, "gstar")


def bound_E(g: Graph) -> int:
    odd, _ = degree_parity_counts(g)
    assert odd % 2 == 0, "handshake lemma violated"
    return 1 + g.edge_count - odd // 2


def bound_half_E(g: Graph) -> Fraction:
    _, even = degree_parity_counts(g)
    return 1 + Fraction(g.edge_count, 2) + Fraction(even, 4) + Fraction(7 * g.n, 4)


# --- reconstruction from arrows -------------------------------------------


def arrow_consistent_assignments(g: Graph, beta: ArrowSet, mode: str = "gstar") -> list[np.ndarray]:
    """All ``f0`` whose bad arrows (against ``step(f0)``) are exactly ``beta``.

    Each arrow ``(v, u)`` fixes ``f1[u] xor f0[v]``.  Propagating these parities
    from a seed node pins every ``f0``/``f1`` value up to one free bit per
    component of the constraint graph, so at most four candidates survive on a
    connected graph; each is then checked against the true successor.
    """
    if g.has_loops:
        raise GraphError("pass the simple graph; mode selects G or G*")
    h = _resolve(g, mode)
    if not is_connected(g):
        raise GraphError("arrow_consistent_assignments requires a connected graph")
    beta.check_against(h)
    n = g.n
    # variable v is f0[v]; variable n + v is f1[v]
    links: list[list[tuple[int, int]]] = [[] for _ in range(2 * n)]
    for v in range(n):
        for u in h.neighbors(v):
            par = int((v, int(u)) in beta.arrows)
            links[v].append((n + int(u), par))
            links[n + int(u)].append((v, par))
        if h.loops[v]:
            par = int((v, v) in beta.arrows)
            links[v].append((n + v, par))
            links[n + v].append((v, par))

    value = np.full(2 * n, -1, dtype=np.int64)
    comps: list[list[int]] = []
    for s in range(2 * n):
        if value[s] >= 0:
            continue
        value[s] = 0
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, par in links[x]:
                want = value[x] ^ par
                if value[y] < 0:
                    value[y] = want
                    comp.append(y)
                    queue.append(y)
                elif value[y] != want:
                    return []
        comps.append(comp)

    found = []
    for flips in itertools.product((0, 1), repeat=len(comps)):
        x = value.copy()
        for flip, comp in zip(flips, comps):
            if flip:
                x[comp] ^= 1
        f0 = x[:n].astype(np.uint8)
        if np.array_equal(step(h, f0), x[n:].astype(np.uint8)):
            found.append(f0)
    found.sort(key=lambda f: f.tobytes())
    return found


def arrow_consistent_assignments_product(
    g: Graph, beta: ArrowSet, mode: str = "gstar", limit: int = 64
) -> list[np.ndarray]:
    """Per-component reconstruction combined by Cartesian product (at most ``limit``)."""
    beta.check_against(_resolve(g, mode))
    per_comp = []
    total = 1
    for comp in components(g):
        sub = g.induced_subgraph(comp)
        index = {v: i for i, v in enumerate(comp)}
        local = ArrowSet(
            frozenset((index[v], index[u]) for v, u in beta.arrows if v in index and u in index)
        )
        cands = arrow_consistent_assignments(sub, local, mode)
        total *= len(cands)
        if total > limit:
            raise GraphError(f"more than {limit} candidate assignments; refusing to enumerate")
        per_comp.append((comp, cands))
    out = []
    for choice in itertools.product(*(c for _, c in per_comp)):
        f = np.zeros(g.n, dtype=np.uint8)
        for (comp, _), part in zip(per_comp, choice):
            f[comp] = part
        out.append(f)
    out.sort(key=lambda f: f.tobytes())
    return out


def bounds_report(g: Graph, f0: Iterable[int] | None = None) -> dict:
    """Key/value summary used by the ``bounds`` subcommand."""
    from .symmetry import bound_asym_details

    odd, even = degree_parity_counts(g)
    half = bound_half_E(g)
    asym = bound_asym_details(g)
    rep = {
        "edges": g.edge_count,
        "v_odd": odd,
        "v_even": even,
        "bound_2E": bound_two_E(g),
        "bound_E": bound_E(g),
        "bound_halfE": str(half),
        "bound_halfE_ceil": -(-half.numerator // half.denominator),
        "bound_asym": str(asym.value),
        "bound_asym_ceil": asym.ceiling,
    }
    if f0 is not None:
        f0 = as_opinions(f0, g.n)
        rep["voting_time"] = run(g, f0).require().voting_time
        rep["phi0_G"] = initial_potential(g, f0, "g")
        rep["phi0_Gstar"] = initial_potential(g, f0, "gstar")
        rep["bound_badarrows"] = bound_badarrows(g, f0)
    return rep
