"""Twin families, the asymmetric graph, and the family-contraction bound.

Two nodes are in one family iff ``N(u) - {v} == N(v) - {u}``.  Non-adjacent
such pairs share their open neighbourhood (false twins), adjacent ones their
closed neighbourhood (true twins), so grouping nodes by those two keys and
joining the groups with a union-find recovers the family partition.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .graph import Graph, GraphError, degree_parity_counts


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class Family:
    members: tuple[int, ...]
    kind: str  # "clique", "independent" or "singleton"
    degree: int

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True)
class FamilyPartition:
    classes: tuple[Family, ...]
    class_of: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def proper(self) -> tuple[Family, ...]:
        return tuple(c for c in self.classes if c.size > 1)


def families(g: Graph) -> FamilyPartition:
    if g.has_loops:
        raise GraphError("families are defined on the simple graph; drop loop flags first")
    uf = _UnionFind(g.n)
    open_groups: dict[tuple[int, ...], int] = {}
    closed_groups: dict[tuple[int, ...], int] = {}
    for v in range(g.n):
        nb = tuple(int(u) for u in g.neighbors(v))
        # dict lookup compares the full tuple, so hash collisions never merge
        first = open_groups.setdefault(nb, v)
        if first != v:
            uf.union(first, v)
        closed = tuple(sorted(nb + (v,)))
        first = closed_groups.setdefault(closed, v)
        if first != v:
            uf.union(first, v)

    buckets: dict[int, list[int]] = {}
    for v in range(g.n):
        buckets.setdefault(uf.find(v), []).append(v)
    ordered = sorted(buckets.values(), key=lambda m: m[0])
    class_of = [0] * g.n
    classes = []
    deg = g.degrees
    for idx, members in enumerate(ordered):
        for v in members:
            class_of[v] = idx
        if len(members) == 1:
            kind = "singleton"
        elif g.has_edge(members[0], members[1]):
            kind = "clique"
        else:
            kind = "independent"
        classes.append(Family(tuple(members), kind, int(deg[members[0]])))
    return FamilyPartition(tuple(classes), tuple(class_of))


def families_bruteforce(g: Graph) -> FamilyPartition:
    """Quadratic reference partition straight from the pairwise definition."""
    if g.has_loops:
        raise GraphError("families are defined on the simple graph")
    nbs = [set(int(u) for u in g.neighbors(v)) for v in range(g.n)]
    uf = _UnionFind(g.n)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if nbs[u] - {v} == nbs[v] - {u}:
                uf.union(u, v)
    buckets: dict[int, list[int]] = {}
    for v in range(g.n):
        buckets.setdefault(uf.find(v), []).append(v)
    ordered = sorted(buckets.values(), key=lambda m: m[0])
    class_of = [0] * g.n
    classes = []
    for idx, members in enumerate(ordered):
        for v in members:
            class_of[v] = idx
        if len(members) == 1:
            kind = "singleton"
        else:
            kind = "clique" if members[1] in nbs[members[0]] else "independent"
        classes.append(Family(tuple(members), kind, len(nbs[members[0]])))
    return FamilyPartition(tuple(classes), tuple(class_of))


@dataclass(frozen=True)
class AsymmetricReduction:
    g_delta: Graph
    kept_nodes: tuple[int, ...]  # G^Δ node id -> original id
    class_of: tuple[int, ...]
    partition: FamilyPartition

    @property
    def stats(self) -> dict[str, int]:
        odd, even = degree_parity_counts(self.g_delta)
        return {
            "nodes": self.g_delta.n,
            "edges": self.g_delta.edge_count,
            "v_odd": odd,
            "v_even": even,
        }


def _keep_count(fam: Family) -> int:
    if fam.size == 1:
        return 1
    if fam.kind == "independent" and fam.odd:
        return 1
    return 2


def asymmetric_graph(g: Graph, choose=None) -> AsymmetricReduction:
    """Induced subgraph keeping one or two members of each family.

    ``choose(members, k)`` picks the ``k`` kept members; the default takes the
    smallest ids so the result is canonical.
    """
    part = families(g)
    pick = choose or (lambda members, k: members[:k])
    kept = []
    for fam in part.classes:
        kept.extend(pick(fam.members, _keep_count(fam)))
    kept.sort()
    return AsymmetricReduction(g.induced_subgraph(kept), tuple(kept), part.class_of, part)


@dataclass(frozen=True)
class AsymmetricBound:
    branch_E: Fraction
    branch_half_E: Fraction
    reduction: AsymmetricReduction

    @property
    def value(self) -> Fraction:
        return 1 + min(self.branch_E, self.branch_half_E)

    @property
    def ceiling(self) -> int:
        return ceil(self.value)


def bound_asym_details(g: Graph) -> AsymmetricBound:
    red = asymmetric_graph(g)
    st = red.stats
    branch_E = Fraction(st["edges"]) - Fraction(st["v_odd"], 2)
    branch_half = Fraction(st["edges"], 2) + Fraction(st["v_even"], 4) + Fraction(7 * st["nodes"], 4)
    return AsymmetricBound(branch_E, branch_half, red)


def bound_asym(g: Graph) -> Fraction:
    """``1 + min(|E'| - |V'_odd|/2, |E'|/2 + |V'_even|/4 + 7|V'|/4)`` on G^Δ."""
    return bound_asym_details(g).value
