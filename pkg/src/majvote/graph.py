"""Graph and opinion data model, deterministic generators, and edge-list I/O.

Nodes are the integers ``0..n-1``.  Opinions are ``uint8`` arrays with
1 = white and 0 = black.  Self-loops are never stored in the adjacency;
they live in a per-node flag consulted by the dynamics.
"""
from __future__ import annotations

import io
import sys
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid graph, parameters, or precondition."""


class ParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph in CSR form with optional self-loop flags."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    loops: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], loops=None) -> "Graph":
        if n < 0:
            raise GraphError("node count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}; use loop flags instead")
            adj[u].add(v)
            adj[v].add(u)
        return cls.from_adjacency([sorted(s) for s in adj], loops)

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Sequence[int]], loops=None) -> "Graph":
        n = len(adjacency)
        indptr = np.zeros(n + 1, dtype=np.int64)
        for v, nb in enumerate(adjacency):
            indptr[v + 1] = indptr[v] + len(nb)
        indices = np.fromiter(
            (u for nb in adjacency for u in nb), dtype=np.int64, count=int(indptr[-1])
        )
        if loops is None:
            lp = np.zeros(n, dtype=np.uint8)
        else:
            lp = np.asarray(loops, dtype=bool).astype(np.uint8)
            if lp.shape != (n,):
                raise GraphError("loop flags must have one entry per node")
        g = cls(n, _frozen(indptr), _frozen(indices), _frozen(lp))
        g.validate()
        return g

    def validate(self) -> None:
        """Check simplicity, symmetry and sortedness; raise GraphError otherwise."""
        n, idx = self.n, self.indices
        if idx.size == 0:
            return
        if idx.min() < 0 or idx.max() >= n:
            raise GraphError("neighbor id out of range")
        src = np.repeat(np.arange(n), self.degrees)
        if np.any(src == idx):
            raise GraphError(f"self-loop at {int(src[src == idx][0])} stored in adjacency")
        same_row = src[1:] == src[:-1]
        if np.any(same_row & (np.diff(idx) <= 0)):
            raise GraphError("neighbor lists must be sorted and duplicate-free")
        if not np.array_equal(np.sort(src * n + idx), np.sort(idx * n + src)):
            raise GraphError("adjacency is not symmetric")

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(u) for u in self.neighbors(v)) for v in range(self.n))

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def edge_count(self) -> int:
        return int(self.indptr[-1]) // 2

    @property
    def has_loops(self) -> bool:
        return bool(self.loops.any())

    def edges(self) -> list[tuple[int, int]]:
        return [(v, int(u)) for v in range(self.n) for u in self.neighbors(v) if v < u]

    def with_loop_flags(self, flags) -> "Graph":
        return Graph.from_adjacency(self.adjacency, flags)

    def induced_subgraph(self, nodes: Sequence[int]) -> "Graph":
        """Subgraph on ``nodes``; new id ``i`` is ``nodes[i]``. Loop flags are dropped."""
        index = {int(v): i for i, v in enumerate(nodes)}
        adj = [
            sorted(index[int(u)] for u in self.neighbors(int(v)) if int(u) in index)
            for v in nodes
        ]
        return Graph.from_adjacency(adj)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.loops, other.loops)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count}, loops={int(self.loops.sum())})"


@dataclass(frozen=True)
class GraphBundle:
    graph: Graph
    labels: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        for v in self.labels:
            if not 0 <= v < self.graph.n:
                raise GraphError(f"label on node {v} outside graph of size {self.graph.n}")


def degree_parity_counts(g: Graph) -> tuple[int, int]:
    """Return ``(odd_count, even_count)``; loop flags are ignored."""
    odd = int(np.count_nonzero(g.degrees % 2))
    return odd, g.n - odd


# --- opinions -------------------------------------------------------------


def as_opinions(f, n: int | None = None) -> np.ndarray:
    """Coerce ``f`` (bit string, sequence, or array) into a uint8 opinion vector."""
    if isinstance(f, str):
        if not set(f) <= {"0", "1"}:
            raise GraphError("opinion string may contain only '0' and '1'")
        arr = np.frombuffer(f.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(f)
        if arr.ndim != 1:
            raise GraphError("opinions must be one-dimensional")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise GraphError("opinions must be 0 or 1")
    arr = np.ascontiguousarray(arr, dtype=np.uint8)
    if n is not None and arr.shape[0] != n:
        raise GraphError(f"opinion vector has length {arr.shape[0]}, graph has {n} nodes")
    return arr


def format_opinions(f) -> str:
    return "".join("1" if b else "0" for b in np.asarray(f))


def parse_opinions(text: str) -> np.ndarray:
    """Accept a single 0/1 line or one bit per line; '#' lines are comments."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty opinion file")
    try:
        return as_opinions("".join(lines))
    except GraphError as exc:
        raise ParseError(str(exc)) from None


def read_opinions(source) -> np.ndarray:
    return parse_opinions(_read_text(source))


def write_opinions(f) -> bytes:
    return (format_opinions(f) + "\n").encode("utf-8")


# --- generators -----------------------------------------------------------


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise GraphError(message)


def path(n: int) -> GraphBundle:
    _require(n >= 1, "path needs n >= 1")
    return GraphBundle(Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)]))


def cycle(n: int) -> GraphBundle:
    _require(n >= 3, "cycle needs n >= 3")
    return GraphBundle(Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)]))


def complete(n: int) -> GraphBundle:
    _require(n >= 1, "complete graph needs n >= 1")
    return GraphBundle(Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)]))


def star(leaves: int) -> GraphBundle:
    """Center 0, leaves 1..leaves."""
    _require(leaves >= 0, "star needs leaves >= 0")
    g = Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
    return GraphBundle(g, {0: "center"})


def turan(n: int, r: int) -> GraphBundle:
    """Node i lies in part i mod r; nodes in different parts are adjacent."""
    _require(1 <= r <= n, "turan needs 1 <= r <= n")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if i % r != j % r]
    return GraphBundle(Graph.from_edges(n, edges), {i: f"part{i % r}" for i in range(n)})


def full_dary_tree(depth: int, d: int) -> GraphBundle:
    """Heap order: the children of node k are d*k+1 .. d*k+d."""
    _require(depth >= 0 and d >= 2, "full_dary_tree needs depth >= 0 and d >= 2")
    n = (d ** (depth + 1) - 1) // (d - 1)
    return GraphBundle(Graph.from_edges(n, [((v - 1) // d, v) for v in range(1, n)]), {0: "root"})


def grid(rows: int, cols: int) -> GraphBundle:
    """Node id = row * cols + col."""
    _require(rows >= 2 and cols >= 2, "grid needs rows, cols >= 2")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return GraphBundle(Graph.from_edges(rows * cols, edges))


def star_plus_path(leaves: int, path_len: int) -> GraphBundle:
    """Center 0, leaves 1..leaves, then a path of ``path_len`` nodes hanging off the center."""
    _require(leaves >= 1 and path_len >= 0, "star_plus_path needs leaves >= 1, path_len >= 0")
    edges = [(0, i) for i in range(1, leaves + 1)]
    prev = 0
    labels = {0: "center"}
    for k in range(path_len):
        v = leaves + 1 + k
        edges.append((prev, v))
        labels[v] = f"path{k}"
        prev = v
    return GraphBundle(Graph.from_edges(leaves + 1 + path_len, edges), labels)


def erdos_renyi(n: int, p: float, seed: int = 0) -> GraphBundle:
    _require(n >= 1, "erdos_renyi needs n >= 1")
    _require(0.0 <= p <= 1.0, "erdos_renyi needs 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return GraphBundle(Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist())))


GENERATORS = {
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "star": star,
    "turan": turan,
    "full_dary_tree": full_dary_tree,
    "grid": grid,
    "star_plus_path": star_plus_path,
    "erdos_renyi": erdos_renyi,
}


def generate(kind: str, *params, seed: int | None = None) -> GraphBundle:
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise GraphError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}") from None
    if kind == "erdos_renyi":
        return fn(*params, seed=0 if seed is None else seed)
    try:
        return fn(*params)
    except TypeError as exc:
        raise GraphError(f"bad parameters for {kind}: {exc}") from None


# --- traversal helpers ----------------------------------------------------


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(int(u))
    return dist


def components(g: Graph) -> list[list[int]]:
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for s in range(g.n):
        if not seen[s]:
            members = np.flatnonzero(bfs_distances(g, s) >= 0)
            seen[members] = True
            comps.append(members.tolist())
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or bool((bfs_distances(g, 0) >= 0).all())


def diameter(g: Graph) -> int:
    if not is_connected(g):
        raise GraphError("diameter of a disconnected graph is undefined")
    return max((int(bfs_distances(g, v).max()) for v in range(g.n)), default=0)


def is_bipartite(g: Graph) -> bool:
    side = np.full(g.n, -1, dtype=np.int64)
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if side[u] < 0:
                    side[u] = 1 - side[v]
                    queue.append(int(u))
                elif side[u] == side[v]:
                    return False
    return True


def augment_constant_diameter(g: Graph, f) -> tuple[GraphBundle, np.ndarray]:
    """Embed ``g`` in a graph of diameter at most 4 with the same dynamics on ``V(g)``.

    Layout: original nodes ``0..n-1``, clique C0 at ``n..2n-1`` (opinion 0),
    clique C1 at ``2n..3n-1`` (opinion 1), hub u0 = ``3n``, hub u1 = ``3n+1``.
    """
    if g.has_loops:
        raise GraphError("augment_constant_diameter expects a graph without loop flags")
    if not is_connected(g):
        raise GraphError("augment_constant_diameter requires a connected graph")
    f = as_opinions(f, g.n)
    n = g.n
    c0 = range(n, 2 * n)
    c1 = range(2 * n, 3 * n)
    u0, u1 = 3 * n, 3 * n + 1
    edges = list(g.edges())
    for block in (c0, c1):
        edges += [(a, b) for a in block for b in block if a < b]
    edges += [(u0, v) for v in range(n)] + [(u0, v) for v in c0]
    edges += [(u1, v) for v in range(n)] + [(u1, v) for v in c1]
    labels = {v: "C0" for v in c0} | {v: "C1" for v in c1} | {u0: "u0", u1: "u1"}
    ext = np.concatenate([f, np.zeros(n, np.uint8), np.ones(n, np.uint8), [0, 1]]).astype(np.uint8)
    return GraphBundle(Graph.from_edges(3 * n + 2, edges), labels), ext


# --- edge-list I/O --------------------------------------------------------


def _read_text(source) -> str:
    if isinstance(source, (str, Path)):
        if str(source) == "-":
            return sys.stdin.read()
        return Path(source).read_text(encoding="utf-8")
    if isinstance(source, bytes):
        return source.decode("utf-8")
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def parse_graph(text: str) -> GraphBundle:
    """Parse an edge list: ``u v`` per line, '#' comments, optional leading ``n <count>``."""
    declared: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if first and parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"malformed header {line!r}", lineno)
            declared = int(parts[1])
            first = False
            continue
        first = False
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative node id in {line!r}", lineno)
        if declared is not None and (u >= declared or v >= declared):
            raise ParseError(f"node id out of range for n={declared}: {line!r}", lineno)
        if u == v:
            raise ParseError(f"self-loop {line!r}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {line!r}", lineno)
        seen.add(key)
        edges.append(key)
    if declared is None:
        declared = 1 + max((max(e) for e in edges), default=-1)
    return GraphBundle(Graph.from_edges(declared, edges))


def read_graph(source) -> GraphBundle:
    return parse_graph(_read_text(source))


def write_graph(g: Graph) -> bytes:
    """Canonical edge list: header line, then ``u v`` with u < v in sorted order."""
    buf = io.StringIO()
    buf.write(f"n {g.n}\n")
    for u, v in g.edges():
        buf.write(f"{u} {v}\n")
    return buf.getvalue().encode("utf-8")
