"""3-CNF to majority-dynamics gadget graph, plus checks of its timing behaviour.

Node layout for ``n`` variables, ``m`` clauses and clique size ``ell``:

* literal cliques, ``ell`` nodes each, in the order x1, ~x1, x2, ~x2, ...;
  the first three nodes of each are its representatives
* K_white, then K_black (``ell`` nodes each); ports are their lowest ids
* one OR output per clause
* the AND node ``u_0`` followed by the gate path ``u_1 .. u_{4n}``
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .dynamics import run, stabilization_profile
from .graph import Graph, GraphBundle, GraphError, _read_text, as_opinions, is_connected


class CnfError(ValueError):
    pass


class ReductionError(GraphError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]  # DIMACS literals: +i for x_i, -i for ~x_i

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3:
                raise CnfError(f"clause {clause} does not have exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise CnfError(f"literal {lit} out of range for {self.num_vars} variables")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def evaluate(self, a) -> bool:
        a = [bool(x) for x in a]
        if len(a) != self.num_vars:
            raise CnfError(f"assignment has {len(a)} values, formula has {self.num_vars} variables")
        return all(any(a[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)

    def satisfying_assignments(self):
        for bits in itertools.product((False, True), repeat=self.num_vars):
            if self.evaluate(bits):
                yield bits

    def is_satisfiable(self) -> bool:
        return next(self.satisfying_assignments(), None) is not None

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {self.num_clauses}"]
        lines += [" ".join(str(l) for l in c) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_cnf(data) -> CnfFormula:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfError(f"line {lineno}: malformed header {line!r}") from None
            continue
        if header is None:
            raise CnfError(f"line {lineno}: clause before 'p cnf' header")
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError:
            raise CnfError(f"line {lineno}: non-integer literal in {line!r}") from None
    if header is None:
        raise CnfError("missing 'p cnf' header")
    n, m = header
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for t in tokens:
        if t == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(t)
    if cur:
        raise CnfError("last clause is not terminated by 0")
    if len(clauses) != m:
        raise CnfError(f"header announces {m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))  # type: ignore[arg-type]


def read_cnf(source) -> CnfFormula:
    return parse_cnf(_read_text(source))


@dataclass(frozen=True)
class ReductionLayout:
    bundle: GraphBundle
    formula: CnfFormula
    ell: int
    h: int
    literal_cliques: dict[int, tuple[int, ...]]
    representatives: dict[int, tuple[int, ...]]
    k_white: tuple[int, ...]
    k_black: tuple[int, ...]
    white_ports: tuple[int, ...]
    black_ports: tuple[int, ...]
    or_outputs: tuple[int, ...]
    path: tuple[int, ...]  # path[0] is the AND node u_0, path[i] is u_i
    rep_external_degree: dict[int, int] = field(default_factory=dict)

    @property
    def graph(self) -> Graph:
        return self.bundle.graph

    @property
    def and_node(self) -> int:
        return self.path[0]

    @property
    def gates(self) -> list[tuple[int, int, int, int]]:
        """Node ids v1..v4 of each 2/3-gate, in chain order."""
        return [tuple(self.path[1 + 4 * i : 5 + 4 * i]) for i in range((len(self.path) - 1) // 4)]

    @property
    def expected_voting_time(self) -> int:
        return self.h + 1

    def roles_json(self) -> str:
        doc = {
            "ell": self.ell,
            "h": self.h,
            "num_vars": self.formula.num_vars,
            "num_clauses": self.formula.num_clauses,
            "nodes": self.graph.n,
            "literal_cliques": {str(l): [ids[0], ids[-1] + 1] for l, ids in self.literal_cliques.items()},
            "representatives": {str(l): list(r) for l, r in self.representatives.items()},
            "k_white": [self.k_white[0], self.k_white[-1] + 1],
            "k_black": [self.k_black[0], self.k_black[-1] + 1],
            "white_ports": list(self.white_ports),
            "black_ports": list(self.black_ports),
            "or_outputs": list(self.or_outputs),
            "and_gate": self.and_node,
            "path": list(self.path),
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def _literal_slot(lit: int) -> int:
    return 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)


def build_reduction(phi: CnfFormula) -> ReductionLayout:
    n, m = phi.num_vars, phi.num_clauses
    if m < 2:
        raise ReductionError("the AND gate needs at least two clauses")
    if n < 1:
        raise ReductionError("formula has no variables")
    ell = 10 * (m + n) + 1
    h = 3 + 4 * n

    cliques, reps = {}, {}
    for i in range(1, n + 1):
        for lit in (i, -i):
            base = _literal_slot(lit) * ell
            cliques[lit] = tuple(range(base, base + ell))
            reps[lit] = cliques[lit][:3]
    kw0 = 2 * n * ell
    k_white = tuple(range(kw0, kw0 + ell))
    k_black = tuple(range(kw0 + ell, kw0 + 2 * ell))
    or_base = kw0 + 2 * ell
    or_outputs = tuple(range(or_base, or_base + m))
    u0 = or_base + m
    path = tuple(range(u0, u0 + 4 * n + 1))
    total = u0 + 4 * n + 1

    edges: list[tuple[int, int]] = []
    for block in list(cliques.values()) + [k_white, k_black]:
        edges += [(a, b) for a, b in itertools.combinations(block, 2)]

    occurrence = {lit: 0 for lit in cliques}
    used_black = {0}
    for j, clause in enumerate(phi.clauses):
        v = or_outputs[j]
        seen = set()
        pads = 0
        for lit in clause:
            if lit in seen:
                # x or x == x or False: a repeated slot reads a K_black pair
                pair = (k_black[2 * pads], k_black[2 * pads + 1])
                used_black.update((2 * pads, 2 * pads + 1))
                pads += 1
            else:
                seen.add(lit)
                k = occurrence[lit]
                occurrence[lit] += 1
                pair = (reps[lit][k % 3], reps[lit][(k + 1) % 3])
            edges += [(v, pair[0]), (v, pair[1])]
        edges += [(v, k_white[p]) for p in range(4)]
        edges.append((v, u0))
    edges += [(u0, k_black[p]) for p in range(m - 2)]
    used_black.update(range(m - 2))
    for i in range(1, 4 * n + 1):
        edges.append((path[i - 1], path[i]))
        edges += [(path[i], k_white[0]), (path[i], k_white[1])]
    for var in range(1, n + 1):
        gate_input = path[4 * (var - 1) + 1]
        edges += [(gate_input, r) for r in reps[var] + reps[-var]]
    edges.append((path[-1], k_black[0]))

    labels: dict[int, str] = {}
    for lit, ids in cliques.items():
        name = f"x{lit}" if lit > 0 else f"~x{-lit}"
        for v in ids:
            labels[v] = f"lit:{name}"
        for v in reps[lit]:
            labels[v] = f"rep:{name}"
    for v in k_white:
        labels[v] = "K_white"
    for v in k_black:
        labels[v] = "K_black"
    for j, v in enumerate(or_outputs):
        labels[v] = f"or:{j}"
    for i, v in enumerate(path):
        labels[v] = "and" if i == 0 else f"u:{i}"

    g = Graph.from_edges(total, edges)
    white_ports = k_white[:4]
    black_ports = tuple(k_black[p] for p in sorted(used_black))
    layout = ReductionLayout(
        GraphBundle(g, labels),
        phi,
        ell,
        h,
        cliques,
        reps,
        k_white,
        k_black,
        white_ports,
        black_ports,
        or_outputs,
        path,
        _external_degrees(g, cliques, reps),
    )
    check_layout(layout)
    return layout


def _external_degrees(g: Graph, cliques, reps) -> dict[int, int]:
    out = {}
    for lit, rs in reps.items():
        members = set(cliques[lit])
        for r in rs:
            out[r] = sum(1 for u in g.neighbors(r) if int(u) not in members)
    return out


def check_layout(layout: ReductionLayout) -> None:
    """Assert the structural invariants the timing argument depends on."""
    g, ell, phi = layout.graph, layout.ell, layout.formula
    n, m = phi.num_vars, phi.num_clauses
    deg = g.degrees

    def fail(msg):
        raise ReductionError(f"layout invariant violated: {msg}")

    if ell != 10 * (m + n) + 1 or ell % 2 == 0:
        fail("clique size")
    if layout.h != 3 + 4 * n:
        fail("layer count")
    if g.n != 2 * n * ell + 2 * ell + m + 1 + 4 * n:
        fail("node count")
    if not is_connected(g):
        fail("graph is disconnected")
    white = set(layout.k_white)
    black = set(layout.k_black)
    reps_all = {r for rs in layout.representatives.values() for r in rs}

    for v in layout.or_outputs:
        nb = [int(u) for u in g.neighbors(v)]
        n_white = sum(u in white for u in nb)
        n_in = sum(u in reps_all or u in black for u in nb)
        if (n_in, n_white, deg[v]) != (6, 4, 11) or layout.and_node not in nb:
            fail(f"OR output {v} wiring")
    u0 = layout.and_node
    nb0 = [int(u) for u in g.neighbors(u0)]
    if (
        sum(u in layout.or_outputs for u in nb0) != m
        or sum(u in black for u in nb0) != m - 2
        or layout.path[1] not in nb0
        or deg[u0] != 2 * m - 1
    ):
        fail("AND gate wiring")
    for i in range(1, len(layout.path)):
        v = layout.path[i]
        nb = [int(u) for u in g.neighbors(v)]
        n_white = sum(u in white for u in nb)
        if n_white != 2:
            fail(f"gate node u_{i} needs two K_white neighbours")
        if i % 4 != 1 and 2 * n_white != len(nb):
            fail(f"gate node u_{i} is unbalanced")
        if i % 4 == 1:
            var = (i - 1) // 4 + 1
            need = set(layout.representatives[var] + layout.representatives[-var])
            if not need <= set(nb):
                fail(f"gate input u_{i} misses representatives")
    if sum(int(u) in black for u in g.neighbors(layout.path[-1])) != 1:
        fail("final gate output must touch K_black exactly once")

    for clique in (layout.k_white, layout.k_black):
        members = set(clique)
        for v in clique:
            ext = sum(1 for u in g.neighbors(v) if int(u) not in members)
            if 2 * ext >= ell - 1:
                fail(f"port {v} carries {ext} external edges")
    for r, ext in layout.rep_external_degree.items():
        if ext >= ell // 2:
            fail(f"representative {r} carries {ext} external edges")


def assignment_to_opinions(layout: ReductionLayout, a) -> np.ndarray:
    """Opinions encoding a Boolean assignment ``a`` (one truth value per variable)."""
    a = [bool(x) for x in a]
    if len(a) != layout.formula.num_vars:
        raise ReductionError(f"assignment has {len(a)} values, formula has {layout.formula.num_vars}")
    f = np.zeros(layout.graph.n, dtype=np.uint8)
    half = layout.ell // 2
    for lit, ids in layout.literal_cliques.items():
        if a[abs(lit) - 1] == (lit > 0):
            # reps are the lowest ids, so they fall in the black half
            f[list(ids[half:])] = 1
    f[list(layout.k_white)] = 1
    return f


def decode_assignment(layout: ReductionLayout, f) -> tuple[bool, ...]:
    """Majority colour of each positive literal clique, read as a Boolean assignment."""
    f = as_opinions(f, layout.graph.n)
    return tuple(
        bool(2 * int(f[list(layout.literal_cliques[i])].sum()) > layout.ell)
        for i in range(1, layout.formula.num_vars + 1)
    )


@dataclass(frozen=True)
class SatisfiableReport:
    voting_time: int
    expected: int
    layer_times: dict[str, object]

    @property
    def ok(self) -> bool:
        return self.voting_time == self.expected

    def summary(self) -> str:
        return f"voting_time={self.voting_time} expected={self.expected} {'OK' if self.ok else 'FAIL'}"


def _settle_round(profile, pair, v, color):
    # round from which v permanently shows ``color``; None if it ends elsewhere
    if pair[0][v] != color or pair[1][v] != color:
        return None
    return int(profile[v])


def verify_satisfiable_direction(phi: CnfFormula, a, layout: ReductionLayout | None = None) -> SatisfiableReport:
    """Run from the encoding of a satisfying ``a`` and check the staged schedule.

    Raises ReductionError on any deviation from the expected schedule.
    """
    if not phi.evaluate(a):
        raise ReductionError("assignment does not satisfy the formula")
    layout = layout or build_reduction(phi)
    f0 = assignment_to_opinions(layout, a)
    traj = run(layout.graph, f0, trace=True).require()
    profile = stabilization_profile(traj)
    pair = traj.period_pair
    problems = []

    def expect(label, v, color, rnd):
        got = _settle_round(profile, pair, v, color)
        if got != rnd:
            problems.append(f"{label} node {v}: settled on {color} at {got}, expected {rnd}")
        return got

    a = [bool(x) for x in a]
    half = layout.ell // 2
    rep_rounds = []
    for lit, ids in layout.literal_cliques.items():
        positive = a[abs(lit) - 1] == (lit > 0)
        reps = set(layout.representatives[lit])
        for v in ids:
            if not positive:
                expect("negative literal", v, 0, 0)
            elif v in reps:
                rnd = 1 if layout.rep_external_degree[v] <= 1 else 2
                rep_rounds.append(expect("representative", v, 1, rnd))
            else:
                expect("literal", v, 1, 1 if v < ids[half] else 0)
    for v in layout.k_white:
        expect("K_white", v, 1, 0)
    for v in layout.k_black:
        expect("K_black", v, 0, 0)
    or_rounds = [expect("OR", v, 1, 3) for v in layout.or_outputs]
    path_rounds = [expect(f"u_{i}", v, 1, 4 + i) for i, v in enumerate(layout.path)]
    expected = layout.expected_voting_time
    if traj.voting_time != expected:
        problems.append(f"voting time {traj.voting_time}, expected {expected}")
    if problems:
        raise ReductionError("; ".join(problems[:5]))
    return SatisfiableReport(
        traj.voting_time,
        expected,
        {
            "literal_non_representatives": 1,
            "representatives": max(rep_rounds),
            "or_outputs": max(or_rounds),
            "and_gate": path_rounds[0],
            "path": path_rounds[1:],
        },
    )


@dataclass(frozen=True)
class CeilingReport:
    threshold: int  # h + 1
    max_voting_time: int
    samples: int
    hits: int
    satisfiable: bool
    decode_failures: int
    histogram: dict[int, int]

    @property
    def ok(self) -> bool:
        if not self.satisfiable:
            return self.max_voting_time < self.threshold
        return self.decode_failures == 0


def sample_unsat_ceiling(phi: CnfFormula, num_samples: int, seed: int = 0) -> CeilingReport:
    """Largest voting time seen over random and assignment-shaped initial opinions.

    On an unsatisfiable formula no sample may reach ``h + 1``; a sample that
    does raises ReductionError.
    """
    layout = build_reduction(phi)
    g = layout.graph
    rng = np.random.default_rng(seed)
    starts = [rng.integers(0, 2, size=g.n, dtype=np.uint8) for _ in range(num_samples)]
    n = phi.num_vars
    if n <= 12:
        bool_vectors = list(itertools.product((False, True), repeat=n))
    else:
        bool_vectors = [tuple(bool(x) for x in rng.integers(0, 2, size=n)) for _ in range(num_samples)]
    starts += [assignment_to_opinions(layout, a) for a in bool_vectors]

    threshold = layout.h + 1
    best, hits, failures = -1, 0, 0
    hist: dict[int, int] = {}
    for f in starts:
        t = run(g, f).require().voting_time
        hist[t] = hist.get(t, 0) + 1
        best = max(best, t)
        if t >= threshold:
            hits += 1
            guess = decode_assignment(layout, f)
            if np.array_equal(f, assignment_to_opinions(layout, guess)) and not phi.evaluate(guess):
                failures += 1
    report = CeilingReport(
        threshold, best, len(starts), hits, phi.is_satisfiable(), failures, dict(sorted(hist.items()))
    )
    if not report.satisfiable and hits:
        raise ReductionError(
            f"{hits} samples reached voting time >= {threshold} on an unsatisfiable formula"
        )
    return report
