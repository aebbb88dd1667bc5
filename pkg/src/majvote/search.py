"""Worst-case voting time: exhaustive enumeration, sampling, and the grid serpentine."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dynamics import default_budget, run
from .graph import Graph, GraphError, as_opinions

DEFAULT_NODE_LIMIT = 22
DEFAULT_SEED = 0


class SearchError(GraphError):
    pass


@dataclass(frozen=True)
class WorstCaseResult:
    max_voting_time: int
    witness: np.ndarray
    mode: str  # "exact", "sampled" or "local-search"
    explored: int


def _code_to_opinions(code: int, n: int) -> np.ndarray:
    return np.array([(code >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    bounds = np.linspace(0, total, parts + 1).astype(np.int64)
    return [(int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if b > a]


def exact_worst_case(
    g: Graph,
    node_limit: int = DEFAULT_NODE_LIMIT,
    workers: int = 1,
    halve: bool = True,
    backend: str | None = None,
) -> WorstCaseResult:
    """Maximum voting time over all initial assignments.

    With ``halve`` node 0 is pinned to 0, which loses nothing because
    complementing an assignment leaves its voting time unchanged.  The
    witness is the lexicographically smallest maximiser.
    """
    if g.n > node_limit:
        raise SearchError(
            f"{g.n} nodes exceeds node_limit={node_limit}; raise the limit or use sampled_worst_case"
        )
    if g.n == 0:
        return WorstCaseResult(0, np.zeros(0, np.uint8), "exact", 1)
    impl = kernels if backend is None else kernels.get_backend(backend)
    total = 1 << (g.n - 1 if halve else g.n)
    budget = default_budget(g)
    ranges = _chunks(total, 4 * workers if workers > 1 else 1)

    def scan(r):
        return impl.worst_case_range(g.indptr, g.indices, g.loops, g.n, r[0], r[1], budget)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(scan, ranges))
    else:
        parts = [scan(r) for r in ranges]

    best_t, best_code, explored = -1, 0, 0
    for t, code, cnt in parts:
        t, code, cnt = int(t), int(code), int(cnt)
        if t == -2:
            raise SearchError(f"budget {budget} exceeded for assignment code {code}")
        explored += cnt
        if t > best_t or (t == best_t and code < best_code):
            best_t, best_code = t, code
    return WorstCaseResult(best_t, _code_to_opinions(best_code, g.n), "exact", explored)


def sampled_worst_case(
    g: Graph,
    samples: int,
    seed: int = DEFAULT_SEED,
    climb_steps: int = 0,
    initial=(),
) -> WorstCaseResult:
    """Lower bound on the worst case from random assignments plus hill climbing.

    ``initial`` injects extra starting assignments.  The climb flips one random
    node at a time and keeps the flip whenever the voting time does not drop.
    """
    if samples < 1:
        raise SearchError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    explored = 0
    best_t, best_f = -1, None

    def consider(f):
        nonlocal best_t, best_f, explored
        t = run(g, f).require().voting_time
        explored += 1
        if t > best_t or (t == best_t and f.tobytes() < best_f.tobytes()):
            best_t, best_f = t, f.copy()
        return t

    for f in initial:
        consider(as_opinions(f, g.n))
    for _ in range(samples):
        consider(rng.integers(0, 2, size=g.n, dtype=np.uint8))

    if climb_steps and g.n:
        cur, cur_t = best_f.copy(), best_t
        for _ in range(climb_steps):
            v = int(rng.integers(g.n))
            cur[v] ^= 1
            t = consider(cur)
            if t >= cur_t:
                cur_t = t
            else:
                cur[v] ^= 1
    mode = "local-search" if climb_steps else "sampled"
    return WorstCaseResult(best_t, best_f, mode, explored)


def serpentine_opinions(rows: int, cols: int) -> np.ndarray:
    """White snake on an otherwise black ``rows x cols`` grid.

    Rows ``0, 3, 6, ...`` are white over columns ``1..cols-2``, joined by
    two-cell vertical connectors that alternate between column ``cols-2`` and
    column 1.  The snake starts in corner ``(0, 0)``, where a tie pins it, so
    the only free end erodes one cell per round.  Two-row black separators
    keep every black cell at or below half white neighbours.  Ids follow the
    grid generator: ``row * cols + col``.
    """
    if rows < 2 or cols < 3:
        raise GraphError("serpentine needs rows >= 2 and cols >= 3")
    f = np.zeros((rows, cols), dtype=np.uint8)
    white_rows = list(range(0, rows, 3))
    for r in white_rows:
        f[r, 1 : cols - 1] = 1
    f[0, 0] = 1
    for k, r in enumerate(white_rows[:-1]):
        f[r + 1 : r + 3, cols - 2 if k % 2 == 0 else 1] = 1
    return f.reshape(-1)
