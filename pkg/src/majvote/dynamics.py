"""Synchronous majority dynamics with the lazy tie rule."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph, GraphError, as_opinions, format_opinions


class BudgetExceeded(RuntimeError):
    """Raised by :meth:`Trajectory.require` when a run hit its round budget."""


def default_budget(g: Graph) -> int:
    # One past the proven 2|E| + 1 bound; loops add at most one arrow per node.
    return 2 * (g.edge_count + int(g.loops.sum())) + 2


@dataclass(frozen=True)
class Trajectory:
    """Outcome of :func:`run`.

    ``voting_time`` is ``None`` when the budget ran out (``converged`` is
    then False).  ``states`` is only populated for traced runs and holds
    ``f_0 .. f_{T+1}``.
    """

    n: int
    voting_time: int | None
    period_pair: tuple[np.ndarray, np.ndarray]
    states: tuple[np.ndarray, ...] | None = None
    budget: int | None = None

    @property
    def converged(self) -> bool:
        return self.voting_time is not None

    def require(self) -> "Trajectory":
        if not self.converged:
            raise BudgetExceeded(f"no 2-periodic state within {self.budget} rounds")
        return self

    def to_json(self) -> str:
        rounds = [format_opinions(s) for s in (self.states or ())]
        return json.dumps({"n": self.n, "voting_time": self.voting_time, "rounds": rounds})


def step(g: Graph, f) -> np.ndarray:
    f = as_opinions(f, g.n)
    return kernels.step(g.indptr, g.indices, g.loops, f)


def run(g: Graph, f0, max_rounds: int | None = None, trace: bool = False) -> Trajectory:
    """Iterate until ``f_{t+2} == f_t``; ``T`` is the least such ``t``.

    Rounds beyond ``max_rounds`` (default ``2|E| + 2``) are not simulated and
    the returned trajectory reports ``converged == False``.
    """
    f0 = as_opinions(f0, g.n).copy()
    budget = default_budget(g) if max_rounds is None else int(max_rounds)
    if budget < 0:
        raise GraphError("max_rounds must be non-negative")
    if not trace:
        t, a, b = kernels.voting_time(g.indptr, g.indices, g.loops, f0, budget)
        if t < 0:
            return Trajectory(g.n, None, (a, b), budget=budget)
        return Trajectory(g.n, int(t), (a, b), budget=budget)

    states = [f0, step(g, f0)]
    t = 0
    while True:
        nxt = step(g, states[-1])
        if np.array_equal(nxt, states[t]):
            break
        if t >= budget:
            return Trajectory(g.n, None, (states[-2], states[-1]), tuple(states), budget)
        states.append(nxt)
        t += 1
    return Trajectory(g.n, t, (states[t], states[t + 1]), tuple(states), budget)


def voting_time(g: Graph, f0, max_rounds: int | None = None) -> int:
    return run(g, f0, max_rounds).require().voting_time  # type: ignore[return-value]


def stabilization_profile(traj: Trajectory) -> np.ndarray:
    """Per node, the first round from which it follows its final 2-periodic pattern."""
    if traj.states is None or not traj.converged:
        raise GraphError("stabilization_profile needs a converged, traced trajectory")
    T = traj.voting_time
    states = np.stack(traj.states)
    final = np.stack([traj.period_pair[(t - T) % 2] for t in range(states.shape[0])])
    off = states != final
    profile = np.zeros(traj.n, dtype=np.int64)
    for v in range(traj.n):
        bad = np.flatnonzero(off[:, v])
        if bad.size:
            profile[v] = bad[-1] + 1
    return profile


def is_qswap(f, fprime, q: int) -> bool:
    f = as_opinions(f)
    fprime = as_opinions(fprime, f.shape[0])
    return bool(np.all((fprime == f) | (fprime == q)))


def is_qfundamentalist(g: Graph, f, q: int) -> bool:
    f = as_opinions(f, g.n)
    return is_qswap(f, step(g, step(g, f)), q)
