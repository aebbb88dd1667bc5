"""Vectorised numpy twins of the compiled kernels."""
import numpy as np

_BATCH = 4096


def _rows(indptr):
    return np.repeat(np.arange(indptr.shape[0] - 1), np.diff(indptr))


def step(indptr, indices, loops, f):
    n = f.shape[0]
    ones = np.bincount(_rows(indptr), weights=f[indices], minlength=n).astype(np.int64)
    total = np.diff(indptr).astype(np.int64)
    lp = loops.astype(bool)
    ones[lp] += f[lp]
    total[lp] += 1
    zeros = total - ones
    out = f.copy()
    out[zeros > ones] = 0
    out[ones > zeros] = 1
    return out


def voting_time(indptr, indices, loops, f0, max_rounds):
    s0 = f0.copy()
    s1 = step(indptr, indices, loops, s0)
    t = 0
    while True:
        s2 = step(indptr, indices, loops, s1)
        if np.array_equal(s2, s0):
            return t, s0, s1
        if t >= max_rounds:
            return -1, s0, s1
        t += 1
        s0, s1 = s1, s2


def count_bad_arrows(indptr, indices, loops, f, fnext):
    src = _rows(indptr)
    count = int(np.count_nonzero(fnext[indices] != f[src]))
    lp = loops.astype(bool)
    return count + int(np.count_nonzero(fnext[lp] != f[lp]))


def _batch_step(adj, deg, lp, F):
    ones = F @ adj + F * lp
    zeros = deg - ones
    out = F.copy()
    out[zeros > ones] = 0
    out[ones > zeros] = 1
    return out


def _batch_times(adj, deg, lp, F, max_rounds):
    """Voting time per row of F; -1 where the budget runs out."""
    s0 = F
    s1 = _batch_step(adj, deg, lp, s0)
    times = np.full(F.shape[0], -1, dtype=np.int64)
    pending = np.ones(F.shape[0], dtype=bool)
    t = 0
    while True:
        s2 = _batch_step(adj, deg, lp, s1)
        done = pending & np.all(s2 == s0, axis=1)
        times[done] = t
        pending &= ~done
        if not pending.any() or t >= max_rounds:
            return times
        t += 1
        s0, s1 = s1, s2


def worst_case_range(indptr, indices, loops, n, lo, hi, max_rounds):
    adj = np.zeros((n, n), dtype=np.int64)
    adj[_rows(indptr), indices] = 1
    lp = loops.astype(np.int64)
    deg = adj.sum(axis=0) + lp
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    best_t, best_code, explored = -1, 0, 0
    for start in range(lo, hi, _BATCH):
        c = np.arange(start, min(hi, start + _BATCH), dtype=np.int64)
        codes = c ^ (c >> 1)
        F = ((codes[:, None] >> shifts[None, :]) & 1).astype(np.int64)
        times = _batch_times(adj, deg, lp, F, max_rounds)
        if (times < 0).any():
            bad = int(np.flatnonzero(times < 0)[0])
            return -2, int(codes[bad]), explored + bad + 1
        explored += codes.shape[0]
        top = int(times.max())
        code = int(codes[times == top].min())
        if top > best_t or (top == best_t and code < best_code):
            best_t, best_code = top, code
    return best_t, best_code, explored
