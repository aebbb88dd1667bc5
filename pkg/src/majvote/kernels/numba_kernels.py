"""Compiled inner loops over CSR adjacency.

Every function here has a twin of the same name and signature in
``numpy_kernels``; results must agree bit for bit.
"""
import numba as nb
import numpy as np

_jit = nb.njit(cache=True, nogil=True)


@_jit
def _step_into(indptr, indices, loops, f, out):
    n = f.shape[0]
    for v in range(n):
        lo = indptr[v]
        hi = indptr[v + 1]
        ones = 0
        for k in range(lo, hi):
            ones += f[indices[k]]
        total = hi - lo
        if loops[v]:
            ones += f[v]
            total += 1
        zeros = total - ones
        if zeros > ones:
            out[v] = 0
        elif ones > zeros:
            out[v] = 1
        else:
            out[v] = f[v]


@_jit
def _same(a, b):
    for i in range(a.shape[0]):
        if a[i] != b[i]:
            return False
    return True


@_jit
def _run_buffers(indptr, indices, loops, s0, s1, s2, max_rounds):
    # s0 holds f_0 on entry; on a converged exit s0, s1 hold f_T, f_{T+1}.
    _step_into(indptr, indices, loops, s0, s1)
    t = 0
    while True:
        _step_into(indptr, indices, loops, s1, s2)
        if _same(s2, s0):
            return t
        if t >= max_rounds:
            return -1
        t += 1
        for i in range(s0.shape[0]):
            s0[i] = s1[i]
            s1[i] = s2[i]


@_jit
def step(indptr, indices, loops, f):
    out = np.empty_like(f)
    _step_into(indptr, indices, loops, f, out)
    return out


@_jit
def voting_time(indptr, indices, loops, f0, max_rounds):
    n = f0.shape[0]
    s0 = f0.copy()
    s1 = np.empty(n, np.uint8)
    s2 = np.empty(n, np.uint8)
    t = _run_buffers(indptr, indices, loops, s0, s1, s2, max_rounds)
    return t, s0, s1


@_jit
def count_bad_arrows(indptr, indices, loops, f, fnext):
    n = f.shape[0]
    count = 0
    for v in range(n):
        fv = f[v]
        for k in range(indptr[v], indptr[v + 1]):
            if fnext[indices[k]] != fv:
                count += 1
        if loops[v] and fnext[v] != fv:
            count += 1
    return count


@_jit
def worst_case_range(indptr, indices, loops, n, lo, hi, max_rounds):
    """Scan Gray codes of the integers in [lo, hi).

    Node ``i`` holds bit ``n - 1 - i`` of the code, so numeric order of codes
    is lexicographic order of bit strings.  Returns ``(best_t, best_code,
    explored)``; ``best_t == -2`` flags a budget overrun at ``best_code``.
    """
    f = np.empty(n, np.uint8)
    s0 = np.empty(n, np.uint8)
    s1 = np.empty(n, np.uint8)
    s2 = np.empty(n, np.uint8)
    g = lo ^ (lo >> 1)
    for i in range(n):
        f[i] = (g >> (n - 1 - i)) & 1
    best_t = -1
    best_code = 0
    explored = 0
    for c in range(lo, hi):
        if c > lo:
            g_new = c ^ (c >> 1)
            changed = g_new ^ g
            bit = 0
            while changed > 1:
                changed >>= 1
                bit += 1
            f[n - 1 - bit] ^= 1
            g = g_new
        for i in range(n):
            s0[i] = f[i]
        t = _run_buffers(indptr, indices, loops, s0, s1, s2, max_rounds)
        explored += 1
        if t < 0:
            return -2, g, explored
        if t > best_t or (t == best_t and g < best_code):
            best_t = t
            best_code = g
    return best_t, best_code, explored
