"""Hot numeric kernels.

Every kernel exists twice: an explicit-loop version compiled with numba and a
vectorised numpy version. ``KERNELS`` maps a name to ``(jit, numpy)`` so tests
and the benchmark can run both; the module-level names are bound to whichever
one ``tomoinfo._accel.USE_NUMBA`` selects.

Array conventions
-----------------
bases : complex (K, n, n), ``bases[k, i]`` is the i-th vector of basis k.
table : float (K, K, n, n), ``table[k, l, i, j] = |<a_i^k|a_j^l>|^2``.
"""

import numpy as np

from ._accel import njit, select


@njit
def _transition_table_jit(bases):
    K, n, _ = bases.shape
    s = np.empty((K, K, n, n))
    for k in range(K):
        for l in range(k, K):
            for i in range(n):
                for j in range(n):
                    acc = 0j
                    for m in range(n):
                        acc += bases[k, i, m].conjugate() * bases[l, j, m]
                    v = acc.real * acc.real + acc.imag * acc.imag
                    s[k, l, i, j] = v
                    s[l, k, j, i] = v
    return s


def _transition_table_np(bases):
    amp = np.einsum("kim,ljm->klij", bases.conj(), bases)
    s = amp.real**2 + amp.imag**2
    # bit-exact symmetry s[k,l,i,j] == s[l,k,j,i], matching the loop kernel
    upper = np.triu(np.ones((s.shape[0], s.shape[0]), dtype=bool))
    sym = s.transpose(1, 0, 3, 2)
    return np.where(upper[:, :, None, None], s, sym)


@njit
def _assemble_gram_jit(table, keep, n):
    K = table.shape[0]
    m = keep.shape[0]
    inv_n = 1.0 / n
    g = np.empty((K * m, K * m))
    for k in range(K):
        for l in range(K):
            for a in range(m):
                for b in range(m):
                    if k == l:
                        v = (1.0 if a == b else 0.0) - inv_n
                    else:
                        v = table[k, l, keep[a], keep[b]] - inv_n
                    g[k * m + a, l * m + b] = v
    return g


def _assemble_gram_np(table, keep, n):
    K = table.shape[0]
    m = keep.shape[0]
    sub = table[:, :, keep][:, :, :, keep] - 1.0 / n
    diag = np.eye(m) - 1.0 / n
    idx = np.arange(K)
    sub[idx, idx] = diag
    return sub.transpose(0, 2, 1, 3).reshape(K * m, K * m)


@njit
def _reduced_blocks_jit(table, keep, drop):
    K = table.shape[0]
    m = keep.shape[0]
    out = np.empty((K * m, K * m))
    for k in range(K):
        for l in range(K):
            for a in range(m):
                for b in range(m):
                    if k == l:
                        v = 1.0 if a == b else 0.0
                    else:
                        v = table[k, l, keep[a], keep[b]] - table[k, l, drop, keep[b]]
                    out[k * m + a, l * m + b] = v
    return out


def _reduced_blocks_np(table, keep, drop):
    K = table.shape[0]
    m = keep.shape[0]
    cols = table[:, :, :, keep]
    psi = cols[:, :, keep, :] - cols[:, :, drop : drop + 1, :]
    idx = np.arange(K)
    psi[idx, idx] = np.eye(m)
    return psi.transpose(0, 2, 1, 3).reshape(K * m, K * m)


@njit
def _max_spread_jit(table):
    K, _, n, _ = table.shape
    eps = 0.0
    for k in range(K):
        for l in range(K):
            if k == l:
                continue
            for j in range(n):
                lo = table[k, l, 0, j]
                hi = lo
                for i in range(1, n):
                    v = table[k, l, i, j]
                    if v < lo:
                        lo = v
                    if v > hi:
                        hi = v
                if hi - lo > eps:
                    eps = hi - lo
    return eps


def _max_spread_np(table):
    K = table.shape[0]
    if K < 2:
        return 0.0
    spread = table.max(axis=2) - table.min(axis=2)
    off = ~np.eye(K, dtype=bool)
    return float(spread[off].max())


@njit
def _mutual_information_jit(prior, cond):
    r, m = cond.shape
    first = 0.0
    second = 0.0
    for x in range(r):
        px = 0.0
        for t in range(m):
            w = prior[t] * cond[x, t]
            px += w
            if w > 0.0:
                first += w * np.log(cond[x, t])
        if px > 0.0:
            second += px * np.log(px)
    return first - second


def _mutual_information_np(prior, cond):
    w = cond * prior[None, :]
    mask = w > 0
    first = np.sum(w[mask] * np.log(cond[mask]))
    px = w.sum(axis=1)
    px = px[px > 0]
    return float(first - np.sum(px * np.log(px)))


KERNELS = {
    "transition_table": (_transition_table_jit, _transition_table_np),
    "assemble_gram": (_assemble_gram_jit, _assemble_gram_np),
    "reduced_blocks": (_reduced_blocks_jit, _reduced_blocks_np),
    "max_spread": (_max_spread_jit, _max_spread_np),
    "mutual_information": (_mutual_information_jit, _mutual_information_np),
}

transition_table = select(*KERNELS["transition_table"])
assemble_gram = select(*KERNELS["assemble_gram"])
reduced_blocks = select(*KERNELS["reduced_blocks"])
max_spread = select(*KERNELS["max_spread"])
mutual_information = select(*KERNELS["mutual_information"])
