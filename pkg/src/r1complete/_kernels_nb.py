"""Numba-jitted graph kernels; the hot path behind per-entry basis assembly.

Loop-for-loop identical to `_kernels_py` so switching backends never changes
results, only speed.  All kernels are nopython + nogil, so per-entry work can
fan out over threads.
"""

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(**_JIT)
def components(n_vertices, eu, ev):
    parent = np.arange(n_vertices)
    for k in range(eu.shape[0]):
        ra = _find(parent, eu[k])
        rb = _find(parent, ev[k])
        if ra != rb:
            parent[ra] = rb
    label = np.full(n_vertices, -1, dtype=np.int64)
    comp = np.empty(n_vertices, dtype=np.int64)
    nxt = 0
    for v in range(n_vertices):
        r = _find(parent, v)
        if label[r] < 0:
            label[r] = nxt
            nxt += 1
        comp[v] = label[r]
    return comp


@njit(**_JIT)
def select_forest(n_vertices, eu, ev, order, avoid):
    parent = np.arange(n_vertices)
    in_forest = np.zeros(eu.shape[0], dtype=np.bool_)
    for idx in range(order.shape[0]):
        k = order[idx]
        if k == avoid:
            continue
        ra = _find(parent, eu[k])
        rb = _find(parent, ev[k])
        if ra != rb:
            parent[ra] = rb
            in_forest[k] = True
    if avoid >= 0:
        ra = _find(parent, eu[avoid])
        rb = _find(parent, ev[avoid])
        if ra != rb:
            parent[ra] = rb
            in_forest[avoid] = True
    return in_forest


@njit(**_JIT)
def orient_forest(n_vertices, indptr, nbr_vertex, nbr_edge, in_forest):
    parent = np.full(n_vertices, -1, dtype=np.int64)
    pedge = np.full(n_vertices, -1, dtype=np.int64)
    depth = np.zeros(n_vertices, dtype=np.int64)
    visited = np.zeros(n_vertices, dtype=np.bool_)
    queue = np.empty(n_vertices, dtype=np.int64)
    for root in range(n_vertices):
        if visited[root]:
            continue
        visited[root] = True
        head = 0
        tail = 0
        queue[tail] = root
        tail += 1
        while head < tail:
            x = queue[head]
            head += 1
            for ptr in range(indptr[x], indptr[x + 1]):
                if not in_forest[nbr_edge[ptr]]:
                    continue
                y = nbr_vertex[ptr]
                if visited[y]:
                    continue
                visited[y] = True
                parent[y] = x
                pedge[y] = nbr_edge[ptr]
                depth[y] = depth[x] + 1
                queue[tail] = y
                tail += 1
    return parent, pedge, depth


@njit(**_JIT)
def tree_chain_into(n_blue, parent, pedge, depth, u, v, coeff, out):
    x = u
    y = v
    while depth[x] > depth[y]:
        s = 1 if x < n_blue else -1
        out[pedge[x]] += coeff * s
        x = parent[x]
    while depth[y] > depth[x]:
        s = 1 if y < n_blue else -1
        out[pedge[y]] -= coeff * s
        y = parent[y]
    while x != y:
        if parent[x] < 0:
            return 1
        s = 1 if x < n_blue else -1
        out[pedge[x]] += coeff * s
        x = parent[x]
        s = 1 if y < n_blue else -1
        out[pedge[y]] -= coeff * s
        y = parent[y]
    return 0


@njit(**_JIT)
def basis_matrix(n_blue, eu, ev, in_forest, parent, pedge, depth, comp,
                 ti, tj, direct_idx):
    n_edges = eu.shape[0]
    tcomp = comp[ti]
    p = 1
    for e in range(n_edges):
        if not in_forest[e] and comp[eu[e]] == tcomp:
            p += 1
    C = np.zeros((n_edges, p), dtype=np.int64)
    if direct_idx >= 0:
        C[direct_idx, 0] = 1
        col = 1
        for e in range(n_edges):
            if in_forest[e] or comp[eu[e]] != tcomp:
                continue
            C[direct_idx, col] += 1
            C[e, col] -= 1
            tree_chain_into(n_blue, parent, pedge, depth, ev[e], eu[e], -1,
                            C[:, col])
            col += 1
    else:
        tree_chain_into(n_blue, parent, pedge, depth, ti, tj, 1, C[:, 0])
        col = 1
        for e in range(n_edges):
            if in_forest[e] or comp[eu[e]] != tcomp:
                continue
            tree_chain_into(n_blue, parent, pedge, depth, ti, tj, 1, C[:, col])
            C[e, col] += 1
            tree_chain_into(n_blue, parent, pedge, depth, ev[e], eu[e], 1,
                            C[:, col])
            col += 1
    for k in range(p):
        s = 0
        for e in range(n_edges):
            if eu[e] == ti:
                s += C[e, k]
        if s < 0:
            for e in range(n_edges):
                C[e, k] = -C[e, k]
    return C


@njit(**_JIT)
def bfs_chain(n_blue, n_vertices, indptr, nbr_vertex, nbr_edge, src, dst):
    n_edges = nbr_edge.shape[0] // 2
    out = np.zeros(n_edges, dtype=np.int64)
    pred_v = np.full(n_vertices, -1, dtype=np.int64)
    pred_e = np.full(n_vertices, -1, dtype=np.int64)
    visited = np.zeros(n_vertices, dtype=np.bool_)
    queue = np.empty(n_vertices, dtype=np.int64)
    visited[src] = True
    head = 0
    tail = 0
    queue[tail] = src
    tail += 1
    while head < tail and not visited[dst]:
        x = queue[head]
        head += 1
        for ptr in range(indptr[x], indptr[x + 1]):
            y = nbr_vertex[ptr]
            if visited[y]:
                continue
            visited[y] = True
            pred_v[y] = x
            pred_e[y] = nbr_edge[ptr]
            queue[tail] = y
            tail += 1
    if not visited[dst]:
        return out
    x = dst
    while x != src:
        px = pred_v[x]
        s = 1 if px < n_blue else -1
        out[pred_e[x]] += s
        x = px
    return out
