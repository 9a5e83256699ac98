"""Pure numpy/Python reference implementations of the graph kernels.

Same contracts as `_kernels_nb`; selected via the ``R1COMPLETE_BACKEND``
environment flag or :func:`r1complete.kernels.set_backend`.  Kept loop-for-loop
identical to the jitted versions so both backends produce bit-identical output.

Conventions: vertices are numbered 0..m-1 (row/"blue") then m..m+n-1
(column/"red"); edges are given by endpoint arrays ``eu`` (blue) and ``ev``
(red, already offset by m); a chain is an int64 vector of per-edge
coefficients where traversing an edge blue-to-red counts +1.
"""

import numpy as np


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def components(n_vertices, eu, ev):
    """Connected-component labels, numbered 0..c-1 by first vertex occurrence."""
    parent = np.arange(n_vertices, dtype=np.int64)
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


def select_forest(n_vertices, eu, ev, order, avoid):
    """Greedy spanning forest over edges visited in ``order``.

    Edge ``avoid`` (-1 for none) is skipped during the sweep and appended
    afterwards only if its endpoints are still in different trees, i.e. only
    if it is a bridge.
    """
    parent = np.arange(n_vertices, dtype=np.int64)
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


def orient_forest(n_vertices, indptr, nbr_vertex, nbr_edge, in_forest):
    """Root every tree at its smallest vertex; return parent/parent-edge/depth."""
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


def tree_chain_into(n_blue, parent, pedge, depth, u, v, coeff, out):
    """Add ``coeff`` times the signed chain of the tree path u -> v into ``out``.

    Returns 0 on success, 1 if u and v lie in different trees (``out`` is then
    partially written and must be discarded).
    """
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


def basis_matrix(n_blue, eu, ev, in_forest, parent, pedge, depth, comp,
                 ti, tj, direct_idx):
    """Edge-by-chain coefficient matrix spanning the (ti, tj) path space.

    Column 0 is the direct-edge chain (entry observed, ``direct_idx`` >= 0) or
    the tree path from ti to tj (entry missing).  Every further column adjusts
    column 0 by the fundamental cycle of one non-forest edge of the target's
    component, visited in stored edge order.  Columns are flipped as needed so
    the signed vertex sum at ti is +1.
    """
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


def bfs_chain(n_blue, n_vertices, indptr, nbr_vertex, nbr_edge, src, dst):
    """Signed chain of a minimum-edge-count path src -> dst (zeros if none)."""
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
