"""Shared fixtures and independent oracles for the test suite.

The oracles here (brute-force components, boundary checks) deliberately avoid
the library's union-find/kernel code paths so they can serve as references.
"""

import numpy as np
import pytest

import r1complete as r1


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile the jitted kernels once so timed tests see steady state."""
    g = r1.build_graph(r1.Mask(2, 2, ((0, 0), (0, 1), (1, 0), (1, 1))))
    r1.variance_bound(g, (0, 0), r1.NoiseSpec.constant(1.0))
    r1.shortest_path_chain(g, (0, 1))
    g2 = r1.build_graph(r1.Mask(2, 2, ((0, 1), (1, 0), (1, 1))))
    r1.path_space_basis(g2, (0, 0))


def brute_components(m, n, known):
    """DFS component labels over the bipartite graph; vertices 0..m+n-1."""
    adj = {v: [] for v in range(m + n)}
    for i, j in known:
        adj[i].append(m + j)
        adj[m + j].append(i)
    comp = {}
    label = 0
    for start in range(m + n):
        if start in comp:
            continue
        stack = [start]
        comp[start] = label
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp[y] = label
                    stack.append(y)
        label += 1
    return comp


def partition_sets(labels):
    """Component partition as a frozenset of frozensets (label-free)."""
    groups = {}
    for v, c in enumerate(np.asarray(labels)):
        groups.setdefault(int(c), set()).add(v)
    return frozenset(frozenset(g) for g in groups.values())


def random_connected_mask(rng, m, n, k=None):
    """Random spanning-tree mask topped up to exactly k observed entries."""
    if k is None:
        k = m + n - 1
    assert m + n - 1 <= k <= m * n
    order = list(rng.permutation(m + n))
    blues = [v for v in order if v < m]
    reds = [v for v in order if v >= m]
    known = {(blues[0], reds[0] - m)}
    placed_b, placed_r = [blues[0]], [reds[0]]
    for v in order:
        if v == blues[0] or v == reds[0]:
            continue
        if v < m:
            known.add((v, placed_r[int(rng.integers(len(placed_r)))] - m))
            placed_b.append(v)
        else:
            known.add((placed_b[int(rng.integers(len(placed_b)))], v - m))
            placed_r.append(v)
    while len(known) < k:
        known.add((int(rng.integers(m)), int(rng.integers(n))))
    return r1.Mask(m, n, tuple(known))


def chain_boundary_is(chain, m, n, entry):
    """Exact integer check of the +i, +j boundary condition."""
    blue, red = chain.boundary(m, n)
    want_blue = np.zeros(m, dtype=np.int64)
    want_red = np.zeros(n, dtype=np.int64)
    want_blue[entry[0]] = 1
    want_red[entry[1]] = 1
    return (np.array_equal(blue, want_blue)
            and np.array_equal(red, want_red))


def observed_from(instance, mask):
    """Exact observations of an instance on a mask, NaN elsewhere."""
    return np.where(mask.to_dense(), instance.matrix, np.nan)
