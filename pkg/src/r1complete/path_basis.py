"""Integer edge chains spanning the oriented i-j path space of a mask graph.

A chain assigns an integer coefficient to every observed edge, counting a
blue-to-red traversal as +1 and the reverse as -1.  Chains whose signed vertex
sums are +1 at row vertex i, +1 at column vertex j and 0 everywhere else
evaluate, on the log-magnitudes of any rank-one matrix, to log|A_ij|; they are
the unbiased building blocks of the entry estimators.

The space of such chains is an affine space over the cycle space of the
target's connected component, so its dimension is beta_1 + 1 where
beta_1 = e' - m' - n' + 1 is the first Betti number of that component.  A
basis is assembled from one explicit chain (the direct edge when (i, j) is
observed, otherwise a spanning-forest path) plus the fundamental cycles of the
non-forest edges.  Chains are general integer vectors, not simple paths:
cycle-adjusted elements may carry coefficients outside {-1, 0, +1}.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InputError
from .mask_graph import CompletionGraph, _check_entry


@dataclass(frozen=True, eq=False)
class PathChain:
    """Sparse integer chain: map from observed edge (i, j) to its coefficient."""

    coeffs: dict

    def edges(self):
        return tuple(sorted(self.coeffs))

    def boundary(self, m, n):
        """Signed vertex sums: (per-row array, per-column array).

        For a valid (i, j) path chain these are the indicator vectors of i
        and j; for a cycle both are zero.
        """
        blue = np.zeros(m, dtype=np.int64)
        red = np.zeros(n, dtype=np.int64)
        for (i, j), c in self.coeffs.items():
            blue[i] += c
            red[j] += c
        return blue, red

    def evaluate_log(self, log_values):
        """Sum of coefficient times log-value over the chain's support."""
        arr = np.asarray(log_values, dtype=float)
        return float(sum(c * arr[i, j] for (i, j), c in self.coeffs.items()))

    def __len__(self):
        return len(self.coeffs)


@dataclass(frozen=True, eq=False)
class SpanningForest:
    """A maximal acyclic edge subset of a completion graph, rooted per tree."""

    graph: CompletionGraph
    in_forest: np.ndarray  # (E,) bool
    parent: np.ndarray     # (V,) parent vertex, -1 at roots
    parent_edge: np.ndarray
    depth: np.ndarray

    @property
    def edges(self):
        mask = self.graph.mask
        return tuple((int(i), int(j)) for (i, j), keep
                     in zip(mask.known, self.in_forest) if keep)

    def __contains__(self, edge):
        eid = self.graph.edge_id(int(edge[0]), int(edge[1]))
        return eid is not None and bool(self.in_forest[eid])

    def __len__(self):
        return int(self.in_forest.sum())


@dataclass(frozen=True, eq=False)
class PathBasis:
    """Ordered basis of the (i, j) path space with its coefficient matrix.

    ``C`` has one row per observed edge (graph order) and one column per
    chain; ``chains`` mirrors the columns as sparse maps, built on first
    access.  An empty basis (zero columns) means the entry is not
    reconstructible.
    """

    target: tuple
    graph: CompletionGraph
    C: np.ndarray  # (E, p) int64
    _chains: tuple = field(default=None, repr=False)

    @property
    def chains(self):
        if self._chains is None:
            object.__setattr__(self, "_chains", tuple(
                _vector_to_chain(self.graph, self.C[:, k])
                for k in range(self.C.shape[1])))
        return self._chains

    @property
    def size(self):
        return self.C.shape[1]

    @property
    def is_empty(self):
        return self.size == 0


def _vector_to_chain(graph, vec):
    coeffs = {}
    for e in np.nonzero(vec)[0]:
        i, j = graph.edges[e]
        coeffs[(int(i), int(j))] = int(vec[e])
    return PathChain(coeffs)


def chain_to_vector(graph, chain):
    """Dense (E,) int64 coefficient vector of a chain over graph edges."""
    vec = np.zeros(graph.num_edges, dtype=np.int64)
    for (i, j), c in chain.coeffs.items():
        eid = graph.edge_id(i, j)
        if eid is None:
            raise InputError(f"chain uses unobserved edge ({i}, {j})")
        vec[eid] = c
    return vec


def _edge_order(graph, forest_seed):
    if forest_seed is None:
        return np.arange(graph.num_edges, dtype=np.int64)
    rng = np.random.default_rng(forest_seed)
    return rng.permutation(graph.num_edges).astype(np.int64)


def spanning_forest(graph, avoid=None, forest_seed=None):
    """Spanning forest of the whole graph, excluding ``avoid`` if possible.

    Edges are inserted greedily in stored order (or in a seed-shuffled order
    when ``forest_seed`` is given, which is how basis independence is
    exercised).  The avoided edge enters the forest only when it is a bridge.
    """
    avoid_idx = -1
    if avoid is not None:
        eid = graph.edge_id(int(avoid[0]), int(avoid[1]))
        if eid is None:
            raise InputError(f"avoid edge {tuple(avoid)} is not observed")
        avoid_idx = eid
    order = _edge_order(graph, forest_seed)
    in_forest = kernels.select_forest(graph.num_vertices, graph.eu, graph.ev,
                                      order, avoid_idx)
    indptr, nbr_v, nbr_e = graph.adjacency()
    parent, pedge, depth = kernels.orient_forest(graph.num_vertices, indptr,
                                                 nbr_v, nbr_e, in_forest)
    return SpanningForest(graph, in_forest, parent, pedge, depth)


def fundamental_cycle(forest, edge):
    """Cycle closed by a non-forest edge through its tree path.

    The returned chain has coefficient +1 on ``edge``, alternating signs of
    absolute value 1 along the tree path, and zero boundary at every vertex.
    In a bipartite graph its support size is even and at least 4.
    """
    graph = forest.graph
    i, j = int(edge[0]), int(edge[1])
    eid = graph.edge_id(i, j)
    if eid is None:
        raise InputError(f"({i}, {j}) is not an observed edge")
    if forest.in_forest[eid]:
        raise InputError(f"({i}, {j}) lies in the forest; no fundamental cycle")
    vec = np.zeros(graph.num_edges, dtype=np.int64)
    vec[eid] = 1
    status = kernels.tree_chain_into(graph.m, forest.parent,
                                     forest.parent_edge, forest.depth,
                                     graph.ev[eid], graph.eu[eid], 1, vec)
    if status != 0:
        raise RuntimeError("edge endpoints lie in different forest trees")
    return _vector_to_chain(graph, vec)


def path_space_basis(graph, entry, forest_seed=None):
    """Basis of the oriented (i, j) path space as integer edge chains.

    Empty when the entry is unobserved and its endpoints are disconnected.
    Otherwise a spanning forest avoiding the direct edge (when possible) is
    built, and the basis consists of the direct-edge chain or forest path
    plus one cycle-adjusted chain per non-forest edge of the target's
    component.  Every returned chain satisfies the +i, +j boundary condition
    in exact integer arithmetic, and the basis size is e' - m' - n' + 2 in
    the counts of that component.
    """
    i, j = _check_entry(graph, entry)
    ti = i
    tj = graph.m + j
    direct = graph.edge_id(i, j)
    direct_idx = -1 if direct is None else direct
    comp = graph.component_id
    if direct_idx < 0 and comp[ti] != comp[tj]:
        empty = np.zeros((graph.num_edges, 0), dtype=np.int64)
        return PathBasis((i, j), graph, empty)
    forest = spanning_forest(graph, avoid=(i, j) if direct_idx >= 0 else None,
                             forest_seed=forest_seed)
    C = kernels.basis_matrix(graph.m, graph.eu, graph.ev, forest.in_forest,
                             forest.parent, forest.parent_edge, forest.depth,
                             comp, ti, tj, direct_idx)
    tcomp = comp[ti]
    edges_in = int(np.count_nonzero(comp[graph.eu] == tcomp))
    verts_in = int(np.count_nonzero(comp == tcomp))
    if C.shape[1] != edges_in - verts_in + 2:
        raise RuntimeError("basis size disagrees with component Betti count")
    return PathBasis((i, j), graph, C)


def shortest_path_chain(graph, entry):
    """Minimum-edge-count (i, j) chain, or None when disconnected.

    Used as the single-path baseline estimator; for an observed entry this is
    the direct edge itself.
    """
    i, j = _check_entry(graph, entry)
    ti = i
    tj = graph.m + j
    if graph.component_id[ti] != graph.component_id[tj]:
        return None
    indptr, nbr_v, nbr_e = graph.adjacency()
    vec = kernels.bfs_chain(graph.m, graph.num_vertices, indptr, nbr_v, nbr_e,
                            ti, tj)
    return _vector_to_chain(graph, vec)
