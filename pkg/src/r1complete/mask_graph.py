"""Observation masks and their bipartite completion graphs.

A mask records which cells of an m-by-n matrix are observed.  Its completion
graph has one blue vertex per row, one red vertex per column and one edge per
observed cell.  For rank-one data, an entry (i, j) is uniquely determined by
the observations exactly when row vertex i and column vertex j lie in the same
connected component.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InputError


@dataclass(frozen=True)
class Mask:
    """Set of observed (row, col) positions of an m-by-n matrix.

    Positions are validated against the matrix shape, duplicates are rejected
    (they signal upstream data errors), and the stored tuple is normalized to
    row-major order so everything derived from a mask is reproducible.
    """

    rows: int
    cols: int
    known: tuple = ()

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InputError(f"mask shape must be positive, got "
                             f"{self.rows}x{self.cols}")
        pairs = [(int(i), int(j)) for i, j in self.known]
        for i, j in pairs:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise InputError(f"known entry ({i}, {j}) outside "
                                 f"{self.rows}x{self.cols} matrix")
        if len(set(pairs)) != len(pairs):
            raise InputError("duplicate known entries in mask")
        object.__setattr__(self, "known", tuple(sorted(pairs)))

    @classmethod
    def from_dense(cls, observed):
        """Mask from a 2-D boolean/0-1 array marking observed cells."""
        arr = np.asarray(observed)
        if arr.ndim != 2:
            raise InputError("mask array must be 2-D")
        pairs = [(int(i), int(j)) for i, j in np.argwhere(arr != 0)]
        return cls(arr.shape[0], arr.shape[1], tuple(pairs))

    def to_dense(self):
        out = np.zeros((self.rows, self.cols), dtype=bool)
        for i, j in self.known:
            out[i, j] = True
        return out

    def __contains__(self, entry):
        return tuple(entry) in set(self.known)

    def __len__(self):
        return len(self.known)


@dataclass(frozen=True, eq=False)
class CompletionGraph:
    """Bipartite graph of a mask, with edges in row-major order of the mask.

    Vertices 0..m-1 are the blue (row) vertices and m..m+n-1 the red (column)
    vertices; edge k joins ``eu[k]`` (blue) to ``ev[k]`` (red).  Immutable
    after construction; safe to share across threads.
    """

    mask: Mask
    edges: np.ndarray         # (E, 2) int64: (row, col) per observed cell
    eu: np.ndarray            # (E,) blue endpoint of each edge
    ev: np.ndarray            # (E,) red endpoint (column index + m)
    component_id: np.ndarray  # (m + n,) labels from connected components
    _edge_ids: dict = field(repr=False, default_factory=dict)
    _adjacency: tuple = field(repr=False, default=())

    @property
    def m(self):
        return self.mask.rows

    @property
    def n(self):
        return self.mask.cols

    @property
    def num_vertices(self):
        return self.mask.rows + self.mask.cols

    @property
    def num_edges(self):
        return self.edges.shape[0]

    @property
    def num_components(self):
        return int(self.component_id.max()) + 1 if self.num_vertices else 0

    def edge_id(self, i, j):
        """Index of edge (i, j) in stored order, or None if unobserved."""
        return self._edge_ids.get((i, j))

    def adjacency(self):
        """CSR adjacency: (indptr, neighbor_vertex, neighbor_edge)."""
        return self._adjacency


def _csr_adjacency(n_vertices, eu, ev):
    n_edges = eu.shape[0]
    heads = np.concatenate([eu, ev])
    tails = np.concatenate([ev, eu])
    eids = np.concatenate([np.arange(n_edges, dtype=np.int64)] * 2)
    order = np.argsort(heads, kind="stable")
    indptr = np.zeros(n_vertices + 1, dtype=np.int64)
    counts = np.bincount(heads, minlength=n_vertices)
    np.cumsum(counts, out=indptr[1:])
    return indptr, tails[order], eids[order]


def build_graph(mask):
    """Completion graph of a mask, components included.

    An empty mask yields an edgeless graph with m + n singleton components.
    """
    m, n = mask.rows, mask.cols
    edges = np.array(mask.known, dtype=np.int64).reshape(len(mask.known), 2)
    eu = np.ascontiguousarray(edges[:, 0])
    ev = np.ascontiguousarray(edges[:, 1] + m)
    comp = kernels.components(m + n, eu, ev)
    edge_ids = {(int(i), int(j)): k for k, (i, j) in enumerate(mask.known)}
    adjacency = _csr_adjacency(m + n, eu, ev)
    return CompletionGraph(mask, edges, eu, ev, comp, edge_ids, adjacency)


def _check_entry(graph, entry):
    i, j = int(entry[0]), int(entry[1])
    if not (0 <= i < graph.m and 0 <= j < graph.n):
        raise InputError(f"entry ({i}, {j}) outside {graph.m}x{graph.n} matrix")
    return i, j


def is_reconstructible(graph, entry):
    """True when row vertex i and column vertex j share a component."""
    i, j = _check_entry(graph, entry)
    comp = graph.component_id
    return bool(comp[i] == comp[graph.m + j])


def reconstructible_set(graph):
    """All pairs (i, j), observed or not, determined by the mask.

    This is exactly the set of pairs whose endpoints lie in one connected
    component; observed entries are always included.
    """
    comp = graph.component_id
    blue = comp[:graph.m]
    red = comp[graph.m:]
    eq = blue[:, None] == red[None, :]
    return {(int(i), int(j)) for i, j in np.argwhere(eq)}
