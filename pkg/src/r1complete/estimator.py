"""Minimum-variance unbiased estimation of single rank-one matrix entries.

Observations follow the multiplicative model B_ij = A_ij * eps_ij with
E[log eps_ij] = 0 and Var(log eps_ij) = sigma_ij.  Writing b for the vector of
observed log-magnitudes and C for a path-space basis of the target entry, any
weight vector alpha with sum(alpha) = 1 makes b' C alpha an unbiased estimate
of log|A_ij| with variance alpha' Sigma alpha, where Sigma = C' diag(sigma) C.
The minimizer subject to the sum constraint is

    alpha = Sigma^{-1} 1 / (1' Sigma^{-1} 1),

and the minimum alpha' Sigma alpha is an algorithm-independent lower bound on
the variance of any unbiased estimator of that entry.  It is computable from
the mask and sigma alone, with no observations.

If Sigma is singular (some chain is supported entirely on zero-variance edges,
or a non-basis path set is supplied), the constrained minimum is still
attained: first over the null space of Sigma when it meets the constraint
plane (variance exactly 0), otherwise through the Moore-Penrose pseudo-inverse.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import InputError, NotReconstructibleError
from .mask_graph import _check_entry, reconstructible_set
from .path_basis import PathBasis, path_space_basis

# Relative pivot/eigenvalue cutoff below which Sigma is treated as singular.
DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class NoiseSpec:
    """Per-edge log-domain noise variances, scalar-broadcast or mapped.

    ``scalar`` applies one variance to every observed entry; ``per_edge``
    maps (row, col) to a variance and may cover only the edges a computation
    touches.  Values must be finite and nonnegative.
    """

    scalar: float = None
    per_edge: dict = None

    def __post_init__(self):
        if (self.scalar is None) == (self.per_edge is None):
            raise InputError("specify exactly one of scalar or per_edge")
        values = ([self.scalar] if self.per_edge is None
                  else self.per_edge.values())
        for v in values:
            if not (math.isfinite(v) and v >= 0):
                raise InputError(f"noise variance must be finite and >= 0, "
                                 f"got {v}")

    @classmethod
    def constant(cls, sigma):
        return cls(scalar=float(sigma))

    @classmethod
    def from_map(cls, mapping):
        return cls(per_edge={(int(i), int(j)): float(v)
                             for (i, j), v in mapping.items()})

    def edge_variances(self, graph):
        """(E,) array aligned with graph edges; NaN where undefined."""
        if self.scalar is not None:
            return np.full(graph.num_edges, self.scalar, dtype=float)
        out = np.full(graph.num_edges, np.nan)
        for k, (i, j) in enumerate(graph.mask.known):
            v = self.per_edge.get((i, j))
            if v is not None:
                out[k] = v
        return out


@dataclass(frozen=True, eq=False)
class KernelSystem:
    """Path kernel matrix with, once solved, the optimal weights.

    ``Sigma[p, q] = sum_e c_{e,p} c_{e,q} sigma_e`` over the basis columns.
    ``variance`` is alpha' Sigma alpha for the computed alpha; ``degenerate``
    records that the singular (pseudo-inverse) route was taken.
    """

    basis: PathBasis
    sigma: np.ndarray      # (E,) with zeros outside the basis support
    Sigma: np.ndarray      # (p, p)
    alpha: np.ndarray = None
    variance: float = None
    degenerate: bool = False


@dataclass(frozen=True)
class EntryEstimate:
    """Signed entry estimate with its log-domain variance bound.

    Non-reconstructible entries carry no value and infinite variance.  The
    confidence fields bracket the estimate multiplicatively,
    |value| * exp(-+ sqrt(log_variance)), with the sign carried over.
    ``sign_conflict`` flags noisy data whose per-chain signs disagree.
    """

    entry: tuple
    value: float
    log_variance: float
    conf_low: float
    conf_high: float
    reconstructible: bool
    sign_conflict: bool = False


def path_kernel(basis, noise):
    """Kernel matrix Sigma = C' diag(sigma) C of a path basis.

    Requires sigma on every edge the basis touches.  The all-zero matrix
    (exact-data limit) is flagged degenerate immediately.
    """
    sig = noise.edge_variances(basis.graph)
    support = (basis.C != 0).any(axis=1)
    bad = support & np.isnan(sig)
    if bad.any():
        i, j = basis.graph.edges[int(np.nonzero(bad)[0][0])]
        raise InputError(f"noise variance undefined for observed edge "
                         f"({i}, {j})")
    sig = np.where(np.isnan(sig), 0.0, sig)
    Cf = basis.C.astype(float)
    Sigma = Cf.T @ (sig[:, None] * Cf)
    Sigma = 0.5 * (Sigma + Sigma.T)
    degenerate = bool(basis.size > 0 and not Sigma.any())
    return KernelSystem(basis, sig, Sigma, degenerate=degenerate)


def _solve_degenerate(Sigma, ones):
    """Constrained minimum for singular PSD Sigma.

    A null-space direction with nonzero coefficient sum yields variance
    exactly 0; otherwise the constrained optimum lives in the range of Sigma
    and the pseudo-inverse formula applies.
    """
    p = Sigma.shape[0]
    lam, vecs = np.linalg.eigh(Sigma)
    lmax = float(lam[-1])
    if lmax <= 0.0:
        return ones / p, 0.0
    null = lam < DEGENERACY_RTOL * lmax
    vn = vecs[:, null]
    n1 = vn @ (vn.T @ ones)
    s = float(ones @ n1)
    if s > DEGENERACY_RTOL * p:
        return n1 / s, 0.0
    vr = vecs[:, ~null]
    y = vr @ ((vr.T @ ones) / lam[~null])
    alpha = y / float(ones @ y)
    return alpha, max(float(alpha @ Sigma @ alpha), 0.0)


def optimal_alpha(system):
    """Fill in the variance-minimizing weights for a computed kernel.

    Solves Sigma y = 1 (Cholesky) and normalizes by the coefficient sum; a
    failed factorization or a pivot below DEGENERACY_RTOL times the largest
    switches to the singular route.  The weights satisfy sum(alpha) = 1 and
    may have negative components; the constraint set is a hyperplane, not a
    simplex.
    """
    p = system.Sigma.shape[0]
    if p == 0:
        raise NotReconstructibleError(
            f"entry {system.basis.target} has an empty path basis")
    ones = np.ones(p)
    Sigma = system.Sigma
    if not Sigma.any():
        return replace(system, alpha=ones / p, variance=0.0, degenerate=True)
    singular = False
    try:
        factor = cho_factor(Sigma, lower=True, check_finite=False)
        pivots = np.diagonal(factor[0]) ** 2
        singular = bool(pivots.min() < DEGENERACY_RTOL * pivots.max())
    except LinAlgError:
        singular = True
    if singular:
        alpha, variance = _solve_degenerate(Sigma, ones)
        return replace(system, alpha=alpha, variance=variance,
                       degenerate=True)
    y = cho_solve(factor, ones, check_finite=False)
    alpha = y / float(ones @ y)
    variance = max(float(alpha @ Sigma @ alpha), 0.0)
    return replace(system, alpha=alpha, variance=variance, degenerate=False)


def _observed_edge_values(graph, observed):
    arr = np.asarray(observed, dtype=float)
    if arr.shape != (graph.m, graph.n):
        raise InputError(f"observations shape {arr.shape} does not match "
                         f"{graph.m}x{graph.n} mask")
    vals = arr[graph.edges[:, 0], graph.edges[:, 1]]
    bad = ~np.isfinite(vals)
    if bad.any():
        i, j = graph.edges[int(np.nonzero(bad)[0][0])]
        raise InputError(f"missing or non-finite observation at ({i}, {j})")
    zero = vals == 0.0
    if zero.any():
        i, j = graph.edges[int(np.nonzero(zero)[0][0])]
        raise InputError(f"observed entry ({i}, {j}) is zero; its "
                         f"log-magnitude is undefined")
    return vals


def _chain_signs(C, negative_edges):
    """Per-column sign of the monomial each chain evaluates.

    A chain's estimate has the sign of prod_e sign(B_e)^{c_e}; only the
    parity of |c_e| over negative observations matters.
    """
    parity = np.abs(C[negative_edges, :]).sum(axis=0) % 2
    return 1 - 2 * parity.astype(np.int64)


def estimate_entry(graph, observed, entry, noise, forest_seed=None):
    """Variance-minimizing estimate of one entry, observed or missing.

    ``observed`` is a dense (m, n) array carrying a finite nonzero value on
    every observed cell (NaN elsewhere is ignored).  Works identically for
    observed entries, where it returns their denoised value.  The magnitude
    is exp(b' C alpha); the sign comes from the per-chain observation-sign
    parity, resolved by the lowest-variance chain if noise makes chains
    disagree (flagged via ``sign_conflict``).
    """
    i, j = _check_entry(graph, entry)
    vals = _observed_edge_values(graph, observed)
    basis = path_space_basis(graph, entry, forest_seed=forest_seed)
    if basis.is_empty:
        return EntryEstimate((i, j), None, math.inf, None, None, False)
    system = optimal_alpha(path_kernel(basis, noise))
    b = np.log(np.abs(vals))
    weights = basis.C.astype(float) @ system.alpha
    log_magnitude = float(b @ weights)
    signs = _chain_signs(basis.C, vals < 0)
    if np.all(signs == signs[0]):
        sign, conflict = int(signs[0]), False
    else:
        best = int(np.argmin(np.diagonal(system.Sigma)))
        sign, conflict = int(signs[best]), True
    value = sign * math.exp(log_magnitude)
    low, high = _interval(value, system.variance)
    return EntryEstimate((i, j), value, system.variance, low, high, True,
                         conflict)


def variance_bound(graph, entry, noise, forest_seed=None):
    """A-priori lower bound on the log-domain variance of any unbiased
    estimate of ``entry``; +inf when the entry is not reconstructible.

    Needs no observed values, only the mask and the noise variances.
    """
    basis = path_space_basis(graph, entry, forest_seed=forest_seed)
    if basis.is_empty:
        return math.inf
    return optimal_alpha(path_kernel(basis, noise)).variance


def _interval(value, log_variance):
    if value is None or not math.isfinite(log_variance):
        return -math.inf, math.inf
    spread = math.exp(math.sqrt(log_variance))
    lo, hi = value / spread, value * spread
    return (lo, hi) if lo <= hi else (hi, lo)


def confidence_interval(estimate):
    """Multiplicative interval |value| * exp(-+ sqrt(variance)), sign applied.

    Infinite variance (non-reconstructible entry) yields the unbounded
    interval (-inf, inf).
    """
    return _interval(estimate.value, estimate.log_variance)


def _run_parallel(fn, items, jobs):
    if jobs is not None and jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def variance_map(graph, noise, jobs=1):
    """(m, n) array of per-entry variance bounds, inf where unreachable."""
    out = np.full((graph.m, graph.n), math.inf)
    entries = sorted(reconstructible_set(graph))
    results = _run_parallel(lambda e: variance_bound(graph, e, noise),
                            entries, jobs)
    for (i, j), v in zip(entries, results):
        out[i, j] = v
    return out


@dataclass(frozen=True, eq=False)
class CompletionResult:
    """Dense completion output: estimated values and per-entry variances.

    Cells that cannot be reconstructed stay NaN with infinite variance.  In
    missing-only mode, observed cells keep their raw value with their input
    noise variance.
    """

    values: np.ndarray
    variances: np.ndarray


def complete_matrix(graph, observed, noise, mode="missing", jobs=1):
    """Fill every reconstructible target of a partially observed matrix.

    ``mode="missing"`` estimates unobserved cells only; ``mode="all"`` also
    re-estimates (denoises) the observed ones, which beats the raw value
    whenever the entry lies on a cycle.
    """
    if mode not in ("missing", "all"):
        raise InputError(f"mode must be 'missing' or 'all', got {mode!r}")
    _observed_edge_values(graph, observed)
    values = np.full((graph.m, graph.n), np.nan)
    variances = np.full((graph.m, graph.n), math.inf)
    sig = noise.edge_variances(graph)
    arr = np.asarray(observed, dtype=float)
    for k, (i, j) in enumerate(graph.mask.known):
        values[i, j] = arr[i, j]
        variances[i, j] = sig[k]
    targets = sorted(reconstructible_set(graph) if mode == "all"
                     else reconstructible_set(graph) - set(graph.mask.known))
    estimates = _run_parallel(
        lambda e: estimate_entry(graph, arr, e, noise), targets, jobs)
    for est in estimates:
        values[est.entry] = est.value
        variances[est.entry] = est.log_variance
    return CompletionResult(values, variances)
