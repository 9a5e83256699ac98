"""Synthetic instances, multiplicative noise, and Monte-Carlo studies.

Instances are rank-one outer products with entries bounded away from zero.
Noise is applied multiplicatively with a zero-mean log-domain law (log-normal
by default, a symmetric two-point law as an alternative), so observed and true
entries share signs and Var(log B_ij) = sigma_ij.

The sweep completes every reconstructible missing entry of random masks at a
grid of noise levels with three estimators: the variance-optimal weights, the
uniform weights over the same basis, and the single shortest path.  Realized
errors are differences of log absolute values, and the binned error-versus-
predicted-variance table uses equal-count bins.

All sampling is deterministic: every (mask, level, trial) derives its own
stream from the base seed, so results do not depend on execution order.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NotReconstructibleError
from .estimator import NoiseSpec, optimal_alpha, path_kernel
from .mask_graph import Mask, build_graph, is_reconstructible, reconstructible_set
from .path_basis import chain_to_vector, path_space_basis, shortest_path_chain

ESTIMATORS = ("optimal", "uniform", "shortest")

_LAWS = ("lognormal", "two_point")


@dataclass(frozen=True, eq=False)
class RankOneInstance:
    """Rank-one matrix u w' with every entry nonzero."""

    u: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        if (self.u == 0).any() or (self.w == 0).any():
            raise InputError("factor entries must be nonzero")

    @property
    def matrix(self):
        return np.outer(self.u, self.w)


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Zero-log-mean multiplicative noise: law plus per-entry log-variance.

    ``sigma`` is a scalar or an (m, n) array; 0 is allowed for exact-data
    runs.
    """

    sigma: object = 1.0
    law: str = "lognormal"

    def __post_init__(self):
        if self.law not in _LAWS:
            raise InputError(f"unknown noise law {self.law!r}; "
                             f"expected one of {_LAWS}")
        sig = np.asarray(self.sigma, dtype=float)
        if not np.isfinite(sig).all() or (sig < 0).any():
            raise InputError("sigma must be finite and >= 0")

    def sigma_on_edges(self, graph):
        sig = np.asarray(self.sigma, dtype=float)
        if sig.ndim == 0:
            return np.full(graph.num_edges, float(sig))
        if sig.shape != (graph.m, graph.n):
            raise InputError(f"sigma shape {sig.shape} does not match "
                             f"{graph.m}x{graph.n} mask")
        return sig[graph.edges[:, 0], graph.edges[:, 1]]

    def to_noise_spec(self, graph):
        sig = np.asarray(self.sigma, dtype=float)
        if sig.ndim == 0:
            return NoiseSpec.constant(float(sig))
        per_edge = self.sigma_on_edges(graph)
        return NoiseSpec.from_map(
            {(int(i), int(j)): float(v)
             for (i, j), v in zip(graph.mask.known, per_edge)})

    def draw_log_noise(self, rng, edge_sigma, shape):
        scale = np.sqrt(np.asarray(edge_sigma, dtype=float))
        if self.law == "lognormal":
            return rng.standard_normal(shape) * scale
        return (2 * rng.integers(0, 2, size=shape) - 1) * scale


def sample_instance(m, n, seed, magnitude_range=(0.5, 2.0),
                    negative_fraction=0.0):
    """Random rank-one instance with |u_i|, |w_j| in ``magnitude_range``.

    ``negative_fraction`` flips that share of factor signs, for exercising
    the sign logic of the estimators.  Deterministic per seed.
    """
    if m < 1 or n < 1:
        raise InputError(f"instance shape must be positive, got {m}x{n}")
    lo, hi = magnitude_range
    rng = np.random.default_rng(seed)
    u = rng.uniform(lo, hi, size=m)
    w = rng.uniform(lo, hi, size=n)
    if negative_fraction > 0:
        u *= np.where(rng.random(m) < negative_fraction, -1.0, 1.0)
        w *= np.where(rng.random(n) < negative_fraction, -1.0, 1.0)
    return RankOneInstance(u, w)


def sample_mask(m, n, k, seed):
    """Mask of k distinct positions drawn uniformly without replacement."""
    if m < 1 or n < 1:
        raise InputError(f"mask shape must be positive, got {m}x{n}")
    if k > m * n:
        raise InputError(f"cannot place {k} entries in a {m}x{n} matrix")
    rng = np.random.default_rng(seed)
    flat = rng.choice(m * n, size=k, replace=False)
    return Mask(m, n, tuple((int(f) // n, int(f) % n) for f in flat))


def apply_noise(instance, mask, model, seed):
    """Observed matrix B = A * eps on the mask, NaN elsewhere.

    Noise is drawn once per observed cell in the mask's row-major edge order
    from ``default_rng(seed)``.
    """
    a = instance.matrix
    if (mask.rows, mask.cols) != a.shape:
        raise InputError(f"mask shape {mask.rows}x{mask.cols} does not match "
                         f"instance {a.shape}")
    graph = build_graph(mask)
    sig = model.sigma_on_edges(graph)
    rng = np.random.default_rng(seed)
    eps = model.draw_log_noise(rng, sig, sig.shape)
    out = np.full(a.shape, np.nan)
    rows, cols = graph.edges[:, 0], graph.edges[:, 1]
    out[rows, cols] = a[rows, cols] * np.exp(eps)
    return out


def sample_log_estimates(mask, entry, model, trials, seed, instance=None):
    """Monte-Carlo draws of the optimal estimator's log-magnitude.

    Returns (samples, true_log_abs, predicted_variance).  The instance is
    derived from ``[seed, 1]`` unless given; the noise batch comes from
    ``[seed, 2]`` in one vectorized draw.
    """
    graph = build_graph(mask)
    if not is_reconstructible(graph, entry):
        raise NotReconstructibleError(f"entry {tuple(entry)} is not "
                                      f"reconstructible from the mask")
    if instance is None:
        instance = sample_instance(mask.rows, mask.cols, [seed, 1])
    basis = path_space_basis(graph, entry)
    system = optimal_alpha(path_kernel(basis, model.to_noise_spec(graph)))
    weights = basis.C.astype(float) @ system.alpha
    a = instance.matrix
    b_true = np.log(np.abs(a[graph.edges[:, 0], graph.edges[:, 1]]))
    sig = model.sigma_on_edges(graph)
    rng = np.random.default_rng([seed, 2])
    eps = model.draw_log_noise(rng, sig, (trials, graph.num_edges))
    samples = (b_true + eps) @ weights
    i, j = int(entry[0]), int(entry[1])
    return samples, float(np.log(abs(a[i, j]))), system.variance


def monte_carlo_variance(mask, entry, model, trials, seed, instance=None):
    """(empirical, predicted) variance of the optimal log estimate.

    Empirical is the sample variance over ``trials`` independent noise draws
    with the true instance held fixed; predicted is alpha' Sigma alpha.
    """
    samples, _, predicted = sample_log_estimates(mask, entry, model, trials,
                                                 seed, instance=instance)
    if np.ptp(samples) == 0.0:
        # the variance of a constant sequence is 0; np.var would report
        # rounding noise from the mean
        return 0.0, predicted
    empirical = float(np.var(samples, ddof=1))
    return empirical, predicted


@dataclass(frozen=True, eq=False)
class TrialReport:
    """Per-entry completion records from a noise sweep, plus aggregates.

    One record per (mask, level, trial, entry): the true value, the optimal
    variance bound at that level, and the estimate and realized log-error of
    each estimator.  Errors are log|estimate| - log|truth|.
    """

    m: int
    n: int
    k: int
    masks: int
    trials: int
    levels: tuple
    mask_index: np.ndarray
    level_index: np.ndarray
    trial: np.ndarray
    row: np.ndarray
    col: np.ndarray
    true_value: np.ndarray
    predicted_variance: np.ndarray
    estimates: dict = field(repr=False, default_factory=dict)
    log_errors: dict = field(repr=False, default_factory=dict)

    @property
    def size(self):
        return self.mask_index.shape[0]

    def level_values(self):
        return np.asarray(self.levels)[self.level_index]

    def mse(self, estimator):
        """Mean squared log-error per noise level."""
        err2 = self.log_errors[estimator] ** 2
        return np.array([err2[self.level_index == li].mean()
                         for li in range(len(self.levels))])

    def mse_stderr(self, estimator):
        err2 = self.log_errors[estimator] ** 2
        out = np.empty(len(self.levels))
        for li in range(len(self.levels)):
            sel = err2[self.level_index == li]
            out[li] = (sel.std(ddof=1) / math.sqrt(sel.size)
                       if sel.size > 1 else 0.0)
        return out

    def write_records_csv(self, path):
        header = (["mask", "level", "trial", "row", "col", "true_value",
                   "predicted_variance"]
                  + [f"estimate_{name}" for name in ESTIMATORS]
                  + [f"error_{name}" for name in ESTIMATORS])
        levels = self.level_values()
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for r in range(self.size):
                row = [self.mask_index[r], f"{levels[r]:.17g}", self.trial[r],
                       self.row[r], self.col[r],
                       f"{self.true_value[r]:.17g}",
                       f"{self.predicted_variance[r]:.17g}"]
                row += [f"{self.estimates[name][r]:.17g}"
                        for name in ESTIMATORS]
                row += [f"{self.log_errors[name][r]:.17g}"
                        for name in ESTIMATORS]
                writer.writerow(row)

    def summary(self):
        counts = [int((self.level_index == li).sum())
                  for li in range(len(self.levels))]
        return {
            "m": self.m, "n": self.n, "k": self.k,
            "masks": self.masks, "trials": self.trials,
            "levels": list(self.levels),
            "samples": int(self.size),
            "samples_per_level": counts,
            "mse": {name: [float(v) for v in self.mse(name)]
                    for name in ESTIMATORS},
            "mse_stderr": {name: [float(v) for v in self.mse_stderr(name)]
                           for name in ESTIMATORS},
        }


def _entry_weight_vectors(graph, targets):
    """Per-target weight vectors and unit-noise variances per estimator.

    With a uniform noise level s, Sigma scales by s, so the optimal weights
    are level-independent and the predicted variance is s times the
    unit-noise value; one pass per mask serves every level.
    """
    n_edges = graph.num_edges
    n_targets = len(targets)
    W = {name: np.zeros((n_edges, n_targets)) for name in ESTIMATORS}
    v1 = {name: np.zeros(n_targets) for name in ESTIMATORS}
    unit = NoiseSpec.constant(1.0)
    for t, entry in enumerate(targets):
        basis = path_space_basis(graph, entry)
        system = optimal_alpha(path_kernel(basis, unit))
        Cf = basis.C.astype(float)
        W["optimal"][:, t] = Cf @ system.alpha
        v1["optimal"][t] = system.variance
        uniform = np.full(basis.size, 1.0 / basis.size)
        W["uniform"][:, t] = Cf @ uniform
        v1["uniform"][t] = float(uniform @ system.Sigma @ uniform)
        sp = chain_to_vector(graph, shortest_path_chain(graph, entry))
        W["shortest"][:, t] = sp
        v1["shortest"][t] = float((sp.astype(float) ** 2).sum())
    return W, v1


def noise_sweep(m, n, k, levels, trials, seed, masks=1):
    """Complete missing entries of random masks across noise levels.

    For each of ``masks`` random (m, n) masks with k observed cells and a
    positive rank-one instance, every reconstructible missing entry is
    completed ``trials`` times per level by all three estimators.  Streams:
    mask i from [seed, 1, i], instance from [seed, 2, i], noise for
    (mask i, level l, trial t) from [seed, 3, i, l, t]; estimates match
    :func:`r1complete.estimator.estimate_entry` on the same draws.
    """
    levels = tuple(float(v) for v in levels)
    if not levels:
        raise InputError("levels must be nonempty")
    if trials < 1:
        raise InputError("trials must be >= 1")
    cols = {"mask_index": [], "level_index": [], "trial": [], "row": [],
            "col": [], "true_value": [], "predicted_variance": []}
    estimates = {name: [] for name in ESTIMATORS}
    log_errors = {name: [] for name in ESTIMATORS}
    for mi in range(masks):
        mask = sample_mask(m, n, k, [seed, 1, mi])
        instance = sample_instance(m, n, [seed, 2, mi])
        graph = build_graph(mask)
        targets = sorted(reconstructible_set(graph) - set(mask.known))
        if not targets:
            continue
        W, v1 = _entry_weight_vectors(graph, targets)
        a = instance.matrix
        b_true = np.log(np.abs(a[graph.edges[:, 0], graph.edges[:, 1]]))
        rows = np.array([t[0] for t in targets])
        colidx = np.array([t[1] for t in targets])
        true_vals = a[rows, colidx]
        true_log = np.log(np.abs(true_vals))
        n_targets = len(targets)
        for li, level in enumerate(levels):
            model = NoiseModel(sigma=level)
            for t in range(trials):
                observed = apply_noise(instance, mask, model,
                                       [seed, 3, mi, li, t])
                b_obs = np.log(np.abs(
                    observed[graph.edges[:, 0], graph.edges[:, 1]]))
                cols["mask_index"].append(np.full(n_targets, mi))
                cols["level_index"].append(np.full(n_targets, li))
                cols["trial"].append(np.full(n_targets, t))
                cols["row"].append(rows)
                cols["col"].append(colidx)
                cols["true_value"].append(true_vals)
                cols["predicted_variance"].append(level * v1["optimal"])
                for name in ESTIMATORS:
                    log_est = b_obs @ W[name]
                    log_errors[name].append(log_est - true_log)
                    estimates[name].append(np.sign(true_vals)
                                           * np.exp(log_est))
    if not cols["mask_index"]:
        raise InputError("sweep produced no reconstructible missing entries")
    packed = {key: np.concatenate(val) for key, val in cols.items()}
    return TrialReport(
        m=m, n=n, k=k, masks=masks, trials=trials, levels=levels,
        mask_index=packed["mask_index"].astype(np.int64),
        level_index=packed["level_index"].astype(np.int64),
        trial=packed["trial"].astype(np.int64),
        row=packed["row"].astype(np.int64),
        col=packed["col"].astype(np.int64),
        true_value=packed["true_value"],
        predicted_variance=packed["predicted_variance"],
        estimates={name: np.concatenate(estimates[name])
                   for name in ESTIMATORS},
        log_errors={name: np.concatenate(log_errors[name])
                    for name in ESTIMATORS},
    )


@dataclass(frozen=True, eq=False)
class BinnedErrors:
    """Equal-count bins of records sorted by predicted variance.

    Bin sizes differ by at most one.  ``mean_squared_error`` is the headline
    per-bin statistic; the signed mean is kept for bias checks.
    """

    estimator: str
    bins: int
    min_variance: np.ndarray
    mean_squared_error: np.ndarray
    mean_error: np.ndarray
    count: np.ndarray

    def trend_rho(self):
        """Spearman rank correlation of mean squared error vs bin index."""
        from scipy.stats import spearmanr
        return float(spearmanr(np.arange(self.bins),
                               self.mean_squared_error).statistic)

    def write_csv(self, path, append=False):
        mode = "a" if append else "w"
        with open(path, mode, newline="") as fh:
            writer = csv.writer(fh)
            if not append:
                writer.writerow(["estimator", "bin", "min_predicted_variance",
                                 "mean_squared_error", "mean_error", "count"])
            for b in range(self.bins):
                writer.writerow([self.estimator, b,
                                 f"{self.min_variance[b]:.17g}",
                                 f"{self.mean_squared_error[b]:.17g}",
                                 f"{self.mean_error[b]:.17g}",
                                 int(self.count[b])])


def bin_error_vs_variance(report, bins=11, estimator="optimal"):
    """Bin (predicted variance, realized error) pairs into equal-count bins.

    Records are sorted by predicted variance (stable, so ties keep record
    order) and split into ``bins`` contiguous groups whose sizes differ by at
    most one; each bin reports its minimum predicted variance and the mean
    squared and mean signed realized log-errors.
    """
    if estimator not in ESTIMATORS:
        raise InputError(f"unknown estimator {estimator!r}")
    if report.size < bins:
        raise InputError(f"need at least {bins} records to form {bins} bins, "
                         f"have {report.size}")
    order = np.argsort(report.predicted_variance, kind="stable")
    errors = report.log_errors[estimator]
    parts = np.array_split(order, bins)
    min_var = np.array([report.predicted_variance[p].min() for p in parts])
    mse = np.array([(errors[p] ** 2).mean() for p in parts])
    mean_err = np.array([errors[p].mean() for p in parts])
    count = np.array([p.size for p in parts], dtype=np.int64)
    return BinnedErrors(estimator, bins, min_var, mse, mean_err, count)


def write_summary_json(report, path, extra=None):
    """JSON summary of a sweep (config, per-level MSE, standard errors)."""
    payload = report.summary()
    if extra:
        payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
