"""Entry-wise rank-one matrix completion with a-priori variance bounds.

Reconstructs and denoises individual entries of a partially observed,
noisily measured rank-one matrix, and computes for every entry a lower bound
on the log-domain variance of any unbiased estimate, from the observation
pattern and noise variances alone.
"""

from .errors import CompletionError, InputError, NotReconstructibleError
from .estimator import (CompletionResult, EntryEstimate, KernelSystem,
                        NoiseSpec, complete_matrix, confidence_interval,
                        estimate_entry, optimal_alpha, path_kernel,
                        variance_bound, variance_map)
from .mask_graph import (CompletionGraph, Mask, build_graph,
                         is_reconstructible, reconstructible_set)
from .path_basis import (PathBasis, PathChain, SpanningForest,
                         chain_to_vector, fundamental_cycle, path_space_basis,
                         shortest_path_chain, spanning_forest)
from .simulation import (ESTIMATORS, BinnedErrors, NoiseModel,
                         RankOneInstance, TrialReport, apply_noise,
                         bin_error_vs_variance, monte_carlo_variance,
                         noise_sweep, sample_instance, sample_log_estimates,
                         sample_mask)

__version__ = "0.1.0"

__all__ = [
    "BinnedErrors",
    "CompletionError",
    "CompletionGraph",
    "CompletionResult",
    "ESTIMATORS",
    "EntryEstimate",
    "InputError",
    "KernelSystem",
    "Mask",
    "NoiseModel",
    "NoiseSpec",
    "NotReconstructibleError",
    "PathBasis",
    "PathChain",
    "RankOneInstance",
    "SpanningForest",
    "TrialReport",
    "apply_noise",
    "bin_error_vs_variance",
    "build_graph",
    "chain_to_vector",
    "complete_matrix",
    "confidence_interval",
    "estimate_entry",
    "fundamental_cycle",
    "is_reconstructible",
    "monte_carlo_variance",
    "noise_sweep",
    "optimal_alpha",
    "path_kernel",
    "path_space_basis",
    "reconstructible_set",
    "sample_instance",
    "sample_log_estimates",
    "sample_mask",
    "shortest_path_chain",
    "spanning_forest",
    "variance_bound",
    "variance_map",
]
