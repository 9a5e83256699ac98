"""Command-line interface.

Subcommands: ``estimate`` (one entry as JSON), ``variance-map`` (a-priori
per-entry variance bounds as CSV), ``complete`` (fill a matrix and write
value + variance CSVs), ``simulate`` (noise sweep with binned error reports),
``paths`` (the path-space basis of one entry as JSON).

Exit codes: 0 success, 1 invalid input, 2 entry not reconstructible.
"""

import argparse
import json
import math
import os
import sys

from . import matrixio
from .errors import InputError, NotReconstructibleError
from .estimator import (NoiseSpec, complete_matrix, estimate_entry,
                        variance_map)
from .mask_graph import build_graph
from .path_basis import path_space_basis
from .simulation import (ESTIMATORS, bin_error_vs_variance, noise_sweep,
                         write_summary_json)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_RECONSTRUCTIBLE = 2


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; remap those to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _parse_entry(text, m, n):
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"--entry expects 'i,j', got {text!r}")
    try:
        i, j = int(parts[0]), int(parts[1])
    except ValueError:
        raise InputError(f"--entry expects integers, got {text!r}") from None
    if not (0 <= i < m and 0 <= j < n):
        raise InputError(f"entry ({i}, {j}) outside {m}x{n} matrix")
    return i, j


def _parse_levels(text):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InputError(f"--levels expects 'start:step:stop' or a comma "
                             f"list, got {text!r}")
        try:
            start, step, stop = (float(p) for p in parts)
        except ValueError:
            raise InputError(f"cannot parse levels {text!r}") from None
        if step <= 0:
            raise InputError("levels step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 12) for i in range(max(count, 0)))
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse levels {text!r}") from None


def _load_mask_source(args):
    """(mask, observed-or-None) from a matrix file or a 0/1 mask CSV."""
    if args.matrix is not None and args.mask is not None:
        raise InputError("give either a matrix file or --mask, not both")
    if args.matrix is not None:
        arr = matrixio.read_matrix(args.matrix)
        return matrixio.matrix_mask(arr), arr
    if args.mask is not None:
        return matrixio.read_mask(args.mask), None
    raise InputError("a matrix file or --mask is required")


def _noise_from_args(args, mask):
    if args.sigma_file is not None:
        return matrixio.read_sigma_file(args.sigma_file, mask)
    return NoiseSpec.constant(args.sigma)


def _json_number(x):
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _out_dir(args):
    path = args.out or "."
    os.makedirs(path, exist_ok=True)
    return path


def cmd_estimate(args):
    arr = matrixio.read_matrix(args.matrix)
    mask = matrixio.matrix_mask(arr)
    graph = build_graph(mask)
    entry = _parse_entry(args.entry, mask.rows, mask.cols)
    noise = _noise_from_args(args, mask)
    est = estimate_entry(graph, arr, entry, noise)
    payload = {
        "entry": list(est.entry),
        "reconstructible": est.reconstructible,
        "value": est.value,
        "log_variance": _json_number(est.log_variance),
        "conf_low": _json_number(est.conf_low),
        "conf_high": _json_number(est.conf_high),
        "sign_conflict": est.sign_conflict,
    }
    print(json.dumps(payload, sort_keys=True))
    if not est.reconstructible:
        print(f"entry {est.entry} is not reconstructible from the mask",
              file=sys.stderr)
        return EXIT_NOT_RECONSTRUCTIBLE
    return EXIT_OK


def cmd_variance_map(args):
    mask, _ = _load_mask_source(args)
    graph = build_graph(mask)
    noise = _noise_from_args(args, mask)
    vm = variance_map(graph, noise, jobs=args.jobs)
    text = matrixio.matrix_csv_text(vm)
    if args.out:
        path = os.path.join(_out_dir(args), "variance_map.csv")
        with open(path, "w") as fh:
            fh.write(text)
        print(path)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_complete(args):
    arr = matrixio.read_matrix(args.matrix)
    mask = matrixio.matrix_mask(arr)
    graph = build_graph(mask)
    noise = _noise_from_args(args, mask)
    mode = "all" if args.all else "missing"
    result = complete_matrix(graph, arr, noise, mode=mode, jobs=args.jobs)
    out = _out_dir(args)
    values_path = os.path.join(out, "completed.csv")
    var_path = os.path.join(out, "variances.csv")
    matrixio.write_matrix(values_path, result.values)
    matrixio.write_matrix(var_path, result.variances)
    print(values_path)
    print(var_path)
    return EXIT_OK


def cmd_simulate(args):
    report = noise_sweep(args.m, args.n, args.k, _parse_levels(args.levels),
                         args.trials, args.seed, masks=args.masks)
    out = _out_dir(args)
    records_path = os.path.join(out, "records.csv")
    bins_path = os.path.join(out, "bins.csv")
    summary_path = os.path.join(out, "summary.json")
    report.write_records_csv(records_path)
    bins = min(args.bins, report.size)
    if bins < args.bins:
        print(f"note: only {report.size} samples, using {bins} bins",
              file=sys.stderr)
    trend = {}
    for idx, name in enumerate(ESTIMATORS):
        binned = bin_error_vs_variance(report, bins=bins, estimator=name)
        binned.write_csv(bins_path, append=idx > 0)
        trend[name] = binned.trend_rho()
    write_summary_json(report, summary_path, extra={"trend_rho": trend})
    if args.trials < 2:
        print("note: trials < 2, per-level statistics are low-confidence",
              file=sys.stderr)
    print(records_path)
    print(bins_path)
    print(summary_path)
    return EXIT_OK


def cmd_paths(args):
    mask, _ = _load_mask_source(args)
    graph = build_graph(mask)
    entry = _parse_entry(args.entry, mask.rows, mask.cols)
    basis = path_space_basis(graph, entry)
    chains = [[{"edge": [i, j], "coeff": c}
               for (i, j), c in sorted(chain.coeffs.items())]
              for chain in basis.chains]
    payload = {"entry": list(entry), "size": basis.size, "chains": chains}
    print(json.dumps(payload, sort_keys=True))
    if basis.is_empty:
        print(f"entry {entry} is not reconstructible from the mask",
              file=sys.stderr)
        return EXIT_NOT_RECONSTRUCTIBLE
    return EXIT_OK


def _add_sigma_options(parser):
    parser.add_argument("--sigma", type=float, default=1.0,
                        help="log-domain noise variance broadcast to every "
                             "observed entry (default: 1.0)")
    parser.add_argument("--sigma-file", default=None,
                        help="CSV of per-entry log-variances aligned with "
                             "the mask (overrides --sigma)")


def build_parser():
    parser = _Parser(prog="r1complete",
                     description="Entry-wise rank-one matrix completion, "
                                 "denoising, and a-priori variance bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="estimate a single entry")
    p_est.add_argument("matrix", help="dense CSV; empty cells or NA are "
                                      "unobserved")
    p_est.add_argument("--entry", required=True, metavar="I,J",
                       help="0-based target entry")
    _add_sigma_options(p_est)
    p_est.set_defaults(func=cmd_estimate)

    p_map = sub.add_parser("variance-map",
                           help="per-entry variance bounds, no data needed")
    p_map.add_argument("matrix", nargs="?", default=None)
    p_map.add_argument("--mask", default=None,
                       help="0/1 CSV observation pattern")
    _add_sigma_options(p_map)
    p_map.add_argument("--jobs", type=int, default=os.cpu_count(),
                       help="parallel per-entry workers")
    p_map.add_argument("--out", default=None,
                       help="write variance_map.csv into this directory "
                            "instead of stdout")
    p_map.set_defaults(func=cmd_variance_map)

    p_comp = sub.add_parser("complete", help="fill in reconstructible "
                                             "entries")
    p_comp.add_argument("matrix")
    _add_sigma_options(p_comp)
    mode = p_comp.add_mutually_exclusive_group()
    mode.add_argument("--all", action="store_true",
                      help="also re-estimate (denoise) observed entries")
    mode.add_argument("--missing-only", action="store_true",
                      help="estimate unobserved entries only (default)")
    p_comp.add_argument("--jobs", type=int, default=os.cpu_count())
    p_comp.add_argument("--out", default=None,
                        help="output directory (default: current)")
    p_comp.set_defaults(func=cmd_complete)

    p_sim = sub.add_parser("simulate", help="noise sweep with error reports")
    p_sim.add_argument("--m", type=int, default=50)
    p_sim.add_argument("--n", type=int, default=50)
    p_sim.add_argument("--k", type=int, default=200,
                       help="observed entries per mask")
    p_sim.add_argument("--levels", default="0.0:0.1:0.9",
                       help="'start:step:stop' or comma list of variances")
    p_sim.add_argument("--masks", type=int, default=3)
    p_sim.add_argument("--trials", type=int, default=10,
                       help="noise redraws per (mask, level)")
    p_sim.add_argument("--bins", type=int, default=11)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_paths = sub.add_parser("paths", help="path-space basis of one entry")
    p_paths.add_argument("matrix", nargs="?", default=None)
    p_paths.add_argument("--mask", default=None)
    p_paths.add_argument("--entry", required=True, metavar="I,J")
    p_paths.set_defaults(func=cmd_paths)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotReconstructibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_RECONSTRUCTIBLE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
