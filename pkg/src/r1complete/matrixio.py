"""Dense CSV readers and writers with NA handling.

Matrix files are plain dense CSV: one row per matrix row, cells separated by
commas, an empty cell or the literal ``NA`` marking an unobserved entry.
Numbers are written with 17 significant digits so outputs round-trip exactly.
"""

import csv
import math

import numpy as np

from .errors import InputError
from .estimator import NoiseSpec
from .mask_graph import Mask

_NA_TOKENS = ("", "NA")


def _read_cells(path):
    """Rectangular grid of floats with NaN for NA cells; 1-based diagnostics."""
    rows = []
    with open(path, newline="") as fh:
        for r, record in enumerate(csv.reader(fh), start=1):
            if not record:
                continue
            row = []
            for c, cell in enumerate(record, start=1):
                token = cell.strip()
                if token in _NA_TOKENS:
                    row.append(math.nan)
                    continue
                try:
                    value = float(token)
                except ValueError:
                    raise InputError(f"{path}: row {r}, column {c}: cannot "
                                     f"parse {token!r} as a number") from None
                if not math.isfinite(value):
                    raise InputError(f"{path}: row {r}, column {c}: value "
                                     f"must be finite, got {token!r}")
                row.append(value)
            rows.append((r, row))
    if not rows:
        raise InputError(f"{path}: file holds no data rows")
    width = len(rows[0][1])
    for r, row in rows:
        if len(row) != width:
            raise InputError(f"{path}: row {r} has {len(row)} cells, "
                             f"expected {width}")
    return np.array([row for _, row in rows], dtype=float)


def read_matrix(path):
    """Partially observed matrix: NaN marks unobserved, values are nonzero."""
    arr = _read_cells(path)
    for i, j in np.argwhere(arr == 0.0):
        raise InputError(f"{path}: row {i + 1}, column {j + 1}: observed "
                         f"entry must be nonzero")
    return arr


def matrix_mask(arr):
    """Mask of the non-NaN cells of a dense matrix."""
    return Mask.from_dense(~np.isnan(np.asarray(arr, dtype=float)))


def read_mask(path):
    """0/1 observation pattern as a Mask."""
    arr = _read_cells(path)
    if np.isnan(arr).any() or not np.isin(arr, (0.0, 1.0)).all():
        raise InputError(f"{path}: mask cells must all be 0 or 1")
    return Mask.from_dense(arr)


def read_sigma_file(path, mask):
    """Per-entry log-variance CSV aligned with a mask.

    Every observed cell needs a finite nonnegative value; other cells may be
    NA or carry ignored values.
    """
    arr = _read_cells(path)
    if arr.shape != (mask.rows, mask.cols):
        raise InputError(f"{path}: sigma shape {arr.shape[0]}x{arr.shape[1]} "
                         f"does not match {mask.rows}x{mask.cols} mask")
    per_edge = {}
    for i, j in mask.known:
        v = arr[i, j]
        if math.isnan(v):
            raise InputError(f"{path}: row {i + 1}, column {j + 1}: sigma "
                             f"required for observed cell")
        if v < 0:
            raise InputError(f"{path}: row {i + 1}, column {j + 1}: sigma "
                             f"must be >= 0")
        per_edge[(i, j)] = float(v)
    return NoiseSpec.from_map(per_edge)


def format_value(x):
    """Round-trip-safe cell text: 17 significant digits, NA for NaN."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NA"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def write_matrix(path, arr, header=None):
    arr = np.asarray(arr, dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow(header)
        for row in arr:
            writer.writerow([format_value(v) for v in row])


def matrix_csv_text(arr):
    """CSV body of a matrix as a string (used for stdout output)."""
    arr = np.asarray(arr, dtype=float)
    lines = [",".join(format_value(v) for v in row) for row in arr]
    return "\n".join(lines) + "\n"
