"""Backend parity: the jitted kernels and the numpy fallback must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

import r1complete as r1
from r1complete import kernels

from conftest import random_connected_mask


@pytest.fixture
def both_backends():
    previous = kernels.get_backend()
    try:
        kernels.set_backend("numba")
    except ImportError:
        pytest.skip("numba unavailable")
    yield
    kernels.set_backend(previous)


def _basis_pipeline(mask, entry, forest_seed=None):
    g = r1.build_graph(mask)
    basis = r1.path_space_basis(g, entry, forest_seed=forest_seed)
    chain = r1.shortest_path_chain(g, entry)
    return (g.component_id.copy(), basis.C.copy(),
            None if chain is None else dict(chain.coeffs))


def test_backends_produce_identical_results(both_backends):
    rng = np.random.default_rng(7)
    cases = []
    for _ in range(12):
        m, n = int(rng.integers(2, 10)), int(rng.integers(2, 10))
        if rng.random() < 0.5:
            mask = random_connected_mask(rng, m, n,
                                         int(rng.integers(m + n - 1,
                                                          m * n + 1)))
        else:
            mask = r1.sample_mask(m, n, int(rng.integers(1, m * n + 1)),
                                  int(rng.integers(2 ** 31)))
        entry = (int(rng.integers(m)), int(rng.integers(n)))
        seed = int(rng.integers(100)) if rng.random() < 0.5 else None
        cases.append((mask, entry, seed))

    kernels.set_backend("numba")
    with_numba = [_basis_pipeline(*case) for case in cases]
    kernels.set_backend("numpy")
    with_numpy = [_basis_pipeline(*case) for case in cases]

    for (ca, Ca, cha), (cb, Cb, chb) in zip(with_numba, with_numpy):
        np.testing.assert_array_equal(ca, cb)
        np.testing.assert_array_equal(Ca, Cb)
        assert cha == chb


def test_estimates_identical_across_backends(both_backends):
    rng = np.random.default_rng(11)
    mask = random_connected_mask(rng, 6, 6, 20)
    inst = r1.sample_instance(6, 6, 3, negative_fraction=0.3)
    observed = np.where(mask.to_dense(), inst.matrix, np.nan)
    noise = r1.NoiseSpec.constant(0.7)

    def run_all():
        g = r1.build_graph(mask)
        return np.array([[r1.estimate_entry(g, observed, (i, j), noise).value
                          for j in range(6)] for i in range(6)])

    kernels.set_backend("numba")
    a = run_all()
    kernels.set_backend("numpy")
    b = run_all()
    np.testing.assert_array_equal(a, b)


def test_env_flag_selects_backend():
    code = ("from r1complete import kernels; "
            "print(kernels.get_backend())")
    out = subprocess.run(
        [sys.executable, "-c", code],
        env=dict(os.environ, R1COMPLETE_BACKEND="numpy"),
        capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
