"""Agreement between the compiled enumeration kernel and the pure-Python
fallback, plus backend selection bookkeeping."""

import numpy as np
import pytest

from starvlc import KERNEL_BACKEND
from starvlc._kernels import BACKEND, enumerate_vertices, enumerate_vertices_py


def random_inputs(rng, n):
    h_los = rng.uniform(0.0, 1e-4)
    hr = np.ascontiguousarray(rng.uniform(0.0, 5e-5, size=n))
    ht = np.ascontiguousarray(rng.uniform(0.0, 5e-5, size=n))
    a1 = rng.uniform(0.001, 0.2)
    a2 = rng.uniform(0.001, 0.2)
    sigma2 = 10.0 ** rng.uniform(-11, -9)
    return h_los, hr, ht, a1, a2, sigma2


def test_backend_constant_is_exported():
    assert KERNEL_BACKEND == BACKEND
    assert BACKEND in ("cython", "python")


@pytest.mark.parametrize("sic", [False, True])
@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_backends_agree(n, sic):
    rng = np.random.default_rng(1000 + n + int(sic))
    for _ in range(10):
        args = random_inputs(rng, n)
        mask_a, val_a, evals_a = enumerate_vertices(*args, sic)
        mask_b, val_b, evals_b = enumerate_vertices_py(*args, sic)
        assert mask_a == mask_b
        assert val_a == pytest.approx(val_b, rel=1e-12)
        assert evals_a == evals_b == 2**n


def test_dead_channels_pick_all_zero_mask():
    n = 4
    zeros = np.zeros(n)
    for kernel in (enumerate_vertices, enumerate_vertices_py):
        mask, val, evals = kernel(1e-5, zeros, zeros, 0.07, 0.07, 1e-10, True)
        assert mask == 0
        assert evals == 2**n
        assert val > 0.0  # LOS link alone still carries user 1


def test_single_element_exhaustive():
    # n = 1: only two vertices; verify against direct evaluation.
    import math

    c = math.e / (2.0 * math.pi)
    h_los, hr, ht = 2e-5, np.array([3e-5]), np.array([4e-5])
    a1 = a2 = 0.07
    sigma2 = 1e-10

    def val(beta):
        h1 = h_los + beta * hr[0]
        h2 = (1 - beta) * ht[0]
        s1 = (a1 * h1) ** 2 / sigma2  # SIC user 1
        s2 = (a2 * h2) ** 2 / (sigma2 + (a1 * h1) ** 2)
        return 0.5 * (math.log2(1 + c * s1) + math.log2(1 + c * s2))

    mask, best, _ = enumerate_vertices(h_los, hr, ht, a1, a2, sigma2, True)
    assert best == pytest.approx(max(val(0), val(1)), rel=1e-12)
    assert mask == (1 if val(1) > val(0) else 0)
