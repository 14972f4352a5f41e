import importlib
import subprocess
import sys

import numpy as np
import pytest

from qoplab import _kernels_py, kernels
from qoplab.qtransfer.types import sector_indices

compiled = pytest.importorskip("qoplab._kernels", reason="compiled kernels not built")


def random_case(rng, N, d, n):
    L = rng.normal(size=(N, 2, 2, d, d)) + 1j * rng.normal(size=(N, 2, 2, d, d))
    idx = sector_indices(N, n)
    return L, idx


@pytest.mark.parametrize("N,d,n", [(1, 2, 1), (3, 2, 1), (5, 3, -1), (6, 1, 0)])
def test_sector_traces_backends_agree(N, d, n):
    rng = np.random.default_rng(N * 10 + d)
    L, idx = random_case(rng, N, d, n)
    a = _kernels_py.sector_traces(L, idx, idx)
    b = compiled.sector_traces(L, idx, idx)
    assert np.max(np.abs(a - b)) < 1e-12 * (1 + np.max(np.abs(a)))


def test_sector_traces_naive_loop():
    rng = np.random.default_rng(3)
    N, d = 3, 2
    L, idx = random_case(rng, N, d, 1)
    out = _kernels_py.sector_traces(L, idx, idx)
    for a, al in enumerate(idx):
        for b, be in enumerate(idx):
            M = np.eye(d, dtype=complex)
            for i in range(N):
                M = L[i, al[i], be[i]] @ M
            assert out[a, b] == pytest.approx(np.trace(M))


def test_compiled_rejects_large_aux():
    L = np.zeros((1, 2, 2, 4, 4), complex)
    idx = np.zeros((1, 1), np.intp)
    with pytest.raises(ValueError):
        compiled.sector_traces(L, idx, idx)


@pytest.mark.parametrize("N,n", [(1, -1), (2, 0), (4, 2), (5, 1)])
def test_laurent_chain_backends_agree(N, n):
    rng = np.random.default_rng(100 + N)
    site = rng.normal(size=(N, 2, 2, 7)) + 1j * rng.normal(size=(N, 2, 2, 7))
    idx = sector_indices(N, n)
    q = 1.1 * np.exp(0.7j)
    a = _kernels_py.laurent_chain(site, q, idx, idx)
    b = compiled.laurent_chain(site, q, idx, idx)
    assert a.shape == (len(idx), len(idx), 6 * N + 1)
    assert np.max(np.abs(a - b)) < 1e-12 * (1 + np.max(np.abs(a)))


def test_backend_selection_env():
    code = "import qoplab.kernels as k; print(k.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={"QOPLAB_PURE_PYTHON": "1", "PATH": ""}, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("cython", "python")
    importlib.reload(kernels)
