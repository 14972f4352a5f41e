"""Compare the compiled sector kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--max-n 10]

Times the two raw kernels on random input and one end-to-end operator build
(transfer matrix, generic Q) per backend, and checks that the backends agree.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from qoplab import _kernels_py, kernels
from qoplab.qtransfer import ChainSpec, q_generic, transfer_matrix
from qoplab.qtransfer.types import sector_indices
from qoplab.repmod import BorelParams

try:
    from qoplab import _kernels as _compiled
except ImportError:
    _compiled = None


def best(fn, repeat: int) -> float:
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def row(label: str, t_py: float, t_cy: float | None, agree: float | None) -> str:
    if t_cy is None:
        return f"{label:<34} {t_py * 1e3:>10.3f} ms {'n/a':>12} {'':>8}"
    return f"{label:<34} {t_py * 1e3:>10.3f} ms {t_cy * 1e3:>9.3f} ms {t_py / t_cy:>7.1f}x  diff {agree:.1e}"


def max_diff(a, b) -> float:
    if isinstance(a, np.ndarray):
        return float(np.max(np.abs(a - b)))
    worst = 0.0
    for n in a.sectors:
        A, B = a.block(n), b.block(n)
        for k in set(A.exponents()) | set(B.exponents()):
            worst = max(worst, float(np.max(np.abs(A.coefficient(k) - B.coefficient(k)), initial=0.0)))
    return worst


def use_backend(mod) -> None:
    kernels.sector_traces = mod.sector_traces
    kernels.laurent_chain = mod.laurent_chain


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    if _compiled is None:
        print("compiled kernels not built; timing the numpy fallback only")
    print(f"{'case':<34} {'numpy':>13} {'cython':>12} {'speedup':>8}")

    for N in range(2, args.max_n + 1, 2):
        L = rng.normal(size=(N, 2, 2, 2, 2)) + 1j * rng.normal(size=(N, 2, 2, 2, 2))
        idx = sector_indices(N, 0)
        t_py = best(lambda: _kernels_py.sector_traces(L, idx, idx), args.repeat)
        t_cy = agree = None
        if _compiled is not None:
            t_cy = best(lambda: _compiled.sector_traces(L, idx, idx), args.repeat)
            agree = float(np.max(np.abs(_kernels_py.sector_traces(L, idx, idx) - _compiled.sector_traces(L, idx, idx))))
        print(row(f"sector_traces N={N} n=0 ({len(idx)}^2)", t_py, t_cy, agree))

    q = 1.1 * np.exp(0.7j)
    for N in range(2, min(args.max_n, 8) + 1, 2):
        site = rng.normal(size=(N, 2, 2, 7)) + 1j * rng.normal(size=(N, 2, 2, 7))
        idx = sector_indices(N, 0)
        t_py = best(lambda: _kernels_py.laurent_chain(site, q, idx, idx), args.repeat)
        t_cy = agree = None
        if _compiled is not None:
            t_cy = best(lambda: _compiled.laurent_chain(site, q, idx, idx), args.repeat)
            a = _kernels_py.laurent_chain(site, q, idx, idx)
            agree = float(np.max(np.abs(a - _compiled.laurent_chain(site, q, idx, idx))) / (1 + np.max(np.abs(a))))
        print(row(f"laurent_chain N={N} n=0", t_py, t_cy, agree))

    original = (kernels.sector_traces, kernels.laurent_chain)
    N = args.max_n
    chain = ChainSpec.homogeneous(N, 1.0, q)
    p = BorelParams(0.7 + 0.2j, 1.3, 0.4, -0.6j)
    small = ChainSpec.homogeneous(min(N, 6), 1.3 - 0.1j, q)
    cases = [
        (f"transfer_matrix N={N}, all sectors", lambda: transfer_matrix(chain, 0.9 + 0.3j).to_full()),
        (f"q_generic N={small.N}, all sectors", lambda: q_generic(small, p)),
    ]
    try:
        for label, fn in cases:
            use_backend(_kernels_py)
            t_py = best(fn, args.repeat)
            ref = fn()
            t_cy = agree = None
            if _compiled is not None:
                use_backend(_compiled)
                t_cy = best(fn, args.repeat)
                out = fn()
                agree = max_diff(out, ref)
            print(row(label, t_py, t_cy, agree))
    finally:
        kernels.sector_traces, kernels.laurent_chain = original


if __name__ == "__main__":
    main()
