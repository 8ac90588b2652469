"""Benchmark the compiled kernels against the numpy fallback.

Run as: python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from coordsearch import formats
from coordsearch._kernels import _numpy_impl as npk

try:
    from coordsearch._kernels import _fast as cyk
except ImportError:
    cyk = None


def timeit(fn, repeats=200):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_binpack(kernel, n_items=200, n_bins=60, seed=0):
    rng = np.random.default_rng(seed)
    assign = rng.integers(0, n_bins, size=n_items)
    sizes = rng.uniform(0.5, 4.0, size=n_items)
    loads = npk.bin_loads(assign, sizes, n_bins)
    return timeit(lambda: kernel.binpack_wlu_all(assign, sizes, loads, 12.0))


def bench_formats(kernel, m=300, seed=0):
    rng = np.random.default_rng(seed)
    net = formats.build_network(m, formats.SMALL_WORLDS, 0.06, seed)
    inst = formats.make_instance(net, 3, rng_seed=seed)
    usage = (rng.uniform(size=(m, 4)) > 0.25).astype(np.float64)
    row = np.zeros(4)
    return timeit(
        lambda: kernel.formats_private_all(
            usage, inst.prefs, inst._indptr, inst._indices, row
        )
    )


def main():
    rows = [("numpy", bench_binpack(npk), bench_formats(npk))]
    if cyk is not None:
        rows.append(("cython", bench_binpack(cyk), bench_formats(cyk)))
    else:
        print("compiled extension unavailable; benchmarking the fallback only")

    print(f"{'backend':<8} {'binpack WLU (us)':>18} {'formats private (us)':>22}")
    for name, t_bins, t_fmt in rows:
        print(f"{name:<8} {1e6 * t_bins:>18.1f} {1e6 * t_fmt:>22.1f}")
    if len(rows) == 2:
        print(
            f"speedup  {rows[0][1] / rows[1][1]:>17.2f}x "
            f"{rows[0][2] / rows[1][2]:>21.2f}x"
        )


if __name__ == "__main__":
    main()
