"""Timing comparison of the compiled and pure-Python chain kernels.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from blindinv import heat61_config, deconv62_config
from blindinv.bench import run_heat_replication, run_deconv_replication
from blindinv.kernels import HAVE_COMPILED, get_backend
from blindinv import kernels as K


def heat_args(n=4, burn_in=1000, n_keep=500, thin=5, seed=0):
    rng = np.random.default_rng(seed)
    niter = burn_in + n_keep * thin
    k = np.arange(1, n + 1, dtype=float)
    decay = np.pi**2 * k**2 * 0.1
    y = np.exp(-decay) * 0.5 + 1e-6 * rng.standard_normal(n)
    return (
        y, decay, 1.0, 1e-6, 1e-6, np.ones(n), 1.0, 1.0,
        burn_in, n_keep, thin, 2e-6, True,
        rng.standard_normal((niter, n)), rng.standard_normal(niter),
        rng.uniform(size=niter),
    )


def svd_args(level=4, burn_in=1000, n_keep=500, thin=5, seed=0):
    rng = np.random.default_rng(seed)
    niter = burn_in + n_keep * thin
    n = 2 * level + 1
    lvl = np.zeros(n, dtype=np.intc)
    lvl[1::2] = np.arange(1, level + 1)
    lvl[2::2] = np.arange(1, level + 1)
    t_lv = 1.0 / (1.0 + np.arange(level + 1.0)) ** 2
    y = t_lv[lvl] * 0.3 + 1e-3 * rng.standard_normal(n)
    return (
        y, lvl, t_lv, 1e-3, 1e-3, np.ones(n), 1.0, t_lv,
        burn_in, n_keep, thin,
        rng.standard_normal((niter, n)), rng.standard_normal((niter, level + 1)),
    )


def main():
    print(f"compiled kernels available: {HAVE_COMPILED} (active backend: {K.BACKEND})")
    backends = ["python"] + (["compiled"] if HAVE_COMPILED else [])
    ha, sa = heat_args(), svd_args()
    for chain, args in [("heat_chain", ha), ("svd_chain", sa)]:
        results = {}
        for name in backends:
            mod = get_backend(name)
            fn = getattr(mod, chain)
            fn(*args)  # warm up
            times = []
            for _ in range(5):
                t0 = time.perf_counter()
                fn(*args)
                times.append(time.perf_counter() - t0)
            results[name] = min(times)
        line = f"{chain} (3500 iterations): " + ", ".join(
            f"{n} {results[n]*1e3:.2f} ms" for n in backends
        )
        if len(results) == 2:
            line += f"  -> speedup x{results['python'] / results['compiled']:.1f}"
        print(line)

    # end-to-end replication timings through the active backend
    cfg_h = heat61_config(n_mc=1)
    t0 = time.perf_counter()
    run_heat_replication(cfg_h, 1e-6, 1e-6, 0)
    print(f"heat replication (simulate + Gibbs, J=4): {(time.perf_counter()-t0)*1e3:.1f} ms")
    cfg_d = deconv62_config(n_mc=1)
    t0 = time.perf_counter()
    run_deconv_replication(cfg_d, 1e-2, 1e-2, 0)
    print(f"deconv replication (simulate + selection + Gibbs): {(time.perf_counter()-t0)*1e3:.1f} ms")


if __name__ == "__main__":
    main()
