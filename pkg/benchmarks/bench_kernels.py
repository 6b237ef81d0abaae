"""Compare the compiled kernel backend against the pure-Python fallback.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from persuade import _kernels_py

try:
    from persuade import _kernels
except ImportError:
    _kernels = None


def _inputs(rng, batch=2000, k=3, n=3, m=4):
    recv = rng.uniform(-1, 1, (m, n))
    slin = rng.uniform(0, 1, (m, n))
    sconst = np.zeros(m)
    prior = rng.dirichlet(np.ones(n) * 3)
    supports = rng.dirichlet(np.ones(n), (batch, k))
    return recv, slin, sconst, prior, supports


def bench_eval_supports(mod, args, reps=20):
    recv, slin, sconst, prior, supports = args
    t0 = time.perf_counter()
    for _ in range(reps):
        values, feasible, weights = mod.eval_supports(
            recv, slin, sconst, prior, supports)
    return (time.perf_counter() - t0) / reps, values


def bench_nm(mod, args, reps=3):
    recv, slin, sconst, prior, _ = args
    rng = np.random.default_rng(0)
    verts = np.vstack([np.eye(3), np.eye(3)])  # two blocks of simplex vertices
    offsets = np.array([0, 3, 6])
    starts = rng.uniform(0.05, 1.0, (24, 6))
    t0 = time.perf_counter()
    for _ in range(reps):
        f, z, evals = mod.multistart_nm(verts, offsets, recv, slin, sconst,
                                        prior, starts, 400)
    return (time.perf_counter() - t0) / reps, f


def main():
    rng = np.random.default_rng(7)
    args = _inputs(rng)
    rows = [("backend", "eval_supports", "multistart_nm")]
    t_py, out_py = bench_eval_supports(_kernels_py, args)
    tn_py, f_py = bench_nm(_kernels_py, args)
    rows.append(("python", f"{t_py * 1e3:9.2f} ms", f"{tn_py * 1e3:9.2f} ms"))
    if _kernels is not None:
        t_c, out_c = bench_eval_supports(_kernels, args)
        tn_c, f_c = bench_nm(_kernels, args)
        rows.append(("cython", f"{t_c * 1e3:9.2f} ms", f"{tn_c * 1e3:9.2f} ms"))
        rows.append(("speedup", f"{t_py / t_c:9.1f} x", f"{tn_py / tn_c:9.1f} x"))
        a, b = np.asarray(out_py), np.asarray(out_c)
        ok = np.isfinite(a) & np.isfinite(b)
        assert np.array_equal(np.isfinite(a), np.isfinite(b))
        diff = np.abs(a[ok] - b[ok]).max()
        print(f"max |eval_supports difference| = {diff:.3e}")
        print(f"nm objective: python {f_py:.9f}  cython {f_c:.9f}")
    else:
        print("compiled backend unavailable; python numbers only")
    for r in rows:
        print(f"{r[0]:>8}  {r[1]:>16}  {r[2]:>16}")


if __name__ == "__main__":
    main()
