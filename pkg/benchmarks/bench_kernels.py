"""Time the numba kernels against their pure-numpy twins.

    python benchmarks/bench_kernels.py [--reps 20000] [--repeat 3]

Each kernel is checked for agreement before it is timed; numba is warmed up
(and its cache populated) outside the timed region.
"""
import argparse
import time

import numpy as np

from recordlaws import _kernels_numba as knb
from recordlaws import _kernels_numpy as knp
from recordlaws.rng import Role, stream_keys


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(reps):
    keys = stream_keys(1, Role.GAMMA_SUM, 0, reps)
    nkeys = stream_keys(1, Role.NAIVE, 0, max(reps // 10, 1))
    x = np.linspace(1.0, 3000.0, reps)
    return [
        ("gamma_sums n=400", lambda m: m.gamma_sums(keys, 400)),
        ("gamma_mt shape=5000", lambda m: m.gamma_mt(keys, 5000.0)),
        ("polar_normals", lambda m: m.polar_normals(keys)),
        (f"scan_records n=6 reps={nkeys.size}", lambda m: m.scan_records(nkeys, 6, 10**9)),
        ("gammainc_pq a=1600", lambda m: m.gammainc_pq(1600.0, x)),
    ]


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-10, atol=1e-14, equal_nan=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"{'kernel':36s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, run in cases(args.reps):
        if not same(run(knp), run(knb)):
            raise SystemExit(f"{name}: backends disagree")
        t_np = best_of(lambda: run(knp), args.repeat)
        t_nb = best_of(lambda: run(knb), args.repeat)
        print(f"{name:36s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
