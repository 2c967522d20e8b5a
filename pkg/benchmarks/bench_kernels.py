"""Timing comparison: compiled support-enumeration kernels vs numpy fallback.

Run after installing the package:

    python3 benchmarks/bench_kernels.py [--n 8] [--repeat 3]

Both backends are exercised in one process (the fallback is importable
directly), so the numbers come from the same arrays.
"""

import argparse
import time

import numpy as np

from noisestab import _kernels
from noisestab._kernels import _fallback
from noisestab.distributions import f3_chain
from noisestab.rng import substream


def _case(n: int):
    P = f3_chain()
    nz = np.nonzero(P.table > 0.0)[0]
    digits = np.empty((nz.shape[0], P.steps), dtype=np.int64)
    rem = nz.astype(np.int64)
    for j in range(P.steps):
        digits[:, j] = rem % P.q
        rem //= P.q
    weights = P.table[nz]
    rng = substream(0, "bench")
    tables = rng.random((P.steps, P.q**n))
    return tables, digits, weights, n, P.q


def _time(fn, arrays, repeat: int):
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn(*arrays)
        best = min(best, time.perf_counter() - t0)
    return best, value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=7, help="coordinates (cost 12^n)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    arrays = _case(args.n)
    print(f"backend in use: {_kernels.BACKEND}")
    print(f"support size {arrays[1].shape[0]}, n={args.n}: {arrays[1].shape[0]**args.n:.3g} atoms")

    for name, kernel in (
        ("support_product_sum", "support_product_sum"),
        ("support_equality_mass", "support_equality_mass"),
    ):
        rows = []
        fb_t, fb_v = _time(getattr(_fallback, kernel), arrays, args.repeat)
        rows.append(("fallback", fb_t, fb_v))
        if _kernels.BACKEND == "compiled":
            from noisestab._kernels import _core

            c_t, c_v = _time(getattr(_core, kernel), arrays, args.repeat)
            rows.append(("compiled", c_t, c_v))
            if abs(c_v - fb_v) > 1e-9 * max(1.0, abs(fb_v)):
                raise SystemExit(f"{name}: backend mismatch {c_v!r} vs {fb_v!r}")
        print(f"\n{name}:")
        for label, t, v in rows:
            print(f"  {label:9s} {t * 1e3:10.2f} ms   value {v!r}")
        if len(rows) == 2:
            print(f"  speedup   {rows[0][1] / rows[1][1]:10.2f}x")


if __name__ == "__main__":
    main()
