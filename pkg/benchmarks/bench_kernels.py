"""Compare the numba kernels with their numpy twins.

Run with ``python3 benchmarks/bench_kernels.py``.  Both variants are timed in
one process (the numba versions are compiled once before timing) and their
outputs are checked against each other.  Set ELLIPTIKIT_DISABLE_NUMBA=1 to
confirm that the library falls back to numpy; the benchmark then reports the
numpy timings only.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from elliptikit import _kernels
from elliptikit.lattice import LatticeContext


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--box", type=int, default=200, help="oracle truncation N = M")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    ctx = LatticeContext(0.5 + 1.5j)
    rng = np.random.default_rng(0)
    zs = np.ascontiguousarray(rng.uniform(-0.5, 0.5, args.points) + 1j * rng.uniform(-0.7, 0.7, args.points))
    block_args = (zs, ctx.tau, 8, ctx.series_truncation, ctx._cache["dtab"], ctx._cache["zetas"])
    sum_args = (0.3 + 0.2j, ctx.tau, 3, args.box, args.box, False)

    rows = {}
    ref_block = _kernels.regular_block_py(*block_args)[0]
    ref_sum = _kernels.lattice_sum_py(*sum_args)
    rows["regular_block/numpy"] = _best_of(lambda: _kernels.regular_block_py(*block_args), args.repeat)
    rows["lattice_sum/numpy"] = _best_of(lambda: _kernels.lattice_sum_py(*sum_args), args.repeat)
    report = {"backend": _kernels.BACKEND, "points": args.points, "box": args.box, "seconds": rows}
    if _kernels.USE_NUMBA:
        _kernels.regular_block_nb(*block_args)
        _kernels.lattice_sum_nb(*sum_args)
        rows["regular_block/numba"] = _best_of(lambda: _kernels.regular_block_nb(*block_args), args.repeat)
        rows["lattice_sum/numba"] = _best_of(lambda: _kernels.lattice_sum_nb(*sum_args), args.repeat)
        report["max_abs_difference"] = {
            "regular_block": float(np.max(np.abs(_kernels.regular_block_nb(*block_args)[0] - ref_block))),
            "lattice_sum": abs(_kernels.lattice_sum_nb(*sum_args) - ref_sum),
        }
        report["speedup"] = {
            k: rows[f"{k}/numpy"] / rows[f"{k}/numba"] for k in ("regular_block", "lattice_sum")
        }
    print(json.dumps(report, indent=2))


if __name__ == "__main__":
    main()
