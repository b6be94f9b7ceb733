"""Side-by-side timing of the numba and numpy GF(q) kernel backends.

Usage:
    python benchmarks/bench_kernels.py [--q 2] [--repeat 5]

Reports wall time per workload for both backends plus the speedup ratio.
The numba column includes a warm-up call so compilation is not billed.
Select the backend used by the package itself with RANKLOC_BACKEND.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rankloc._kernels import HAS_NUMBA, get_backend
from rankloc.gf import base_tables
from rankloc.rng import SplitMix64


def rand_mats(rng: SplitMix64, shape: tuple[int, ...], q: int) -> np.ndarray:
    flat = np.array([rng.randbelow(q) for _ in range(int(np.prod(shape)))], dtype=np.uint8)
    return flat.reshape(shape)


def workloads(q: int):
    rng = SplitMix64(2718)
    t = base_tables(q)
    single = rand_mats(rng, (256, 256), q)
    batch = rand_mats(rng, (4096, 9, 9), q)
    tall = rand_mats(rng, (192, 384), q)
    a = rand_mats(rng, (128, 128), q)
    b = rand_mats(rng, (128, 128), q)
    return [
        ("rank 256x256", lambda be: be.rank(single, t.add, t.sub, t.mul, t.inv)),
        ("rank_batch 4096x9x9", lambda be: be.rank_batch(batch, t.add, t.sub, t.mul, t.inv)),
        ("row_reduce 192x384", lambda be: be.row_reduce(tall.copy(), t.add, t.sub, t.mul, t.inv, 384)),
        ("matmul 128^3", lambda be: be.matmul(a, b, t.add, t.mul)),
    ]


def time_call(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--q", type=int, default=2, help="base field size")
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats (best-of)")
    args = parser.parse_args()

    names = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    backends = {name: get_backend(name) for name in names}
    if not HAS_NUMBA:
        print("numba not importable; timing the numpy backend only")

    rows = []
    for label, call in workloads(args.q):
        cells = {}
        for name, be in backends.items():
            call(be)  # warm-up (JIT compile, cache touch)
            cells[name] = time_call(lambda: call(be), args.repeat)
        rows.append((label, cells))

    width = max(len(r[0]) for r in rows)
    header = f"{'workload'.ljust(width)}  " + "  ".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"  {'speedup':>9}"
    print(f"q={args.q}, best of {args.repeat}")
    print(header)
    print("-" * len(header))
    for label, cells in rows:
        line = label.ljust(width) + "  " + "  ".join(
            f"{cells[n] * 1e3:>10.2f}ms" for n in names
        )
        if len(names) == 2:
            line += f"  {cells['numpy'] / cells['numba']:>8.1f}x"
        print(line)

    # both backends must agree before any timing is worth reading
    t = base_tables(args.q)
    probe = rand_mats(SplitMix64(99), (64, 12, 12), args.q)
    results = {
        name: be.rank_batch(probe, t.add, t.sub, t.mul, t.inv)
        for name, be in backends.items()
    }
    values = list(results.values())
    assert all((v == values[0]).all() for v in values[1:])
    print("agreement check: ok")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
