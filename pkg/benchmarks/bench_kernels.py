"""Compare the compiled and numpy backends of the exhaustive scans.

    python benchmarks/bench_kernels.py [--sizes 32 64 96] [--repeat 3]

Each kernel is run on valid structures (so the scan cannot stop early) and on
a corrupted copy; both backends must return identical failure lists.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from opgpd import catalog, kernels
from opgpd.groupoid import pair_groupoid


def _cases(n: int):
    R = catalog.ring_mod(n)
    add, mul = R.add, R.binary_ops["*"]
    bad = mul.copy()
    bad[1, 1] = (bad[1, 1] + 1) % n
    k = max(2, int(round(n ** 0.5)))
    comp = pair_groupoid(k).comp_table
    # a binary operation on the arrows of the pair groupoid: (i,j),(k,l) -> (i,l)
    m = k * k
    idx = np.arange(m)
    op = (idx[:, None] // k) * k + (idx[None, :] % k)
    return [
        ("assoc", lambda: kernels.assoc_failures(add, 10)),
        ("distrib", lambda: kernels.distrib_failures(mul, add, 10)),
        ("distrib (corrupt)", lambda: kernels.distrib_failures(bad, add, 10)),
        ("hom", lambda: kernels.hom_failures(np.arange(n), add, add, 10)),
        ("partial assoc", lambda: kernels.partial_assoc_failures(comp, 10)),
        ("interchange", lambda: kernels.interchange_failures(comp, op, 10)),
    ]


def _time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 96])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    header = f"{'n':>4}  {'kernel':<18}" + "".join(f"{b + ' ms':>14}" for b in backends) + f"{'speedup':>10}"
    print(header)
    mismatches = 0
    for n in args.sizes:
        for name, fn in _cases(n):
            times, results = {}, {}
            for b in backends:
                with kernels.use_backend(b):
                    times[b], results[b] = _time(fn, args.repeat)
            same = all(results[b] == results[backends[0]] for b in backends)
            mismatches += not same
            speed = ""
            if "cython" in times and "python" in times and times["cython"] > 0:
                speed = f"{times['python'] / times['cython']:.1f}x"
            row = f"{n:>4}  {name:<18}" + "".join(f"{times[b] * 1e3:>14.2f}" for b in backends)
            print(row + f"{speed:>10}" + ("" if same else "  MISMATCH"))
    if mismatches:
        raise SystemExit(f"{mismatches} kernel result mismatch(es) between backends")


if __name__ == "__main__":
    main()
