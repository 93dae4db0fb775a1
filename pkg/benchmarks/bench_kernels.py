"""Time the compiled kernels against the pure-Python ones.

Run from the repository root after building the extension:

    python3 benchmarks/bench_kernels.py --repeat 3

Each row reports the best wall-clock time per backend and the speed-up.
Results of the two backends are compared before timing.
"""

from __future__ import annotations

import argparse
import random
import sys
import timeit

from epdual._kernels import available_backends
from epdual.generators import uniform
from epdual.layouts import _out_masks


def _cases(seed: int) -> list[tuple[str, str, tuple]]:
    rng = random.Random(seed)
    cases = []
    for n in (10, 14, 18):
        masks, _ = _out_masks(uniform(n, seed + n))
        cases.append((f"cutwidth_dp n={n}", "cutwidth_dp", (n, masks)))
    for n in (8, 10, 12):
        masks, _ = _out_masks(uniform(n, seed + n))
        cases.append((f"pathwidth_dp n={n}", "pathwidth_dp", (n, masks)))
    for n in (20, 40):
        masks, _ = _out_masks(uniform(n, seed + n))
        order = list(range(n))
        rng.shuffle(order)
        cases.append((f"cut_sizes n={n}", "cut_sizes", (order, masks)))
    universe = (1 << 24) - 1
    sets = sorted({sum(1 << b for b in rng.sample(range(24), 3)) for _ in range(300)})
    cases.append(("pack_disjoint_masks 300 sets k=7", "pack_disjoint_masks",
                  (sets, 7, universe, -1)))
    return cases


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions per case")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the Python backend is available",
              file=sys.stderr)
    names = list(backends)
    print(f"{'case':36}" + "".join(f"{b:>12}" for b in names) + ("   speed-up" if len(names) > 1 else ""))
    for label, fn, fargs in _cases(args.seed):
        results = {b: getattr(backends[b], fn)(*fargs) for b in names}
        if len({repr(r) for r in results.values()}) != 1:
            print(f"{label}: backends disagree", file=sys.stderr)
            return 1
        times = {}
        for b in names:
            f = getattr(backends[b], fn)
            times[b] = min(timeit.repeat(lambda: f(*fargs), number=1, repeat=args.repeat))
        row = f"{label:36}" + "".join(f"{times[b] * 1000:10.2f}ms" for b in names)
        if len(names) > 1:
            row += f"{times['python'] / max(times['cython'], 1e-9):10.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
