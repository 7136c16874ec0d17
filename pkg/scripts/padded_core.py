"""Embed a fixed core into larger tensors and time compression and core search separately."""

import argparse
import random
import statistics
import time
from collections import Counter

from ffcpd.compress import Tensor3, compress
from ffcpd.field import make_field
from ffcpd.instances import embed
from ffcpd.solver import run_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sides", default="4,8,16,32")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    f = make_field(2)
    rng = random.Random(args.seed)
    base = Tensor3(f, (4, 4, 4), tuple(rng.randrange(2) for _ in range(64)))
    print(f"{'side':>5s} {'compress':>10s} {'core solve':>11s} {'candidates':>11s}")
    for side in (int(s) for s in args.sides.split(",")):
        big = embed(base, (side,) * 3, seed=side)
        t0 = time.perf_counter()
        comp = compress(big, 4)
        t_comp = time.perf_counter() - t0
        times = []
        for _ in range(args.repeats):
            stats = Counter()
            t0 = time.perf_counter()
            run_search("fix_one", comp.core, 4, stats=stats)
            times.append(time.perf_counter() - t0)
        print(f"{side:5d} {t_comp:9.3f}s {statistics.median(times):10.3f}s {stats['candidates']:11d}")


if __name__ == "__main__":
    main()
