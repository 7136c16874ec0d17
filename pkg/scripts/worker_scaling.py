"""Time one exhaustive (no-solution) fix_one search with 1, 2, 4, ... workers."""

import argparse
import os
import random
import time
from collections import Counter

from ffcpd.compress import Tensor3, compress
from ffcpd.field import make_field
from ffcpd.solver import make_search, run_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    f = make_field(2)
    rng = random.Random(args.seed)
    t = Tensor3(f, (4, 4, 4), tuple(rng.randrange(2) for _ in range(64)))
    comp = compress(t, 4)
    if comp is None:
        raise SystemExit("tensor has a mode rank above 4; try another seed")
    total = make_search("fix_one", comp.core, 4).size()
    print(f"cpus={os.cpu_count()} search space={total}")
    base = None
    w = 1
    while w <= max(1, args.max_workers):
        stats = Counter()
        t0 = time.perf_counter()
        found = run_search("fix_one", comp.core, 4, threads=w, stats=stats)
        dt = time.perf_counter() - t0
        base = base or dt
        print(f"workers={w} found={found is not None} candidates={stats['candidates']} time={dt:.3f}s speedup={base / dt:.2f}")
        w *= 2


if __name__ == "__main__":
    main()
