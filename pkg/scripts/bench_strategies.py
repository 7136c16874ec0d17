"""Compare fix_one and fix_two search effort on random instances.

Example:
    python scripts/bench_strategies.py --field 2 --shape 4,4,4 --rank 2 --instances 20
"""

import argparse

from ffcpd.bench import BenchConfig, bench
from ffcpd.field import parse_field


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--field", default="2")
    ap.add_argument("--shape", default="4,4,4")
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--solve-rank", type=int)
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--strategies", default="fix_one,fix_two")
    args = ap.parse_args()
    cfg = BenchConfig(
        field=parse_field(args.field),
        shape=tuple(int(x) for x in args.shape.split(",")),
        rank=args.rank,
        strategies=tuple(args.strategies.split(",")),
        instances=args.instances,
        seed=args.seed,
        solve_rank=args.solve_rank,
    )
    rep = bench(cfg)
    print(rep.render())
    for row in rep.rows:
        print(f"  seed={row.seed} {row.strategy:8s} found={row.found} candidates={row.candidates} {row.elapsed:.3f}s")


if __name__ == "__main__":
    main()
