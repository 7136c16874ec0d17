"""Print the cost-model constants next to the reference values."""

import argparse

from ffcpd import cost


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--exact", action="store_true", help="also print exact rationals")
    args = ap.parse_args()
    print(f"{'strategy':8s} {'R':>2s} {'q':>2s} {'computed':>10s} {'reference':>10s}  match")
    for strategy, by_q in cost.REFERENCE_CONSTANTS.items():
        for q, row in by_q.items():
            for r, ref in enumerate(row, start=1):
                val = cost.constant(strategy, r, q)
                ok = f"{float(val):.3g}" == f"{ref:.3g}"
                line = f"{strategy:8s} {r:2d} {q:2d} {float(val):10.3g} {ref:10.3g}  {'yes' if ok else 'NO'}"
                if args.exact:
                    line += f"  {val}"
                print(line)
    print()
    print(cost.render_table())


if __name__ == "__main__":
    main()
