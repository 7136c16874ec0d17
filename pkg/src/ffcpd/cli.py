"""Command-line interface.

Exit codes: 0 found / verified, 1 proven nonexistent / verification false,
2 usage or format error, 3 internal error (a produced CPD failed verification).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import cost
from .bench import BenchConfig, bench
from .compress import Cpd, Tensor3, reconstruct
from .field import Field, FieldError, parse_field
from .formats import FormatError, parse_cpd, parse_tensor, render_cpd, render_tensor
from .instances import mm_tensor, random_instance
from .solver import STRATEGIES, SolverInvariantError, min_rank, solve

EXIT_OK, EXIT_NONE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
THREADS_ENV = "FFCPD_THREADS"

log = logging.getLogger("ffcpd")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    field: Field | None = None
    rank: int | None = None
    strategy: str = "fix_one"
    input: Path | None = None
    output: Path | None = None
    seed: int = 0
    threads: int = 1
    deterministic: bool = False
    symmetry_breaking: bool = True


def verify(tensor: Tensor3, cpd: Cpd) -> bool:
    """True iff the CPD reconstructs the tensor exactly."""
    if tensor.field != cpd.field:
        raise ValueError(f"field mismatch: GF({tensor.field.name}) vs GF({cpd.field.name})")
    if tensor.shape != cpd.shape:
        raise ValueError(f"shape mismatch: tensor {tensor.shape} vs CPD {cpd.shape}")
    return reconstruct(cpd, tensor.shape) == tensor


def _triple(text: str, what: str) -> tuple[int, int, int]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must be three comma-separated integers: {text!r}") from None
    if len(vals) != 3 or min(vals) < 0:
        raise UsageError(f"{what} must be three comma-separated nonnegative integers: {text!r}")
    return vals


def _field(args, required=True) -> Field | None:
    if getattr(args, "field", None) is None:
        if required:
            raise UsageError("--field is required")
        return None
    try:
        return parse_field(args.field, getattr(args, "modulus", None))
    except (FieldError, ValueError) as e:
        raise UsageError(str(e)) from None


def _read(path: Path | None) -> str:
    if path is None or str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write(path: Path | None, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _checked_output(tensor: Tensor3, cpd: Cpd, out: Path | None) -> int:
    if not verify(tensor, cpd):
        raise SolverInvariantError("refusing to write a CPD that does not verify")
    _write(out, render_cpd(cpd))
    return EXIT_OK


def _read_tensor(args) -> Tensor3:
    field = _field(args, required=False)
    return parse_tensor(_read(args.input), field)


def cmd_solve(args) -> int:
    cfg = RunConfig(
        "solve",
        rank=args.rank,
        strategy=args.strategy,
        input=args.input,
        output=args.out,
        threads=args.threads,
        deterministic=args.deterministic or args.threads <= 1,
        symmetry_breaking=not args.no_symmetry_breaking,
    )
    if cfg.rank < 0:
        raise UsageError("--rank must be >= 0")
    t = _read_tensor(args)
    rep = solve(
        t,
        cfg.rank,
        cfg.strategy,
        symmetry_breaking=cfg.symmetry_breaking,
        threads=cfg.threads,
        deterministic=cfg.deterministic,
    )
    log.info("stats: %s elapsed=%.3fs", dict(rep.stats), rep.elapsed)
    if not rep.found:
        print(f"no rank-{cfg.rank} CPD exists over GF({t.field.name})", file=sys.stderr)
        return EXIT_NONE
    return _checked_output(t, rep.cpd, cfg.output)


def cmd_minrank(args) -> int:
    t = _read_tensor(args)
    res = min_rank(
        t,
        args.max,
        args.strategy,
        symmetry_breaking=not args.no_symmetry_breaking,
        threads=args.threads,
        deterministic=args.deterministic or args.threads <= 1,
    )
    if res is None:
        print(f"no CPD of rank <= {args.max} exists over GF({t.field.name})", file=sys.stderr)
        return EXIT_NONE
    r, cpd = res
    print(f"min_rank {r}", file=sys.stderr)
    return _checked_output(t, cpd, args.out)


def cmd_verify(args) -> int:
    field = _field(args, required=False)
    t = parse_tensor(Path(args.tensor).read_text(), field)
    cpd = parse_cpd(Path(args.cpd).read_text(), t.field)
    try:
        ok = verify(t, cpd)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print("verified" if ok else "mismatch")
    return EXIT_OK if ok else EXIT_NONE


def cmd_random(args) -> int:
    field = _field(args)
    shape = _triple(args.shape, "--shape")
    t, witness = random_instance(field, shape, args.rank, args.seed)
    if not verify(t, witness):
        raise SolverInvariantError("generated witness does not verify")
    _write(args.out, render_tensor(t))
    if args.witness is not None:
        Path(args.witness).write_text(render_cpd(witness))
    return EXIT_OK


def cmd_mmtensor(args) -> int:
    field = _field(args) if args.field else parse_field("2")
    a, b, c = _triple(args.dims, "--dims")
    try:
        t = mm_tensor(field, a, b, c)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _write(args.out, render_tensor(t))
    return EXIT_OK


def cmd_cost(args) -> int:
    if args.table:
        print(cost.render_table())
        return EXIT_OK
    field = _field(args)
    if args.rank is None:
        raise UsageError("--rank is required unless --table is given")
    strategies = [args.strategy] if args.strategy else ["fix_one", "fix_two"]
    for s in strategies:
        val = cost.constant(s, args.rank, field.q)
        print(f"{s}\tR={args.rank}\tq={field.q}\tC={cost.sig3(val)}\texact={val}")
    return EXIT_OK


def cmd_bench(args) -> int:
    field = _field(args)
    cfg = BenchConfig(
        field=field,
        shape=_triple(args.shape, "--shape"),
        rank=args.rank,
        strategies=tuple(args.strategies.split(",")),
        instances=args.instances,
        seed=args.seed,
        solve_rank=args.solve_rank,
        threads=args.threads,
    )
    for s in cfg.strategies:
        if s not in STRATEGIES:
            raise UsageError(f"unknown strategy {s!r}")
    print(bench(cfg).render())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffcpd", description="Exact CPD over finite fields.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def field_opts(p, required=False):
        p.add_argument("--field", required=required, help="p or p^k")
        p.add_argument("--modulus", help="c0,c1,...,ck irreducible modulus for p^k")

    def search_opts(p):
        p.add_argument("--strategy", choices=STRATEGIES, default="fix_one")
        p.add_argument("--in", dest="input", type=Path)
        p.add_argument("--out", type=Path)
        p.add_argument("--deterministic", action="store_true")
        p.add_argument("--threads", type=int, default=_default_threads())
        p.add_argument("--no-symmetry-breaking", action="store_true")

    p = sub.add_parser("solve", help="decide rank-R CPD existence")
    field_opts(p)
    p.add_argument("--rank", type=int, required=True)
    search_opts(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("minrank", help="smallest rank up to --max")
    field_opts(p)
    p.add_argument("--max", type=int, required=True)
    search_opts(p)
    p.set_defaults(func=cmd_minrank)

    p = sub.add_parser("verify", help="check a CPD against a tensor")
    field_opts(p)
    p.add_argument("--tensor", type=Path, required=True)
    p.add_argument("--cpd", type=Path, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", help="tensor with a known CPD witness")
    field_opts(p, required=True)
    p.add_argument("--shape", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.add_argument("--witness", type=Path)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("mmtensor", help="<a,b,c> matrix multiplication tensor")
    field_opts(p)
    p.add_argument("--dims", required=True)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_mmtensor)

    p = sub.add_parser("cost", help="cost-model constant factors")
    field_opts(p)
    p.add_argument("--rank", type=int)
    p.add_argument("--strategy", choices=("fix_one", "fix_two"))
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("bench", help="measure search effort on random instances")
    field_opts(p, required=True)
    p.add_argument("--shape", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--solve-rank", type=int)
    p.add_argument("--strategies", default="fix_one,fix_two")
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, FormatError, FieldError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SolverInvariantError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
