"""The ``bench`` command line.

    bench <experiment> --alg <dxhash|ring|maglev|jump> --nodes A --working W
          --keys N --seed S --out FILE.csv [--step K] [--weights SPEC]
          [--threads T] [...]

Exit codes: 0 success, 2 invalid configuration, 3 internal invariant
violation. Reports are written in the CSV layout described in
``dxhash.experiments.report`` and are byte-identical for a given
configuration and seed, wallclock metrics aside.
"""

from __future__ import annotations

import argparse
import platform
import sys

from .. import __version__, _kernels as kernels
from ..core import DxHashError, InvalidArgumentError
from .report import write_report
from .runners import ALGORITHMS, EXPERIMENTS, RUNNERS, ConfigError, ExperimentConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTERNAL = 3


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got {text!r}") from exc


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Consistent-hashing experiments; results go to a CSV report.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="|".join(EXPERIMENTS))
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--alg", default="dxhash", choices=ALGORITHMS, help="algorithm under test")
        p.add_argument("--nodes", type=int, default=1024, help="slot count (dxhash) or node count")
        p.add_argument(
            "--working",
            type=_int_list,
            default=(),
            help="working node count; comma-separated values sweep (balance), first value is the schedule start (disruption)",
        )
        p.add_argument("--keys", type=int, default=1_000_000, help="number of keys to map")
        p.add_argument("--seed", type=int, default=42, help="config seed; fixes keys and failure draws")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--step", type=int, default=100, help="disruption schedule step size")
        p.add_argument("--end-working", type=int, default=None, help="disruption schedule stop (exclusive of further steps)")
        p.add_argument("--weights", default=None, help="weighted groups as COUNTxWEIGHT,... (must cover --nodes)")
        p.add_argument("--sweep", type=_float_list, default=(), help="weighted sweep of second-group weights")
        p.add_argument("--ratios", type=_float_list, default=(), help="failure ratios for asl/throughput")
        p.add_argument("--threads", type=int, default=1, help="lookup shards run in parallel")
        p.add_argument("--sizes", type=_int_list, default=(), help="cluster sizes for ars/memory")
        p.add_argument("--vnodes", type=int, default=100, help="ring virtual nodes per physical node")
        p.add_argument("--table-size", type=int, default=99991, help="maglev table size (prime)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig(
        experiment=args.experiment,
        algorithm=args.alg,
        nodes=args.nodes,
        working=args.working,
        keys=args.keys,
        seed=args.seed,
        step=args.step,
        end_working=args.end_working,
        weights=args.weights,
        sweep=args.sweep,
        ratios=args.ratios,
        threads=args.threads,
        sizes=args.sizes,
        vnodes=args.vnodes,
        table_size=args.table_size,
    )
    try:
        rows = RUNNERS[args.experiment](cfg)
    except (ConfigError, InvalidArgumentError) as exc:
        # a runner argument the library rejects is still a config problem
        print(f"bench: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DxHashError, AssertionError) as exc:
        print(f"bench: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    extra = None
    if args.experiment == "throughput":
        extra = {"impl": kernels.IMPL_NAME, "machine": platform.machine()}
    try:
        write_report(args.out, rows, cfg.seed, __version__, extra)
    except OSError as exc:
        print(f"bench: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
