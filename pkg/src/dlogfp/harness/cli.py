"""Command-line entry point: ``dlogfp {compute,tally,stats,verify,simulate,report}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ..analysis import InsufficientData
from ..counting import InvariantViolation
from ..numtheory import InvalidInput, is_prime
from .driver import PAPER_HI, PAPER_LO, PAPER_PRIME_COUNT, ExperimentConfig, OracleMismatch, run_compute
from .report import comparison_report, simulate_report, stats_report, verify_report
from .results import ResultsFormatError, read_results
from .tables import write_tables

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BUG = 3

log = logging.getLogger("dlogfp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with ExperimentConfig fields; flags win")
    p.add_argument("--out", dest="output_dir", help="output directory (default: results)")
    p.add_argument("--workers", type=int, help="worker processes (default: all cores)")
    p.add_argument("--epsilon", type=float, help="exponent slack for the p^(1/2+eps) scan")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dlogfp", description="Fixed points of the discrete logarithm modulo primes.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="count fixed points for every prime in a range")
    _common(c)
    c.add_argument("--from", dest="prime_lo", type=int)
    c.add_argument("--to", dest="prime_hi", type=int)
    c.add_argument("--oracle-limit", dest="oracle_limit", type=int)

    for name, helptext in (
        ("tally", "bucket tables and bar charts from results.csv"),
        ("stats", "grouped statistics and chi-squared fits"),
        ("verify", "re-check the proved bounds"),
        ("report", "tally + stats + verify + comparison with the published tables"),
    ):
        s = sub.add_parser(name, help=helptext)
        _common(s)
        s.add_argument("results", nargs="?", help="results file (default: <out>/results.csv)")

    m = sub.add_parser("simulate", help="Monte Carlo of the random model for one prime")
    _common(m)
    m.add_argument("p", type=int)
    m.add_argument("--trials", type=int)
    m.add_argument("--seed", type=int)
    return parser


def _config(args) -> ExperimentConfig:
    keys = ("prime_lo", "prime_hi", "workers", "oracle_limit", "epsilon", "trials", "seed", "output_dir")
    overrides = {k: getattr(args, k, None) for k in keys}
    try:
        return ExperimentConfig.from_file(args.config, **overrides)
    except (ValueError, OSError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _load(args, cfg: ExperimentConfig):
    path = Path(args.results) if args.results else Path(cfg.output_dir) / "results.csv"
    try:
        return path, read_results(path)
    except FileNotFoundError:
        raise ResultsFormatError(path, 0, "no such file") from None


def cmd_compute(args, cfg: ExperimentConfig) -> int:
    try:
        summary = run_compute(cfg)
    except OSError as exc:
        print(f"cannot write results: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(f"wrote {summary.primes} rows to {summary.path}")
    print(f"elapsed {summary.seconds:.2f} s, {summary.rate:.1f} primes/s, {cfg.workers} workers")
    if (cfg.prime_lo, cfg.prime_hi) == (PAPER_LO, PAPER_HI) and summary.primes != PAPER_PRIME_COUNT:
        print(f"note: sieve found {summary.primes} primes, published count is {PAPER_PRIME_COUNT}")
    return EXIT_OK


def cmd_tally(args, cfg: ExperimentConfig) -> int:
    path, rows = _load(args, cfg)
    out = path.parent
    written = write_tables(rows, out)
    for name, base in written.items():
        print(base.with_suffix(".txt").read_text())
    print(f"tables and figures written to {out}")
    return EXIT_OK


def cmd_stats(args, cfg: ExperimentConfig) -> int:
    _, rows = _load(args, cfg)
    print(stats_report(rows))
    return EXIT_OK


def cmd_verify(args, cfg: ExperimentConfig) -> int:
    _, rows = _load(args, cfg)
    outcome = verify_report(rows, cfg.epsilon)
    print(outcome.text)
    return EXIT_OK if outcome.ok else EXIT_BUG


def cmd_report(args, cfg: ExperimentConfig) -> int:
    rc = cmd_tally(args, cfg)
    _, rows = _load(args, cfg)
    print(comparison_report(rows))
    print(stats_report(rows))
    return max(rc, cmd_verify(args, cfg))


def cmd_simulate(args, cfg: ExperimentConfig) -> int:
    if not is_prime(args.p) or args.p < 3:
        raise UsageError(f"{args.p} is not an odd prime")
    if cfg.trials < 1:
        raise UsageError("trials must be positive")
    print(simulate_report(args.p, cfg.trials, cfg.seed, cfg.workers))
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "tally": cmd_tally,
    "stats": cmd_stats,
    "verify": cmd_verify,
    "report": cmd_report,
    "simulate": cmd_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = _config(args)
        log.debug("config: %s", cfg.to_dict())
        return COMMANDS[args.command](args, cfg)
    except (UsageError, InvalidInput) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResultsFormatError, InsufficientData) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OracleMismatch, InvariantViolation) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_BUG


if __name__ == "__main__":
    sys.exit(main())
