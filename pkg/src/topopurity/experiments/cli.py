"""Command-line entry point: ``topopurity <subcommand> ...``.

Exit codes: 0 success, 2 configuration error, 3 budget exceeded, 4 assertion
(a theorem or cross-check failed), 1 anything else.
"""

import argparse
import dataclasses
import sys

from ..circuits import classify
from ..errors import BudgetExceededError, ConfigurationError, TopoPurityError
from ..lattice import LatticeConfig, build_lattice
from ..topo import evolved_topological_purity, format_ratio, topological_purity
from .config import ORACLES, ExperimentConfig, load_config
from .files import read_region, read_string
from .suites import build_partition, make_oracle, run_oracle_suite, run_theorem_suite

EXIT_OK, EXIT_OTHER, EXIT_CONFIG, EXIT_BUDGET, EXIT_ASSERT = 0, 1, 2, 3, 4


class AssertionFailure(Exception):
    pass


def _config(args) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
    elif args.L is not None and args.d is not None:
        cfg = ExperimentConfig(LatticeConfig(args.L, args.d))
    else:
        raise ConfigurationError("pass --config or both --L and --d")
    changes = {}
    if args.L is not None or args.d is not None:
        changes["lattice"] = LatticeConfig(args.L if args.L is not None else cfg.lattice.L,
                                           args.d if args.d is not None else cfg.lattice.d)
    if args.oracle:
        changes["oracle"] = args.oracle
    if args.seed is not None:
        changes["mc_seed"] = args.seed
        changes["strings"] = dataclasses.replace(cfg.strings, seed=args.seed)
    if args.samples is not None:
        changes["samples"] = args.samples
    if args.budget is not None:
        changes["term_cap"] = args.budget
    if args.csv:
        changes["csv"] = args.csv
        changes["base_dir"] = "."
    return dataclasses.replace(cfg, **changes)


def cmd_purity(args, out):
    cfg = _config(args)
    if not args.region:
        raise ConfigurationError("purity needs --region")
    lat = build_lattice(cfg.lattice)
    region = read_region(lat, args.region)
    value = make_oracle(cfg.oracle, lat, cfg.max_amplitudes)(region)
    text = format_ratio(value, lat.d)
    print("1" if value == 1 else f"{text} ({float(value):.6g})", file=out)


def cmd_toppurity(args, out):
    cfg = _config(args)
    lat = build_lattice(cfg.lattice)
    rep = topological_purity(make_oracle(cfg.oracle, lat, cfg.max_amplitudes),
                             build_partition(cfg, lat))
    print(rep.ratio_text(), file=out)
    if args.verbose:
        print(rep.to_text(), file=out)


def cmd_evolve(args, out):
    cfg = _config(args)
    if not args.string:
        raise ConfigurationError("evolve needs --string")
    lat = build_lattice(cfg.lattice)
    part = build_partition(cfg, lat)
    s = read_string(lat, args.string)
    rep = evolved_topological_purity(make_oracle(cfg.oracle, lat, cfg.max_amplitudes), part, s,
                                     term_cap=cfg.term_cap)
    print(rep.to_text(), file=out)
    print(f"terms = {rep.term_counts}", file=out)


def cmd_check_string(args, out):
    cfg = _config(args)
    if not args.string:
        raise ConfigurationError("check-string needs --string")
    lat = build_lattice(cfg.lattice)
    s = read_string(lat, args.string)
    verdict = classify(s, build_partition(cfg, lat))
    print(verdict.describe(), file=out)
    if not verdict.safe:
        bar = s.reverse()
        for chain in verdict.witness:
            for j in chain:
                label = bar.labels[j] if bar.labels else f"domain {j}"
                print(f"  S-bar[{j}]: {label}", file=out)


def cmd_oracle_compare(args, out):
    cfg = _config(args)
    res = run_oracle_suite(cfg)
    passed = sum(int(r["pass"]) for r in res.rows)
    print(f"oracle-compare: {passed}/{len(res.rows)} checks passed", file=out)
    if not cfg.csv:
        out.write(res.csv_text)
    if res.violations:
        raise AssertionFailure(f"failed checks: {', '.join(res.violations)}")


def cmd_suite(args, out):
    cfg = _config(args)
    res = run_theorem_suite(cfg)
    safe = sum(1 for r in res.rows if r["safe"] == 1)
    print(f"suite: {len(res.rows)} strings, {safe} safe, {len(res.violations)} violations",
          file=out)
    if not cfg.csv:
        out.write(res.csv_text)
    if res.violations:
        raise AssertionFailure(f"theorem violated for: {', '.join(res.violations)}")


COMMANDS = {
    "purity": (cmd_purity, "exact purity of a region"),
    "toppurity": (cmd_toppurity, "topological purity of the configured partition"),
    "evolve": (cmd_evolve, "topological purity after a circuit string"),
    "check-string": (cmd_check_string, "classify a circuit string as safe or unsafe"),
    "oracle-compare": (cmd_oracle_compare, "cross-check engines against the state vector"),
    "suite": (cmd_suite, "run the theorem suite and write CSV"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topopurity",
                                     description="Topological purity under random circuits")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="INI experiment config")
        p.add_argument("--L", type=int, help="lattice size (overrides config)")
        p.add_argument("--d", type=int, help="qudit dimension (overrides config)")
        p.add_argument("--oracle", choices=ORACLES, help="initial-state purity oracle")
        p.add_argument("--seed", type=int, help="seed for strings and Monte Carlo")
        p.add_argument("--samples", type=int, help="Monte-Carlo samples")
        p.add_argument("--budget", type=int, help="maximum terms per swap combination")
        p.add_argument("--csv", help="write CSV here")
        p.add_argument("--region", help="region file")
        p.add_argument("--string", help="circuit string file")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command][0](args, out)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (AssertionFailure, AssertionError) as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except (TopoPurityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
