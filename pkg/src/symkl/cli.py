"""Command line interface.

Subcommands
-----------
estimate
    Point estimate, plug-in variance, and confidence interval from a
    counts CSV file.
simulate
    Run a replicated experiment from a config JSON file and write
    ``records.csv``, ``summary.json``, and ``manifest.json`` (plus
    ``bounds.csv`` when the bounds check is requested).
clt-check, lln-check
    ``simulate`` preset to a single check, with a built-in default config
    so they run out of the box.
bounds-check
    Evaluate the tail-bound grid against observed deviation frequencies;
    writes ``bounds.csv``, ``summary.json``, and ``manifest.json``.

Exit codes
----------
0 success; 1 usage error or malformed input; 2 degenerate data
(estimate undefined); 3 a requested check failed (reports are still
written).
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .asymptotics import confidence_interval, plugin_sigma2
from .bounds import DEFAULT_G_GRID, bound_table
from .estimator import DegenerateSampleError, plug_in_estimate
from .io import (
    CountsFormatError,
    RunManifest,
    config_to_dict,
    load_config,
    read_counts_csv,
    write_bounds_csv,
    write_manifest,
    write_records_csv,
    write_summary_json,
    write_json,
)
from .model import PopulationModel
from .montecarlo import ExperimentConfig, check_bound_rows, run_experiment

DEFAULT_MODEL_PARAMS = {
    "label_prob": 0.5,
    "cond_p": [0.5, 0.5],
    "cond_q": [0.25, 0.75],
}

DEFAULT_MASTER_SEED = 20260815

_DEFAULT_CONFIGS = {
    "clt-check": dict(n_values=(10000,), replications=2000, checks=("clt",)),
    "lln-check": dict(n_values=(1000, 10000, 100000), replications=200, checks=("lln",)),
    "bounds-check": dict(n_values=(100, 1000, 10000), replications=100000, checks=("bounds",)),
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems must map to exit code 1, not argparse's default 2
    def error(self, message):
        raise _UsageError(message)


def _fmt(value: float) -> str:
    # shortest value-preserving decimal, kinder to read than fixed %.17g
    return repr(float(value))


def cmd_estimate(args) -> int:
    try:
        counts = read_counts_csv(args.counts)
    except FileNotFoundError:
        print(f"error: no such file: {args.counts}", file=sys.stderr)
        return 1
    except CountsFormatError as exc:
        print(f"error: {args.counts}: {exc}", file=sys.stderr)
        return 1
    est = plug_in_estimate(counts)
    if est.degenerate:
        print(f"degenerate sample: {est.reason}", file=sys.stderr)
        return 2
    variance = plugin_sigma2(counts)
    ci = confidence_interval(est, variance, args.level)
    print(f"n: {est.n}")
    print(f"estimate: {_fmt(est.value)}")
    print(f"sigma2_hat: {_fmt(variance.sigma2)}")
    print(f"ci_level: {_fmt(ci.level)}")
    print(f"ci_lo: {_fmt(ci.lower)}")
    print(f"ci_hi: {_fmt(ci.upper)}")
    if ci.degenerate_variance:
        print(
            "warning: plug-in variance is zero; interval collapsed to a point",
            file=sys.stderr,
        )
    return 0


def _load_or_default_config(args) -> ExperimentConfig:
    if args.config is not None:
        config = load_config(args.config)
    else:
        preset = _DEFAULT_CONFIGS.get(args.command)
        if preset is None:
            raise _UsageError("simulate requires --config")
        config = ExperimentConfig(
            model=PopulationModel(**DEFAULT_MODEL_PARAMS),
            master_seed=DEFAULT_MASTER_SEED,
            **preset,
        )
    forced = _DEFAULT_CONFIGS.get(args.command)
    overrides = {}
    if forced is not None:
        overrides["checks"] = forced["checks"]
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.level is not None:
        overrides["ci_level"] = args.level
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _manifest(args, config: ExperimentConfig, checks, outputs, started_utc) -> RunManifest:
    return RunManifest(
        package_version=__version__,
        started_utc=started_utc,
        finished_utc=_utc_now(),
        subcommand=args.command,
        master_seed=config.master_seed,
        workers=getattr(args, "workers", 1),
        config=config_to_dict(config),
        checks={c.name: c.passed for c in checks},
        outputs=tuple(outputs),
    )


def _report_checks(checks) -> None:
    for check in checks:
        status = "pass" if check.passed else "FAIL"
        print(f"check {check.name}: {status} ({check.detail})")


def _dry_run_report(config: ExperimentConfig) -> int:
    print("config ok")
    print(f"  alphabet size: {config.model.r}")
    print(f"  n_values: {list(config.n_values)}")
    print(f"  replications: {config.replications}")
    print(f"  master_seed: {config.master_seed}")
    print(f"  ci_level: {config.ci_level}")
    print(f"  checks: {list(config.checks)}")
    return 0


def cmd_simulate(args) -> int:
    config = _load_or_default_config(args)
    if args.dry_run:
        return _dry_run_report(config)
    if args.out_dir is None:
        raise _UsageError(f"{args.command} requires --out-dir (or --dry-run)")
    os.makedirs(args.out_dir, exist_ok=True)

    started = _utc_now()
    result = run_experiment(config, workers=args.workers)
    outputs = ["records.csv", "summary.json", "manifest.json"]
    write_records_csv(result.records, os.path.join(args.out_dir, "records.csv"))
    if result.summary.bound_rows:
        write_bounds_csv(result.summary.bound_rows, os.path.join(args.out_dir, "bounds.csv"))
        outputs.insert(1, "bounds.csv")
    write_summary_json(result.summary, os.path.join(args.out_dir, "summary.json"))
    manifest = _manifest(args, config, result.summary.checks, outputs, started)
    write_manifest(manifest, os.path.join(args.out_dir, "manifest.json"))

    for name in outputs:
        print(f"wrote {os.path.join(args.out_dir, name)}")
    _report_checks(result.summary.checks)
    return 0 if result.summary.all_checks_passed else 3


def cmd_clt_check(args) -> int:
    # same pipeline as simulate; the preset pins checks=("clt",)
    return cmd_simulate(args)


def cmd_lln_check(args) -> int:
    # same pipeline as simulate; the preset pins checks=("lln",)
    return cmd_simulate(args)


def cmd_bounds_check(args) -> int:
    config = _load_or_default_config(args)
    if args.dry_run:
        return _dry_run_report(config)
    if args.out_dir is None:
        raise _UsageError(f"{args.command} requires --out-dir (or --dry-run)")
    os.makedirs(args.out_dir, exist_ok=True)

    started = _utc_now()
    rows = bound_table(
        config.model,
        config.n_values,
        DEFAULT_G_GRID,
        replications=config.replications,
        master_seed=config.master_seed,
    )
    check = check_bound_rows(rows)
    outputs = ["bounds.csv", "summary.json", "manifest.json"]
    write_bounds_csv(rows, os.path.join(args.out_dir, "bounds.csv"))
    summary = {
        "grid_points": len(rows),
        "g_grid": list(DEFAULT_G_GRID),
        "n_values": list(config.n_values),
        "replications": config.replications,
        "checks": [{"name": check.name, "passed": check.passed, "detail": check.detail}],
        "all_checks_passed": check.passed,
    }
    write_json(summary, os.path.join(args.out_dir, "summary.json"))
    manifest = _manifest(args, config, [check], outputs, started)
    write_manifest(manifest, os.path.join(args.out_dir, "manifest.json"))

    for name in outputs:
        print(f"wrote {os.path.join(args.out_dir, name)}")
    _report_checks([check])
    return 0 if check.passed else 3


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="symkl",
        description="Symmetric KL divergence estimation and verification harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    est = sub.add_parser("estimate", help="estimate from a counts CSV file")
    est.add_argument("counts", help="counts CSV: label-1 row then label-0 row")
    est.add_argument("--level", type=float, default=0.95, help="confidence level")
    est.set_defaults(func=cmd_estimate)

    runners = (
        ("simulate", "run a replicated experiment from a config file", cmd_simulate),
        ("clt-check", "normality check of the scaled error", cmd_clt_check),
        ("lln-check", "shrinking-error check across sample sizes", cmd_lln_check),
        ("bounds-check", "tail bounds against observed frequencies", cmd_bounds_check),
    )
    for name, help_text, func in runners:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="experiment config JSON")
        p.add_argument("--out-dir", help="directory for result files")
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--level", type=float, help="override the confidence level")
        p.add_argument("--workers", type=int, default=1, help="worker processes")
        p.add_argument("--dry-run", action="store_true",
                       help="validate the config and exit without running")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DegenerateSampleError as exc:
        print(f"degenerate sample: {exc}", file=sys.stderr)
        return 2
    except CountsFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())
