"""Command line: ``run``, ``report``, ``list-distributions``.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 configuration or
input error, 3 numerical failure in a trial.
"""

from __future__ import annotations

import argparse
import sys
import time
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from ..distributions import list_distributions
from ..errors import ConfigurationError, DomainError, ValidationError
from ..verify import TrialFailure
from .config import load_config
from .experiments import run_experiment
from .io import dump_json, load_summary, render_report, summary_dict, trials_csv

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.workers is not None:
            cfg.workers = args.workers
        out = Path(args.out or cfg.output_dir or Path("results") / f"{cfg.experiment}-{cfg.hash[:10]}")
        started = _now()
        t0 = time.perf_counter()
        result = run_experiment(cfg)
    except (ConfigurationError, DomainError, ValidationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrialFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    out.mkdir(parents=True, exist_ok=True)
    files = {"trials": "trials.csv", "summary": "summary.json", "manifest": "manifest.json"}
    (out / files["trials"]).write_text(trials_csv(result.stats), encoding="utf-8")
    summary = summary_dict(cfg, result)
    (out / files["summary"]).write_text(dump_json(summary), encoding="utf-8")
    manifest = {
        "config_path": str(args.config),
        "config_hash": cfg.hash,
        "config": cfg.resolved,
        "seed": cfg.seed,
        "seed_source": cfg.seed_source,
        "workers": cfg.workers,
        "tool_version": tool_version(),
        "started": started,
        "finished": _now(),
        "elapsed_seconds": round(time.perf_counter() - t0, 3),
        "verdicts": {result.experiment: result.verdict},
        "files": sorted(files.values()),
    }
    (out / files["manifest"]).write_text(dump_json(manifest), encoding="utf-8")
    print(render_report([summary]), end="")
    print(f"results written to {out}")
    return EXIT_OK if result.verdict else EXIT_FAIL


def cmd_report(args) -> int:
    try:
        summaries = [load_summary(p) for p in args.summaries]
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(render_report(summaries), end="")
    return EXIT_OK if all(s["verdict"] for s in summaries) else EXIT_FAIL


def cmd_list(args) -> int:
    for d in list_distributions():
        print(d.describe())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wignerlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run one experiment config")
    r.add_argument("config")
    r.add_argument("--workers", type=int, default=None)
    r.add_argument("--out", default=None, help="output directory (overrides the config)")
    r.set_defaults(func=cmd_run)
    rp = sub.add_parser("report", help="render summary JSON files as a table")
    rp.add_argument("summaries", nargs="+")
    rp.set_defaults(func=cmd_report)
    ls = sub.add_parser("list-distributions", help="print the built-in entry laws")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
