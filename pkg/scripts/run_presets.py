"""Run every config in configs/ through the CLI and print a combined report.

    python3 scripts/run_presets.py [--workers 4] [--only c02 c07] [--out results]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from wignerlab.harness import cli
from wignerlab.harness.io import load_summary, render_report

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--only", nargs="*", default=None, help="config name prefixes to keep")
    ap.add_argument("--out", default=str(ROOT / "results"))
    args = ap.parse_args(argv)

    configs = sorted((ROOT / "configs").glob("*.json"))
    if args.only:
        configs = [c for c in configs if any(c.stem.startswith(p) for p in args.only)]
    summaries, codes = [], {}
    for cfg in configs:
        out = Path(args.out) / cfg.stem
        print(f"== {cfg.stem}", flush=True)
        codes[cfg.stem] = cli.main(["run", str(cfg), "--out", str(out), "--workers", str(args.workers)])
        if (out / "summary.json").exists():
            summaries.append(load_summary(out / "summary.json"))
    print()
    print(render_report(summaries), end="")
    for name, code in codes.items():
        print(f"{name}: exit {code}")
    return max(codes.values(), default=0)


if __name__ == "__main__":
    sys.exit(main())
