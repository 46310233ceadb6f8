"""Equipartition and overlap scaling across models, as a plain text table.

    python3 scripts/scaling_table.py --Ns 64 128 256 512 --trials 100 --workers 4
"""

from __future__ import annotations

import argparse

from wignerlab import verify as V


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--Ns", type=int, nargs="+", default=[64, 128, 256, 512])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--models", nargs="+", default=["gue_pair", "goe_pair", "twisted_pair", "mixed_triple"])
    args = ap.parse_args(argv)

    print(f"{'model':<14} {'quantity':<14} {'slope':>8} {'R2':>7}  per-N mean")
    for model in args.models:
        eq = V.equipartition_scaling(model, Ns=args.Ns, trials=args.trials, seed=args.seed, workers=args.workers)
        means = " ".join(f"{p['mean']:.3e}" for p in eq.per_N)
        print(f"{model:<14} {'equipartition':<14} {eq.slope:+8.3f} {eq.r2:7.4f}  {means}")
    ov = V.overlap_bound_check("gue_pair", Ns=args.Ns, trials=args.trials, seed=args.seed, workers=args.workers)
    means = " ".join(f"{p['mean']:.3f}" for p in ov.per_N)
    print(f"{'gue_pair':<14} {'overlap':<14} {ov.slope:+8.3f} {ov.r2:7.4f}  {means}")


if __name__ == "__main__":
    main()
