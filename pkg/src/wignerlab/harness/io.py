"""Result files: trials CSV, summary JSON, manifest JSON, and the report table."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from ..errors import ValidationError

CSV_COLUMNS = ("experiment", "N", "trial", "seed", "statistic", "value",
               "z1_re", "z1_im", "z2_re", "z2_im")
SUMMARY_VERSION = 1


def fmt_float(x) -> str:
    """17 significant digits: enough to round-trip any float64."""
    return format(float(x), ".17g")


def trials_csv(stats) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in sorted(stats, key=lambda s: (s.N, s.trial)):
        z1 = ("", "") if s.z1 is None else (fmt_float(s.z1.real), fmt_float(s.z1.imag))
        z2 = ("", "") if s.z2 is None else (fmt_float(s.z2.real), fmt_float(s.z2.imag))
        w.writerow((s.experiment, s.N, s.trial, s.seed, s.statistic, fmt_float(s.value), *z1, *z2))
    return buf.getvalue()


def _clean(obj):
    """Make report details JSON-safe (complex -> [re, im], tuples -> lists, nan -> None)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def summary_dict(cfg, result) -> dict:
    return {"version": SUMMARY_VERSION, "experiment": result.experiment, "name": cfg.raw.get("name"),
            "model": cfg.model.name, "seed": cfg.seed, "config_hash": cfg.hash,
            "verdict": result.verdict, "rows": _clean(result.rows),
            "details": _clean(result.details)}


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def load_summary(path) -> dict:
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read summary {path}: {exc}") from None
    if not isinstance(d, dict) or not isinstance(d.get("rows"), list) or "verdict" not in d:
        raise ValidationError(f"{path} is not a summary file (missing rows/verdict)")
    for r in d["rows"]:
        if not isinstance(r, dict) or not {"experiment", "statistic", "verdict"} <= r.keys():
            raise ValidationError(f"{path}: malformed row {r!r}")
    return d


def _bound_text(r) -> str:
    rule, b = r.get("rule"), r.get("bound")
    if rule == "within":
        return f"{b[0]:.6g} ± {b[1]:.3g}"
    if rule in ("<=", ">="):
        return f"{'≤' if rule == '<=' else '≥'} {b:.3g}"
    return ""


def _n_text(r) -> str:
    if r.get("N") is not None:
        return str(r["N"])
    Ns = r.get("Ns") or []
    return f"{min(Ns)}-{max(Ns)}" if Ns else ""


def _z_text(z) -> str:
    if not z:
        return ""
    pts = z if isinstance(z[0], list) else [z]
    return ", ".join(f"{p[0]:g}{p[1]:+g}i" for p in pts)


def _sort_key(r):
    N = r.get("N")
    if N is None:
        N = max(r.get("Ns") or [0]) + 0.5  # fits follow their largest N
    return (r["experiment"], N)


def render_report(summaries: list[dict]) -> str:
    rows = sorted((r for s in summaries for r in s["rows"]), key=_sort_key)
    head = "| experiment | N | z | statistic | value | bound | verdict |"
    lines = [head, "|---|---|---|---|---|---|---|"]
    for r in rows:
        v = "" if r.get("value") is None else f"{r['value']:.6g}"
        mark = "PASS" if r["verdict"] else "FAIL"
        if r.get("rule") == "info":
            mark = "info" if r["verdict"] else "FAIL"
        lines.append(f"| {r['experiment']} | {_n_text(r)} | {_z_text(r.get('z'))} | {r['statistic']} "
                     f"| {v} | {_bound_text(r)} | {mark} |")
    overall = all(s["verdict"] for s in summaries)
    lines.append("")
    lines.append(f"overall: {'PASS' if overall else 'FAIL'}")
    return "\n".join(lines) + "\n"
