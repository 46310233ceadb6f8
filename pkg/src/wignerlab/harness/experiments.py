"""Dispatch from an :class:`ExperimentConfig` to the verifiers.

Every experiment returns the raw :class:`TrialStat` stream plus summary rows.
A row carries one checked statistic with its rule, so a report can be
rebuilt from the summary JSON alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .. import verify as V
from ..cumulants import verify_expansion
from ..distributions import get_distribution
from ..ensembles import sample_composite
from ..errors import ConfigurationError
from ..rng import trial_stream
from ..spectral import derivation_check
from .config import ExperimentConfig


@dataclass
class ExperimentResult:
    experiment: str
    stats: list
    rows: list
    details: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(r["verdict"] for r in self.rows)


def row(experiment, statistic, value, rule, bound, verdict, N=None, Ns=None, z=None) -> dict:
    """``rule`` is one of ``<=``, ``>=``, ``within`` (bound = [target, tol]) or ``info`` (reported, not checked)."""
    zz = None
    if z is not None:
        zz = [[float(c.real), float(c.imag)] for c in z] if isinstance(z, (list, tuple)) \
            else [float(z.real), float(z.imag)]
    return {"experiment": experiment, "N": N, "Ns": Ns, "z": zz, "statistic": statistic,
            "value": None if value is None else float(value), "rule": rule, "bound": bound,
            "verdict": bool(verdict)}


def _thresholds(cfg: ExperimentConfig, defaults: dict) -> dict:
    unknown = set(cfg.thresholds) - set(defaults)
    if unknown:
        raise ConfigurationError(
            f"unknown thresholds for {cfg.experiment}: {sorted(unknown)}; allowed: {sorted(defaults)}")
    return {**defaults, **cfg.thresholds}


def _need_z(cfg, at_least=1):
    if len(cfg.z_points) < at_least:
        raise ConfigurationError(f"{cfg.experiment} needs at least {at_least} z_points")


def run_equipartition(cfg: ExperimentConfig) -> ExperimentResult:
    th = _thresholds(cfg, {"target_slope": -0.5, "slope_tolerance": 0.15, "min_r2": 0.95,
                           "identity_tol": 1e-9})
    ex = "equipartition"
    rows, details = [], {}
    if len(cfg.Ns) >= 3:
        rep = V.equipartition_scaling(cfg.model, cfg.Ns, cfg.trials, cfg.seed, cfg.workers,
                                      th["target_slope"], th["slope_tolerance"], th["min_r2"],
                                      th["identity_tol"])
        stats = rep.stats
        for p in rep.per_N:
            rows.append(row(ex, "mean max_dev", p["mean"], "info", None, True, N=p["N"]))
        rows.append(row(ex, "slope", rep.slope, "within", [th["target_slope"], th["slope_tolerance"]],
                        abs(rep.slope - th["target_slope"]) <= th["slope_tolerance"], Ns=cfg.Ns))
        rows.append(row(ex, "r2", rep.r2, ">=", th["min_r2"], rep.r2 >= th["min_r2"], Ns=cfg.Ns))
        for k in ("max_dev_diag_slope", "max_dev_offdiag_slope"):
            rows.append(row(ex, k.replace("_slope", " slope"), rep.extra[k], "info", None, True, Ns=cfg.Ns))
        details = rep.to_dict()
    else:
        stats = []
        for N in cfg.Ns:
            rep = V.energy_identity_check(cfg.model, N, cfg.trials, cfg.seed, cfg.workers)
            stats += rep.stats
            mean = float(np.mean([s.value for s in rep.stats if s.statistic == "max_dev"]))
            rows.append(row(ex, "mean max_dev", mean, "info", None, True, N=N))
    for N in cfg.Ns:
        worst = max(s.value for s in stats if s.N == N and s.statistic == "identity_residual")
        rows.append(row(ex, "identity_residual", worst, "<=", th["identity_tol"],
                        worst <= th["identity_tol"], N=N))
    return ExperimentResult(ex, stats, rows, details)


def run_gaussian_lemma(cfg: ExperimentConfig) -> ExperimentResult:
    th = _thresholds(cfg, {"se_factor": 5.0, "ks_alpha": 0.01})
    ex, stats, rows, details = "gaussian_lemma", [], [], {}
    for N in cfg.Ns:
        rep = V.gaussian_lemma_test(N, cfg.trials, cfg.seed, cfg.workers, cfg.model,
                                    th["se_factor"], th["ks_alpha"])
        stats += rep.stats
        k = th["se_factor"]
        rows += [
            row(ex, "mean", rep.mean, "within", [0.0, k * rep.se_mean], rep.checks["mean"], N=N),
            row(ex, "variance", rep.variance, "within", [1.0, k * rep.se_variance],
                rep.checks["variance"], N=N),
            row(ex, "excess_kurtosis", rep.excess_kurtosis, "within", [0.0, k * rep.se_kurtosis],
                rep.checks["kurtosis"], N=N),
            row(ex, "ks_distance", rep.ks_distance, "<=", rep.ks_critical, rep.checks["ks"], N=N),
            row(ex, "offdiag_energy", rep.offdiag_energy, "within", [1.0, k * rep.offdiag_se],
                rep.checks["offdiag"], N=N),
        ]
        details[str(N)] = rep.to_dict()
    return ExperimentResult(ex, stats, rows, details)


def run_local_law(cfg: ExperimentConfig) -> ExperimentResult:
    th = _thresholds(cfg, {"threshold": 10.0, "percentile": 99.0})
    _need_z(cfg)
    ex, stats, rows, details = "local_law", [], [], {}
    for N in cfg.Ns:
        rep = V.local_law_check(N, cfg.z_points, cfg.trials, cfg.seed, cfg.workers, cfg.model,
                                cfg.domain, th["threshold"], th["percentile"])
        stats += rep.stats
        for p, z in zip(rep.per_z, cfg.z_points):
            q = f"p{th['percentile']:g}"
            rows.append(row(ex, f"{q} entry ratio", p["p_entry"], "<=", th["threshold"],
                            p["p_entry"] <= th["threshold"], N=N, z=z))
            rows.append(row(ex, f"{q} trace ratio", p["p_trace"], "<=", th["threshold"],
                            p["p_trace"] <= th["threshold"], N=N, z=z))
        details[str(N)] = rep.to_dict()
    return ExperimentResult(ex, stats, rows, details)


def run_rigidity(cfg: ExperimentConfig) -> ExperimentResult:
    th = _thresholds(cfg, {"threshold": 10.0, "percentile": 99.0, "edge_width": 5})
    ex, stats, rows, details = "rigidity", [], [], {}
    for N in cfg.Ns:
        rep = V.rigidity_check(N, cfg.trials, cfg.seed, cfg.workers, cfg.model, th["threshold"],
                               th["percentile"], int(th["edge_width"]))
        stats += rep.stats
        rows.append(row(ex, f"p{th['percentile']:g} bulk", rep.p_bulk, "<=", th["threshold"],
                        rep.verdict, N=N))
        rows.append(row(ex, "max edge", rep.edge["max"], "info", None, True, N=N))
        rows.append(row(ex, "bulk below edge", rep.bulk_below_edge_fraction, "info", None, True, N=N))
        details[str(N)] = rep.to_dict()
    return ExperimentResult(ex, stats, rows, details)


def run_observable(cfg: ExperimentConfig) -> ExperimentResult:
    th = _thresholds(cfg, {"threshold": 10.0, "se_factor": 3.0, "std_bound": 10.0,
                           "agreement_tol": 1e-8})
    _need_z(cfg)
    if len(cfg.z_points) > 2:
        raise ConfigurationError("observable takes one z point (z1 = z2) or two (z1, z2)")
    z1 = cfg.z_points[0]
    z2 = cfg.z_points[-1]
    ex, stats, rows, details = "observable", [], [], {}
    for N in cfg.Ns:
        rep = V.observable_expectation_check(cfg.model, N, z1, z2, cfg.trials, cfg.seed, cfg.workers,
                                             cfg.domain, th["threshold"], th["se_factor"],
                                             th["std_bound"], th["agreement_tol"])
        stats += rep.stats
        zz = [z1, z2]
        rows += [
            row(ex, "mean imim", rep.mean_imim, "within", [rep.expected, rep.allowance],
                rep.checks["expectation"], N=N, z=zz),
            row(ex, "std(X - kappa)", rep.std_X_minus_kappa, "<=", th["std_bound"],
                rep.checks["concentration"], N=N, z=zz),
            row(ex, "spectral agreement", rep.max_agreement, "<=", th["agreement_tol"],
                rep.checks["spectral_agreement"], N=N, z=zz),
            row(ex, "min imim", rep.min_imim, "info", None, rep.checks["positivity"], N=N, z=zz),
        ]
        details[str(N)] = rep.to_dict()
    return ExperimentResult(ex, stats, rows, details)


def run_overlap(cfg: ExperimentConfig) -> ExperimentResult:
    th = _thresholds(cfg, {"max_slope": 0.2})
    ex = "overlap"
    rep = V.overlap_bound_check(cfg.model, cfg.Ns, cfg.trials, cfg.seed, cfg.workers, th["max_slope"])
    rows = [row(ex, "mean max_overlap", p["mean"], "info", None, True, N=p["N"]) for p in rep.per_N]
    rows.append(row(ex, "slope", rep.slope, "<=", th["max_slope"], rep.verdict, Ns=cfg.Ns))
    return ExperimentResult(ex, rep.stats, rows, rep.to_dict())


def _monomials(max_degree: int):
    return [(a, n - a) for n in range(max_degree + 1) for a in range(n, -1, -1)]


def run_cumulant_expansion(cfg: ExperimentConfig) -> ExperimentResult:
    th = _thresholds(cfg, {"residual_tol": 1e-12})
    p = cfg.params
    laws = p.get("distributions", ["gaussian_complex"])
    l = int(p.get("l", 3))
    deg = int(p.get("max_degree", 3))
    ex, stats, rows, details = "cumulant_expansion", [], [], {}
    for law_spec in laws:
        law = get_distribution(law_spec)
        mons = _monomials(deg)
        if law.symmetry_class == "real":
            mons = [(n, 0) for n in range(deg + 1)]
        # explicit polynomials as lists of (p, q, coeff) triples, else every monomial up to deg
        polys = p.get("polynomials") or [[(a, b, 1)] for a, b in mons]
        worst = 0.0
        for idx, f in enumerate(polys):
            rep = verify_expansion(law, f, l)
            worst = max(worst, rep.residual)
            label = "+".join(f"{t[0]},{t[1]}" for t in f)
            stats.append(V.TrialStat(ex, 1, idx, cfg.seed, f"residual[{law.name}:{label}]", rep.residual))
        what = "custom f" if p.get("polynomials") else f"deg<={deg}"
        rows.append(row(ex, f"max residual {law.name} (l={l}, {what})", worst, "<=",
                        th["residual_tol"], worst <= th["residual_tol"], N=1))
    return ExperimentResult(ex, stats, rows, details)


def _derivation_trial(cfg, N, trial):
    cm = cfg.model.build(N)
    _, parts = sample_composite(cm, trial_stream(cfg.seed, N, trial))
    idx = [tuple(x) for x in cfg.params.get("indices", [[0, 1], [1, 0], [2, 2], [N - 1, 0]])]
    step = float(cfg.params.get("step", 1e-5))
    order_steps = tuple(cfg.params.get("order_steps", (1e-2, 5e-3)))
    out = []
    for z, (i, j) in product(cfg.z_points, idx):
        r = derivation_check(cm, parts, z, (i, j), step, order_steps)
        mk = lambda name, v: V.TrialStat("derivation_check", N, trial, cfg.seed, f"{name}[{i},{j}]",
                                         float(v), z1=z, model=cfg.model.name)
        out += [mk("cancellation", r.cancellation), mk("order_ratio", r.order_ratio),
                mk("delta_residual", r.delta_residual)]
        if r.cancellation_conjugate is not None:
            out += [mk("cancellation_conjugate", r.cancellation_conjugate),
                    mk("delta_residual_conjugate", r.delta_residual_conjugate)]
    return out


def run_derivation_check(cfg: ExperimentConfig) -> ExperimentResult:
    th = _thresholds(cfg, {"cancel_tol": 1e-6, "ratio_low": 3.5, "ratio_high": 4.5,
                           "delta_tol": 1e-12})
    _need_z(cfg)
    ex = "derivation_check"
    stats = []
    for N in cfg.Ns:
        for t in range(cfg.trials):
            stats += _derivation_trial(cfg, N, t)
    rows = []
    for N, z in product(cfg.Ns, cfg.z_points):
        sel = [s for s in stats if s.N == N and s.z1 == z]

        def worst(prefix, fn=max):
            vals = [s.value for s in sel if s.statistic.startswith(prefix + "[")]
            return fn(vals) if vals else None

        c = max(v for v in (worst("cancellation"), worst("cancellation_conjugate")) if v is not None)
        d = max(v for v in (worst("delta_residual"), worst("delta_residual_conjugate")) if v is not None)
        lo, hi = worst("order_ratio", min), worst("order_ratio", max)
        rows += [
            row(ex, "max cancellation", c, "<=", th["cancel_tol"], c <= th["cancel_tol"], N=N, z=z),
            row(ex, "min order ratio", lo, ">=", th["ratio_low"], lo >= th["ratio_low"], N=N, z=z),
            row(ex, "max order ratio", hi, "<=", th["ratio_high"], hi <= th["ratio_high"], N=N, z=z),
            row(ex, "max delta residual", d, "<=", th["delta_tol"], d <= th["delta_tol"], N=N, z=z),
        ]
    return ExperimentResult(ex, stats, rows, {})


RUNNERS = {
    "equipartition": run_equipartition,
    "gaussian_lemma": run_gaussian_lemma,
    "local_law": run_local_law,
    "rigidity": run_rigidity,
    "observable": run_observable,
    "overlap": run_overlap,
    "cumulant_expansion": run_cumulant_expansion,
    "derivation_check": run_derivation_check,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[cfg.experiment](cfg)
