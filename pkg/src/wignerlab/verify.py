"""Monte Carlo verifiers with explicit pass/fail rules.

Rate claims ("X is of order N^-g up to N^eps") are checked by a log-log
slope fit across N; order-one claims by a percentile-against-threshold rule.
Each trial is a pure function of ``(seed, N, trial)`` and results are sorted
by ``(N, trial)`` before any reduction, so reports do not depend on the
number of workers.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Callable, Sequence

import numpy as np
from scipy import stats as sstats

from . import semicircle as sc
from .ensembles import PRESETS, ModelSpec, auxiliary_matrix, pair_weights, sample_composite
from .errors import ConfigurationError, DomainError
from .rng import trial_stream
from .spectral import eigh, normalized_trace_m, observable, quadratic_forms, resolvent


@dataclass(frozen=True)
class TrialStat:
    experiment: str
    N: int
    trial: int
    seed: int
    statistic: str
    value: float
    z1: complex | None = None
    z2: complex | None = None
    model: str = ""


class TrialFailure(RuntimeError):
    """A trial hit a numerical failure (e.g. eigensolver non-convergence)."""

    def __init__(self, experiment: str, N: int, trial: int, cause: Exception):
        super().__init__(f"{experiment}: trial {trial} at N={N} failed: {cause}")
        self.N, self.trial = N, trial


# -- scheduling -----------------------------------------------------------------------


def _guarded(fn, experiment, key):
    N, trial = key
    try:
        return fn(N, trial)
    except np.linalg.LinAlgError as exc:
        raise TrialFailure(experiment, N, trial, exc) from exc


def run_trials(fn: Callable, keys: Sequence[tuple[int, int]], workers: int = 1,
               experiment: str = "") -> list:
    """Evaluate ``fn(N, trial)`` for each key, returned in sorted key order."""
    keys = sorted(keys)
    call = partial(_guarded, fn, experiment)
    if workers <= 1 or len(keys) <= 1:
        return [call(k) for k in keys]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(call, keys, chunksize=max(1, len(keys) // (4 * workers))))


def _keys(Ns, trials):
    return [(N, t) for N in Ns for t in range(trials)]


def _resolve_model(model) -> ModelSpec:
    if model is None:
        return PRESETS["gue_pair"]
    if isinstance(model, str):
        return PRESETS[model]
    return model


# -- scaling fit ----------------------------------------------------------------------


@dataclass
class ScalingFit:
    slope: float
    intercept: float
    r2: float
    residuals: list
    Ns: list


def scaling_fit(Ns: Sequence[float], values: Sequence[float]) -> ScalingFit:
    """Least squares of ``log value`` on ``log N``; nonpositive values are dropped."""
    pts = [(float(n), float(v)) for n, v in zip(Ns, values)]
    bad = [p for p in pts if not (p[1] > 0 and math.isfinite(p[1]))]
    if bad:
        warnings.warn(f"scaling_fit: excluding nonpositive statistics at N = {[p[0] for p in bad]}")
    good = [p for p in pts if p not in bad]
    if len(good) < 3:
        raise ValueError(f"scaling_fit needs at least 3 usable points, got {len(good)}")
    x = np.log([p[0] for p in good])
    y = np.log([p[1] for p in good])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(res**2)) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(float(slope), float(intercept), r2, res.tolist(), [p[0] for p in good])


def _summary(vals: np.ndarray) -> dict:
    return {"n": int(vals.size), "mean": float(vals.mean()), "max": float(vals.max()),
            "q50": float(np.percentile(vals, 50)), "q90": float(np.percentile(vals, 90)),
            "q99": float(np.percentile(vals, 99))}


@dataclass
class ScalingReport:
    experiment: str
    statistic: str
    Ns: list
    per_N: list
    slope: float
    intercept: float
    r2: float
    residuals: list
    target_slope: float | None
    tolerance: float | None
    min_r2: float | None
    max_slope: float | None
    verdict: bool
    extra: dict = field(default_factory=dict)
    stats: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("stats")
        return d


def _scaling_report(experiment, statistic, stats, Ns, *, target=None, tolerance=None,
                    min_r2=None, max_slope=None, extra=None) -> ScalingReport:
    per_N = []
    means = []
    for N in Ns:
        vals = np.array([s.value for s in stats if s.N == N and s.statistic == statistic])
        summ = _summary(vals)
        summ["N"] = N
        per_N.append(summ)
        means.append(summ["mean"])
    fit = scaling_fit(Ns, means)
    ok = True
    if target is not None:
        ok = ok and abs(fit.slope - target) <= tolerance
    if min_r2 is not None:
        ok = ok and fit.r2 >= min_r2
    if max_slope is not None:
        ok = ok and fit.slope <= max_slope
    return ScalingReport(experiment, statistic, list(Ns), per_N, fit.slope, fit.intercept, fit.r2,
                         fit.residuals, target, tolerance, min_r2, max_slope, bool(ok),
                         extra or {}, stats)


def _check_scaling_inputs(Ns, trials, min_trials=20):
    Ns = list(Ns)
    if len(Ns) < 3 or Ns != sorted(Ns) or len(set(Ns)) != len(Ns):
        raise ConfigurationError(f"need at least 3 strictly ascending N values, got {Ns}")
    if trials < min_trials:
        raise ConfigurationError(f"need at least {min_trials} trials per N, got {trials}")
    return Ns


# -- equipartition ----------------------------------------------------------------------


def _equipartition_trial(model: ModelSpec, seed: int, N: int, trial: int) -> list:
    cm = model.build(N)
    H, parts = sample_composite(cm, trial_stream(seed, N, trial))
    sd = eigh(H)
    dt = quadratic_forms(sd, parts, cm.sigmas, keep_tables=False)
    mk = partial(TrialStat, "equipartition", N, trial, seed, model=model.name)
    return [mk("max_dev", dt.overall_max),
            mk("max_dev_diag", float(dt.max_diag.max())),
            mk("max_dev_offdiag", float(dt.max_offdiag.max())),
            mk("identity_residual", float(dt.identity_residual.max()))]


def equipartition_scaling(model=None, Ns=(64, 128, 256, 512), trials: int = 100, seed: int = 0,
                          workers: int = 1, target: float = -0.5, tolerance: float = 0.15,
                          min_r2: float = 0.95, identity_tol: float = 1e-9) -> ScalingReport:
    """Slope of ``max |w_a^* H_i w_b - sigma_i lambda_a delta_ab|`` against N."""
    model = _resolve_model(model)
    Ns = _check_scaling_inputs(Ns, trials)
    rows = run_trials(partial(_equipartition_trial, model, seed), _keys(Ns, trials), workers,
                      "equipartition")
    stats = [s for r in rows for s in r]
    ident = max(s.value for s in stats if s.statistic == "identity_residual")
    rep = _scaling_report("equipartition", "max_dev", stats, Ns, target=target, tolerance=tolerance,
                          min_r2=min_r2, extra={"max_identity_residual": ident,
                                                "identity_tol": identity_tol, "model": model.name})
    for name in ("max_dev_diag", "max_dev_offdiag"):
        means = [np.mean([s.value for s in stats if s.N == N and s.statistic == name]) for N in Ns]
        rep.extra[f"{name}_slope"] = scaling_fit(Ns, means).slope
    rep.verdict = rep.verdict and ident <= identity_tol
    return rep


@dataclass
class IdentityReport:
    N: int
    trials: int
    max_residual_per_trial: list
    tolerance: float
    verdict: bool
    stats: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("stats")
        return d


def energy_identity_check(model=None, N: int = 256, trials: int = 20, seed: int = 0,
                          workers: int = 1, tol: float = 1e-9) -> IdentityReport:
    """``max_a |sum_i sigma_i w_a^* H_i w_a - lambda_a|`` in every trial."""
    model = _resolve_model(model)
    rows = run_trials(partial(_equipartition_trial, model, seed), _keys([N], trials), workers,
                      "equipartition")
    stats = [s for r in rows for s in r]
    vals = [s.value for s in stats if s.statistic == "identity_residual"]
    return IdentityReport(N, trials, vals, tol, bool(max(vals) <= tol), stats)


# -- Gaussian lemma -----------------------------------------------------------------------


@dataclass
class DistributionTestReport:
    N: int
    trials: int
    sample_count: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    ks_distance: float
    ks_pvalue: float
    ks_critical: float
    se_mean: float
    se_variance: float
    se_kurtosis: float
    offdiag_energy: float
    offdiag_se: float
    checks: dict
    verdict: bool
    stats: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("stats")
        return d


def _gaussian_lemma_trial(model: ModelSpec, seed: int, N: int, trial: int):
    cm = model.build(N)
    H, parts = sample_composite(cm, trial_stream(seed, N, trial))
    s1, s2 = pair_weights(cm)
    sd = eigh(H)
    W = sd.eigenvectors
    Q1 = np.real(np.einsum("ia,ij,ja->a", W.conj(), parts[0], W))
    s = s1 * Q1 - sd.eigenvalues / 2
    M = W.conj().T @ auxiliary_matrix(parts[0], parts[1], s1, s2) @ W
    off = N * np.abs(M[~np.eye(N, dtype=bool)]) ** 2
    mk = partial(TrialStat, "gaussian_lemma", N, trial, seed, model=model.name)
    stats = [mk("scaled_var", float(np.mean(4 * N * s**2))),
             mk("offdiag_energy", float(off.mean()))]
    return stats, math.sqrt(4 * N) * s, float(off.mean())


def gaussian_lemma_test(N: int = 200, trials: int = 300, seed: int = 0, workers: int = 1,
                        model=None, se_factor: float = 5.0, ks_alpha: float = 0.01
                        ) -> DistributionTestReport:
    """Exact Gaussian law of ``(w_a, sigma_1 H_1 w_a) - lambda_a / 2`` for a GUE pair.

    Pools the standardised values over all eigenvectors and trials and tests
    mean, variance, excess kurtosis, and the Kolmogorov-Smirnov distance
    against N(0, 1); also checks ``N E|w_a^* Haux w_b|^2 = 1`` for a != b.
    """
    model = _resolve_model(model)
    cm = model.build(max(N, 2))
    if cm.k != 2 or not cm.is_gaussian or any(c.is_real for c in cm.components) \
            or any(c.offdiag.tau != 0 for c in cm.components):
        raise ConfigurationError("the Gaussian lemma test needs two complex Gaussian (GUE) components")
    if abs(cm.sigmas[0] - cm.sigmas[1]) > 1e-12:
        raise ConfigurationError("the Gaussian lemma test uses equal weights sigma = (1/sqrt 2, 1/sqrt 2)")
    rows = run_trials(partial(_gaussian_lemma_trial, model, seed), _keys([N], trials), workers,
                      "gaussian_lemma")
    x = np.concatenate([r[1] for r in rows])
    offs = np.array([r[2] for r in rows])
    stats = [s for r in rows for s in r[0]]
    n = x.size
    mean = float(x.mean())
    var = float(x.var(ddof=1))
    skew = float(sstats.skew(x))
    kurt = float(sstats.kurtosis(x))
    ks = sstats.kstest(x, "norm")
    ks_crit = float(sstats.kstwo.ppf(1 - ks_alpha, n))
    se_mean = math.sqrt(var / n)
    m4 = float(np.mean((x - mean) ** 4))
    se_var = math.sqrt(max(m4 - var**2, 0.0) / n)
    se_kurt = math.sqrt(24.0 / n)
    off_mean = float(offs.mean())
    off_se = float(offs.std(ddof=1) / math.sqrt(offs.size)) if offs.size > 1 else float("inf")
    checks = {
        "mean": abs(mean) <= se_factor * se_mean,
        "variance": abs(var - 1) <= se_factor * se_var,
        "kurtosis": abs(kurt) <= se_factor * se_kurt,
        "ks": float(ks.statistic) < ks_crit,
        "offdiag": abs(off_mean - 1) <= max(se_factor * off_se, 0.0),
    }
    return DistributionTestReport(N, trials, n, mean, var, skew, kurt, float(ks.statistic),
                                  float(ks.pvalue), ks_crit, se_mean, se_var, se_kurt, off_mean,
                                  off_se, checks, all(checks.values()), stats)


# -- local law -------------------------------------------------------------------------


def _local_law_trial(model: ModelSpec, seed: int, zs: tuple, N: int, trial: int) -> list:
    cm = model.build(N)
    H, _ = sample_composite(cm, trial_stream(seed, N, trial))
    sd = eigh(H)
    out = []
    mk = partial(TrialStat, "local_law", N, trial, seed, model=model.name)
    for z in zs:
        G = resolvent(sd, z)
        ms = sc.m_sc(z)
        ps = sc.psi(z, z, N)
        G[np.diag_indices(N)] -= ms
        r1 = float(np.max(np.abs(G))) / ps
        r2 = abs(normalized_trace_m(sd, z) - ms) / ps**2
        out.append(mk("ratio_entry", r1, z1=z))
        out.append(mk("ratio_trace", r2, z1=z))
    return out


@dataclass
class LocalLawReport:
    N: int
    trials: int
    per_z: list
    threshold: float
    percentile: float
    verdict: bool
    stats: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("stats")
        return d


def local_law_check(N: int = 1024, z_points=(0.5 + 0.2j, 1.5 + 0.1j, 0.05j), trials: int = 20,
                    seed: int = 0, workers: int = 1, model=None,
                    domain: sc.DomainParams = sc.DomainParams(), threshold: float = 10.0,
                    percentile: float = 99.0) -> LocalLawReport:
    """Entrywise and averaged resolvent deviations in units of Psi and Psi^2."""
    model = _resolve_model(model)
    zs = tuple(sc.as_complex(z) for z in z_points)
    for z in zs:
        if not sc.in_domain(z, N, domain):
            raise DomainError(f"z = {z} lies outside the spectral domain for N = {N}")
    rows = run_trials(partial(_local_law_trial, model, seed, zs), _keys([N], trials), workers,
                      "local_law")
    stats = [s for r in rows for s in r]
    per_z = []
    for z in zs:
        r1 = np.array([s.value for s in stats if s.z1 == z and s.statistic == "ratio_entry"])
        r2 = np.array([s.value for s in stats if s.z1 == z and s.statistic == "ratio_trace"])
        p1, p2 = float(np.percentile(r1, percentile)), float(np.percentile(r2, percentile))
        per_z.append({"z": [z.real, z.imag], "psi": sc.psi(z, z, N),
                      "ratio_entry": _summary(r1), "ratio_trace": _summary(r2),
                      "p_entry": p1, "p_trace": p2,
                      "verdict": bool(p1 <= threshold and p2 <= threshold)})
    return LocalLawReport(N, trials, per_z, threshold, percentile,
                          all(p["verdict"] for p in per_z), stats)


def _entry_ratio_trial(model: ModelSpec, seed: int, z: complex, N: int, trial: int):
    cm = model.build(N)
    H, _ = sample_composite(cm, trial_stream(seed, N, trial))
    G0 = resolvent(eigh(H), z)[0]
    G0[0] -= sc.m_sc(z)
    return np.abs(G0[1:]) / sc.psi(z, z, N)


def local_law_uniformity(Ns=(256, 512, 1024), z=0.5 + 0.2j, trials: int = 20, seed: int = 0,
                         workers: int = 1, model=None, max_ks: float = 0.2) -> dict:
    """Two-sample KS distances across N of the pooled entrywise ratios ``|G_ij| / Psi``.

    Pools the off-diagonal entries of the first row; the per-trial maximum is
    not used since it drifts like a logarithm of N.
    """
    model = _resolve_model(model)
    z = sc.as_complex(z)
    rows = run_trials(partial(_entry_ratio_trial, model, seed, z), _keys(Ns, trials), workers,
                      "local_law")
    pooled = {N: np.concatenate(rows[i * trials:(i + 1) * trials]) for i, N in enumerate(sorted(Ns))}
    dists = {}
    Ns = sorted(Ns)
    for a_i, a in enumerate(Ns):
        for b in Ns[a_i + 1:]:
            dists[f"{a}-{b}"] = float(sstats.ks_2samp(pooled[a], pooled[b]).statistic)
    worst = max(dists.values())
    return {"z": [z.real, z.imag], "ks": dists, "max_ks": worst,
            "means": {str(N): float(v.mean()) for N, v in pooled.items()},
            "verdict": bool(worst <= max_ks)}


# -- rigidity ---------------------------------------------------------------------------


def _rigidity_trial(model: ModelSpec, seed: int, edge: int, N: int, trial: int):
    cm = model.build(N)
    H, _ = sample_composite(cm, trial_stream(seed, N, trial))
    lam = np.linalg.eigvalsh(H)
    gam = sc.quantiles(N)
    alpha = np.arange(1, N + 1)
    dev = np.abs(lam - gam)
    norm = dev * N ** (2 / 3) * np.minimum(alpha, N + 1 - alpha) ** (1 / 3)
    is_edge = (alpha <= edge) | (alpha >= N - edge + 1)
    bulk = norm[~is_edge]
    mk = partial(TrialStat, "rigidity", N, trial, seed, model=model.name)
    mid = (N + 1) // 2 - 1
    return [mk("max_bulk", float(bulk.max()) if bulk.size else float(norm.max())),
            mk("max_edge", float(norm[is_edge].max()) if is_edge.any() else 0.0),
            mk("max_all", float(norm.max())),
            mk("bulk_below_edge", float(dev[mid] < dev[0]))]


@dataclass
class RigidityReport:
    N: int
    trials: int
    bulk: dict
    edge: dict
    p_bulk: float
    bulk_below_edge_fraction: float
    threshold: float
    percentile: float
    edge_width: int
    verdict: bool
    stats: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("stats")
        return d


def rigidity_check(N: int = 1024, trials: int = 20, seed: int = 0, workers: int = 1, model=None,
                   threshold: float = 10.0, percentile: float = 99.0, edge_width: int = 5
                   ) -> RigidityReport:
    """``max_a |lambda_a - gamma_a| N^{2/3} min(a, N+1-a)^{1/3}``, edges reported apart."""
    if trials < 10:
        raise ConfigurationError(f"rigidity_check needs at least 10 trials, got {trials}")
    model = _resolve_model(model)
    rows = run_trials(partial(_rigidity_trial, model, seed, edge_width), _keys([N], trials), workers,
                      "rigidity")
    stats = [s for r in rows for s in r]
    bulk = np.array([s.value for s in stats if s.statistic == "max_bulk"])
    edge = np.array([s.value for s in stats if s.statistic == "max_edge"])
    frac = float(np.mean([s.value for s in stats if s.statistic == "bulk_below_edge"]))
    p = float(np.percentile(bulk, percentile))
    return RigidityReport(N, trials, _summary(bulk), _summary(edge), p, frac, threshold, percentile,
                          edge_width, bool(p <= threshold), stats)


# -- observable expectation --------------------------------------------------------------


def _observable_trial(model: ModelSpec, seed: int, z1: complex, z2: complex, N: int, trial: int):
    cm = model.build(N)
    H, parts = sample_composite(cm, trial_stream(seed, N, trial))
    s1, s2 = pair_weights(cm)
    sd = eigh(H)
    Ha = auxiliary_matrix(parts[0], parts[1], s1, s2)
    o = observable(sd, Ha, z1, z2, model=cm)
    dev = o.value_X - o.varkappa
    mk = partial(TrialStat, "observable", N, trial, seed, z1=z1, z2=z2, model=model.name)
    return [mk("imim", o.value_imim), mk("imim_spectral", o.value_imim_spectral),
            mk("agreement", o.agreement),
            mk("X_re", o.value_X.real), mk("X_im", o.value_X.imag),
            mk("X_minus_kappa_re", dev.real), mk("X_minus_kappa_im", dev.imag)]


@dataclass
class ObservableReport:
    N: int
    trials: int
    z1: list
    z2: list
    mean_imim: float
    se_imim: float
    expected: float
    allowance: float
    std_X_minus_kappa: float
    mean_X_minus_kappa: list
    std_bound: float
    max_agreement: float
    min_imim: float
    checks: dict
    verdict: bool
    stats: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("stats")
        return d


def observable_expectation_check(model=None, N: int = 512, z1=1j, z2=1j, trials: int = 200,
                                 seed: int = 0, workers: int = 1,
                                 domain: sc.DomainParams = sc.DomainParams(),
                                 threshold: float = 10.0, se_factor: float = 3.0,
                                 std_bound: float = 10.0, agreement_tol: float = 1e-8
                                 ) -> ObservableReport:
    """MC mean of ``<Haux Im G(z1) Haux Im G(z2)>`` against ``Im m_sc(z1) Im m_sc(z2)``."""
    model = _resolve_model(model)
    pair_weights(model.build(2))
    z1c, z2c = sc.as_complex(z1), sc.as_complex(z2)
    for z in (z1c, z2c):
        if not sc.in_domain(z, N, domain):
            raise DomainError(f"z = {z} lies outside the spectral domain for N = {N}")
    if trials < 2:
        raise ConfigurationError("need at least 2 trials for a standard error")
    rows = run_trials(partial(_observable_trial, model, seed, z1c, z2c), _keys([N], trials), workers,
                      "observable")
    stats = [s for r in rows for s in r]

    def col(name):
        return np.array([s.value for s in stats if s.statistic == name])

    imim = col("imim")
    dev = col("X_minus_kappa_re") + 1j * col("X_minus_kappa_im")
    mean = float(imim.mean())
    se = float(imim.std(ddof=1) / math.sqrt(imim.size))
    expected = sc.m_sc(z1c).imag * sc.m_sc(z2c).imag
    allowance = se_factor * se + threshold * (sc.psi(z1c, z2c, N) ** 2 + N**-0.5)
    std_dev = float(np.sqrt(np.mean(np.abs(dev - dev.mean()) ** 2) * dev.size / (dev.size - 1)))
    agree = float(col("agreement").max())
    positive = (z1c.imag > 0) == (z2c.imag > 0)
    checks = {
        "expectation": abs(mean - expected) <= allowance,
        "concentration": std_dev <= std_bound,
        "spectral_agreement": agree <= agreement_tol,
        "positivity": bool(np.all(imim >= 0)) if positive else True,
    }
    return ObservableReport(N, trials, [z1c.real, z1c.imag], [z2c.real, z2c.imag], mean, se,
                            expected, allowance, std_dev, [float(dev.mean().real), float(dev.mean().imag)],
                            std_bound, agree, float(imim.min()), checks, all(checks.values()), stats)


# -- overlap bound ------------------------------------------------------------------------


def _overlap_trial(model: ModelSpec, seed: int, N: int, trial: int):
    cm = model.build(N)
    H, parts = sample_composite(cm, trial_stream(seed, N, trial))
    s1, s2 = pair_weights(cm)
    sd = eigh(H)
    W = sd.eigenvectors
    M = np.abs(W.conj().T @ auxiliary_matrix(parts[0], parts[1], s1, s2) @ W) ** 2
    mk = partial(TrialStat, "overlap", N, trial, seed, model=model.name)
    off = M[~np.eye(N, dtype=bool)]
    return [mk("max_overlap", N * float(M.max())),
            mk("max_overlap_diag", N * float(np.diagonal(M).max())),
            mk("max_overlap_offdiag", N * float(off.max()) if off.size else 0.0),
            mk("mean_overlap", N * float(M.mean()))]


def overlap_bound_check(model=None, Ns=(64, 128, 256, 512), trials: int = 100, seed: int = 0,
                        workers: int = 1, max_slope: float = 0.2) -> ScalingReport:
    """Slope of ``N max_{a,b} |w_a^* Haux w_b|^2`` across N must stay below ``max_slope``."""
    model = _resolve_model(model)
    pair_weights(model.build(2))
    Ns = _check_scaling_inputs(Ns, trials, min_trials=2)
    rows = run_trials(partial(_overlap_trial, model, seed), _keys(Ns, trials), workers, "overlap")
    stats = [s for r in rows for s in r]
    rep = _scaling_report("overlap", "max_overlap", stats, Ns, max_slope=max_slope,
                          extra={"model": model.name})
    means = [np.mean([s.value for s in stats if s.N == N and s.statistic == "mean_overlap"]) for N in Ns]
    rep.extra["mean_overlap_per_N"] = [float(m) for m in means]
    return rep
