import math
import warnings

import numpy as np
import pytest

from oracle_values import LOG_CORRECTED_SLOPE
from wignerlab import semicircle as sc
from wignerlab import verify as V
from wignerlab.ensembles import ComponentSpec, ModelSpec
from wignerlab.errors import ConfigurationError, DomainError
from wignerlab.spectral import eigh, resolvent


def test_scaling_fit_power_law():
    Ns = [64, 128, 256]
    fit = V.scaling_fit(Ns, [4 * n**-0.5 for n in Ns])
    assert fit.slope == pytest.approx(-0.5, abs=1e-12)
    assert fit.r2 == pytest.approx(1.0)
    assert fit.intercept == pytest.approx(math.log(4))


def test_scaling_fit_constant():
    assert V.scaling_fit([10, 20, 40], [3.0, 3.0, 3.0]).slope == pytest.approx(0, abs=1e-12)


def test_scaling_fit_log_factor():
    Ns = [2**k for k in range(6, 13)]
    fit = V.scaling_fit(Ns, [n**-0.5 * math.log(n) for n in Ns])
    assert fit.slope == pytest.approx(LOG_CORRECTED_SLOPE, abs=1e-12)
    # the log factor lifts the slope by about 1/6 over this range
    assert -0.5 < fit.slope < -0.3


def test_scaling_fit_excludes_nonpositive():
    with pytest.warns(UserWarning):
        fit = V.scaling_fit([1, 2, 4, 8], [1.0, 0.0, 0.25, 0.125])
    assert fit.Ns == [1, 4, 8]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(ValueError):
            V.scaling_fit([1, 2, 4], [1.0, -1.0, 0.5])


def test_run_trials_order_and_workers():
    keys = [(8, 2), (4, 1), (8, 0), (4, 0)]
    f = _echo
    one = V.run_trials(f, keys, workers=1)
    two = V.run_trials(f, keys, workers=2)
    assert one == two == [(4, 0), (4, 1), (8, 0), (8, 2)]


def _echo(N, t):
    return (N, t)


def _broken(N, t):
    raise np.linalg.LinAlgError("did not converge")


def test_trial_failure_identifies_trial():
    with pytest.raises(V.TrialFailure) as exc:
        V.run_trials(_broken, [(16, 3)], experiment="x")
    assert exc.value.N == 16 and exc.value.trial == 3


def test_equipartition_config_errors():
    with pytest.raises(ConfigurationError):
        V.equipartition_scaling(Ns=(64, 128), trials=20)
    with pytest.raises(ConfigurationError):
        V.equipartition_scaling(Ns=(64, 128, 256), trials=10)
    with pytest.raises(ConfigurationError):
        V.equipartition_scaling(Ns=(128, 64, 256), trials=20)


def test_equipartition_small_run_deterministic():
    a = V.equipartition_scaling(Ns=(16, 32, 64), trials=20, seed=3)
    b = V.equipartition_scaling(Ns=(16, 32, 64), trials=20, seed=3, workers=2)
    assert [s.value for s in a.stats] == [s.value for s in b.stats]
    assert a.slope == b.slope
    assert a.extra["max_identity_residual"] <= 1e-9
    assert a.slope < 0
    assert a.verdict == (abs(a.slope + 0.5) <= 0.15 and a.r2 >= 0.95)


def test_equipartition_degenerate_weight_slope():
    # sigma = (1, 0): the second component is independent of the eigenvectors
    m = ModelSpec((1.0, 0.0), (ComponentSpec("complex_hermitian", "gaussian_complex"),) * 2, "deg")
    rep = V.equipartition_scaling(m, Ns=(32, 64, 128), trials=20, seed=1)
    # the same statistic for an independent GUE and a Haar-distributed basis, brute force
    ref = []
    for N in (32, 64, 128):
        vals = []
        rng = np.random.default_rng(N)
        for _ in range(20):
            A = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / 2
            Hm = (A + A.conj().T) / math.sqrt(2 * N)
            W = eigh(Hm).eigenvectors
            B = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / 2
            H2 = (B + B.conj().T) / math.sqrt(2 * N)
            vals.append(np.abs(W.conj().T @ H2 @ W).max())
        ref.append(np.mean(vals))
    ref_slope = V.scaling_fit([32, 64, 128], ref).slope
    assert abs(rep.slope - ref_slope) < 0.1
    assert abs(rep.slope + 0.5) < 0.15


def test_energy_identity():
    rep = V.energy_identity_check(N=32, trials=5)
    assert rep.verdict and len(rep.max_residual_per_trial) == 5


def test_gaussian_lemma_refuses_non_gaussian():
    with pytest.raises(ConfigurationError):
        V.gaussian_lemma_test(N=10, trials=2, model="skewed_pair")
    with pytest.raises(ConfigurationError):
        V.gaussian_lemma_test(N=10, trials=2, model="goe_pair")


def test_gaussian_lemma_small():
    rep = V.gaussian_lemma_test(N=40, trials=60, seed=2)
    assert rep.sample_count == 2400
    assert abs(rep.variance - 1) < 0.1
    assert rep.verdict


def test_local_law_zero_matrix_ratio():
    # H = 0: G = -I/z exactly
    z = 0.5 + 0.2j
    sd = eigh(np.zeros((4, 4)))
    G = resolvent(sd, z)
    assert np.allclose(G, -np.eye(4) / z)
    ratio = abs(-1 / z - sc.m_sc(z)) / sc.psi(z, z, 4)
    G[np.diag_indices(4)] -= sc.m_sc(z)
    assert np.max(np.abs(G)) / sc.psi(z, z, 4) == pytest.approx(ratio)


def test_local_law_domain_error():
    with pytest.raises(DomainError):
        V.local_law_check(N=100, z_points=[1 + 0.01j], trials=2)


def test_local_law_small():
    rep = V.local_law_check(N=128, z_points=[0.5 + 0.3j], trials=5)
    assert rep.verdict and rep.per_z[0]["ratio_entry"]["n"] == 5


def test_local_law_uniformity_pooled_entries():
    out = V.local_law_uniformity(Ns=(64, 128, 256), z=0.5 + 0.3j, trials=4)
    assert out["max_ks"] <= 0.2 and out["verdict"]


def test_rigidity_requirements_and_small_run():
    with pytest.raises(ConfigurationError):
        V.rigidity_check(N=64, trials=5)
    rep = V.rigidity_check(N=128, trials=10)
    assert rep.verdict and rep.bulk["n"] == 10


def test_rigidity_one_by_one():
    rep = V.rigidity_check(N=1, trials=10, edge_width=0)
    vals = [s.value for s in rep.stats if s.statistic == "max_all"]
    assert sc.quantiles(1)[0] == 0
    # N = 1: the statistic is |lambda_1|, a unit-variance Gaussian
    assert all(v >= 0 for v in vals) and np.mean(np.square(vals)) < 4


def test_observable_small_and_domain():
    with pytest.raises(DomainError):
        V.observable_expectation_check(N=100, z1=0.5 + 0.001j, trials=3)
    rep = V.observable_expectation_check(N=64, z1=1j, z2=1j, trials=10)
    assert rep.expected == pytest.approx(((math.sqrt(5) - 1) / 2) ** 2)
    assert rep.checks["positivity"] and rep.checks["spectral_agreement"]


def test_observable_conjugate_point_same_imim():
    a = V.observable_expectation_check(N=32, z1=1j, z2=1j, trials=3)
    b = V.observable_expectation_check(N=32, z1=-1j, z2=-1j, trials=3)
    va = [s.value for s in a.stats if s.statistic == "imim"]
    vb = [s.value for s in b.stats if s.statistic == "imim"]
    assert np.allclose(va, vb, rtol=1e-12)


def test_overlap_rules():
    with pytest.raises(ConfigurationError):
        V.overlap_bound_check("mixed_triple", Ns=(8, 16, 32), trials=2)


def test_overlap_degenerate_weight_flat():
    m = ModelSpec((1.0, 0.0), (ComponentSpec("complex_hermitian", "gaussian_complex"),) * 2, "deg")
    rep = V.overlap_bound_check(m, Ns=(32, 64, 128), trials=10)
    # an independent quadratic form: N |w* H2 w|^2 is order one up to the max over pairs
    assert rep.slope < 0.3


def test_overlap_equal_parts_vanish():
    from wignerlab.ensembles import auxiliary_matrix
    A = np.random.default_rng(0).standard_normal((5, 5))
    A = A + A.T
    W = eigh(A).eigenvectors
    M = W.T @ auxiliary_matrix(A, A, 1 / math.sqrt(2), 1 / math.sqrt(2)) @ W
    assert np.max(np.abs(M)) == 0
