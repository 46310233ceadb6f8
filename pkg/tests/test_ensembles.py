import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wignerlab.distributions import get_distribution
from wignerlab.ensembles import (PRESETS, CompositeModel, ComponentSpec, EnsembleSpec, ModelSpec,
                                 auxiliary_matrix, model_from_dict, sample_composite, sample_wigner,
                                 second_moment_matrix)
from wignerlab.errors import ConfigurationError
from wignerlab.rng import CounterStream, trial_stream

H = 1 / math.sqrt(2)


def spec(N, sym="complex_hermitian", off="gaussian_complex"):
    return EnsembleSpec(N, sym, get_distribution(off), get_distribution("gaussian_real"))


def test_one_by_one():
    vals = np.array([sample_wigner(spec(1), trial_stream(3, 1, t))[0, 0] for t in range(4000)])
    assert vals.dtype == complex and np.all(vals.imag == 0)
    assert abs(np.mean(vals.real**2) - 1) < 0.1


@given(st.integers(1, 40), st.integers(0, 2**32), st.sampled_from(sorted(PRESETS)))
def test_structure_exact(N, seed, preset):
    model = PRESETS[preset].build(N)
    Hm, parts = sample_composite(model, trial_stream(seed, N, 0))
    for P in parts:
        assert np.array_equal(P, P.conj().T)
    acc = np.zeros_like(Hm)
    for s, P in zip(model.sigmas, parts):
        acc = acc + s * P
    assert np.array_equal(acc, Hm)


@given(st.integers(0, 2**40))
def test_seeded_determinism(seed):
    m = PRESETS["twisted_pair"].build(12)
    a, pa = sample_composite(m, trial_stream(seed, 12, 5))
    b, pb = sample_composite(m, trial_stream(seed, 12, 5))
    assert np.array_equal(a, b) and all(np.array_equal(x, y) for x, y in zip(pa, pb))


def _entry_samples(sp_, n, i, j, seed=0):
    out = np.empty(n, dtype=complex)
    for t in range(n):
        out[t] = sample_wigner(sp_, trial_stream(seed, sp_.N, t))[i, j]
    return out


def test_offdiag_variance_complex():
    N = 500
    x = _entry_from_stream(spec(N), 10_000, 0, 1)
    assert abs(np.mean(np.abs(math.sqrt(N) * x) ** 2) - 1) < 0.05


def _entry_from_stream(sp_, n, i, j, seed=0):
    """Entry (i, j) of ``n`` trials, drawn from its two counters without building the matrix."""
    N = sp_.N
    law = sp_.offdiag if i != j else sp_.diag
    c = np.uint64(2 * (i * N + j))
    vals = []
    for t in range(n):
        s = trial_stream(seed, N, t)
        vals.append(law.draw(s.uniforms(np.array([c])), s.uniforms(np.array([c + np.uint64(1)])))[0])
    v = np.array(vals) / math.sqrt(N)
    return v * (math.sqrt(sp_.diag_variance) if i == j else 1)


def test_entry_shortcut_matches_full_sampler():
    sp_ = spec(30)
    full = _entry_samples(sp_, 20, 3, 17)
    short = _entry_from_stream(sp_, 20, 3, 17)
    assert np.array_equal(full, short)


def test_real_diagonal_variance():
    N = 500
    sp_ = spec(N, "real_symmetric", "gaussian_real")
    x = _entry_from_stream(sp_, 10_000, 0, 0).real
    assert abs(np.var(math.sqrt(N) * x) - 2.0) < 0.15
    m = sample_wigner(spec(20, "real_symmetric", "gaussian_real"), CounterStream(4))
    assert m.dtype == np.float64 and np.array_equal(m, m.T)


def test_composite_entry_variance_many_samples():
    N = 500
    a = _entry_from_stream(spec(N), 10_000, 1, 2, seed=1)
    b = _entry_from_stream(spec(N), 10_000, 1, 2, seed=2)
    Hs = H * a + H * b
    Haux = H * a - H * b
    assert abs(np.mean(N * np.abs(Hs) ** 2) - 1) < 0.05
    assert abs(np.mean(N * np.abs(Haux) ** 2) - 1) < 0.05
    # decorrelation of H and Haux (real and imaginary parts)
    for u in (Hs.real, Hs.imag):
        for v in (Haux.real, Haux.imag):
            r = np.corrcoef(u, v)[0, 1]
            assert abs(r) <= 5 / math.sqrt(u.size)


def test_degenerate_weight():
    m = ModelSpec((1.0, 0.0), (ComponentSpec("complex_hermitian", "gaussian_complex"),) * 2).build(6)
    Hm, parts = sample_composite(m, CounterStream(3))
    assert np.array_equal(Hm, parts[0])


def test_sigma_validation():
    comps = (ComponentSpec("complex_hermitian", "gaussian_complex"),) * 3
    ModelSpec((0.6, 0.8, 0.0), comps).build(4)
    with pytest.raises(ConfigurationError, match="sum of sigma_i\\^2 must equal 1"):
        ModelSpec((0.6, 0.8, 0.1), comps).build(4)
    with pytest.raises(ConfigurationError):
        ModelSpec((1.0,), comps[:1]).build(4)


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        EnsembleSpec(4, "real_symmetric", get_distribution("gaussian_complex"), get_distribution("gaussian_real"))
    with pytest.raises(ConfigurationError):
        EnsembleSpec(0, "complex_hermitian", get_distribution("gaussian_complex"), get_distribution("gaussian_real"))
    with pytest.raises(ConfigurationError):
        EnsembleSpec(4, "complex_hermitian", get_distribution("gaussian_complex"), get_distribution("gaussian_complex"))
    with pytest.raises(ConfigurationError):
        CompositeModel((H, H), (spec(4), spec(5)))


def test_auxiliary():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((5, 5))
    A = A + A.T
    assert np.array_equal(auxiliary_matrix(A, A, H, H), np.zeros((5, 5)))
    B = A[::-1, ::-1]
    assert np.allclose(auxiliary_matrix(A, B, H, H), (A - B) / math.sqrt(2))
    with pytest.raises(ValueError):
        auxiliary_matrix(A, A[:4, :4], H, H)
    with pytest.raises(ConfigurationError):
        auxiliary_matrix(A, B, 0.5, 0.5)


def test_second_moment_matrix():
    m = PRESETS["gue_pair"].build(4)
    C = second_moment_matrix(m)
    assert np.allclose(C, 0)
    C = second_moment_matrix(PRESETS["goe_pair"].build(4))
    assert np.allclose(C, np.full((4, 4), 0.25))


def test_model_from_dict():
    assert model_from_dict("goe_pair") is PRESETS["goe_pair"]
    with pytest.raises(ConfigurationError):
        model_from_dict("nope")
    d = PRESETS["mixed_triple"].to_dict()
    assert model_from_dict(d).build(3).k == 3
