import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from oracle_values import M_SC, QUANTILES
from wignerlab import semicircle as sc
from wignerlab.errors import DomainError

energies = st.floats(-3, 3)
etas = st.floats(1e-3, 1).flatmap(lambda e: st.sampled_from([e, -e]))


def test_m_sc_at_i():
    assert abs(sc.m_sc(1j) - 1j * (math.sqrt(5) - 1) / 2) < 1e-15


@pytest.mark.parametrize("z", list(M_SC))
def test_m_sc_matches_quadrature(z):
    assert abs(sc.m_sc(z) - M_SC[z]) < 1e-13


def test_m_sc_far_away():
    z = 3j * 1e6
    assert abs(sc.m_sc(z) + 1 / z) <= 2 / abs(z) ** 3


def test_m_sc_conjugation():
    z = 0.7 + 0.2j
    assert sc.m_sc(z.conjugate()) == pytest.approx(sc.m_sc(z).conjugate(), abs=1e-15)


def test_real_z_rejected():
    with pytest.raises(DomainError):
        sc.m_sc(0.5)
    with pytest.raises(DomainError):
        sc.SpectralPoint(1.0, 0.0)


@given(energies, etas)
def test_m_sc_root_and_branch(E, eta):
    z = complex(E, eta)
    m = sc.m_sc(z)
    assert abs(m * m + z * m + 1) <= 1e-12
    assert m.imag * eta > 0
    assert abs(m) <= 1 + 1e-12


def test_m_sc_many_domain_points(rng):
    E = rng.uniform(-3, 3, 10_000)
    eta = rng.uniform(1024 ** -0.9, 1, 10_000) * rng.choice([-1, 1], 10_000)
    worst = max(abs(m * m + z * m + 1) for z in E + 1j * eta for m in [sc.m_sc(z)])
    assert worst <= 1e-12


def test_density_values():
    assert sc.density(0.0) == pytest.approx(1 / math.pi)
    assert sc.density(2.0) == 0 and sc.density(-2.0) == 0 and sc.density(3.0) == 0


def test_stieltjes_inversion_at_one():
    assert abs(sc.m_sc(1 + 1e-6j).imag - math.sqrt(3) / 2) <= 1e-4
    assert sc.m_sc(1 + 1e-6j).imag == pytest.approx(math.pi * sc.density(1.0), abs=1e-4)


def test_boundary_limit():
    for E in (-1.5, 0.0, 1.0, 2.5, -3.0):
        assert sc.m_sc_boundary(E) == pytest.approx(sc.m_sc(complex(E, 1e-9)), abs=1e-6)


def test_density_integrates_to_one():
    val, _ = integrate.quad(sc.density, -2, 2, epsabs=1e-12)
    assert abs(val - 1) < 1e-8


def test_cdf_endpoints_and_monotone():
    assert abs(sc.cdf(-2)) < 1e-12 and abs(sc.cdf(2) - 1) < 1e-12
    x = np.linspace(-2, 2, 2001)
    assert np.all(np.diff(sc.cdf(x)) > 0)


@pytest.mark.parametrize("alpha,N", list(QUANTILES))
def test_quantile_oracle(alpha, N):
    assert sc.quantile(alpha, N) == pytest.approx(QUANTILES[(alpha, N)], abs=1e-12)
    assert abs(sc.cdf(sc.quantile(alpha, N)) - (alpha - 0.5) / N) <= 1e-12


def test_quantile_middle_and_symmetry():
    assert sc.quantile(6, 11) == 0
    g = sc.quantiles(10)
    assert np.all(np.abs(g + g[::-1]) <= 1e-10)
    assert np.all(np.diff(g) > 0)
    assert np.allclose(g, [sc.quantile(a, 10) for a in range(1, 11)], atol=1e-14)


def test_quantile_inverts_cdf_on_grid():
    x = np.linspace(-1.95, 1.95, 781)
    back = sc._bisect_cdf(sc.cdf(x))
    assert np.max(np.abs(back - x)) <= 1e-10


def test_quantile_range_errors():
    with pytest.raises(ValueError):
        sc.quantile(0, 5)
    with pytest.raises(ValueError):
        sc.quantile(6, 5)


def test_psi():
    assert sc.psi(0.1j, 0.1j, 10_000) == pytest.approx(1 / math.sqrt(1000))
    assert sc.psi(0.3 + 0.5j, 0.01j, 100) == pytest.approx(1.0)
    assert sc.psi(0.5j, 0.01j, 100) == sc.psi(0.01j, 0.5j, 100)
    assert sc.psi(0.25j, 0.25j, 64) == pytest.approx(2 * sc.psi(1j, 1j, 64))


def test_in_domain():
    p = sc.DomainParams(0.1, 1.0)
    assert all(sc.in_domain(1j, N, p) for N in (2, 10, 10**6))
    assert not sc.in_domain(4 + 0.5j, 100, p)
    assert not sc.in_domain(1 + 0.01j, 100, p)
    assert sc.in_domain(1 - 0.5j, 100, p)


def test_domain_params_validation():
    with pytest.raises(ValueError):
        sc.DomainParams(epsilon=0)
    with pytest.raises(ValueError):
        sc.DomainParams(rho=-1)
