import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracle_values import RADEMACHER_COMPLEX_NONZERO, SKEWED_TWO_POINT, SKEWED_TWO_POINT_REAL
from wignerlab import distributions as D
from wignerlab.cumulants import (MAX_ORDER, CumulantTable, cumulants_from_moments,
                                 empirical_cumulants, moments_from_cumulants, poly_derivative,
                                 verify_expansion)
from wignerlab.rng import CounterStream


def test_gaussian_complex_table():
    tab = D.gaussian_complex().cumulants(6)
    assert tab[(1, 1)] == 1
    assert all(tab[k] == 0 for k in tab.entries if k != (1, 1))


def test_gaussian_moments_recover_gaussian_cumulants():
    # through the generic recursion rather than the closed form
    tab = cumulants_from_moments(D.gaussian_complex().moments(6), 6)
    assert tab[(1, 1)] == 1
    assert all(abs(tab[k]) < 1e-15 for k in tab.entries if k != (1, 1))
    tab_r = cumulants_from_moments(D.gaussian_real().moments(6), 6)
    assert [tab_r[n] for n in range(1, 7)] == [0, 1, 0, 0, 0, 0]


def test_real_rademacher_exact():
    tab = D.rademacher_real().cumulants(6)
    assert tab[2] == 1 and tab[3] == 0 and tab[4] == -2
    assert tab[6] == 16  # log cosh series: t^2/2 - t^4/12 + t^6/45
    assert isinstance(tab[4], (int, Fraction))


def test_complex_rademacher_oracle():
    tab = D.rademacher_complex().cumulants(4)
    for k in tab.entries:
        assert abs(tab[k] - RADEMACHER_COMPLEX_NONZERO.get(k, 0)) < 1e-12


def test_skewed_laws_oracle():
    tab = D.skewed_two_point().cumulants(4)
    for k, v in SKEWED_TWO_POINT.items():
        assert abs(tab[k] - v) < 1e-12, k
    tab_r = D.skewed_two_point_real().cumulants(4)
    for n, v in SKEWED_TWO_POINT_REAL.items():
        assert abs(tab_r[n] - v) < 1e-12


def test_constant_zero():
    tab = cumulants_from_moments({(p, n - p): 0 for n in range(1, 5) for p in range(n + 1)}, 4)
    assert all(v == 0 for v in tab.entries.values())


def test_missing_moment():
    mom = D.gaussian_complex().moments(4)
    del mom[(2, 2)]
    with pytest.raises((KeyError, ValueError)):
        cumulants_from_moments(mom, 4)


def test_order_cap():
    with pytest.raises(ValueError):
        cumulants_from_moments(D.gaussian_real().moments(7), 7)


@pytest.mark.parametrize("name", sorted(D.BUILTINS))
def test_round_trip(name):
    law = D.BUILTINS[name]()
    mom = law.moments(6)
    back = moments_from_cumulants(law.cumulants(6), 6)
    for k, v in mom.items():
        assert abs(complex(back[k]) - complex(v)) <= 1e-12, (name, k)


@pytest.mark.parametrize("name", sorted(D.BUILTINS))
def test_conjugate_symmetry(name):
    tab = D.BUILTINS[name]().cumulants(5)
    if tab.symmetry_class == "complex":
        for (p, q), v in tab.entries.items():
            assert abs(tab[(q, p)] - complex(v).conjugate()) < 1e-14


@given(st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=2, max_size=5),
       st.lists(st.floats(0.05, 1), min_size=5, max_size=5))
def test_round_trip_random_discrete(pts, w):
    w = np.array(w[: len(pts)]) / sum(w[: len(pts)])
    z = np.array([complex(a, b) for a, b in pts])
    mom = {(p, n - p): complex(np.sum(w * z**p * np.conj(z) ** (n - p)))
           for n in range(1, 6) for p in range(n + 1)}
    back = moments_from_cumulants(cumulants_from_moments(mom, 5), 5)
    scale = max(1.0, max(abs(v) for v in mom.values()))
    assert all(abs(back[k] - mom[k]) <= 1e-12 * scale for k in mom)


@pytest.mark.parametrize("name", sorted(D.BUILTINS))
def test_scaled_decay(name):
    tab = D.BUILTINS[name]().cumulants(4)
    for N in (10, 100, 1000):
        sc = tab.scaled(N)
        for k, v in sc.entries.items():
            n = k if isinstance(k, int) else k[0] + k[1]
            assert abs(complex(v)) * N ** (n / 2) <= abs(complex(tab.entries[k])) * (1 + 1e-12) + 1e-15


def _draw(law, n, seed):
    s = CounterStream(seed)
    c = np.arange(n, dtype=np.uint64)
    return law.draw(s.uniforms(2 * c), s.uniforms(2 * c + np.uint64(1)))


def test_empirical_gaussian_variance():
    tab = empirical_cumulants(_draw(D.gaussian_complex(), 10**6, 1), 4)
    assert abs(tab[(1, 1)] - 1) < 0.01


def test_empirical_rademacher_fourth():
    tab = empirical_cumulants(_draw(D.rademacher_real(), 10**6, 2), 4)
    assert abs(tab[4] + 2) < 0.05


def test_empirical_constant():
    tab = empirical_cumulants(np.full(2000, 0.3 + 0.1j), 4)
    assert all(abs(tab[k]) < 1e-12 for k in tab.entries if sum(k) >= 2)
    assert tab[(1, 0)] == pytest.approx(0.3 + 0.1j)


def test_empirical_needs_samples():
    with pytest.raises(ValueError):
        empirical_cumulants(np.zeros(999), 2)


def test_poly_derivative():
    # d/dw d/dwbar of w^2 wbar^3 = 2 * 3 w wbar^2
    assert poly_derivative({(2, 3): 1}, 1, 1) == {(1, 2): 6}
    assert poly_derivative({(1, 0): 5}, 0, 1) == {}


def test_expansion_examples():
    g = D.gaussian_complex()
    r = verify_expansion(g, [(0, 1, 1)], 1)
    assert r.lhs == 1 and r.rhs == 1 and r.residual == 0
    for law in (g, D.skewed_two_point(), D.rademacher_real()):
        assert verify_expansion(law, [(0, 0, 1)], 0).residual < 1e-15
    r4 = verify_expansion(D.rademacher_complex(), [(0, 3, 1)], 4)
    assert r4.residual <= 1e-12


def test_expansion_truncation_visible():
    # for a non-Gaussian law, stopping short of the degree leaves a remainder
    r = verify_expansion(D.rademacher_real(), [(3, 0, 1)], 1)
    assert r.residual > 0.5


def test_expansion_order_limit():
    with pytest.raises(ValueError):
        verify_expansion(D.gaussian_complex(), [(0, 1, 1)], MAX_ORDER)


def test_table_accessors():
    tab = CumulantTable("complex", {(2, 0): 1 + 2j, (1, 1): 1})
    assert tab[(0, 2)] == 1 - 2j
    assert tab.get((3, 0)) == 0
    with pytest.raises(KeyError):
        tab[2]
    d = tab.to_dict()
    assert d["entries"]["2,0"] == [1.0, 2.0]
