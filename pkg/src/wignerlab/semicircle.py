"""Closed-form semicircle law: Stieltjes transform, density, CDF, quantiles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class SpectralPoint:
    E: float
    eta: float

    def __post_init__(self):
        if self.eta == 0:
            raise DomainError("spectral parameter needs a nonzero imaginary part")

    @property
    def z(self) -> complex:
        return complex(self.E, self.eta)

    @classmethod
    def of(cls, z) -> "SpectralPoint":
        if isinstance(z, SpectralPoint):
            return z
        if isinstance(z, (tuple, list)):
            return cls(float(z[0]), float(z[1]))
        z = complex(z)
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class DomainParams:
    epsilon: float = 0.1
    rho: float = 1.0

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.rho <= 0:
            raise ValueError(f"rho must be positive, got {self.rho}")


def as_complex(z) -> complex:
    if isinstance(z, SpectralPoint):
        return z.z
    if isinstance(z, (tuple, list)):
        return complex(float(z[0]), float(z[1]))
    return complex(z)


def _nonreal(z) -> complex:
    z = as_complex(z)
    if z.imag == 0:
        raise DomainError(f"z = {z} is real; use m_sc_boundary for the limit on the axis")
    return z


def m_sc(z) -> complex:
    """Stieltjes transform of the semicircle law.

    The two roots of ``m^2 + z m + 1 = 0`` multiply to 1.  The larger one is
    formed without cancellation, the smaller as its reciprocal, and the root
    on the same side of the real axis as ``z`` is returned.

    >>> abs(m_sc(1j) - 1j * (math.sqrt(5) - 1) / 2) < 1e-15
    True
    """
    z = _nonreal(z)
    s = np.sqrt(complex(z * z - 4))
    if (s.real * z.real + s.imag * z.imag) < 0:
        s = -s
    big = (-z - s) / 2
    small = 1 / big
    for m in (small, big):
        if m.imag * z.imag > 0:
            return complex(m)
    # unreachable for nonreal z: exactly one root lies in each half-plane
    raise DomainError(f"no root with Im m * Im z > 0 at z = {z}")


def m_sc_boundary(E: float) -> complex:
    """Limit of ``m_sc(E + i eta)`` as ``eta -> 0+``."""
    if abs(E) <= 2:
        return complex(-E / 2, math.sqrt(4 - E * E) / 2)
    s = math.sqrt(E * E - 4)
    return complex((-E + math.copysign(s, E)) / 2, 0.0)


def density(E):
    """Semicircle density ``sqrt(4 - E^2) / (2 pi)`` on [-2, 2], zero outside."""
    E = np.asarray(E, dtype=float)
    out = np.sqrt(np.clip(4 - E * E, 0, None)) / (2 * np.pi)
    return out if out.ndim else float(out)


def cdf(x):
    x = np.clip(np.asarray(x, dtype=float), -2, 2)
    out = 0.5 + x * np.sqrt(4 - x * x) / (4 * np.pi) + np.arcsin(x / 2) / np.pi
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)


def _bisect_cdf(target: np.ndarray) -> np.ndarray:
    lo = np.full_like(target, -2.0)
    hi = np.full_like(target, 2.0)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = cdf(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def quantiles(N: int) -> np.ndarray:
    """Classical locations ``gamma_1 <= ... <= gamma_N``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    target = (np.arange(1, N + 1, dtype=float) - 0.5) / N
    g = _bisect_cdf(target)
    # enforce the exact reflection symmetry of the even density
    return 0.5 * (g - g[::-1])


def quantile(alpha: int, N: int) -> float:
    """``gamma_alpha`` solving ``F(gamma) = (alpha - 1/2) / N`` by bisection."""
    if not 1 <= alpha <= N:
        raise ValueError(f"alpha must lie in [1, {N}], got {alpha}")
    g = _bisect_cdf(np.array([(alpha - 0.5) / N, (N - alpha + 0.5) / N]))
    return float(0.5 * (g[0] - g[1]))


def psi(z1, z2, N: int) -> float:
    """Control parameter ``1 / sqrt(N * eta0)`` with ``eta0`` the smaller |Im|."""
    eta0 = min(abs(_nonreal(z1).imag), abs(_nonreal(z2).imag))
    return 1.0 / math.sqrt(N * eta0)


def in_domain(z, N: int, params: DomainParams = DomainParams()) -> bool:
    z = as_complex(z)
    eta = abs(z.imag)
    return abs(z.real) <= 2 + params.rho and N ** (-1 + params.epsilon) <= eta <= 1
