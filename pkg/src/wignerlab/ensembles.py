"""Wigner matrices, composite sums, and the auxiliary (difference) matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import EntryDistribution, get_distribution
from .errors import ConfigurationError
from .rng import CounterStream

SYMMETRIES = ("complex_hermitian", "real_symmetric")
SIGMA_TOL = 1e-12


@dataclass(frozen=True)
class EnsembleSpec:
    N: int
    symmetry: str
    offdiag: EntryDistribution
    diag: EntryDistribution

    def __post_init__(self):
        if self.N < 1:
            raise ConfigurationError(f"N must be >= 1, got {self.N}")
        if self.symmetry not in SYMMETRIES:
            raise ConfigurationError(f"symmetry must be one of {SYMMETRIES}, got {self.symmetry!r}")
        if self.diag.symmetry_class != "real":
            raise ConfigurationError(f"diagonal law {self.diag.name!r} must be real-valued")
        if self.symmetry == "real_symmetric" and self.offdiag.symmetry_class != "real":
            raise ConfigurationError(
                f"real_symmetric ensemble needs a real off-diagonal law, got {self.offdiag.name!r}")

    @property
    def is_real(self) -> bool:
        return self.symmetry == "real_symmetric"

    @property
    def diag_variance(self) -> float:
        """N * E h_ii^2: 1 for complex Hermitian, 2 for real symmetric."""
        return 2.0 if self.is_real else 1.0


@dataclass(frozen=True)
class CompositeModel:
    sigmas: tuple[float, ...]
    components: tuple[EnsembleSpec, ...]

    def __post_init__(self):
        k = len(self.sigmas)
        if k < 2:
            raise ConfigurationError(f"a composite model needs k >= 2 components, got {k}")
        if len(self.components) != k:
            raise ConfigurationError("sigmas and components differ in length")
        if any(s < 0 for s in self.sigmas):
            raise ConfigurationError(f"sigmas must be nonnegative, got {self.sigmas}")
        total = math.fsum(s * s for s in self.sigmas)
        if abs(total - 1.0) > SIGMA_TOL:
            raise ConfigurationError(
                f"sum of sigma_i^2 must equal 1 (got {total:.15g} for sigmas {list(self.sigmas)})")
        if len({c.N for c in self.components}) != 1:
            raise ConfigurationError("all components must have the same N")

    @property
    def k(self) -> int:
        return len(self.sigmas)

    @property
    def N(self) -> int:
        return self.components[0].N

    @property
    def is_real(self) -> bool:
        return all(c.is_real for c in self.components)

    @property
    def is_gaussian(self) -> bool:
        return all(c.offdiag.is_gaussian and c.diag.is_gaussian for c in self.components)


@dataclass(frozen=True)
class ComponentSpec:
    symmetry: str
    offdiag: str | dict
    diag: str | dict = "gaussian_real"


@dataclass(frozen=True)
class ModelSpec:
    """A composite model with the matrix size left open."""

    sigmas: tuple[float, ...]
    components: tuple[ComponentSpec, ...]
    name: str = "custom"

    def build(self, N: int) -> CompositeModel:
        comps = tuple(
            EnsembleSpec(N, c.symmetry, get_distribution(c.offdiag), get_distribution(c.diag))
            for c in self.components)
        return CompositeModel(tuple(float(s) for s in self.sigmas), comps)

    def to_dict(self) -> dict:
        return {"name": self.name, "sigmas": list(self.sigmas),
                "components": [{"symmetry": c.symmetry, "offdiag": c.offdiag, "diag": c.diag}
                               for c in self.components]}


_H = 1 / math.sqrt(2)
_GUE = ComponentSpec("complex_hermitian", "gaussian_complex")
_GOE = ComponentSpec("real_symmetric", "gaussian_real")

PRESETS = {
    "gue_pair": ModelSpec((_H, _H), (_GUE, _GUE), "gue_pair"),
    "goe_pair": ModelSpec((_H, _H), (_GOE, _GOE), "goe_pair"),
    "twisted_pair": ModelSpec((_H, _H), (ComponentSpec("complex_hermitian", "gaussian_rotated"),) * 2,
                              "twisted_pair"),
    "skewed_pair": ModelSpec((_H, _H), (ComponentSpec("complex_hermitian", "skewed_two_point"),) * 2,
                             "skewed_pair"),
    "mixed_triple": ModelSpec((0.6, 0.64, 0.48), (_GUE, _GUE, _GOE), "mixed_triple"),
}


def model_from_dict(d) -> ModelSpec:
    if isinstance(d, str):
        try:
            return PRESETS[d]
        except KeyError:
            raise ConfigurationError(f"unknown model preset {d!r}; presets are {sorted(PRESETS)}") from None
    sig = tuple(float(s) for s in d["sigmas"])
    comps = tuple(ComponentSpec(c["symmetry"], c["offdiag"], c.get("diag", "gaussian_real"))
                  for c in d["components"])
    spec = ModelSpec(sig, comps, d.get("name", "custom"))
    spec.build(2)  # validate eagerly
    return spec


# -- sampling ---------------------------------------------------------------------


def sample_wigner(spec: EnsembleSpec, stream: CounterStream) -> np.ndarray:
    """Draw one Wigner matrix.

    Entry ``(i, j)``, ``i <= j``, uses counters ``2 (i N + j)`` and
    ``2 (i N + j) + 1`` of ``stream``; the lower triangle is the exact
    conjugate of the upper one.
    """
    N = spec.N
    iu, ju = np.triu_indices(N, 1)
    base = 2 * (iu.astype(np.uint64) * np.uint64(N) + ju.astype(np.uint64))
    off = spec.offdiag.draw(stream.uniforms(base), stream.uniforms(base + np.uint64(1)))
    d = np.arange(N, dtype=np.uint64)
    dbase = 2 * (d * np.uint64(N) + d)
    dg = np.real(spec.diag.draw(stream.uniforms(dbase), stream.uniforms(dbase + np.uint64(1))))

    dtype = np.float64 if spec.is_real else np.complex128
    H = np.zeros((N, N), dtype=dtype)
    off = off / math.sqrt(N)
    H[iu, ju] = off
    H[ju, iu] = np.conj(off) if not spec.is_real else off
    H[d.astype(np.intp), d.astype(np.intp)] = dg * math.sqrt(spec.diag_variance / N)
    return H


def sample_composite(model: CompositeModel, stream: CounterStream):
    """Return ``(H, parts)`` with ``H = sum_i sigma_i parts[i]`` accumulated in index order."""
    parts = [sample_wigner(c, stream.child(i)) for i, c in enumerate(model.components)]
    dtype = np.float64 if all(p.dtype == np.float64 for p in parts) else np.complex128
    H = np.zeros((model.N, model.N), dtype=dtype)
    for s, P in zip(model.sigmas, parts):
        H = H + s * P
    return H, parts


def auxiliary_matrix(H1: np.ndarray, H2: np.ndarray, sigma1: float, sigma2: float) -> np.ndarray:
    """``sigma2 * H1 - sigma1 * H2``: uncorrelated with ``sigma1 H1 + sigma2 H2``."""
    if H1.shape != H2.shape:
        raise ValueError(f"dimension mismatch: {H1.shape} vs {H2.shape}")
    if abs(sigma1**2 + sigma2**2 - 1) > SIGMA_TOL:
        raise ConfigurationError(f"sigma1^2 + sigma2^2 must be 1, got {sigma1**2 + sigma2**2:.15g}")
    return sigma2 * H1 - sigma1 * H2


def pair_weights(model: CompositeModel) -> tuple[float, float]:
    if model.k != 2:
        raise ConfigurationError(f"operation defined for k = 2 models only, got k = {model.k}")
    return model.sigmas[0], model.sigmas[1]


def second_moment_matrix(model: CompositeModel) -> np.ndarray:
    """``C[i, j] = E Haux_ij^2`` for i != j, and ``E Haux_ii^2 - 1/N`` on the diagonal.

    The diagonal correction removes the part already counted by the
    ``E |Haux_ij|^2 = 1/N`` pairing.
    """
    s1, s2 = pair_weights(model)
    N = model.N
    c1, c2 = model.components
    t = (s2**2 * c1.offdiag.tau + s1**2 * c2.offdiag.tau) / N
    C = np.full((N, N), np.conj(t), dtype=complex)
    C[np.triu_indices(N, 1)] = t
    dvar = (s2**2 * c1.diag_variance + s1**2 * c2.diag_variance) / N
    np.fill_diagonal(C, dvar - 1.0 / N)
    return C
