"""Simulation and statistical checks for eigenvector equipartition in sums of Wigner matrices."""

from .cumulants import CumulantTable, cumulants_from_moments, moments_from_cumulants, verify_expansion
from .distributions import EntryDistribution, get_distribution, list_distributions
from .ensembles import (PRESETS, CompositeModel, EnsembleSpec, ModelSpec, auxiliary_matrix,
                        sample_composite, sample_wigner)
from .errors import ConfigurationError, DomainError, ValidationError
from .rng import CounterStream, trial_stream
from .semicircle import DomainParams, SpectralPoint, m_sc, quantiles
from .spectral import SpectralData, eigh, observable, quadratic_forms, resolvent

__all__ = [
    "CumulantTable", "cumulants_from_moments", "moments_from_cumulants", "verify_expansion",
    "EntryDistribution", "get_distribution", "list_distributions",
    "PRESETS", "CompositeModel", "EnsembleSpec", "ModelSpec", "auxiliary_matrix",
    "sample_composite", "sample_wigner",
    "ConfigurationError", "DomainError", "ValidationError",
    "CounterStream", "trial_stream",
    "DomainParams", "SpectralPoint", "m_sc", "quantiles",
    "SpectralData", "eigh", "observable", "quadratic_forms", "resolvent",
]
