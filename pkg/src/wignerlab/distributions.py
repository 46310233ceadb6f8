"""Entry laws for Wigner matrices, in unscaled units (mean 0, E|h|^2 = 1).

Each law knows how to turn two uniforms per entry into a sample, its exact
moments ``E h^p conj(h)^q``, and its cumulant table.  Matrices scale the
samples by ``1/sqrt(N)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .cumulants import CumulantTable, cumulants_from_moments
from .errors import ConfigurationError

SAMPLERS = ("gaussian", "rademacher", "uniform_circle", "skewed_two_point", "custom_table")

DEFAULT_TWIST_ANGLE = math.pi / 8


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


@dataclass(frozen=True)
class EntryDistribution:
    name: str
    symmetry_class: str  # "complex" | "real"
    sampler_id: str
    second_moment_twist: complex
    # gaussian: ("theta", angle) or ("tau0",); discrete laws: (points, probs)
    params: tuple = ()
    analytic_cumulants: CumulantTable | None = field(default=None, compare=False, repr=False)

    @property
    def tau(self) -> complex:
        return self.second_moment_twist

    @property
    def is_gaussian(self) -> bool:
        return self.sampler_id == "gaussian"

    # -- sampling ---------------------------------------------------------

    def draw(self, u0: np.ndarray, u1: np.ndarray) -> np.ndarray:
        """Map two independent uniforms on (0,1) to samples of this law."""
        sid = self.sampler_id
        if sid == "gaussian":
            r = np.sqrt(-2.0 * np.log(u0))
            phi = 2.0 * np.pi * u1
            kind = self.params[0]
            if kind == "tau0":
                return (r * np.cos(phi) + 1j * r * np.sin(phi)) / math.sqrt(2.0)
            g = r * np.cos(phi)
            theta = self.params[1]
            if theta == 0:
                return g
            return cmath.exp(1j * theta) * g
        if sid == "uniform_circle":
            return np.exp(2j * np.pi * u0)
        points, probs = self.params
        cum = np.cumsum([float(p) for p in probs])
        idx = np.minimum(np.searchsorted(cum, u0, side="right"), len(points) - 1)
        pts = np.array([complex(p) for p in points])
        if self.symmetry_class == "real":
            pts = pts.real
        return pts[idx]

    # -- exact moments ----------------------------------------------------

    def moment(self, p: int, q: int) -> Any:
        """Exact ``E h^p conj(h)^q`` (Fraction/int where the law allows it)."""
        sid = self.sampler_id
        if sid == "gaussian":
            kind = self.params[0]
            if kind == "tau0":
                return math.factorial(p) if p == q else 0
            n = p + q
            if n % 2:
                return 0
            base = _double_factorial(n - 1)
            theta = self.params[1]
            if theta == 0 or p == q:
                return base
            return cmath.exp(1j * theta * (p - q)) * base
        if sid == "uniform_circle":
            return 1 if p == q else 0
        points, probs = self.params
        total = 0
        for x, w in zip(points, probs):
            xc = x.conjugate() if isinstance(x, complex) else x
            total += w * x**p * xc**q
        return total

    def moments(self, max_order: int) -> dict:
        if self.symmetry_class == "real":
            return {n: self.moment(n, 0) for n in range(1, max_order + 1)}
        return {(p, n - p): self.moment(p, n - p)
                for n in range(1, max_order + 1) for p in range(n + 1)}

    def cumulants(self, max_order: int = 4) -> CumulantTable:
        if self.is_gaussian:
            return _gaussian_cumulants(self, max_order)
        return cumulants_from_moments(self.moments(max_order), max_order)

    def describe(self) -> str:
        """Two-line summary: variance cumulant and twist, then the full table."""
        tab = self.analytic_cumulants
        if tab.symmetry_class == "real":
            keys = sorted(tab.entries)
            lead = "κ^{(2)}"
            label = {n: f"κ^{{({n})}}" for n in keys}
        else:
            keys = sorted(tab.entries, key=lambda k: (k[0] + k[1], -k[0]))
            lead = "κ^{(1,1)}"
            label = {k: f"κ^{{({k[0]},{k[1]})}}" for k in keys}
        head = f"{self.name}: {lead}=1, τ={_fmt(self.tau)} [{self.symmetry_class}, {self.sampler_id}]"
        body = ", ".join(f"{label[k]}={_fmt(tab.entries[k])}" for k in keys)
        return f"{head}\n    {body}"


def _fmt(v) -> str:
    v = complex(v)
    if abs(v.imag) < 1e-13:
        r = v.real
        if abs(r - round(r)) < 1e-13:
            return str(int(round(r)))
        return f"{r:.6g}"
    return f"{v.real:.6g}{v.imag:+.6g}i"


def _gaussian_cumulants(d: EntryDistribution, max_order: int) -> CumulantTable:
    if d.symmetry_class == "real":
        ent = {n: (1 if n == 2 else 0) for n in range(1, max_order + 1)}
        return CumulantTable("real", ent)
    ent = {}
    for n in range(1, max_order + 1):
        for p in range(n, -1, -1):
            ent[(p, n - p)] = 0
    if max_order >= 2:
        ent[(1, 1)] = 1
        if d.params[0] != "tau0":
            ent[(2, 0)] = d.tau
            ent[(0, 2)] = d.tau.conjugate()
    return CumulantTable("complex", ent)


# -- constructors -------------------------------------------------------------


def _with_table(d: EntryDistribution) -> EntryDistribution:
    object.__setattr__(d, "analytic_cumulants", d.cumulants(4))
    return d


def gaussian_complex() -> EntryDistribution:
    return _with_table(EntryDistribution("gaussian_complex", "complex", "gaussian", 0j, ("tau0",)))


def gaussian_real() -> EntryDistribution:
    return _with_table(EntryDistribution("gaussian_real", "real", "gaussian", 1 + 0j, ("theta", 0)))


def gaussian_rotated(theta: float = DEFAULT_TWIST_ANGLE) -> EntryDistribution:
    """``e^{i theta} g`` with g standard real Gaussian; twist ``e^{2 i theta}``."""
    return _with_table(EntryDistribution("gaussian_rotated", "complex", "gaussian",
                                         cmath.exp(2j * theta), ("theta", float(theta))))


def uniform_circle() -> EntryDistribution:
    return _with_table(EntryDistribution("uniform_circle", "complex", "uniform_circle", 0j))


def rademacher_complex() -> EntryDistribution:
    s = 1 / math.sqrt(2)
    pts = (complex(s, s), complex(s, -s), complex(-s, s), complex(-s, -s))
    return _with_table(EntryDistribution("rademacher_complex", "complex", "rademacher", 0j,
                                         (pts, (0.25,) * 4)))


def rademacher_real() -> EntryDistribution:
    return _with_table(EntryDistribution("rademacher_real", "real", "rademacher", 1 + 0j,
                                         ((-1, 1), (Fraction(1, 2), Fraction(1, 2)))))


def _two_point(p: float):
    return math.sqrt((1 - p) / p), -math.sqrt(p / (1 - p))


def skewed_two_point(p: float = 0.25, theta: float = DEFAULT_TWIST_ANGLE) -> EntryDistribution:
    """``e^{i theta} X`` with X the centred two-point law putting mass p on the large atom."""
    a, b = _two_point(p)
    ph = cmath.exp(1j * theta)
    return _with_table(EntryDistribution("skewed_two_point", "complex", "skewed_two_point",
                                         cmath.exp(2j * theta), ((ph * a, ph * b), (p, 1 - p))))


def skewed_two_point_real(p: float = 0.25) -> EntryDistribution:
    a, b = _two_point(p)
    return _with_table(EntryDistribution("skewed_two_point_real", "real", "skewed_two_point",
                                         1 + 0j, ((a, b), (p, 1 - p))))


def custom_table(name: str, values, probs) -> EntryDistribution:
    """Discrete law from explicit atoms; must be centred with unit E|h|^2."""
    if len(values) != len(probs) or not values:
        raise ConfigurationError(f"{name}: values and probs must be nonempty and of equal length")
    pts = []
    for v in values:
        if isinstance(v, (list, tuple)):
            v = complex(float(v[0]), float(v[1]))
        pts.append(complex(v))
    pr = [float(p) for p in probs]
    if any(p < 0 for p in pr) or abs(sum(pr) - 1) > 1e-12:
        raise ConfigurationError(f"{name}: probs must be nonnegative and sum to 1")
    mean = sum(w * x for x, w in zip(pts, pr))
    var = sum(w * abs(x) ** 2 for x, w in zip(pts, pr))
    if abs(mean) > 1e-12 or abs(var - 1) > 1e-12:
        raise ConfigurationError(
            f"{name}: law must have mean 0 and E|h|^2 = 1 (got mean {mean:.3g}, E|h|^2 {var:.15g})")
    real = all(x.imag == 0 for x in pts)
    if real:
        pts_t: tuple = tuple(x.real for x in pts)
        tau = 1 + 0j
    else:
        pts_t = tuple(pts)
        tau = complex(sum(w * x * x for x, w in zip(pts, pr)))
    return _with_table(EntryDistribution(name, "real" if real else "complex", "custom_table",
                                         tau, (pts_t, tuple(pr))))


BUILTINS = {
    "gaussian_complex": gaussian_complex,
    "gaussian_real": gaussian_real,
    "gaussian_rotated": gaussian_rotated,
    "rademacher_complex": rademacher_complex,
    "rademacher_real": rademacher_real,
    "uniform_circle": uniform_circle,
    "skewed_two_point": skewed_two_point,
    "skewed_two_point_real": skewed_two_point_real,
}


def get_distribution(spec) -> EntryDistribution:
    """Resolve a name or a ``{"name":..., "values":..., "probs":...}`` mapping."""
    if isinstance(spec, EntryDistribution):
        return spec
    if isinstance(spec, str):
        try:
            return BUILTINS[spec]()
        except KeyError:
            raise ConfigurationError(
                f"unknown distribution {spec!r}; built-ins are {sorted(BUILTINS)}") from None
    if isinstance(spec, dict):
        if "values" in spec:
            return custom_table(spec.get("name", "custom_table"), spec["values"], spec["probs"])
        name = spec.get("name")
        kwargs = {k: v for k, v in spec.items() if k != "name"}
        if name not in BUILTINS:
            raise ConfigurationError(f"unknown distribution {name!r}")
        try:
            return BUILTINS[name](**kwargs)
        except TypeError as exc:
            raise ConfigurationError(f"bad parameters for {name}: {exc}") from None
    raise ConfigurationError(f"cannot interpret distribution {spec!r}")


def list_distributions() -> list[EntryDistribution]:
    return [f() for f in BUILTINS.values()]
