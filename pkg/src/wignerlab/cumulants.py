"""Complex (p,q)-cumulants, real p-cumulants, and the scalar cumulant expansion.

Complex moments are ``mu[(p, q)] = E h^p conj(h)^q``; cumulants are the
coefficients of the log of the bivariate moment generating series.  Real laws
use integer keys ``p``.  All conversions are written against plain Python
numbers so that ``fractions.Fraction`` tables stay exact end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

MAX_ORDER = 6

Key = Union[int, tuple[int, int]]


@dataclass
class CumulantTable:
    symmetry_class: str  # "complex" or "real"
    entries: dict
    scale: float = 1
    std_errors: dict | None = None

    def __getitem__(self, key: Key):
        if self.symmetry_class == "real":
            if isinstance(key, tuple):
                return self.entries[key[0] + key[1]]
            return self.entries[key]
        if isinstance(key, int):
            raise KeyError("complex tables are indexed by (p, q)")
        if key in self.entries:
            return self.entries[key]
        p, q = key
        return _conj(self.entries[(q, p)])

    def get(self, key: Key, default=0):
        try:
            return self[key]
        except KeyError:
            return default

    @property
    def max_order(self) -> int:
        if self.symmetry_class == "real":
            return max(self.entries)
        return max(p + q for p, q in self.entries)

    def as_complex(self) -> "CumulantTable":
        """View a real table on the (p,q) lattice (h equals its conjugate)."""
        if self.symmetry_class == "complex":
            return self
        ent = {}
        for n, v in self.entries.items():
            for p in range(n + 1):
                ent[(p, n - p)] = v
        return CumulantTable("complex", ent, self.scale)

    def scaled(self, N: float) -> "CumulantTable":
        """Cumulants of ``h / sqrt(N)`` given this table for ``h``."""
        def order(k):
            return k if isinstance(k, int) else k[0] + k[1]

        ent = {k: v * N ** (-order(k) / 2) for k, v in self.entries.items()}
        return CumulantTable(self.symmetry_class, ent, self.scale * N)

    def to_dict(self) -> dict:
        def enc(v):
            v = complex(v)
            return [v.real, v.imag]

        def key(k):
            return str(k) if isinstance(k, int) else f"{k[0]},{k[1]}"

        out = {"symmetry_class": self.symmetry_class, "scale": float(self.scale),
               "entries": {key(k): enc(v) for k, v in sorted(self.entries.items())}}
        if self.std_errors is not None:
            out["std_errors"] = {key(k): float(v) for k, v in sorted(self.std_errors.items())}
        return out


def _conj(v):
    return v.conjugate() if hasattr(v, "conjugate") else v


def _lattice(max_order: int):
    return [(p, n - p) for n in range(max_order + 1) for p in range(n, -1, -1)]


def _check_order(max_order: int):
    if max_order < 1 or max_order > MAX_ORDER:
        raise ValueError(f"max_order must be in [1, {MAX_ORDER}], got {max_order}")


def cumulants_from_moments(moments: Mapping, max_order: int) -> CumulantTable:
    """Moment table to cumulant table via the partition recursion.

    For the complex lattice the recursion strips one factor of ``h``:
    ``mu(p,q) = sum_{a>=1, b>=0} C(p-1,a-1) C(q,b) kappa(a,b) mu(p-a,q-b)``,
    falling back to stripping a ``conj(h)`` on the ``p = 0`` column.

    >>> t = cumulants_from_moments({1: 0, 2: 1, 3: 0, 4: 1}, 4)
    >>> t[4]
    -2
    """
    _check_order(max_order)
    real = all(isinstance(k, int) for k in moments)
    if real:
        return _real_cumulants(moments, max_order)
    mu = dict(moments)
    mu.setdefault((0, 0), 1)
    missing = [k for k in _lattice(max_order) if k not in mu]
    if missing:
        raise ValueError(f"missing moments for (p,q) in {missing}")
    kappa: dict = {}
    for p, q in _lattice(max_order):
        if p + q == 0:
            continue
        acc = 0
        if p >= 1:
            for a in range(1, p + 1):
                for b in range(0, q + 1):
                    if (a, b) == (p, q):
                        continue
                    acc += math.comb(p - 1, a - 1) * math.comb(q, b) * kappa[(a, b)] * mu[(p - a, q - b)]
        else:
            for b in range(1, q):
                acc += math.comb(q - 1, b - 1) * kappa[(0, b)] * mu[(0, q - b)]
        kappa[(p, q)] = mu[(p, q)] - acc
    return CumulantTable("complex", kappa)


def _real_cumulants(moments: Mapping, max_order: int) -> CumulantTable:
    mu = dict(moments)
    mu.setdefault(0, 1)
    missing = [n for n in range(1, max_order + 1) if n not in mu]
    if missing:
        raise ValueError(f"missing moments of order {missing}")
    kappa: dict = {}
    for n in range(1, max_order + 1):
        acc = 0
        for a in range(1, n):
            acc += math.comb(n - 1, a - 1) * kappa[a] * mu[n - a]
        kappa[n] = mu[n] - acc
    return CumulantTable("real", kappa)


# --- inverse map: moments = coefficients of exp(cumulant series) -------------


def _series_mul(a: dict, b: dict, order: int) -> dict:
    out: dict = {}
    for (p1, q1), x in a.items():
        for (p2, q2), y in b.items():
            if p1 + p2 + q1 + q2 <= order:
                k = (p1 + p2, q1 + q2)
                out[k] = out.get(k, 0) + x * y
    return out


def moments_from_cumulants(table: CumulantTable, max_order: int | None = None) -> dict:
    """Moments from cumulants by exponentiating the truncated generating series.

    Independent of the recursion in :func:`cumulants_from_moments`; the two
    together give the round-trip check.
    """
    order = table.max_order if max_order is None else max_order
    tab = table.as_complex()
    # K(u, v) = sum kappa(p,q) u^p v^q / (p! q!)
    K = {}
    for p, q in _lattice(order):
        if p + q == 0:
            continue
        v = tab.get((p, q), 0)
        if v != 0:
            K[(p, q)] = _div(v, math.factorial(p) * math.factorial(q))
    total = {(0, 0): 1}
    term = {(0, 0): 1}
    for n in range(1, order + 1):
        term = _series_mul(term, K, order)
        term = {k: _div(v, n) for k, v in term.items()}
        for k, v in term.items():
            total[k] = total.get(k, 0) + v
    mu = {}
    for p, q in _lattice(order):
        mu[(p, q)] = total.get((p, q), 0) * math.factorial(p) * math.factorial(q)
    if table.symmetry_class == "real":
        return {n: mu[(n, 0)] for n in range(order + 1)}
    return mu


def _div(v, d: int):
    # ints stay exact as Fractions; Fraction / int is already exact
    if isinstance(v, int):
        return Fraction(v, d)
    return v / d


# --- empirical --------------------------------------------------------------


def _sample_moments(x: np.ndarray, keys: Sequence, real: bool) -> np.ndarray:
    if real:
        return np.array([np.mean(x**n) for n in keys])
    xc = np.conj(x)
    pw = {0: np.ones_like(x)}
    pwc = {0: np.ones_like(x)}
    top = max(p + q for p, q in keys)
    for n in range(1, top + 1):
        pw[n] = pw[n - 1] * x
        pwc[n] = pwc[n - 1] * xc
    return np.array([np.mean(pw[p] * pwc[q]) for p, q in keys])


def empirical_cumulants(samples, max_order: int = 4, n_blocks: int = 100,
                        n_boot: int = 200, seed: int = 0) -> CumulantTable:
    """Sample cumulants with block-bootstrap standard errors.

    Cumulants of order >= 2 are computed from moments of the centred sample
    (they are shift invariant); the first cumulant is the sample mean.
    Standard errors resample ``n_blocks`` contiguous blocks with replacement.
    """
    _check_order(max_order)
    x = np.asarray(samples)
    n = x.size
    if n < 1000:
        raise ValueError(f"need at least 1000 samples, got {n}")
    x = x.ravel()
    real = not np.iscomplexobj(x)
    mean = x.mean()
    xc = x - mean
    if real:
        keys: list = list(range(1, max_order + 1))
    else:
        keys = [k for k in _lattice(max_order) if k != (0, 0)]

    blocks = np.array_split(xc, n_blocks)
    sizes = np.array([b.size for b in blocks], dtype=float)
    block_mom = np.array([_sample_moments(b, keys, real) for b in blocks])

    def to_table(mom_vec):
        mom = dict(zip(keys, mom_vec.tolist()))
        tab = cumulants_from_moments(mom, max_order)
        first = 1 if real else (1, 0)
        tab.entries[first] = tab.entries[first] + mean
        if not real:
            tab.entries[(0, 1)] = tab.entries[(0, 1)] + np.conj(mean)
        return tab

    full = to_table(sizes @ block_mom / sizes.sum())
    rng = np.random.default_rng(seed)
    reps = []
    for _ in range(n_boot):
        idx = rng.integers(0, n_blocks, n_blocks)
        w = sizes[idx]
        reps.append(to_table(w @ block_mom[idx] / w.sum()))
    se = {}
    for k in full.entries:
        vals = np.array([complex(r.entries[k]) for r in reps])
        se[k] = float(np.sqrt(np.var(vals.real, ddof=1) + np.var(vals.imag, ddof=1)))
    # store plain complex / float values
    conv = float if real else complex
    full.entries = {k: conv(v) for k, v in full.entries.items()}
    full.std_errors = se
    return full


# --- scalar cumulant expansion ----------------------------------------------


@dataclass
class ExpansionReport:
    lhs: complex
    rhs: complex
    residual: float
    l: int
    terms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"lhs": [self.lhs.real, self.lhs.imag], "rhs": [self.rhs.real, self.rhs.imag],
                "residual": self.residual, "l": self.l}


def _falling(n: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= n - t
    return out


def poly_derivative(poly: Mapping[tuple[int, int], complex], p: int, q: int) -> dict:
    """Wirtinger derivative d^p/dw^p d^q/dwbar^q of sum c * w^a wbar^b."""
    out: dict = {}
    for (a, b), c in poly.items():
        if a >= p and b >= q:
            k = (a - p, b - q)
            out[k] = out.get(k, 0) + c * _falling(a, p) * _falling(b, q)
    return out


def poly_expectation(poly: Mapping[tuple[int, int], complex], moment) -> complex:
    return sum(c * moment(a, b) for (a, b), c in poly.items())


def verify_expansion(law, f, l: int) -> ExpansionReport:
    """Compare E[h f(h, conj h)] with its truncated cumulant expansion.

    ``law`` needs ``moment(p, q)`` (exact) and ``cumulants(max_order)``;
    ``f`` is a mapping or a list of ``(a, b, coeff)`` triples meaning
    ``coeff * w^a * conj(w)^b``.
    """
    poly = _as_poly(f)
    if l < 0:
        raise ValueError("l must be nonnegative")
    if l + 1 > MAX_ORDER:
        raise ValueError(f"expansion order l={l} needs cumulants of order {l + 1} > {MAX_ORDER}")
    kappa = law.cumulants(l + 1).as_complex()
    lhs = sum(c * law.moment(a + 1, b) for (a, b), c in poly.items())
    rhs = 0
    terms = {}
    for n in range(l + 1):
        for p in range(n, -1, -1):
            q = n - p
            d = poly_derivative(poly, p, q)
            if not d:
                continue
            t = kappa.get((p + 1, q), 0) * poly_expectation(d, law.moment) / (math.factorial(p) * math.factorial(q))
            terms[(p, q)] = complex(t)
            rhs += t
    lhs, rhs = complex(lhs), complex(rhs)
    return ExpansionReport(lhs, rhs, abs(lhs - rhs), l, terms)


def _as_poly(f) -> dict:
    if isinstance(f, Mapping):
        return {(int(a), int(b)): c for (a, b), c in f.items()}
    poly: dict = {}
    for item in f:
        a, b, c = item
        if isinstance(c, (list, tuple)):
            c = complex(c[0], c[1])
        poly[(int(a), int(b))] = poly.get((int(a), int(b)), 0) + c
    return poly
