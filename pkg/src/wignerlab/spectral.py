"""Eigendecomposition, resolvents, and the observables built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ensembles import CompositeModel, auxiliary_matrix, pair_weights, second_moment_matrix
from .errors import ConfigurationError, DomainError, ValidationError
from .semicircle import SpectralPoint, as_complex

HERMITIAN_TOL = 1e-12
PHASE_TOL = 1e-10


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source_dim: int

    @property
    def N(self) -> int:
        return self.source_dim


def check_hermitian(H: np.ndarray) -> None:
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H))) if H.size else 1.0)
    err = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if err > HERMITIAN_TOL * scale:
        raise ValidationError(f"matrix is not Hermitian (max |H - H*| = {err:.3g})")


def eigh(H: np.ndarray, check: bool = True) -> SpectralData:
    """Ascending eigenpairs; each eigenvector's first non-negligible entry is real positive."""
    H = np.asarray(H)
    if check:
        check_hermitian(H)
    lam, W = np.linalg.eigh(H)
    idx = np.argmax(np.abs(W) > PHASE_TOL, axis=0)
    lead = W[idx, np.arange(W.shape[1])]
    phase = lead / np.abs(lead)
    W = W * np.conj(phase)[None, :]
    if np.isrealobj(H):
        W = W.real
    return SpectralData(lam, W, H.shape[0])


def _z(z) -> complex:
    z = as_complex(z)
    if z.imag == 0:
        raise DomainError(f"resolvent undefined on the real axis (z = {z})")
    return z


def resolvent(sd: SpectralData, z) -> np.ndarray:
    """``G(z) = sum_a w_a w_a^* / (lambda_a - z)``."""
    z = _z(z)
    W = sd.eigenvectors
    return (W * (1.0 / (sd.eigenvalues - z))) @ W.conj().T


def resolvent_solve(H: np.ndarray, z) -> np.ndarray:
    """``(H - z)^{-1}`` by a direct linear solve; independent of :func:`eigh`."""
    z = _z(z)
    N = H.shape[0]
    return np.linalg.solve(H - z * np.eye(N), np.eye(N, dtype=complex))


def im_resolvent(sd: SpectralData, z) -> np.ndarray:
    """``Im G(z) = (G - G^*) / 2i``, Hermitian, sign of ``Im z``."""
    z = _z(z)
    W = sd.eigenvectors
    wts = z.imag / ((sd.eigenvalues - z.real) ** 2 + z.imag**2)
    return (W * wts) @ W.conj().T


def normalized_trace_m(sd: SpectralData, z) -> complex:
    z = _z(z)
    return complex(np.mean(1.0 / (sd.eigenvalues - z)))


# -- observables ----------------------------------------------------------------


@dataclass
class ObservableSample:
    z1: SpectralPoint
    z2: SpectralPoint
    value_X: complex
    value_imim: float
    varkappa: complex | None = None
    value_imim_spectral: float = float("nan")

    @property
    def agreement(self) -> float:
        """Relative gap between the matrix-product and spectral-sum evaluations."""
        denom = max(abs(self.value_imim), abs(self.value_imim_spectral), 1e-300)
        return abs(self.value_imim - self.value_imim_spectral) / denom


def _trace_product(A: np.ndarray, B: np.ndarray) -> complex:
    # Tr(A B) without forming A B
    return complex(np.sum(A * B.T))


def observable(sd: SpectralData, Haux: np.ndarray, z1, z2, model: CompositeModel | None = None,
               G1: np.ndarray | None = None, G2: np.ndarray | None = None) -> ObservableSample:
    """``<Haux Im G(z1) Haux Im G(z2)>`` two ways, and ``<Haux G(z1) Haux G(z2)>``."""
    N = sd.N
    if Haux.shape != (N, N):
        raise ValueError(f"dimension mismatch: Haux {Haux.shape} vs N = {N}")
    z1c, z2c = _z(z1), _z(z2)
    A1 = im_resolvent(sd, z1c)
    A2 = im_resolvent(sd, z2c)
    imim = _trace_product(Haux @ A1, Haux @ A2).real / N

    W = sd.eigenvectors
    M = W.conj().T @ Haux @ W
    lam = sd.eigenvalues
    a = z1c.imag / ((lam - z1c.real) ** 2 + z1c.imag**2)
    b = z2c.imag / ((lam - z2c.real) ** 2 + z2c.imag**2)
    spectral = float(a @ (np.abs(M) ** 2) @ b) / N

    if G1 is None:
        G1 = resolvent(sd, z1c)
    if G2 is None:
        G2 = resolvent(sd, z2c)
    X = _trace_product(Haux @ G1, Haux @ G2) / N
    kap = varkappa(sd, model, z1c, z2c, G1, G2) if model is not None else None
    return ObservableSample(SpectralPoint.of(z1c), SpectralPoint.of(z2c), X, imim, kap, spectral)


def varkappa(sd: SpectralData, model: CompositeModel, z1, z2,
             G1: np.ndarray | None = None, G2: np.ndarray | None = None) -> complex:
    """Self-normalising centring of ``<Haux G(z1) Haux G(z2)>``.

    ``m(z1) m(z2) + (1/N) sum_ij C_ij G_ji(z1) G_ji(z2)`` where ``C`` comes
    from :func:`second_moment_matrix`.  For complex laws with vanishing
    ``E h^2`` the correction is zero; for real symmetric components it is
    ``(1/N^2) sum_ij G_ij(z1) G_ji(z2)``.
    """
    if model.N != sd.N:
        raise ValueError(f"model N = {model.N} does not match data N = {sd.N}")
    z1c, z2c = _z(z1), _z(z2)
    kap = normalized_trace_m(sd, z1c) * normalized_trace_m(sd, z2c)
    C = second_moment_matrix(model)
    if not np.any(C):
        return kap
    if G1 is None:
        G1 = resolvent(sd, z1c)
    if G2 is None:
        G2 = resolvent(sd, z2c)
    return kap + complex(np.sum(C * G1.T * G2.T)) / sd.N


# -- equipartition deviations -------------------------------------------------------------


FULL_TABLE_MAX_N = 256


@dataclass
class DeviationTable:
    max_abs: np.ndarray          # per component
    max_diag: np.ndarray
    max_offdiag: np.ndarray
    frobenius: np.ndarray
    per_alpha_max: np.ndarray    # (k, N): max over beta
    identity_residual: np.ndarray  # (N,)
    tables: list | None = None

    @property
    def overall_max(self) -> float:
        return float(np.max(self.max_abs))


def quadratic_forms(sd: SpectralData, parts: Sequence[np.ndarray], sigmas: Sequence[float],
                    keep_tables: bool | None = None) -> DeviationTable:
    """``D_i[a, b] = w_a^* H_i w_b - sigma_i lambda_a delta_ab`` and summaries."""
    N = sd.N
    for P in parts:
        if P.shape != (N, N):
            raise ValueError(f"dimension mismatch: part {P.shape} vs N = {N}")
    if len(parts) != len(sigmas):
        raise ValueError("parts and sigmas differ in length")
    keep = N <= FULL_TABLE_MAX_N if keep_tables is None else keep_tables
    W = sd.eigenvectors
    lam = sd.eigenvalues
    k = len(parts)
    mx, md, mo, fr = (np.zeros(k) for _ in range(4))
    per_alpha = np.zeros((k, N))
    weighted_diag = np.zeros(N)
    tables = [] if keep else None
    off = ~np.eye(N, dtype=bool)
    for i, (P, s) in enumerate(zip(parts, sigmas)):
        Q = W.conj().T @ P @ W
        diag = np.real(np.diagonal(Q))
        weighted_diag = weighted_diag + s * diag
        D = Q.copy()
        D[np.diag_indices(N)] -= s * lam
        A = np.abs(D)
        mx[i] = A.max()
        md[i] = np.abs(diag - s * lam).max()
        mo[i] = A[off].max() if N > 1 else 0.0
        fr[i] = np.linalg.norm(D)
        per_alpha[i] = A.max(axis=1)
        if keep:
            tables.append(D)
    resid = np.abs(weighted_diag - lam)
    return DeviationTable(mx, md, mo, fr, per_alpha, resid, tables)


# -- derivative identities ---------------------------------------------------------------


@dataclass
class CheckReport:
    indices: tuple[int, int]
    z: complex
    step: float
    symmetry: str
    cancellation: float                  # ||sigma2 d1 G - sigma1 d2 G||_inf from finite differences
    cancellation_conjugate: float | None  # same for the kappa^{(0,2)}-weighted operator (complex only)
    fd_vs_analytic: tuple[float, float]  # per component, at ``step``
    order_steps: tuple[float, float]
    order_errors: tuple[float, float]    # max over components at the two order steps
    delta_residual: float                # weighted operator on Haux vs delta structure
    delta_residual_conjugate: float | None
    details: dict = field(default_factory=dict)

    @property
    def order_ratio(self) -> float:
        return self.order_errors[0] / self.order_errors[1]

    def passed(self, cancel_tol: float = 1e-6, ratio_band: tuple[float, float] = (3.5, 4.5),
               delta_tol: float = 1e-12) -> bool:
        ok = self.cancellation <= cancel_tol
        if self.cancellation_conjugate is not None:
            ok = ok and self.cancellation_conjugate <= cancel_tol
        ok = ok and ratio_band[0] <= self.order_ratio <= ratio_band[1]
        ok = ok and self.delta_residual <= delta_tol
        if self.delta_residual_conjugate is not None:
            ok = ok and self.delta_residual_conjugate <= delta_tol
        return ok

    def to_dict(self) -> dict:
        return {"indices": list(self.indices), "z": [self.z.real, self.z.imag], "step": self.step,
                "symmetry": self.symmetry, "cancellation": self.cancellation,
                "cancellation_conjugate": self.cancellation_conjugate,
                "fd_vs_analytic": list(self.fd_vs_analytic), "order_steps": list(self.order_steps),
                "order_errors": list(self.order_errors), "order_ratio": self.order_ratio,
                "delta_residual": self.delta_residual,
                "delta_residual_conjugate": self.delta_residual_conjugate}


def _unit(N: int, a: int, b: int) -> np.ndarray:
    E = np.zeros((N, N))
    E[a, b] = 1.0
    return E


def _fd_wirtinger(F, base_parts, comp: int, i: int, j: int, h: float, real: bool):
    """Central-difference derivatives of ``F(parts)`` in entry ``h_{comp, ji}``.

    Returns ``(d/dh_ji, d/dh_ij)``.  The symmetry partner moves with the
    perturbed entry.  Real or diagonal entries have a single real direction,
    returned for both slots.
    """
    N = base_parts[0].shape[0]

    def shifted(delta):
        parts = [P.astype(complex) if not real else P.copy() for P in base_parts]
        if i == j:
            parts[comp][i, i] += delta.real
        else:
            parts[comp][j, i] += delta
            parts[comp][i, j] += np.conj(delta)
        return F(parts)

    dx = (shifted(h) - shifted(-h)) / (2 * h)
    if real or i == j:
        return dx, dx
    dy = (shifted(1j * h) - shifted(-1j * h)) / (2 * h)
    return (dx - 1j * dy) / 2, (dx + 1j * dy) / 2


def derivation_check(model: CompositeModel, parts: Sequence[np.ndarray], z, indices: tuple[int, int],
                     step: float = 1e-5, order_steps: tuple[float, float] = (1e-2, 5e-3)) -> CheckReport:
    """Finite-difference check of the first-order derivative rules for ``G`` and ``Haux``.

    ``parts`` are the two component matrices; ``indices = (i, j)`` selects the
    entry ``h_{., ji}``.  The resolvent is recomputed by direct solve for
    every perturbation, so the check never touches :func:`eigh`.
    """
    s1, s2 = pair_weights(model)
    c1, c2 = model.components
    if c1.symmetry != c2.symmetry:
        raise ConfigurationError("derivation_check needs both components in the same symmetry class")
    if step <= 0 or min(order_steps) <= 0:
        raise ValueError("finite-difference steps must be positive")
    real = c1.is_real
    i, j = indices
    N = model.N
    if not (0 <= i < N and 0 <= j < N):
        raise ValueError(f"indices {indices} out of range for N = {N}")
    zc = _z(z)
    sig = (s1, s2)

    def G_of(ps):
        return resolvent_solve(s1 * ps[0] + s2 * ps[1], zc)

    def Haux_of(ps):
        return auxiliary_matrix(ps[0], ps[1], s1, s2)

    G = G_of(parts)
    Dji, Dij = _unit(N, j, i), _unit(N, i, j)
    if i == j:
        dir_ji = dir_ij = Dji
    elif real:
        dir_ji = dir_ij = Dji + Dij
    else:
        dir_ji, dir_ij = Dji, Dij

    def analytic(comp, direction):
        return -sig[comp] * G @ direction @ G

    def derivs(h):
        return [_fd_wirtinger(G_of, parts, c, i, j, h, real) for c in (0, 1)]

    d = derivs(step)
    cancel = float(np.max(np.abs(s2 * d[0][0] - s1 * d[1][0])))
    fd_err = tuple(float(np.max(np.abs(d[c][0] - analytic(c, dir_ji)))) for c in (0, 1))

    order_err = []
    for h in order_steps:
        dh = derivs(h)
        order_err.append(max(float(np.max(np.abs(dh[c][0] - analytic(c, dir_ji)))) for c in (0, 1)))

    # cumulant-weighted first-order operators acting on Haux (linear: unit step is exact)
    kap2 = [1.0 / N * (c.diag_variance if i == j else 1.0) for c in (c1, c2)]
    dH = [_fd_wirtinger(Haux_of, parts, c, i, j, 1.0, real) for c in (0, 1)]
    D10 = N * (s2 * kap2[0] * dH[0][0] - s1 * kap2[1] * dH[1][0])
    # real: delta_ja delta_ib + delta_ia delta_jb, which is 2 on the diagonal
    expected = Dji + Dij if real else Dji
    delta_res = float(np.max(np.abs(D10 - expected)))

    cancel_conj = delta_conj = None
    details = {}
    if not real and i != j:
        # kappa^{(0,2)}_{ji} = E conj(h_ji)^2 = E h_ij^2
        def k02(c):
            t = c.offdiag.tau
            return (t if i < j else np.conj(t)) / N
        w = (k02(c1), k02(c2))
        cancel_conj = float(np.max(np.abs(N * (s2 * w[0] * d[0][1] - s1 * w[1] * d[1][1]))))
        D01 = N * (s2 * w[0] * dH[0][1] - s1 * w[1] * dH[1][1])
        expected01 = N * (s2**2 * w[0] + s1**2 * w[1]) * Dij
        delta_conj = float(np.max(np.abs(D01 - expected01)))
        details["kappa02"] = [complex(x) for x in w]
    return CheckReport((i, j), zc, step, "real" if real else "complex", cancel, cancel_conj,
                       fd_err, tuple(order_steps), tuple(order_err), delta_res, delta_conj, details)
