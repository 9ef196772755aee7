"""Spectral reports: eigen-decomposition with certified residuals, quantum
periods, eigenphase equidistribution, and the diagonal/off-diagonal matrix
element statistics of Weyl observables in the eigenbasis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import schur

from . import conventions
from .errors import NumericalContractError, ParityWarning
from .heisenberg import UnitaryOperator, weyl_matrix
from .quantize import quantize
from .symplectic import IntegerSymplecticMatrix, arithmetic_period

EIG_RESIDUAL_TOL = 1e-8
DEGENERACY_BIN = 1e-6
PERIOD_SCALAR_TOL = 1e-8


def _matrix(U) -> np.ndarray:
    if isinstance(U, UnitaryOperator):
        return U.entries
    return np.asarray(U, dtype=complex)


def eig_unitary(U) -> tuple[np.ndarray, np.ndarray, float]:
    """Full decomposition of a (near-)unitary matrix.

    Returns (eigenphases sorted in [0, 2*pi), orthonormal eigenvector
    columns in matching order, max residual ||U v - lambda v||_2).
    Eigenvalues are pushed to the unit circle; the deviation is folded into
    the certified residual.  Raises NumericalContractError if any residual
    exceeds the 1e-8 contract.
    """
    M = _matrix(U)
    N = M.shape[0]
    T, Q = schur(M, output="complex")
    lam = np.diag(T).copy()
    circle_dev = float(np.abs(np.abs(lam) - 1.0).max())
    lam = lam / np.abs(lam)
    resid = np.linalg.norm(M @ Q - Q * lam[None, :], axis=0)
    worst = float(resid.max()) + circle_dev
    if worst > EIG_RESIDUAL_TOL:
        bad = int(np.argmax(resid))
        raise NumericalContractError(
            f"eigenpair residual {resid[bad]:.3e} at index {bad} exceeds {EIG_RESIDUAL_TOL}"
        )
    phases = np.angle(lam) % (2 * np.pi)
    order = np.argsort(phases, kind="stable")
    return phases[order], Q[:, order], worst


def phase_multiplicities(phases: np.ndarray, bin_width: float = DEGENERACY_BIN) -> list[int]:
    """Multiplicities of sorted eigenphases merged within bin_width,
    treating 0 and 2*pi as adjacent."""
    n = len(phases)
    if n == 0:
        return []
    counts = [1]
    for i in range(1, n):
        if phases[i] - phases[i - 1] <= bin_width:
            counts[-1] += 1
        else:
            counts.append(1)
    # wrap-around merge
    if len(counts) > 1 and (2 * np.pi - phases[-1]) + phases[0] <= bin_width:
        counts[0] += counts.pop()
    return counts


def star_discrepancy(phases: np.ndarray) -> float:
    """Star discrepancy of the normalized eigenphase set in [0, 1)."""
    u = np.sort(np.asarray(phases) / (2 * np.pi))
    n = len(u)
    if n == 0:
        return 1.0
    i = np.arange(1, n + 1)
    return float(max((i / n - u).max(), (u - (i - 1) / n).max()))


def quantum_period(g, N: int, cap: int = 20000) -> tuple[int | None, complex | None]:
    """Least k <= cap with U^k = c * I for a unit scalar c (1e-8 contract).

    Returns (k, c), or (None, None) when the cap is hit.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParityWarning)
        U = quantize(g, N).U.entries
    acc = U.copy()
    I = np.eye(N)
    for k in range(1, cap + 1):
        diag = np.diag(acc)
        c = diag[int(np.argmax(np.abs(diag)))]
        if abs(abs(c) - 1.0) < PERIOD_SCALAR_TOL:
            c = c / abs(c)
            if float(np.abs(acc - c * I).max()) <= PERIOD_SCALAR_TOL:
                return k, complex(c)
        acc = acc @ U
    return None, None


@dataclass
class SpectralReport:
    """Eigenphases, multiplicities, period data for one (g, N)."""

    g: IntegerSymplecticMatrix
    N: int
    eigenphases: list[float]
    multiplicities: list[int]
    quantum_period: int | None
    scalar_phase: complex | None
    max_eigen_residual: float

    def to_json_dict(self) -> dict:
        sp = self.scalar_phase
        return {
            "g": self.g.to_json_dict(),
            "N": self.N,
            "eigenphases": [float(x) for x in self.eigenphases],
            "multiplicities": [int(m) for m in self.multiplicities],
            "quantum_period": self.quantum_period,
            "scalar_phase": None if sp is None else {"re": sp.real, "im": sp.imag},
            "max_eigen_residual": self.max_eigen_residual,
            "conventions": conventions.record(),
        }


def spectral_report(g, N: int, period_cap: int = 20000) -> SpectralReport:
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParityWarning)
        U = quantize(g, N).U.entries
    phases, vecs, resid = eig_unitary(U)
    k, c = quantum_period(g, N, cap=period_cap)
    return SpectralReport(
        g=g,
        N=N,
        eigenphases=list(phases),
        multiplicities=phase_multiplicities(phases),
        quantum_period=k,
        scalar_phase=c,
        max_eigen_residual=resid,
    )


def is_hyperbolic(g) -> bool:
    """|trace g| > 2: no eigenvalue of g is a root of unity (n = 1)."""
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    return abs(g.trace()) > 2


def equidistribution_stats(g, N: int, k_max: int) -> dict:
    """Weyl sums |Tr U^k| / N for k = 1..k_max plus the star discrepancy of
    the eigenphases.  Reported for any g; `hyperbolic` records whether the
    decay hypothesis applies."""
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParityWarning)
        U = quantize(g, N).U.entries
    sums: list[float] = []
    acc = np.eye(N, dtype=complex)
    for _ in range(k_max):
        acc = acc @ U
        sums.append(float(abs(np.trace(acc)) / N))
    phases, _, _ = eig_unitary(U)
    return {
        "weyl_sums": sums,
        "star_discrepancy": star_discrepancy(phases),
        "hyperbolic": is_hyperbolic(g),
    }


# ---------------------------------------------------------------------------
# Matrix-element statistics of Weyl observables
# ---------------------------------------------------------------------------


@dataclass
class ErgodicityReport:
    """Diagonal variance and windowed off-diagonal sums for one observable."""

    g: IntegerSymplecticMatrix
    N: int
    observable: tuple[int, int]
    diagonal_variance: float
    offdiag_sums: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "g": self.g.to_json_dict(),
            "N": self.N,
            "observable": list(self.observable),
            "diagonal_variance": self.diagonal_variance,
            "offdiag_sums": {
                f"tau={t:.17g},delta={d:.17g}": v for (t, d), v in sorted(self.offdiag_sums.items())
            },
            "conventions": conventions.record(),
        }


def _eigenbasis_elements(g, N: int, observable: tuple[int, int]) -> np.ndarray:
    if observable == (0, 0):
        raise ValueError("observable (0,0) has unit average; statistic is trivial")
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParityWarning)
        U = quantize(g, N).U.entries
    phases, Q, _ = eig_unitary(U)
    B = Q.conj().T @ weyl_matrix(N, observable[0] % N, observable[1] % N) @ Q
    return phases, B


def ergodicity_variance(g, N: int, observable: tuple[int, int]) -> ErgodicityReport:
    """(1/N) sum_j |<rho(observable) phi_j, phi_j>|^2 over the eigenbasis.

    The torus average of the nonzero-frequency symbol is 0, so this is the
    variance sum itself."""
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    phases, B = _eigenbasis_elements(g, N, tuple(observable))
    var = float(np.sum(np.abs(np.diag(B)) ** 2) / N)
    return ErgodicityReport(g=g, N=N, observable=tuple(observable), diagonal_variance=var)


def offdiagonal_sums(g, N: int, observable: tuple[int, int], tau_angle: float, delta: float) -> float:
    """(1/N) sum over pairs i != j with |e^{i(theta_i - theta_j)} - e^{i*tau}|
    < delta of |<rho phi_i, phi_j>|^2.  tau = 0 is the near-degenerate
    statistic; delta > 2 windows every pair."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    phases, B = _eigenbasis_elements(g, N, tuple(observable))
    gap = np.exp(1j * (phases[:, None] - phases[None, :]))
    window = np.abs(gap - np.exp(1j * tau_angle)) < delta
    np.fill_diagonal(window, False)
    return float(np.sum(np.abs(B) ** 2 * window) / N)


def matrix_element_parseval(g, N: int, observable: tuple[int, int]) -> float:
    """(1/N) sum_{i,j} |<rho phi_i, phi_j>|^2; equals 1 for unitary rho."""
    _, B = _eigenbasis_elements(g, N, tuple(observable))
    return float(np.sum(np.abs(B) ** 2) / N)
