"""Numerical theta functions: truncated lattice sums, inner products by
quadrature, Gaussian overlaps, and the basis transformation law.

The working formula for the degree-N characteristic-mu function at a point
(x, xi, t) of the quotient is the first-principles evaluation

    theta(x, xi, t) = e^{-2*pi*i*N*t} e^{-i*pi*N*x*xi}
        * sum_m e^{2*pi*i*N [ (tau/2)(m + mu/N - xi)^2 + (m + mu/N) x ]}

which is exactly invariant under the integral subgroup (the displayed
variant with +xi in the quadratic term is exposed behind `variant` and
fails that invariance; the lattice-invariance test arbitrates).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import ceil, gcd, sqrt
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from . import conventions
from .errors import NotApplicableError, ParityWarning, ResampleError
from .symplectic import IntegerSymplecticMatrix, theta_group_member

DEFAULT_GRID = 256
LAW_SAMPLES = 20


def _check_upper_half(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValueError(f"tau={tau} is not in the upper half-plane")
    return tau


def default_radius(tau: complex, N: int) -> int:
    """Truncation radius: 8 at tau = i for N <= 8, scaled by 1/sqrt(N Im tau)."""
    tau = _check_upper_half(tau)
    return max(6, ceil(8.0 / sqrt(N * tau.imag)))


@dataclass(frozen=True)
class ThetaEvalParams:
    """Evaluation parameters for one truncated lattice sum (n = 1)."""

    tau: complex
    N: int
    mu: int
    radius: int | None = None
    n: int = 1

    def __post_init__(self):
        _check_upper_half(self.tau)
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.n != 1:
            raise NotImplementedError("lattice sums are implemented for n = 1")
        object.__setattr__(self, "mu", self.mu % self.N)
        if self.radius is None:
            object.__setattr__(self, "radius", default_radius(self.tau, self.N))

    def tail_bound(self) -> float:
        """Bound on the dropped tail: e^{-2*pi*N*Im(tau)*(R-1)^2 / 2}."""
        return float(np.exp(-np.pi * self.N * complex(self.tau).imag * (self.radius - 1) ** 2))


def theta_eval(p: ThetaEvalParams, x, xi, t=0.0, variant: str = "derived"):
    """Truncated lattice sum at (x, xi, t); broadcasts over array x, xi.

    variant "derived" is the invariant evaluation documented above;
    "displayed" flips xi's sign in the quadratic term (kept only so the
    invariance test can demonstrate the difference).
    """
    tau, N, mu, R = complex(p.tau), p.N, p.mu, p.radius
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    shape = np.broadcast(x, xi).shape
    acc = np.zeros(shape, dtype=complex)
    for m in range(-R, R + 1):
        gamma = m + mu / N
        if variant == "derived":
            v = gamma - xi
        elif variant == "displayed":
            v = gamma + xi
        else:
            raise ValueError(f"unknown variant {variant!r}")
        acc = acc + np.exp(2j * np.pi * N * ((tau / 2.0) * v * v + gamma * x))
    pref = np.exp(-2j * np.pi * N * np.asarray(t, dtype=float)) * np.exp(-1j * np.pi * N * x * xi)
    out = pref * acc
    return complex(out) if out.shape == () else out


# ---------------------------------------------------------------------------
# Gaussian overlaps and inner products
# ---------------------------------------------------------------------------


def gaussian_overlap(tau: complex, taup: complex, n: int = 1) -> dict:
    """Overlap of the Gaussians for tau, tau' (n = 1).

    Returns the closed form det(-i(tau - conj(tau')))^{-1/2} together with
    the quadrature value of the defining line integral; their ratio is the
    recorded calibration constant sqrt(2*pi).
    """
    tau = _check_upper_half(tau)
    taup = _check_upper_half(taup)
    if n != 1:
        raise NotImplementedError("overlap quadrature implemented for n = 1")
    z = tau - np.conj(taup)
    closed = complex((-1j * z) ** (-0.5))

    def integrand_re(s):
        return float(np.real(np.exp(0.5j * z * s * s)))

    def integrand_im(s):
        return float(np.imag(np.exp(0.5j * z * s * s)))

    re = quad(integrand_re, -np.inf, np.inf, limit=200)[0]
    im = quad(integrand_im, -np.inf, np.inf, limit=200)[0]
    quadrature = complex(re, im)
    return {
        "closed_form": closed,
        "quadrature": quadrature,
        "calibration_ratio": quadrature / closed,
    }


def _theta_on_grid(tau: complex, N: int, mu: int, X: np.ndarray, XI: np.ndarray, radius: int) -> np.ndarray:
    return theta_eval(ThetaEvalParams(tau=tau, N=N, mu=mu, radius=radius), X, XI, 0.0)


def theta_inner_product(
    tau: complex,
    taup: complex,
    mu: int,
    mup: int,
    N: int,
    grid: int = DEFAULT_GRID,
    radius: int | None = None,
) -> dict:
    """Quadrature of the pairing over [0,1]^2 against its closed form.

    The integrand is smooth and periodic in both variables, so the periodic
    trapezoid rule (the plain mean over an equispaced grid) converges
    spectrally.  "calibrated" divides out the recorded sqrt(2*pi) so it is
    directly comparable to delta_{mu,mu'} (-2*pi*i*N*(tau - conj(tau')))^{-1/2}.
    """
    tau = _check_upper_half(tau)
    taup = _check_upper_half(taup)
    if radius is None:
        radius = max(default_radius(tau, N), default_radius(taup, N))
    k = np.arange(grid) / grid
    X, XI = np.meshgrid(k, k, indexing="ij")
    A = _theta_on_grid(tau, N, mu % N, X, XI, radius)
    B = _theta_on_grid(taup, N, mup % N, X, XI, radius)
    quadrature = complex(np.mean(A * np.conj(B)))
    delta = 1.0 if (mu - mup) % N == 0 else 0.0
    closed = delta * complex((-2j * np.pi * N * (tau - np.conj(taup))) ** (-0.5))
    return {
        "quadrature": quadrature,
        "closed_form": closed,
        "calibrated": quadrature / conventions.GAUSSIAN_QUADRATURE_RATIO,
    }


def projector_composition_factor(tau: complex, taup: complex, n: int = 1) -> complex:
    """Scalar relating the two-structure projector product to its unitary:
    (4*pi)^{n/2} (Im tau Im tau')^{n/4} / (-2*pi*i*(tau - conj(tau')))^{n/2}."""
    tau = _check_upper_half(tau)
    taup = _check_upper_half(taup)
    num = (4 * np.pi) ** (n / 2) * (tau.imag * taup.imag) ** (n / 4)
    den = (-2j * np.pi * (tau - np.conj(taup))) ** (n / 2)
    return complex(num / den)


# ---------------------------------------------------------------------------
# Basis transformation law
# ---------------------------------------------------------------------------


def law_coefficient_matrix(g, N: int) -> np.ndarray:
    """Unit-modulus coefficient pattern of the basis transformation law.

    Row r is the target characteristic a*mu + c*alpha, column mu the source:
    entry e^{i*pi*[c*d*alpha^2 + 2*b*c*alpha*mu + a*b*mu^2]/N} at
    alpha = c^{-1}(r - a*mu) mod N.  Requires gcd(c, N) = 1 or c = 0
    (diagonal case).
    """
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    a, b, c, d = g.abcd
    mu = np.arange(N, dtype=np.int64)
    if c == 0:
        W = np.zeros((N, N), dtype=complex)
        W[(a * mu) % N, mu] = np.exp(1j * np.pi * (a * b % (2 * N)) * mu**2 / N)
        return W
    if N > 1 and gcd(c % N, N) != 1:
        raise NotApplicableError(f"gcd(c={c}, N={N}) > 1: law matrix not assembled")
    cinv = pow(c % N, -1, N) if N > 1 else 0
    r, s = np.meshgrid(mu, mu, indexing="ij")
    alpha = (cinv * (r - (a % N) * s)) % N
    cd, bc2, ab = (c * d) % (2 * N), (2 * b * c) % (2 * N), (a * b) % (2 * N)
    phi = (cd * alpha**2 + bc2 * alpha * s + ab * s**2) % (2 * N)
    return np.exp(1j * np.pi * phi / N)


@dataclass
class LawFit:
    """Least-squares fit of the transformation law from sampled points."""

    nu: complex
    residual: float
    scale: float  # max |lhs| over the samples, for relative comparisons


def transformation_law_residual(
    g,
    N: int,
    tau: complex,
    samples: int = LAW_SAMPLES,
    seed: int = 0,
    radius: int | None = None,
) -> LawFit:
    """Estimate nu(N, g) by least squares and return the max law residual.

    Evaluates both sides of the law at `samples` random points of the
    quotient: theta_mu at the transformed point against the pattern-summed
    basis at tau' = g^{-1} tau = (d*tau - b)/(-c*tau + a).  The single
    unknown scalar (nu times the automorphy factor) is fit by least squares.
    """
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    a, b, c, d = g.abcd
    tau = _check_upper_half(tau)
    if not theta_group_member(g, N):
        warnings.warn(
            f"theta-parity violated for g={g.entries}, N={N}; the law need not hold",
            ParityWarning,
            stacklevel=2,
        )
    taup = (d * tau - b) / (-c * tau + a)
    W = law_coefficient_matrix(g, N)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(size=(samples, 3))
    L = np.zeros((samples, N), dtype=complex)
    P = np.zeros((samples, N), dtype=complex)
    for i, (x, xi, t) in enumerate(pts):
        gx, gxi = a * x + b * xi, c * x + d * xi
        basis = np.array(
            [
                theta_eval(ThetaEvalParams(tau=taup, N=N, mu=r, radius=radius), x, xi, t)
                for r in range(N)
            ]
        )
        for mu in range(N):
            L[i, mu] = theta_eval(
                ThetaEvalParams(tau=tau, N=N, mu=mu, radius=radius), gx, gxi, t
            )
            P[i, mu] = basis @ W[:, mu]
    denom = np.vdot(P, P).real
    if denom < 1e-12:
        raise ResampleError("law fit ill-conditioned: predictor norm vanished")
    nu = complex(np.vdot(P, L) / denom)
    residual = float(np.abs(L - nu * P).max())
    return LawFit(nu=nu, residual=residual, scale=float(np.abs(L).max()))


def fitted_law_matrix(
    g, N: int, tau: complex, samples: int | None = None, seed: int = 0, radius: int | None = None
) -> tuple[np.ndarray, float]:
    """Full N x N law matrix fit from samples (no pattern assumed).

    Solves lhs_mu(p) = sum_r C[r, mu] basis_r(p) in the least-squares sense
    and returns (C, max fit residual).  Bridges the lattice-sum evaluations
    to the closed-form quantizer matrices.
    """
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    a, b, c, d = g.abcd
    tau = _check_upper_half(tau)
    taup = (d * tau - b) / (-c * tau + a)
    if samples is None:
        samples = max(3 * N, 12)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(size=(samples, 3))
    L = np.zeros((samples, N), dtype=complex)
    B = np.zeros((samples, N), dtype=complex)
    for i, (x, xi, t) in enumerate(pts):
        gx, gxi = a * x + b * xi, c * x + d * xi
        for r in range(N):
            B[i, r] = theta_eval(ThetaEvalParams(tau=taup, N=N, mu=r, radius=radius), x, xi, t)
            L[i, r] = theta_eval(ThetaEvalParams(tau=tau, N=N, mu=r, radius=radius), gx, gxi, t)
    C, *_ = np.linalg.lstsq(B, L, rcond=None)
    residual = float(np.abs(B @ C - L).max())
    return C, residual
