"""Quantized torus automorphisms as explicit N x N unitaries.

Three constructions:
  * closed-form matrix from the basis transformation law (needs gcd(c,N)=1),
  * products of generator quantizations along a Euclidean word,
  * an averaging intertwiner (cross-validation only, behind a flag).

All of them intertwine the Weyl system exactly: U rho(v) U* is a unit scalar
times rho(g v mod N) for v in {(1,0),(0,1)}, at both parities of N.  The
residuals are measured and stored, never assumed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import gcd
from typing import Literal

import numpy as np

from . import conventions
from .errors import (
    ConsistencyError,
    DegenerateMapError,
    NotApplicableError,
    ParityWarning,
)
from .heisenberg import UnitaryOperator, weyl_matrix
from .symplectic import IntegerSymplecticMatrix, generator_decomposition, theta_group_member

UNITARITY_TOL = 1e-10
EGOROV_TOL = 1e-10
COCYCLE_TOL = 1e-8

Construction = Literal["transformation_law", "generator_word", "intertwiner"]


def _as_sl2(g) -> IntegerSymplecticMatrix:
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    return g


def _warn_parity(g: IntegerSymplecticMatrix, N: int) -> bool:
    ok = theta_group_member(g, N)
    if not ok:
        warnings.warn(
            f"theta-parity violated for g={g.entries}, N={N}: N*a*c or N*b*d odd",
            ParityWarning,
            stacklevel=3,
        )
    return ok


def quantize_S(N: int) -> UnitaryOperator:
    """Normalized finite Fourier transform F(N): entries N^{-1/2} e^{-2*pi*i*mu*alpha/N}."""
    if N < 1:
        raise ValueError("N must be >= 1")
    idx = np.arange(N)
    F = np.exp(-2j * np.pi * np.outer(idx, idx) / N) / np.sqrt(N)
    return UnitaryOperator(dim=N, entries=F)


def quantize_T(N: int) -> UnitaryOperator:
    """Diagonal quantization of T = [[1,1],[0,1]]: entries e^{i*pi*kappa(N)*mu^2/N}.

    For even N this is the bare quadratic phase e^{i*pi*mu^2/N}.  For odd N
    the parity unit kappa(N) = N+1 folds the half phase into an N-th root of
    unity; emits a ParityWarning since N*b*d = N is odd there.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    _warn_parity(IntegerSymplecticMatrix.from_abcd(1, 1, 0, 1), N)
    mu = np.arange(N)
    k = conventions.kappa(N)
    return UnitaryOperator(dim=N, entries=np.diag(np.exp(1j * np.pi * k * mu**2 / N)))


def quantize_transformation_law(g, N: int) -> UnitaryOperator:
    """Closed-form unitary for g = [[a,b],[c,d]] with gcd(c, N) = 1.

    Entry (r, s) = N^{-1/2} exp(i*pi*kappa(N)*[c*d*alpha^2 + 2*b*c*alpha*r
    + a*b*r^2]/N) at alpha = c^{-1}(s - a*r) mod N: the row index r is the
    target characteristic, the column s the source.  This index orientation
    (and the odd-N parity unit) is pinned by the exact-intertwining contract;
    the transposed variant reproduces composites in reversed order.
    """
    g = _as_sl2(g)
    a, b, c, d = g.abcd
    if N < 1:
        raise ValueError("N must be >= 1")
    if gcd(c % N, N) != 1 and N > 1:
        raise NotApplicableError(f"gcd(c={c}, N={N}) > 1: transformation-law matrix undefined")
    _warn_parity(g, N)
    if N == 1:
        return UnitaryOperator(dim=1, entries=np.ones((1, 1), dtype=complex))
    cinv = pow(c % N, -1, N)
    r, s = np.meshgrid(np.arange(N, dtype=np.int64), np.arange(N, dtype=np.int64), indexing="ij")
    alpha = (cinv * (s - (a % N) * r)) % N
    k = conventions.kappa(N)
    # coefficients mod 2N keep the integer quadratic form in int64 range
    cd, bc2, ab = (c * d) % (2 * N), (2 * b * c) % (2 * N), (a * b) % (2 * N)
    phi = (k * (cd * alpha**2 + bc2 * alpha * r + ab * r**2)) % (2 * N)
    return UnitaryOperator(dim=N, entries=np.exp(1j * np.pi * phi / N) / np.sqrt(N))


def quantize_generator_word(g, N: int) -> UnitaryOperator:
    """Product of generator quantizations along a Euclidean word for g."""
    g = _as_sl2(g)
    word = generator_decomposition(g)
    U = np.eye(N, dtype=complex)
    F = quantize_S(N).entries
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParityWarning)
        Tdiag = np.diag(quantize_T(N).entries).copy()
    for gen, k in word:
        if gen == "S":
            B = F if k > 0 else F.conj().T
            for _ in range(abs(k)):
                U = U @ B
        else:
            U = U * (Tdiag ** k)[None, :]  # right-multiply by diagonal T^k
    return UnitaryOperator(dim=N, entries=U)


def averaging_intertwiner(g, N: int, seed: int = 0) -> UnitaryOperator:
    """Cross-validation construction: polar part of sum_v rho(g v) X rho(v)*.

    The Weyl images rho(g v) are taken at the integer vectors g*v (no mod-N
    reduction), which is what makes the average an exact intertwiner.  Valid
    for every g at even N, and for theta-parity g at odd N; outside that
    domain the average is not an intertwiner and this raises.
    """
    g = _as_sl2(g)
    a, b, c, d = g.abcd
    if N % 2 == 1 and not theta_group_member(g, N):
        raise NotApplicableError("averaging intertwiner needs theta-parity at odd N")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    A = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            A += weyl_matrix(N, a * m + b * n, c * m + d * n) @ X @ weyl_matrix(N, m, n).conj().T
    u, s, vh = np.linalg.svd(A)
    if s.min() < 1e-8 * s.max():
        raise ConsistencyError("averaging intertwiner is numerically singular; reseed")
    return UnitaryOperator(dim=N, entries=u @ vh)


@dataclass
class QuantizedMap:
    """Quantization of g at degree N with certified residuals."""

    g: IntegerSymplecticMatrix
    N: int
    U: UnitaryOperator
    construction: str
    phase_convention: dict = field(default_factory=conventions.record)
    egorov: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "g": self.g.to_json_dict(),
            "N": self.N,
            "construction": self.construction,
            "unitarity_residual": self.U.unitarity_residual,
            "egorov_residual": self.egorov,
            "matrix": {
                "re": [float(v) for v in self.U.entries.real.ravel()],
                "im": [float(v) for v in self.U.entries.imag.ravel()],
            },
            "conventions": self.phase_convention,
        }


def egorov_defect(U: np.ndarray, g, N: int) -> float:
    """max over v in {(1,0),(0,1)} of || U rho(v) U* - c rho(g v mod N) ||_max,
    minimized over the unit scalar c (computed from the Frobenius pairing)."""
    g = _as_sl2(g)
    a, b, c, d = g.abcd
    worst = 0.0
    for v in ((1, 0), (0, 1)):
        gv = ((a * v[0] + b * v[1]) % N, (c * v[0] + d * v[1]) % N)
        X = U @ weyl_matrix(N, *v) @ U.conj().T
        target = weyl_matrix(N, *gv)
        pair = np.trace(target.conj().T @ X) / N
        scalar = pair / abs(pair) if abs(pair) > 0 else 1.0
        worst = max(worst, float(np.abs(X - scalar * target).max()))
    return worst


def egorov_residual(q: QuantizedMap) -> float:
    """Exact-intertwining residual of a QuantizedMap (recomputed)."""
    return egorov_defect(q.U.entries, q.g, q.N)


def quantize(g, N: int, method: str = "auto") -> QuantizedMap:
    """Quantize g at degree N.

    method "auto" uses the transformation-law matrix when gcd(c, N) = 1 and
    falls back to the generator word otherwise; "intertwiner" is the flagged
    cross-validation path.  Parity warnings propagate; g is never altered.
    """
    g = _as_sl2(g)
    if N < 1:
        raise ValueError("N must be >= 1")
    a, b, c, d = g.abcd
    if method == "auto":
        method = "transformation_law" if (N == 1 or gcd(c % N, N) == 1) else "generator_word"
    if method == "transformation_law":
        U = quantize_transformation_law(g, N)
    elif method == "generator_word":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParityWarning)
            U = quantize_generator_word(g, N)
        _warn_parity(g, N)
    elif method == "intertwiner":
        U = averaging_intertwiner(g, N)
    else:
        raise ValueError(f"unknown method {method!r}")
    q = QuantizedMap(g=g, N=N, U=U, construction=method)
    q.egorov = egorov_defect(U.entries, g, N)
    return q


def cocycle(g, h, N: int) -> complex:
    """Unit scalar c with U_g U_h = c U_{gh}; raises if no scalar fits."""
    g, h = _as_sl2(g), _as_sl2(h)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParityWarning)
        Ug = quantize(g, N).U.entries
        Uh = quantize(h, N).U.entries
        Ugh = quantize(g @ h, N).U.entries
    prod = Ug @ Uh
    c = np.trace(Ugh.conj().T @ prod) / N
    if abs(c) == 0:
        raise ConsistencyError("cocycle pairing vanished")
    c = c / abs(c)
    dev = float(np.abs(prod - c * Ugh).max())
    if dev > COCYCLE_TOL:
        raise ConsistencyError(f"U_g U_h differs from c U_gh by {dev:.3e} (> {COCYCLE_TOL})")
    return complex(c)


def unitarity_multiplier(g) -> complex:
    """m(g) = 2^{-n/2} det(A + D + i(B - C))^{1/2}, principal branch.

    The scalar making the compressed translation unitary; for g = I it is 1
    and for the Fourier generator it is e^{-i*pi/4}.
    """
    g = _as_sl2(g)
    n = g.n
    A = np.array(g.A, dtype=float)
    B = np.array(g.B, dtype=float)
    C = np.array(g.C, dtype=float)
    D = np.array(g.D, dtype=float)
    det = complex(np.linalg.det(A + D + 1j * (B - C)))
    if det == 0:
        raise DegenerateMapError("det(A + D + iB - iC) = 0")
    return 2 ** (-n / 2) * complex(np.sqrt(det))
