"""Exact trace formula as a finite coset sum, Gauss sums, and comparison
against direct traces of the constructed unitaries.

The exponent of each coset term is a rational multiple of i*pi*N computed
exactly (Fractions) before exponentiation; only the final square root and
exponentials are floating point.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import conventions
from .errors import DegenerateMapError, ParityWarning
from .quantize import quantize
from .symplectic import IntegerSymplecticMatrix, coset_representatives

MAGNITUDE_TOL = 1e-8


def _as_sl2(g) -> IntegerSymplecticMatrix:
    return g if isinstance(g, IntegerSymplecticMatrix) else IntegerSymplecticMatrix(g)


def fixed_point_trace(g, N: int) -> complex:
    """Coset-sum trace value det(I-g)^{-1/2} * sum over Z^2/(g-I)Z^2 of
    e^{i*pi*N*[<m,n> - sigma((m,n), (I-g)^{-1}(m,n))]}.

    Representatives come from the canonical Hermite box for g - I; the
    inverse image (I-g)^{-1}(m,n) is computed in exact rationals.  Raises
    DegenerateMapError when det(I - g) = 0.
    """
    g = _as_sl2(g)
    if g.n != 1:
        raise NotImplementedError("trace formula implemented for n = 1")
    a, b, c, d = g.abcd
    det = (1 - a) * (1 - d) - b * c  # det(I - g)
    if det == 0:
        raise DegenerateMapError("ker(I - g) nontrivial: map is degenerate")
    gmI = ((a - 1, b), (c, d - 1))
    system = coset_representatives(gmI)
    total = 0.0 + 0.0j
    for (m, n) in system.representatives:
        # w = (I - g)^{-1} (m, n), exact
        w0 = Fraction((1 - d) * m + b * n, det)
        w1 = Fraction(c * m + (1 - a) * n, det)
        # sigma((m,n), w) = n*w0 - w1*m  per the recorded convention
        arg = Fraction(m * n) - (n * w0 - w1 * m)
        total += complex(np.exp(1j * np.pi * N * float(arg)))
    return complex(total / np.sqrt(complex(det)))


def gauss_sum(N: int) -> tuple[complex, complex]:
    """Quadratic Gauss sum: (direct N^{-1/2} sum_r e^{2*pi*i*r^2/N},
    closed form 2^{-1/2} e^{i*pi/4} (1 + (-i)^N))."""
    if N < 1:
        raise ValueError("N must be >= 1")
    r = np.arange(N)
    direct = complex(np.sum(np.exp(2j * np.pi * (r * r % N) / N)) / np.sqrt(N))
    closed = complex(np.exp(1j * np.pi / 4) * (1 + (-1j) ** N) / np.sqrt(2))
    return direct, closed


@dataclass
class TraceReport:
    """Formula value vs direct trace for one (g, N)."""

    g: IntegerSymplecticMatrix
    N: int
    formula_value: complex
    direct_value: complex
    phase_discrepancy: complex | None  # direct/formula on the unit circle; None if trace ~ 0
    magnitude_error: float

    def to_json_dict(self) -> dict:
        pd = self.phase_discrepancy
        return {
            "g": self.g.to_json_dict(),
            "N": self.N,
            "formula": {"re": self.formula_value.real, "im": self.formula_value.imag},
            "direct": {"re": self.direct_value.real, "im": self.direct_value.imag},
            "phase_ratio": None if pd is None else {"re": pd.real, "im": pd.imag},
            "magnitude_error": self.magnitude_error,
            "conventions": conventions.record(),
        }


ZERO_TRACE_CUTOFF = 1e-9


def trace_compare(g, N: int, method: str = "auto") -> TraceReport:
    """Fill a TraceReport: formula value, direct trace of the constructed
    unitary, their unit phase ratio, and the magnitude error."""
    g = _as_sl2(g)
    formula = fixed_point_trace(g, N)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParityWarning)
        q = quantize(g, N, method=method)
    direct = complex(np.trace(q.U.entries))
    mag_err = abs(abs(formula) - abs(direct))
    if abs(formula) > ZERO_TRACE_CUTOFF and abs(direct) > ZERO_TRACE_CUTOFF:
        ratio = direct / formula
        ratio = ratio / abs(ratio)
    else:
        ratio = None
    return TraceReport(
        g=g,
        N=N,
        formula_value=formula,
        direct_value=direct,
        phase_discrepancy=ratio,
        magnitude_error=float(mag_err),
    )


@lru_cache(maxsize=1)
def trace_phase_calibration() -> complex:
    """One-time constant phase: direct/formula ratio for the Fourier
    generator, constant over every N with nonvanishing trace (it equals
    e^{-i*pi/4}, which is also the unitarity multiplier of that element)."""
    S = IntegerSymplecticMatrix.from_abcd(0, -1, 1, 0)
    ratios = []
    for N in (1, 3, 4, 5, 8):
        rep = trace_compare(S, N)
        if rep.phase_discrepancy is not None:
            ratios.append(rep.phase_discrepancy)
    mean = sum(ratios) / len(ratios)
    return complex(mean / abs(mean))
