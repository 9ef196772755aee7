"""Finite Heisenberg group over Z^n/N and its Weyl representation on C^N.

Group elements carry exact phases (a sign and an N-th-root index), so the
group law never goes through floating point.  The representation is the
Schrodinger-type one on complex N-vectors indexed by Z/N (index 0 first):
modulation U = diag(e^{2*pi*i*x/N}) and cyclic translation (V f)(x) = f(x-1),
combined with the symmetric ordering phase from `conventions`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import conventions
from .errors import DimensionError, NumericalContractError

WEYL_UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class HeisenbergElement:
    """Element (a, b, phase) of Heis(Z^n/N), phase in +-C_1^*(N).

    The phase is stored exactly as sign * e^{2*pi*i*j/N}.
    """

    N: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    phase_index: int = 0
    phase_sign: int = 1

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if len(self.a) != len(self.b):
            raise DimensionError("a and b must have equal length")
        if self.phase_sign not in (1, -1):
            raise ValueError("phase_sign must be +-1")
        object.__setattr__(self, "a", tuple(x % self.N for x in self.a))
        object.__setattr__(self, "b", tuple(x % self.N for x in self.b))
        object.__setattr__(self, "phase_index", self.phase_index % self.N)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def phase(self) -> complex:
        return self.phase_sign * np.exp(2j * np.pi * self.phase_index / self.N)


def heisenberg_multiply(x: HeisenbergElement, y: HeisenbergElement) -> HeisenbergElement:
    """Group law: componentwise addition mod N, phases multiplied by
    e^{(2*pi*i/N) * sigma((a,b),(a',b'))}."""
    if x.N != y.N:
        raise ValueError(f"modulus mismatch: {x.N} != {y.N}")
    if x.n != y.n:
        raise DimensionError("dimension mismatch")
    s = conventions.sigma(x.a + x.b, y.a + y.b)
    return HeisenbergElement(
        N=x.N,
        a=tuple(p + q for p, q in zip(x.a, y.a)),
        b=tuple(p + q for p, q in zip(x.b, y.b)),
        phase_index=x.phase_index + y.phase_index + s,
        phase_sign=x.phase_sign * y.phase_sign,
    )


def splitting_phase(h: Sequence[int]) -> int:
    """Phase e^{i*pi*<m,n>} = (-1)^{<m,n>} of the splitting homomorphism."""
    return -1 if conventions.pairing(h) % 2 else 1


def split(h: Sequence[int], N: int) -> HeisenbergElement:
    """Image of an integer 2n-vector under the splitting homomorphism."""
    n = len(h) // 2
    return HeisenbergElement(N=N, a=tuple(h[:n]), b=tuple(h[n:]), phase_sign=splitting_phase(h))


@dataclass
class UnitaryOperator:
    """Dense complex matrix with its unitarity residual certified at build."""

    dim: int
    entries: np.ndarray
    unitarity_residual: float = field(default=0.0)

    def __post_init__(self):
        self.entries = np.ascontiguousarray(self.entries, dtype=complex)
        if self.entries.shape != (self.dim, self.dim):
            raise DimensionError("entries shape mismatch")
        r = self.entries.conj().T @ self.entries - np.eye(self.dim)
        self.unitarity_residual = float(np.abs(r).max())
        self.entries.flags.writeable = False

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "re": [float(v) for v in self.entries.real.ravel()],
            "im": [float(v) for v in self.entries.imag.ravel()],
        }


def weyl_matrix(N: int, a: int, b: int) -> np.ndarray:
    """rho_N(a, b) as a dense array, for arbitrary integer a, b.

    rho(a,b) = exp(s*i*pi*a*b/N) U^a V^b with s the ordering sign; satisfies
    rho(-a,-b) = rho(a,b)^dagger and the cocycle
    rho(v) rho(w) = exp(-s*i*pi*sigma(v,w)/N) rho(v+w) over integer vectors.
    """
    x = np.arange(N)
    col = np.zeros((N, N), dtype=complex)
    ordering = np.exp(conventions.WEYL_ORDERING_SIGN * 1j * np.pi * a * b / N)
    col[(x + b) % N, x] = 1.0
    # U^a acts after V^b: row r of the product carries e^{2 pi i a r / N}
    mod = np.exp(2j * np.pi * a * x / N)
    return ordering * (mod[:, None] * col)


def weyl_operator(N: int, a: int, b: int) -> UnitaryOperator:
    """Weyl operator rho_N(a, b) with certified unitarity."""
    if N < 1:
        raise ValueError("N must be >= 1")
    op = UnitaryOperator(dim=N, entries=weyl_matrix(N, a, b))
    if op.unitarity_residual > WEYL_UNITARITY_TOL:
        raise NumericalContractError(
            f"weyl operator unitarity residual {op.unitarity_residual:.3e}"
        )
    return op


def implemented_cocycle(v: Sequence[int], w: Sequence[int], N: int) -> complex:
    """psi(v, w) with rho(v) rho(w) = psi(v, w) rho(v + w), integer vectors."""
    s = conventions.sigma(tuple(v), tuple(w))
    return complex(np.exp(conventions.WEYL_ORDERING_SIGN * 1j * np.pi * s / N))


def projective_rep_check(N: int, pairs: Sequence[tuple[Sequence[int], Sequence[int]]] | None = None) -> float:
    """Max residual of rho(v) rho(w) = psi(v,w) rho(v+w) over sample pairs.

    Pairs default to all basis translations {0..3}^2 x {0..3}^2 clipped to N.
    The sum v + w is taken over the integers (no mod-N reduction), which is
    the regime where the cocycle identity is exact.
    """
    if pairs is None:
        r = range(min(N, 4))
        pairs = [((i, j), (k, l)) for i in r for j in r for k in r for l in r]
    worst = 0.0
    for v, w in pairs:
        lhs = weyl_matrix(N, v[0], v[1]) @ weyl_matrix(N, w[0], w[1])
        rhs = implemented_cocycle(v, w, N) * weyl_matrix(N, v[0] + w[0], v[1] + w[1])
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst
