"""Sign, ordering, and branch conventions used across the package.

Every phase convention that could plausibly be chosen the other way lives
here, in one place, so that reports can carry the full convention record
and tests can corrupt a single constant to verify the failure paths.
"""

from __future__ import annotations

import math
from typing import Sequence

# Symplectic form on integer (or real) 2n-vectors v = (x_1..x_n, xi_1..xi_n):
#   sigma(v, w) = <xi, x'> - <xi', x>
# All cocycles and trace-formula exponents refer to this sign.
SIGMA_CONVENTION = "sigma((x,xi),(x',xi')) = <xi,x'> - <xi',x>"

# Weyl ordering: rho(a,b) = exp(ORDERING_SIGN * i*pi*a*b/N) * U^a * V^b with
# U = diag(e^{2*pi*i*x/N}) and (V f)(x) = f(x-1).  ORDERING_SIGN = -1 is the
# unique choice with rho(-a,-b) = rho(a,b)^dagger under this V.
WEYL_ORDERING_SIGN = -1

# Ratio between the defining Gaussian/theta integrals and the closed-form
# normalizations used in reports.  Measured once by quadrature (it is
# sqrt(2*pi) exactly); recorded here rather than silently absorbed.
GAUSSIAN_QUADRATURE_RATIO = math.sqrt(2.0 * math.pi)

# Branch for all half-integer powers: principal, arg in (-pi, pi].  The
# arguments arising here (-2*pi*i*(tau - conj(tau')) with Im tau > 0) stay in
# the right half-plane, so no branch tracking is ever needed in practice.
SQRT_BRANCH = "principal"


def kappa(N: int) -> int:
    """Parity unit for quadratic phases of degree N.

    Quadratic exponents are evaluated as exp(i*pi*kappa(N)*phi/N) with phi
    an integer form.  For even N, kappa = 1.  For odd N the half phase
    e^{i*pi/N} is not a mod-N object; kappa = N+1 (== 2*(2^{-1} mod N))
    lands the phase in the N-th roots of unity, which is what makes the
    quantized maps exact intertwiners of the Weyl system at odd degree.
    """
    return 1 if N % 2 == 0 else N + 1


def sigma(v: Sequence[int], w: Sequence[int]) -> int:
    """Standard symplectic form on 2n-vectors, sign per SIGMA_CONVENTION."""
    if len(v) != len(w) or len(v) % 2 != 0:
        raise ValueError("sigma needs two integer vectors of equal even length")
    n = len(v) // 2
    return sum(v[n + i] * w[i] - w[n + i] * v[i] for i in range(n))


def pairing(v: Sequence[int]) -> int:
    """<m, n> for a 2n-vector v = (m, n)."""
    if len(v) % 2 != 0:
        raise ValueError("pairing needs an even-length vector")
    n = len(v) // 2
    return sum(v[i] * v[n + i] for i in range(n))


def record() -> dict:
    """Convention record attached to every report for reproducibility."""
    return {
        "sigma": SIGMA_CONVENTION,
        "weyl_ordering_sign": WEYL_ORDERING_SIGN,
        "kappa_odd_degree": "N+1",
        "sqrt_branch": SQRT_BRANCH,
        "gaussian_quadrature_ratio": GAUSSIAN_QUADRATURE_RATIO,
    }
