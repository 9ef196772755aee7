"""Integer symplectic matrix arithmetic.

Membership tests, theta-parity conditions, lattice coset enumeration for
g - I, arithmetic orders mod N, and Euclidean generator words in SL(2,Z).
All arithmetic is exact (python ints / Fractions); nothing here touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateMapError, DimensionError, NonSymplecticError, PeriodNotFoundError

IntMatrix = tuple[tuple[int, ...], ...]


def _as_int_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    M = tuple(tuple(int(x) for x in row) for row in rows)
    if not M or any(len(row) != len(M) for row in M):
        raise DimensionError("expected a square integer matrix")
    return M


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    k = len(A)
    return tuple(
        tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(k)) for i in range(k)
    )


def mat_mod(A: IntMatrix, N: int) -> IntMatrix:
    return tuple(tuple(x % N for x in row) for row in A)


def identity_matrix(k: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def int_det(A: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    k = len(A)
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for i in range(k - 1):
        if M[i][i] == 0:
            for r in range(i + 1, k):
                if M[r][i] != 0:
                    M[i], M[r] = M[r], M[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                M[r][c] = (M[r][c] * M[i][i] - M[r][i] * M[i][c]) // prev
            M[r][i] = 0
        prev = M[i][i]
    return sign * M[k - 1][k - 1]


@dataclass(frozen=True)
class IntegerSymplecticMatrix:
    """Element of Sp(2n, Z) in block form ((A, B), (C, D)).

    Vectors are columns (x_1..x_n, xi_1..xi_n); the matrix acts on the left.
    Construction validates the block identities and det = 1.
    """

    entries: IntMatrix

    def __post_init__(self):
        M = _as_int_matrix(self.entries)
        object.__setattr__(self, "entries", M)
        if not is_integer_symplectic(M):
            raise NonSymplecticError(f"not an integer symplectic matrix: {M}")

    @classmethod
    def from_abcd(cls, a: int, b: int, c: int, d: int) -> "IntegerSymplecticMatrix":
        return cls(((a, b), (c, d)))

    @property
    def n(self) -> int:
        return len(self.entries) // 2

    def _block(self, bi: int, bj: int) -> IntMatrix:
        n = self.n
        return tuple(
            tuple(self.entries[bi * n + i][bj * n + j] for j in range(n)) for i in range(n)
        )

    @property
    def A(self) -> IntMatrix:
        return self._block(0, 0)

    @property
    def B(self) -> IntMatrix:
        return self._block(0, 1)

    @property
    def C(self) -> IntMatrix:
        return self._block(1, 0)

    @property
    def D(self) -> IntMatrix:
        return self._block(1, 1)

    @property
    def abcd(self) -> tuple[int, int, int, int]:
        if self.n != 1:
            raise DimensionError("abcd is only defined for n = 1")
        return (self.entries[0][0], self.entries[0][1], self.entries[1][0], self.entries[1][1])

    def __matmul__(self, other: "IntegerSymplecticMatrix") -> "IntegerSymplecticMatrix":
        return IntegerSymplecticMatrix(mat_mul(self.entries, other.entries))

    def inverse(self) -> "IntegerSymplecticMatrix":
        if self.n == 1:
            a, b, c, d = self.abcd
            return IntegerSymplecticMatrix(((d, -b), (-c, a)))
        # g^{-1} = J^{-1} g^T J for symplectic g
        k = 2 * self.n
        n = self.n
        J = [[0] * k for _ in range(k)]
        for i in range(n):
            J[i][n + i] = 1
            J[n + i][i] = -1
        Jm = tuple(tuple(row) for row in J)
        Jinv = tuple(tuple(-x for x in row) for row in Jm)
        gT = tuple(tuple(self.entries[j][i] for j in range(k)) for i in range(k))
        return IntegerSymplecticMatrix(mat_mul(mat_mul(Jinv, gT), Jm))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        k = len(self.entries)
        if len(v) != k:
            raise DimensionError("vector length mismatch")
        return tuple(sum(self.entries[i][j] * v[j] for j in range(k)) for i in range(k))

    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(len(self.entries)))

    def power(self, k: int) -> "IntegerSymplecticMatrix":
        if k < 0:
            return self.inverse().power(-k)
        result = IntegerSymplecticMatrix(identity_matrix(2 * self.n))
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def to_json_dict(self) -> dict:
        return {"entries": [x for row in self.entries for x in row]}


def _transpose(A: IntMatrix) -> IntMatrix:
    k = len(A)
    return tuple(tuple(A[j][i] for j in range(k)) for i in range(k))


def is_integer_symplectic(M) -> bool:
    """True iff the block identities A^T C = C^T A, B^T D = D^T B,
    A^T D - C^T B = I all hold and det M = 1.

    Raises DimensionError for odd-dimensional input.
    """
    if isinstance(M, IntegerSymplecticMatrix):
        return True
    M = _as_int_matrix(M)
    k = len(M)
    if k % 2 != 0:
        raise DimensionError(f"odd dimension {k}: no symplectic splitting")
    n = k // 2
    A = tuple(tuple(M[i][j] for j in range(n)) for i in range(n))
    B = tuple(tuple(M[i][n + j] for j in range(n)) for i in range(n))
    C = tuple(tuple(M[n + i][j] for j in range(n)) for i in range(n))
    D = tuple(tuple(M[n + i][n + j] for j in range(n)) for i in range(n))
    At, Bt, Ct = _transpose(A), _transpose(B), _transpose(C)
    if mat_mul(At, C) != _transpose(mat_mul(At, C)):
        return False
    if mat_mul(Bt, D) != _transpose(mat_mul(Bt, D)):
        return False
    AtD = mat_mul(At, D)
    CtB = mat_mul(Ct, B)
    I = identity_matrix(n)
    if tuple(tuple(AtD[i][j] - CtB[i][j] for j in range(n)) for i in range(n)) != I:
        return False
    return int_det(M) == 1


def theta_group_member(g, N: int) -> bool:
    """True iff every entry of N*A^T*C and N*B^T*D is even.

    For n = 1 this is the condition that N*a*c and N*b*d are both even;
    exactly these elements act consistently on the degree-N basis.
    """
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    AtC = mat_mul(_transpose(g.A), g.C)
    BtD = mat_mul(_transpose(g.B), g.D)
    for M in (AtC, BtD):
        for row in M:
            for x in row:
                if (N * x) % 2 != 0:
                    return False
    return True


# ---------------------------------------------------------------------------
# Lattice cosets of M * Z^{2n}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosetSystem:
    """Complete set of representatives of Z^k / M*Z^k for nonsingular M."""

    modulus_matrix: IntMatrix
    representatives: tuple[tuple[int, ...], ...]
    index: int


def _column_hermite_diagonal(M: IntMatrix) -> list[int]:
    """Diagonal of the lower-triangular column Hermite normal form of M.

    Column operations (unimodular on the right) preserve the lattice M*Z^k.
    """
    k = len(M)
    W = [list(row) for row in M]
    for i in range(k):
        # clear row i to the right of column i using gcd column ops
        for j in range(i + 1, k):
            while W[i][j] != 0:
                if W[i][i] == 0 or (W[i][j] != 0 and abs(W[i][j]) < abs(W[i][i])):
                    for r in range(k):
                        W[r][i], W[r][j] = W[r][j], W[r][i]
                if W[i][j] == 0:
                    break
                q = W[i][j] // W[i][i]
                for r in range(k):
                    W[r][j] -= q * W[r][i]
        if W[i][i] < 0:
            for r in range(k):
                W[r][i] = -W[r][i]
    return [W[i][i] for i in range(k)]


def coset_representatives(M) -> CosetSystem:
    """Representatives of Z^k / M*Z^k, canonicalized by column Hermite form.

    Returns exactly |det M| representatives (the box prod [0, d_i) for the
    triangular diagonal d), pairwise incongruent mod M*Z^k, in lexicographic
    order.  Raises DegenerateMapError when det M = 0.
    """
    M = _as_int_matrix(M)
    det = int_det(M)
    if det == 0:
        raise DegenerateMapError("singular modulus matrix: lattice map is degenerate")
    diag = _column_hermite_diagonal(M)
    reps: list[tuple[int, ...]] = []

    def build(prefix: tuple[int, ...], i: int):
        if i == len(diag):
            reps.append(prefix)
            return
        for v in range(diag[i]):
            build(prefix + (v,), i + 1)

    build((), 0)
    assert len(reps) == abs(det)
    return CosetSystem(modulus_matrix=M, representatives=tuple(reps), index=abs(det))


def congruent_mod_lattice(u: Sequence[int], v: Sequence[int], M: IntMatrix) -> bool:
    """Exact test: u - v in M*Z^k (solves M x = u - v over the rationals)."""
    M = _as_int_matrix(M)
    k = len(M)
    rhs = [Fraction(int(u[i]) - int(v[i])) for i in range(k)]
    W = [[Fraction(M[i][j]) for j in range(k)] for i in range(k)]
    # Gaussian elimination with exact fractions
    for col in range(k):
        piv = next((r for r in range(col, k) if W[r][col] != 0), None)
        if piv is None:
            if rhs[col] != 0:
                return False
            continue
        W[col], W[piv] = W[piv], W[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / W[col][col]
        W[col] = [x * inv for x in W[col]]
        rhs[col] *= inv
        for r in range(k):
            if r != col and W[r][col] != 0:
                f = W[r][col]
                W[r] = [a - f * b for a, b in zip(W[r], W[col])]
                rhs[r] -= f * rhs[col]
    return all(x.denominator == 1 for x in rhs)


# ---------------------------------------------------------------------------
# Arithmetic period and generator words
# ---------------------------------------------------------------------------


def arithmetic_period(g, N: int, cap: int = 10**6) -> int:
    """Least k >= 1 with g^k = I (mod N), by repeated modular multiplication."""
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    if N < 1:
        raise ValueError("N must be >= 1")
    k = 2 * g.n
    I = mat_mod(identity_matrix(k), N)
    base = mat_mod(g.entries, N)
    acc = base
    for j in range(1, cap + 1):
        if acc == I:
            return j
        acc = mat_mod(mat_mul(acc, base), N)
    raise PeriodNotFoundError(f"no period below cap={cap} for N={N}")


S_MATRIX = ((0, -1), (1, 0))
T_MATRIX = ((1, 1), (0, 1))

Word = tuple[tuple[str, int], ...]


def word_product(word: Word) -> IntegerSymplecticMatrix:
    """Exact integer product of a generator word (left-to-right)."""
    m = identity_matrix(2)
    for gen, k in word:
        if gen == "S":
            base = S_MATRIX if k > 0 else ((0, 1), (-1, 0))
            for _ in range(abs(k)):
                m = mat_mul(m, base)
        elif gen == "T":
            m = mat_mul(m, ((1, k), (0, 1)))
        else:
            raise ValueError(f"unknown generator {gen!r}")
    return IntegerSymplecticMatrix(m)


def generator_decomposition(g) -> Word:
    """Word over {S, T, S^-1, T^-1} whose exact product is g (n = 1 only).

    Euclidean reduction on the left column: repeatedly strip T^q * S^-1
    choosing q to minimize |a - q*c| (ties broken toward the smaller q, which
    keeps |c| minimal first).  Exponents are collected, so the word is a
    tuple of (generator, exponent) pairs.
    """
    if not isinstance(g, IntegerSymplecticMatrix):
        g = IntegerSymplecticMatrix(g)
    if g.n != 1:
        raise DimensionError("generator words are produced for n = 1 only")
    a, b, c, d = g.abcd
    word: list[tuple[str, int]] = []
    while c != 0:
        q = (2 * a + c) // (2 * c) if c > 0 else -((2 * a - c) // (-2 * c))
        # q = nearest integer to a/c, ties toward even floor: deterministic
        word.append(("T", q))
        word.append(("S", -1))
        # g <- S * T^{-q} * g ; track the residual matrix
        a, b, c, d = -c, -d, a - q * c, b - q * d
    if a == 1:
        if b != 0:
            word.append(("T", b))
    else:
        # a = d = -1: -I = S^2
        word.append(("S", 1))
        word.append(("S", 1))
        if b != 0:
            word.append(("T", -b))
    result = tuple(word)
    check = word_product(result)
    assert check.entries == g.entries, "generator decomposition failed to multiply back"
    return result
