"""Integer symplectic arithmetic against brute-force oracles."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catmaps.errors import DegenerateMapError, DimensionError, PeriodNotFoundError
from catmaps.symplectic import (
    IntegerSymplecticMatrix,
    arithmetic_period,
    congruent_mod_lattice,
    coset_representatives,
    generator_decomposition,
    int_det,
    is_integer_symplectic,
    mat_mod,
    mat_mul,
    identity_matrix,
    theta_group_member,
    word_product,
)

S = ((0, -1), (1, 0))
T = ((1, 1), (0, 1))
ARNOLD = ((2, 1), (1, 1))


def random_word_matrix(rng_ints):
    """Build an SL(2,Z) element from a generator word encoded by integers."""
    m = ((1, 0), (0, 1))
    for k in rng_ints:
        if k % 2 == 0:
            m = mat_mul(m, S if (k // 2) % 2 == 0 else ((0, 1), (-1, 0)))
        else:
            m = mat_mul(m, ((1, k // 2), (0, 1)))
    return m


class TestMembership:
    def test_identity(self):
        assert is_integer_symplectic(((1, 0), (0, 1)))

    def test_arnold(self):
        assert is_integer_symplectic(ARNOLD)

    def test_det_zero(self):
        assert not is_integer_symplectic(((1, 1), (1, 1)))

    def test_det_minus_one(self):
        assert not is_integer_symplectic(((0, 1), (1, 0)))

    def test_odd_dimension_raises(self):
        with pytest.raises(DimensionError):
            is_integer_symplectic(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def test_4x4_block_embedding(self):
        # diag embedding of S in Sp(4,Z)
        g = (
            (0, 0, -1, 0),
            (0, 0, 0, -1),
            (1, 0, 0, 0),
            (0, 1, 0, 0),
        )
        assert is_integer_symplectic(g)

    @given(st.lists(st.integers(-6, 6), max_size=12))
    @settings(max_examples=60)
    def test_words_are_symplectic_and_closed(self, ks):
        m = random_word_matrix(ks)
        assert is_integer_symplectic(m)
        g = IntegerSymplecticMatrix(m)
        assert is_integer_symplectic(g.inverse().entries)
        assert is_integer_symplectic((g @ IntegerSymplecticMatrix(ARNOLD)).entries)


class TestThetaParity:
    @pytest.mark.parametrize(
        "g,N,expected",
        [
            (S, 3, True),  # a*c = b*d = 0
            (ARNOLD, 2, True),  # N*a*c = 4, N*b*d = 2
            (ARNOLD, 3, False),  # N*b*d = 3 odd
            (T, 2, True),
            (T, 5, False),
        ],
    )
    def test_examples(self, g, N, expected):
        assert theta_group_member(g, N) is expected

    def test_even_N_always_member(self):
        for m in [S, T, ARNOLD, ((1, 2), (1, 3))]:
            for N in (2, 4, 10):
                assert theta_group_member(m, N)


class TestCosets:
    def test_arnold_single_coset(self):
        sys = coset_representatives(((1, 1), (1, 0)))  # g - I for the Arnold map
        assert sys.index == 1
        assert sys.representatives == ((0, 0),)

    def test_fourier_generator_index_two(self):
        sys = coset_representatives(((-1, -1), (1, -1)))  # S - I
        assert sys.index == 2
        r0, r1 = sys.representatives
        assert not congruent_mod_lattice(r0, r1, sys.modulus_matrix)

    def test_zero_matrix_raises(self):
        with pytest.raises(DegenerateMapError):
            coset_representatives(((0, 0), (0, 0)))

    @given(st.tuples(*(st.integers(-4, 4),) * 4))
    @settings(max_examples=80, deadline=None)
    def test_index_equals_det_and_reps_incongruent(self, abcd):
        a, b, c, d = abcd
        det = a * d - b * c
        if det == 0 or abs(det) > 64:
            return
        M = ((a, b), (c, d))
        sys = coset_representatives(M)
        assert sys.index == abs(det)
        reps = sys.representatives
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                assert not congruent_mod_lattice(reps[i], reps[j], M)

    @pytest.mark.parametrize("M", [((2, 1), (0, 3)), ((3, 1), (1, 2)), ((-2, 1), (3, 2))])
    def test_brute_force_box_coverage(self, M):
        # every vector of a sample box is congruent to exactly one representative
        sys = coset_representatives(M)
        for u in range(-3, 4):
            for v in range(-3, 4):
                hits = sum(
                    congruent_mod_lattice((u, v), rep, M) for rep in sys.representatives
                )
                assert hits == 1


class TestArithmeticPeriod:
    def test_identity(self):
        assert arithmetic_period(((1, 0), (0, 1)), 7) == 1

    def test_fourier_mod_two(self):
        assert arithmetic_period(S, 2) == 2  # S^2 = -I = I mod 2

    def test_arnold_mod_five_against_oracle(self):
        # oracle: fresh repeated multiplication, independent bookkeeping
        g = ARNOLD
        acc = g
        k = 1
        while mat_mod(acc, 5) != mat_mod(identity_matrix(2), 5):
            acc = mat_mul(acc, g)
            k += 1
        assert arithmetic_period(ARNOLD, 5) == k == 10

    @given(st.lists(st.integers(-4, 4), max_size=8), st.integers(2, 12))
    @settings(max_examples=40, deadline=None)
    def test_minimality(self, ks, N):
        g = IntegerSymplecticMatrix(random_word_matrix(ks))
        p = arithmetic_period(g, N, cap=10**5)
        assert mat_mod(g.power(p).entries, N) == mat_mod(identity_matrix(2), N)
        for k in range(1, min(p, 40)):
            assert mat_mod(g.power(k).entries, N) != mat_mod(identity_matrix(2), N)

    def test_cap_exceeded(self):
        with pytest.raises(PeriodNotFoundError):
            arithmetic_period(ARNOLD, 1009, cap=3)


class TestGeneratorWords:
    def test_S_is_single_token(self):
        assert generator_decomposition(S) == (("S", 1),)

    def test_T_is_single_token(self):
        assert generator_decomposition(T) == (("T", 1),)

    def test_arnold_multiplies_back(self):
        word = generator_decomposition(ARNOLD)
        assert word_product(word).entries == ARNOLD

    @given(st.lists(st.integers(-6, 6), max_size=20))
    @settings(max_examples=100, deadline=None)
    def test_roundtrip_random_words(self, ks):
        m = random_word_matrix(ks)
        word = generator_decomposition(IntegerSymplecticMatrix(m))
        assert word_product(word).entries == m


def test_int_det_matches_known():
    assert int_det(((2, 1), (1, 1))) == 1
    assert int_det(((12, 6, 4), (3, 9, 6), (2, 16, 14))) == 300


def test_json_round_trip_shape():
    g = IntegerSymplecticMatrix(ARNOLD)
    d = g.to_json_dict()
    assert d == {"entries": [2, 1, 1, 1]}
