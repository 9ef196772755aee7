"""Finite Heisenberg group law and its Weyl representation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catmaps.heisenberg import (
    HeisenbergElement,
    heisenberg_multiply,
    implemented_cocycle,
    projective_rep_check,
    split,
    splitting_phase,
    weyl_matrix,
    weyl_operator,
)

elem = lambda N, a, b, j=0, s=1: HeisenbergElement(N=N, a=(a,), b=(b,), phase_index=j, phase_sign=s)


class TestGroupLaw:
    def test_central_element_acts_trivially(self):
        x = elem(5, 0, 0)
        y = elem(5, 0, 0, j=3)
        z = heisenberg_multiply(x, y)
        assert (z.a, z.b, z.phase_index, z.phase_sign) == ((0,), (0,), 3, 1)

    def test_sigma_phase_of_basis_pair(self):
        # (1,0,1)*(0,1,1): sigma((1,0),(0,1)) = -1 under the recorded sign
        z = heisenberg_multiply(elem(5, 1, 0), elem(5, 0, 1))
        assert z.phase_index == (-1) % 5
        assert np.isclose(z.phase, np.exp(-2j * np.pi / 5))

    def test_commutator_is_central_with_double_phase(self):
        N = 7
        x, y = elem(N, 1, 0), elem(N, 0, 1)
        xinv = elem(N, -1, 0)
        yinv = elem(N, 0, -1)
        comm = heisenberg_multiply(heisenberg_multiply(x, y), heisenberg_multiply(xinv, yinv))
        assert comm.a == (0,) and comm.b == (0,)
        assert abs(comm.phase - np.exp(-4j * np.pi / N)) < 1e-12

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            heisenberg_multiply(elem(4, 1, 0), elem(5, 1, 0))

    def test_phase_is_2N_th_root(self):
        z = elem(6, 2, 3, j=4, s=-1)
        assert abs(z.phase ** (2 * z.N) - 1) < 1e-12

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_associativity_exhaustive(self, N):
        els = [elem(N, a, b) for a in range(N) for b in range(N)]
        for x in els:
            for y in els:
                for z in els:
                    lhs = heisenberg_multiply(heisenberg_multiply(x, y), z)
                    rhs = heisenberg_multiply(x, heisenberg_multiply(y, z))
                    assert (lhs.a, lhs.b, lhs.phase_index, lhs.phase_sign) == (
                        rhs.a,
                        rhs.b,
                        rhs.phase_index,
                        rhs.phase_sign,
                    )

    @given(
        st.integers(1, 9),
        st.tuples(*(st.integers(-9, 9),) * 6),
        st.tuples(*(st.integers(0, 8),) * 3),
        st.tuples(*(st.sampled_from([1, -1]),) * 3),
    )
    @settings(max_examples=80)
    def test_associativity_with_phases(self, N, abs_, js, ss):
        a1, b1, a2, b2, a3, b3 = abs_
        x = elem(N, a1, b1, js[0] % N, ss[0])
        y = elem(N, a2, b2, js[1] % N, ss[1])
        z = elem(N, a3, b3, js[2] % N, ss[2])
        lhs = heisenberg_multiply(heisenberg_multiply(x, y), z)
        rhs = heisenberg_multiply(x, heisenberg_multiply(y, z))
        assert (lhs.a, lhs.b, lhs.phase_index, lhs.phase_sign) == (
            rhs.a,
            rhs.b,
            rhs.phase_index,
            rhs.phase_sign,
        )


class TestSplitting:
    @pytest.mark.parametrize("h,expected", [((0, 0), 1), ((1, 1), -1), ((2, 3), 1)])
    def test_examples(self, h, expected):
        assert splitting_phase(h) == expected

    def test_split_element_carries_sign(self):
        z = split((1, 1), N=4)
        assert z.phase_sign == -1 and z.phase_index == 0

    @given(st.tuples(*(st.integers(-8, 8),) * 4))
    @settings(max_examples=60)
    def test_splitting_defect_is_half_cocycle(self, hhp):
        # F(h + h') / (F(h) F(h')) = (-1)^{sigma(h, h')}
        from catmaps.conventions import sigma

        h, hp = (hhp[0], hhp[1]), (hhp[2], hhp[3])
        total = splitting_phase((h[0] + hp[0], h[1] + hp[1]))
        assert total == splitting_phase(h) * splitting_phase(hp) * (-1) ** sigma(h, hp)


class TestWeylOperators:
    def test_identity(self):
        op = weyl_operator(4, 0, 0)
        assert np.allclose(op.entries, np.eye(4))

    def test_modulation_is_diagonal(self):
        N = 6
        op = weyl_operator(N, 1, 0)
        assert np.allclose(op.entries, np.diag(np.exp(2j * np.pi * np.arange(N) / N)))

    def test_commutation_relation(self):
        # U V = e^{2 pi i/N} V U
        N = 5
        U = weyl_matrix(N, 1, 0)
        V = weyl_matrix(N, 0, 1)
        assert np.allclose(U @ V, np.exp(2j * np.pi / N) * V @ U)

    @pytest.mark.parametrize("N", [1, 2, 3, 8, 17])
    def test_unitarity_residual(self, N):
        for a in range(min(N, 4)):
            for b in range(min(N, 4)):
                assert weyl_operator(N, a, b).unitarity_residual <= 1e-12

    def test_adjoint_symmetry(self):
        for N in (3, 4, 7):
            for (a, b) in [(1, 0), (0, 1), (1, 2), (2, 3)]:
                lhs = weyl_matrix(N, a, b).conj().T
                rhs = weyl_matrix(N, -a, -b)
                assert np.abs(lhs - rhs).max() < 1e-12

    @pytest.mark.parametrize("N", [2, 3, 8, 16, 64])
    def test_Nth_power_is_scalar(self, N):
        for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 5)]:
            P = np.linalg.matrix_power(weyl_matrix(N, a, b), N)
            c = P[0, 0]
            assert abs(abs(c) - 1) < 1e-10
            assert np.abs(P - c * np.eye(N)).max() < 1e-10

    @pytest.mark.parametrize("N", [2, 3, 5, 8, 16])
    def test_commutant_is_scalars(self, N):
        # solve [A,U] = [A,V] = 0 as a linear system; nullspace must be 1-dim
        U = weyl_matrix(N, 1, 0)
        V = weyl_matrix(N, 0, 1)
        I = np.eye(N)
        L = np.vstack(
            [np.kron(I, U) - np.kron(U.T, I), np.kron(I, V) - np.kron(V.T, I)]
        )
        s = np.linalg.svd(L, compute_uv=False)
        assert np.sum(s < 1e-10) == 1

    def test_json_schema(self):
        d = weyl_operator(2, 1, 0).to_json_dict()
        assert set(d) == {"dim", "re", "im"} and d["dim"] == 2 and len(d["re"]) == 4


class TestProjectiveRep:
    def test_N1_trivial(self):
        assert projective_rep_check(1) == 0.0

    def test_N4_all_basis_pairs(self):
        assert projective_rep_check(4) <= 1e-12

    def test_zero_pair(self):
        assert projective_rep_check(5, [((0, 0), (0, 0))]) == 0.0

    @given(st.integers(1, 12), st.tuples(*(st.integers(-6, 6),) * 4))
    @settings(max_examples=60, deadline=None)
    def test_cocycle_identity_random(self, N, vw):
        v, w = (vw[0], vw[1]), (vw[2], vw[3])
        lhs = weyl_matrix(N, *v) @ weyl_matrix(N, *w)
        rhs = implemented_cocycle(v, w, N) * weyl_matrix(N, v[0] + w[0], v[1] + w[1])
        assert np.abs(lhs - rhs).max() < 1e-12
