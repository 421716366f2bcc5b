import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qprand.qcore import (
    PAULI_X,
    PHI_PLUS,
    DimensionError,
    NotHermitianError,
    as_density,
    as_state,
    basis,
    complete_basis,
    dagger,
    hermitian_eig,
    is_orthonormal,
    ket,
    partial_trace,
    projector,
    random_density,
    random_hermitian,
    random_state,
    tensor,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestTensor:
    def test_identity(self):
        np.testing.assert_array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_projector_placement(self):
        out = tensor(projector(basis(2, 0)), projector(basis(2, 1)))
        np.testing.assert_array_equal(out, np.diag([0, 1, 0, 0]))

    def test_bell_projector_matches_index_oracle(self):
        v = (tensor(basis(2, 0), basis(2, 0)) + tensor(basis(2, 1), basis(2, 1))) / np.sqrt(2)
        built = np.outer(v, v.conj())
        # entry [2i+j, 2k+l] = a_ij conj(a_kl) with a_00 = a_11 = 1/sqrt2
        amp = np.zeros((2, 2))
        amp[0, 0] = amp[1, 1] = 1 / np.sqrt(2)
        oracle = np.zeros((4, 4), dtype=complex)
        for i, j, k, l in itertools.product(range(2), repeat=4):
            oracle[2 * i + j, 2 * k + l] = amp[i, j] * amp[k, l]
        np.testing.assert_allclose(built, oracle, atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.sampled_from([2, 4]), st.sampled_from([2, 4]), st.sampled_from([1, 2]))
    def test_associative(self, seed, da, db, dc):
        rng = np.random.default_rng(seed)
        a, b, c = (random_hermitian(rng, d) for d in (da, db, dc))
        np.testing.assert_allclose(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), atol=1e-12)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            tensor(np.eye(2), np.array([[np.nan, 0], [0, 1]]))


def _ptrace_oracle_3q_keep2(rho):
    out = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            for i in range(2):
                for j in range(2):
                    out[a, b] += rho[4 * i + 2 * j + a, 4 * i + 2 * j + b]
    return out


class TestPartialTrace:
    def test_bell_marginal(self):
        np.testing.assert_allclose(partial_trace(projector(PHI_PLUS), [2, 2], 0), np.eye(2) / 2, atol=1e-15)

    def test_product_factor(self, rng):
        ra, rb = random_density(rng, 2), random_density(rng, 2)
        np.testing.assert_allclose(partial_trace(tensor(ra, rb), [2, 2], 1), rb, atol=1e-12)

    def test_three_qubit_against_index_sum(self, rng):
        rho = projector(random_state(rng, 8))
        np.testing.assert_allclose(partial_trace(rho, [2, 2, 2], 2), _ptrace_oracle_3q_keep2(rho), atol=1e-12)

    def test_middle_subsystem(self, rng):
        a, b, c = (random_density(rng, 2) for _ in range(3))
        np.testing.assert_allclose(partial_trace(tensor(a, b, c), [2, 2, 2], 1), b, atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.sampled_from([2, 4]), st.sampled_from([2, 4]), st.integers(0, 1))
    def test_product_property(self, seed, da, db, keep):
        rng = np.random.default_rng(seed)
        factors = [random_density(rng, da), random_density(rng, db)]
        out = partial_trace(tensor(*factors), [da, db], keep)
        np.testing.assert_allclose(out, factors[keep], atol=1e-12)
        assert abs(np.trace(out) - 1) < 1e-12

    def test_dim_mismatch(self):
        with pytest.raises(DimensionError):
            partial_trace(np.eye(4) / 4, [2, 3], 0)


class TestHermitianEig:
    def test_diagonal(self):
        e = hermitian_eig(np.diag([5 / 6, 1 / 6]))
        np.testing.assert_allclose(e.eigenvalues, [5 / 6, 1 / 6], atol=1e-15)
        np.testing.assert_allclose(np.abs(e.vectors), np.eye(2), atol=1e-15)

    def test_pauli_x(self):
        e = hermitian_eig(PAULI_X)
        np.testing.assert_allclose(e.eigenvalues, [1, -1], atol=1e-15)
        assert abs(abs(np.vdot(ket(1, 1), e.vectors[:, 0])) - 1) < 1e-14
        assert abs(abs(np.vdot(ket(1, -1), e.vectors[:, 1])) - 1) < 1e-14

    def test_random_4x4_reconstructs(self, rng):
        h = random_hermitian(rng, 4)
        np.testing.assert_allclose(hermitian_eig(h).reconstruct(), h, atol=1e-10)

    def test_thousand_random_matrices(self):
        rng = np.random.default_rng(7)
        worst_rec = worst_orth = 0.0
        for i in range(1000):
            d = (2, 4, 8)[i % 3]
            h = random_hermitian(rng, d)
            e = hermitian_eig(h)
            worst_rec = max(worst_rec, np.max(np.abs(e.reconstruct() - h)))
            worst_orth = max(worst_orth, np.max(np.abs(dagger(e.vectors) @ e.vectors - np.eye(d))))
            assert np.all(np.diff(e.eigenvalues) <= 0)
        assert worst_rec <= 1e-10
        assert worst_orth <= 1e-10

    def test_matches_numpy_spectrum(self, rng):
        h = random_hermitian(rng, 8)
        np.testing.assert_allclose(hermitian_eig(h).eigenvalues, np.linalg.eigvalsh(h)[::-1], atol=1e-12)

    def test_deterministic(self, rng):
        h = random_hermitian(rng, 4)
        a, b = hermitian_eig(h), hermitian_eig(h.copy())
        np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
        np.testing.assert_array_equal(a.vectors, b.vectors)

    def test_degenerate_spectrum(self):
        e = hermitian_eig(np.eye(4) / 4)
        np.testing.assert_allclose(e.eigenvalues, [0.25] * 4)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            hermitian_eig(np.array([[0, 1], [0, 0]]))


class TestCompleteBasis:
    def test_canonical(self):
        out = complete_basis([basis(2, 0)], 2)
        assert abs(abs(np.vdot(basis(2, 1), out[1])) - 1) < 1e-15

    def test_full_basis_unchanged(self, rng):
        full = list(hermitian_eig(random_hermitian(rng, 4)).vectors.T)
        out = complete_basis(full, 4)
        for a, b in zip(full, out):
            np.testing.assert_array_equal(a, b)

    def test_plus_state(self):
        first = ket(1, 1)
        out = complete_basis([first], 2)
        np.testing.assert_array_equal(out[0], first)
        assert abs(np.vdot(first, out[1])) < 1e-12
        assert abs(np.linalg.norm(out[1]) - 1) < 1e-12

    def test_custom_order_gives_different_completion(self):
        a = complete_basis([basis(3, 0)], 3, order=[1, 2])
        b = complete_basis([basis(3, 0)], 3, order=[2, 1])
        assert is_orthonormal(a) and is_orthonormal(b)
        assert not np.allclose(a[1], b[1])

    @settings(max_examples=100, deadline=None)
    @given(seeds, st.sampled_from([2, 4, 8]), st.data())
    def test_always_orthonormal(self, seed, dim, data):
        rng = np.random.default_rng(seed)
        k = data.draw(st.integers(0, dim))
        vecs = list(hermitian_eig(random_hermitian(rng, dim)).vectors.T[:k])
        out = complete_basis(vecs, dim)
        m = np.column_stack(out)
        np.testing.assert_allclose(dagger(m) @ m, np.eye(dim), atol=1e-10)

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            complete_basis([basis(2, 0), ket(1, 1)], 2)


class TestValidation:
    def test_state_norm(self):
        with pytest.raises(ValueError):
            as_state([1, 1])
        as_state(ket(1, 1j))

    def test_density_checks(self):
        with pytest.raises(ValueError):
            as_density(np.diag([1.5, -0.5]))
        with pytest.raises(NotHermitianError):
            as_density(np.array([[0.5, 0.1], [0.0, 0.5]]))
        with pytest.raises(ValueError):
            as_density(np.eye(2))
        as_density(np.eye(2) / 2)
