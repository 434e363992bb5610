import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import cofactor_det

from tomoinfo import mub_prime
from tomoinfo.hermitian import (
    DimensionError,
    NotDensityMatrixError,
    NotHermitianError,
    check_density_matrix,
    determinant,
    hs_inner,
    outcome_probability,
    projector,
    random_density_matrix,
    random_hermitian,
    sym_eigen,
    traceless_hermitian_basis,
)

ket0 = np.array([1, 0], dtype=complex)
plus = np.array([1, 1], dtype=complex) / np.sqrt(2)


def test_hs_inner_identity():
    assert hs_inner(np.eye(2), np.eye(2)) == 2.0


def test_hs_inner_rank_one_projector():
    v = np.array([1, 2j, -1], dtype=complex)
    P = projector(v / np.linalg.norm(v))
    assert hs_inner(P, P) == pytest.approx(1.0, abs=1e-12)


def test_hs_inner_mub_projectors_n3():
    d = mub_prime(3)
    P = projector(d.bases[1].vectors[0])
    Q = projector(d.bases[2].vectors[2])
    assert hs_inner(P, Q) == pytest.approx(1 / 3, abs=1e-12)


def test_hs_inner_dimension_mismatch():
    with pytest.raises(DimensionError):
        hs_inner(np.eye(2), np.eye(3))


def test_hs_inner_rejects_non_hermitian_pair():
    with pytest.raises(NotHermitianError):
        hs_inner(np.eye(2), 1j * np.eye(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_hs_inner_is_real_inner_product(n, seed, a, b):
    rng = np.random.default_rng(seed)
    A, B, C = (random_hermitian(n, rng) for _ in range(3))
    assert hs_inner(A, B) == pytest.approx(hs_inner(B, A), abs=1e-12)
    lhs = hs_inner(a * A + b * B, C)
    assert lhs == pytest.approx(a * hs_inner(A, C) + b * hs_inner(B, C), abs=1e-10)
    assert hs_inner(A, A) > 0
    assert hs_inner(np.zeros((n, n)), np.zeros((n, n))) == 0


@pytest.mark.parametrize(
    "v, expected",
    [
        ([1, 0], [[1, 0], [0, 0]]),
        (np.array([1, 1]) / np.sqrt(2), [[0.5, 0.5], [0.5, 0.5]]),
        (np.array([1, 1j]) / np.sqrt(2), [[0.5, -0.5j], [0.5j, 0.5]]),
    ],
)
def test_projector_examples(v, expected):
    np.testing.assert_allclose(projector(v), expected, atol=1e-15)


def test_projector_rejects_unnormalised():
    with pytest.raises(ValueError):
        projector([1, 1])


@pytest.mark.parametrize("n", [2, 3, 5])
def test_projectors_resolve_identity(n):
    for basis in mub_prime(n).bases:
        total = sum(projector(v) for v in basis.vectors)
        np.testing.assert_allclose(total, np.eye(n), atol=1e-12)
        P = projector(basis.vectors[0])
        np.testing.assert_allclose(P @ P, P, atol=1e-12)
        assert np.trace(P).real == pytest.approx(1, abs=1e-12)


def test_outcome_probability_examples():
    for n in (2, 3, 4):
        P = projector(np.eye(n)[1])
        assert outcome_probability(np.eye(n) / n, P) == pytest.approx(1 / n, abs=1e-15)
    rho0 = projector(ket0)
    assert outcome_probability(rho0, projector(ket0)) == 1.0
    assert outcome_probability(rho0, projector(plus)) == pytest.approx(0.5, abs=1e-15)


def test_outcome_probability_rejects_bad_states():
    with pytest.raises(NotDensityMatrixError):
        outcome_probability(np.eye(2), projector(ket0))
    with pytest.raises(NotDensityMatrixError):
        outcome_probability(np.diag([1.5, -0.5]), projector(ket0))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_probabilities_over_basis_sum_to_one(n):
    rng = np.random.default_rng(n)
    rho = random_density_matrix(n, rng)
    for basis in mub_prime(n).bases:
        total = sum(outcome_probability(rho, projector(v)) for v in basis.vectors)
        assert total == pytest.approx(1.0, abs=1e-12)


def test_sym_eigen_diag():
    np.testing.assert_array_equal(sym_eigen(np.diag([3.0, 1.0])), [1.0, 3.0])


@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_sym_eigen_lemma_block(n):
    block = np.eye(n - 1) - np.ones((n - 1, n - 1)) / n
    expected = np.array([1 / n] + [1.0] * (n - 2))
    np.testing.assert_allclose(sym_eigen(block), expected, atol=1e-14)


def test_sym_eigen_trace_and_reconstruction():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(5, 5))
    s = a + a.T
    w, q = sym_eigen(s, vectors=True)
    assert np.all(np.diff(w) >= 0)
    assert w.sum() == pytest.approx(np.trace(s), abs=1e-10)
    assert np.abs(s - q @ np.diag(w) @ q.T).max() <= 1e-9 * np.abs(s).max()


def test_sym_eigen_rejects_asymmetric():
    with pytest.raises(NotHermitianError):
        sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


@pytest.mark.parametrize("m", [1, 2, 5, 9])
def test_determinant_identity(m):
    assert determinant(np.eye(m)) == 1.0


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_determinant_lemma_block(n):
    block = np.eye(n - 1) - np.ones((n - 1, n - 1)) / n
    assert determinant(block) == pytest.approx(1 / n, rel=1e-12)


def test_determinant_matches_cofactor_oracle():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(6, 6))
    assert determinant(a) == pytest.approx(cofactor_det(a), rel=1e-9)
    s = a @ a.T
    assert determinant(s) == pytest.approx(cofactor_det(s), rel=1e-9)
    assert determinant(s, symmetric=False) == pytest.approx(determinant(s, symmetric=True), rel=1e-9)


def test_determinant_singular_is_zero():
    assert determinant(np.array([[1.0, 2.0], [2.0, 4.0]])) == pytest.approx(0.0, abs=1e-15)


def test_gell_mann_basis_is_orthonormal_and_traceless():
    for n in (2, 3, 4):
        ops = traceless_hermitian_basis(n)
        assert ops.shape == (n * n - 1, n, n)
        gram = np.einsum("aij,bij->ab", ops.conj(), ops).real
        np.testing.assert_allclose(gram, np.eye(n * n - 1), atol=1e-14)
        np.testing.assert_allclose(np.trace(ops, axis1=1, axis2=2), 0, atol=1e-15)
        for op in ops:
            np.testing.assert_allclose(op, op.conj().T)


def test_random_density_matrix_is_valid():
    rho = random_density_matrix(4, 3)
    check_density_matrix(rho)
