import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from models.domain_models import RealLinearOp
from services.exceptions import NotPositiveDefinite, ShapeError
from services.planting import random_symplectic
from services.symplectic_core import (
    as_phase_matrix,
    compose_real_linear,
    darboux_basis,
    embed_real_linear,
    embed_vector,
    is_admissible_covariance,
    is_hamiltonian_generator,
    is_symplectic,
    standard_form,
    symplectic_eigenvalues,
    williamson,
)


def _random_op(rng, d):
    def c():
        return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))

    return RealLinearOp(A1=c(), A2=c())


def _random_pd(rng, n):
    X = rng.standard_normal((n, n))
    return X @ X.T + 0.5 * np.eye(n)


def test_standard_form_one_mode():
    assert_allclose(standard_form(1), [[0.0, 1.0], [-1.0, 0.0]])


@pytest.mark.parametrize("d", [1, 2, 5])
def test_standard_form_squares_to_minus_identity(d):
    J = standard_form(d)
    assert_allclose(J @ J, -np.eye(2 * d))
    assert_allclose(J.T, -J)


def test_standard_form_rejects_zero_modes():
    with pytest.raises(ShapeError):
        standard_form(0)


@pytest.mark.parametrize("bad", [np.zeros((3, 3)), np.zeros((2, 4)), np.zeros((0, 0)), [[np.nan, 0], [0, 1]]])
def test_as_phase_matrix_rejects(bad):
    with pytest.raises(ShapeError) as err:
        as_phase_matrix(bad, "Z")
    assert err.value.field == "Z"
    assert str(err.value).startswith("Z:")


def test_is_symplectic_examples():
    assert is_symplectic(np.eye(2))
    assert is_symplectic(standard_form(1))
    assert is_symplectic(np.diag([2.0, 0.5]))
    assert not is_symplectic(np.diag([2.0, 2.0]))


def test_is_hamiltonian_generator_examples():
    assert is_hamiltonian_generator(np.zeros((2, 2)))
    assert is_hamiltonian_generator([[0.0, -1.0], [1.0, 0.0]])
    assert not is_hamiltonian_generator(-np.eye(2))


def test_embed_real_linear_multiplication_by_i():
    op = RealLinearOp(A1=np.array([[1j]]), A2=np.zeros((1, 1)))
    assert_allclose(embed_real_linear(op), [[0.0, -1.0], [1.0, 0.0]])


def test_embed_real_linear_conjugation():
    op = RealLinearOp(A1=np.zeros((1, 1)), A2=np.eye(1))
    assert_allclose(embed_real_linear(op), [[1.0, 0.0], [0.0, -1.0]])


def test_embed_real_linear_shape_mismatch():
    with pytest.raises(ShapeError):
        embed_real_linear(RealLinearOp(A1=np.eye(2), A2=np.eye(3)))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 4))
def test_embedding_acts_like_the_operator(seed, d):
    rng = np.random.default_rng(seed)
    op = _random_op(rng, d)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    image = op.A1 @ z + op.A2 @ z.conj()
    assert_allclose(embed_real_linear(op) @ embed_vector(z), embed_vector(image), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 4))
def test_embedding_respects_composition(seed, d):
    rng = np.random.default_rng(seed)
    a, b = _random_op(rng, d), _random_op(rng, d)
    assert_allclose(
        embed_real_linear(compose_real_linear(a, b)),
        embed_real_linear(a) @ embed_real_linear(b),
        atol=1e-10,
    )


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 4))
def test_random_symplectic_is_symplectic(seed, d):
    M = random_symplectic(np.random.default_rng(seed), d)
    assert is_symplectic(M, 1e-8)


@pytest.mark.parametrize("a", [1.0, 3.0, 0.25])
def test_williamson_of_scaled_identity(a):
    w = williamson(a * np.eye(2))
    assert_allclose(w.D, a * np.eye(2), atol=1e-12)
    assert is_symplectic(w.M)
    assert_allclose(w.M.T @ w.D @ w.M, a * np.eye(2), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 5))
def test_williamson_reconstructs(seed, d):
    rng = np.random.default_rng(seed)
    Sigma = _random_pd(rng, 2 * d)
    w = williamson(Sigma)
    scale = 1.0 + np.linalg.norm(Sigma)
    assert is_symplectic(w.M, 1e-8)
    assert_allclose(w.M.T @ w.D @ w.M, Sigma, atol=1e-9 * scale)
    assert np.all(np.diff(w.nu) <= 1e-12)
    expected = np.sort(np.abs(np.linalg.eigvals(standard_form(d) @ Sigma).imag))[::-1][::2]
    assert_allclose(w.nu, expected, rtol=1e-9)
    assert_allclose(symplectic_eigenvalues(Sigma), expected, rtol=1e-9)


def test_williamson_rejects_singular():
    with pytest.raises(NotPositiveDefinite):
        williamson(np.diag([1.0, 0.0]))
    with pytest.raises(NotPositiveDefinite):
        williamson(np.diag([1.0, -1.0]))


def test_admissible_covariance():
    assert is_admissible_covariance(np.eye(2))
    assert is_admissible_covariance(3.0 * np.eye(2))
    assert is_admissible_covariance(np.diag([4.0, 0.25]))
    assert not is_admissible_covariance(0.5 * np.eye(2))
    assert not is_admissible_covariance(np.zeros((2, 2)))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 3))
def test_darboux_basis_normalises_gram(seed, d):
    rng = np.random.default_rng(seed)
    M = random_symplectic(rng, d)
    G = M.T @ standard_form(d) @ M
    T = darboux_basis(G)
    assert_allclose(T.T @ G @ T, standard_form(d), atol=1e-8)
