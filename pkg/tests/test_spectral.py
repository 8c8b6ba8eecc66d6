import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from conftest import free_beside_damped
from services.exceptions import HypothesisViolation, ShapeError
from services.planting import planted_model
from services.spectral import (
    center_dimension,
    check_perif,
    classify_spectrum,
    df_subspace_general,
    invariant_splitting,
)
from services.symplectic_core import standard_form
from utils.linalg import same_subspace

ROTATION = np.array([[0.0, -1.0], [1.0, 0.0]])
JORDAN = np.array([[0.0, 1.0], [0.0, 0.0]])
J2 = standard_form(1)


def _coordinates(n, *idx):
    return np.eye(n)[:, list(idx)]


def test_rotation_is_imaginary_and_semisimple():
    report = classify_spectrum(ROTATION)
    assert report.class_imaginary == (0, 1)
    assert report.satisfies_H2
    assert report.imaginary_semisimple
    assert sorted(c.value.imag for c in report.clusters) == pytest.approx([-1.0, 1.0])


def test_jordan_block_is_defective():
    report = classify_spectrum(JORDAN)
    assert report.satisfies_H2
    assert not report.imaginary_semisimple
    (cluster,) = report.clusters
    assert (cluster.algebraic, cluster.geometric) == (2, 1)


def test_damping_is_negative():
    report = classify_spectrum(-np.eye(2))
    assert report.class_negative == (0, 1)
    assert report.class_imaginary == ()


@pytest.mark.parametrize("gamma", [2e-5, 1e-4])
def test_weak_damping_beside_free_rotation(gamma):
    Z, _ = free_beside_damped(gamma)
    report = classify_spectrum(Z)
    assert len(report.class_imaginary) == 2
    assert len(report.class_negative) == 2
    assert report.imaginary_semisimple
    assert sorted(c.value.imag for c in report.clusters) == pytest.approx([-1.0, 1.0])
    assert all(c.algebraic == 1 for c in report.clusters)

    split = invariant_splitting(Z)
    assert split.angles == pytest.approx((1.0,))
    assert same_subspace(split.V0_basis, _coordinates(4, 0, 2), 1e-6)
    assert same_subspace(split.Vminus_basis, _coordinates(4, 1, 3), 1e-6)


@pytest.mark.parametrize("rate", [5e-5, 1e-6])
def test_weak_damping_alone_is_negative(rate):
    report = classify_spectrum(-rate * np.eye(2) + ROTATION)
    assert report.class_negative == (0, 1)
    assert report.clusters == ()
    assert classify_spectrum(np.array([[-rate]]), phase_space=False).class_negative == (0,)


def test_split_defect_stays_one_cluster():
    Q, _ = np.linalg.qr(np.random.default_rng(3).normal(size=(2, 2)))
    report = classify_spectrum(Q @ JORDAN @ Q.T)
    (cluster,) = report.clusters
    assert cluster.algebraic == 2
    assert not report.imaginary_semisimple


def test_amplifier_violates_h2():
    report = classify_spectrum(np.eye(2))
    assert not report.satisfies_H2
    assert report.class_positive == (0, 1)


def test_non_phase_space_matrices_are_accepted():
    report = classify_spectrum(np.array([[-1.0]]), phase_space=False)
    assert report.class_negative == (0,)
    with pytest.raises(ShapeError):
        classify_spectrum(np.array([[-1.0]]))


def test_splitting_rotation():
    split = invariant_splitting(ROTATION)
    assert split.V0_basis.shape == (2, 2)
    assert split.Vminus_basis.shape == (2, 0)
    assert split.angles == pytest.approx((1.0,))
    assert split.d0 == 1


def test_splitting_damping():
    split = invariant_splitting(-np.eye(2))
    assert split.V0_basis.shape == (2, 0)
    assert split.Vminus_basis.shape == (2, 2)
    assert split.angles == ()


def test_splitting_block_diagonal():
    Z = scipy.linalg.block_diag(ROTATION, -np.eye(2))
    split = invariant_splitting(Z)
    assert same_subspace(split.V0_basis, _coordinates(4, 0, 1), 1e-8)
    assert same_subspace(split.Vminus_basis, _coordinates(4, 2, 3), 1e-8)


def test_splitting_zero_block_counts_modes():
    split = invariant_splitting(np.zeros((2, 2)))
    assert split.zero_dim == 2
    assert split.angles == (0.0,)


@pytest.mark.parametrize("Z,reason", [
    (np.eye(2), "H2_violated"),
    (JORDAN, "imaginary_not_semisimple"),
])
def test_splitting_raises_reason(Z, reason):
    with pytest.raises(HypothesisViolation) as err:
        invariant_splitting(Z)
    assert err.value.reason == reason


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n_center=st.integers(0, 2), n_stable=st.integers(0, 2))
def test_splitting_is_invariant_and_complementary(seed, n_center, n_stable):
    if n_center + n_stable == 0:
        n_stable = 1
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.5, 3.0, size=n_center)
    Z = planted_model(rng, angles, n_stable).dd.Z
    split = invariant_splitting(Z)
    V0, Vm = split.V0_basis, split.Vminus_basis
    assert V0.shape[1] == 2 * n_center
    assert Vm.shape[1] == 2 * n_stable
    if V0.shape[1]:
        assert same_subspace(np.hstack([V0, Z @ V0]), V0, 1e-6)
    if Vm.shape[1]:
        assert same_subspace(np.hstack([Vm, Z @ Vm]), Vm, 1e-6)
    assert np.linalg.matrix_rank(np.hstack([V0, Vm]), tol=1e-8) == Z.shape[0]


def test_df_subspace_examples():
    assert df_subspace_general(ROTATION, np.zeros((2, 2))).shape[1] == 2
    assert df_subspace_general(-np.eye(2), 2.0 * np.eye(2)).shape[1] == 0
    Z = scipy.linalg.block_diag(J2, -np.eye(2))
    C = scipy.linalg.block_diag(np.zeros((2, 2)), 2.0 * np.eye(2))
    df = df_subspace_general(Z, C)
    assert same_subspace(df, _coordinates(4, 0, 1), 1e-8)


def test_df_subspace_ignores_non_invariant_kernel():
    # ker C = span(e1) is not invariant under the rotation
    assert df_subspace_general(ROTATION, np.diag([0.0, 1.0])).shape[1] == 0


def test_check_perif():
    damped = -np.eye(2)
    assert check_perif(damped, 2.0 * np.eye(2), invariant_splitting(damped))
    assert not check_perif(ROTATION, 2.0 * np.eye(2), invariant_splitting(ROTATION))

    Z = np.zeros((4, 4))
    Z[0, 2], Z[2, 0] = -1.0, 1.0
    Z[1, 1] = Z[3, 3] = -1.0
    C = np.diag([0.0, 2.0, 0.0, 2.0])
    assert check_perif(Z, C, invariant_splitting(Z))


def test_center_dimension_is_zero_for_rotation():
    assert center_dimension(invariant_splitting(ROTATION)) == 0
    assert center_dimension(invariant_splitting(-np.eye(2))) == 0


def test_splitting_angles_descend():
    Z = scipy.linalg.block_diag(ROTATION, 2.0 * ROTATION)
    # rotation blocks must pair x_k with p_k
    P = np.eye(4)[:, [0, 2, 1, 3]]
    split = invariant_splitting(P @ Z @ P.T)
    assert split.angles == pytest.approx((2.0, 1.0))
    assert_allclose(sorted(split.angles, reverse=True), split.angles)
