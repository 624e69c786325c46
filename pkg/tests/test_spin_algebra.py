"""Indefinite-inner-product linear algebra: adjoints, spectra, square roots."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfsgeom.spin_algebra import (
    DEFAULT_TOL,
    DefectiveMatrix,
    NotPositiveSpectrum,
    SPIN4,
    SpinOperator,
    Tolerances,
    is_spin_symmetric,
    operator_norm,
    principal_inv_sqrt,
    principal_sqrt,
    spectrum,
    spin_adjoint,
    trace_inner,
)

S4 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)


def _rand_op(rng) -> SpinOperator:
    return SpinOperator(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))


def test_signature_of_spin_product():
    e = np.eye(4, dtype=complex)
    signs = [SPIN4.product(e[:, j], e[:, j]).real for j in range(4)]
    assert signs == [1.0, 1.0, -1.0, -1.0]


def test_spin_product_is_sesquilinear(rng):
    u = rng.normal(size=4) + 1j * rng.normal(size=4)
    w = rng.normal(size=4) + 1j * rng.normal(size=4)
    lam = 0.7 - 1.3j
    assert SPIN4.product(lam * u, w) == pytest.approx(np.conj(lam) * SPIN4.product(u, w))
    assert SPIN4.product(u, lam * w) == pytest.approx(lam * SPIN4.product(u, w))
    assert SPIN4.product(u, w) == pytest.approx(np.conj(SPIN4.product(w, u)))


def test_operator_algebra(rng):
    a, b = _rand_op(rng), _rand_op(rng)
    u = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.allclose((a @ b).mat, a.mat @ b.mat)
    assert np.allclose((a + b).mat, a.mat + b.mat)
    assert np.allclose((a - b).mat, a.mat - b.mat)
    assert np.allclose((2.5 * a).mat, 2.5 * a.mat)
    assert np.allclose((-a).mat, -a.mat)
    assert np.allclose(a.apply(u), a.mat @ u)
    assert np.allclose((a @ a.inv()).mat, np.eye(4), atol=1e-12)


def test_adjoint_matches_matrix_formula(rng):
    a = _rand_op(rng)
    assert np.allclose(spin_adjoint(a).mat, S4 @ a.mat.conj().T @ S4)
    assert np.allclose(a.star.mat, spin_adjoint(a).mat)


def test_adjoint_is_compatible_with_product(rng):
    a = _rand_op(rng)
    u = rng.normal(size=4) + 1j * rng.normal(size=4)
    w = rng.normal(size=4) + 1j * rng.normal(size=4)
    lhs = SPIN4.product(a.star.apply(u), w)
    rhs = SPIN4.product(u, a.apply(w))
    assert lhs == pytest.approx(rhs, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_adjoint_is_an_antihomomorphic_involution(seed):
    rng = np.random.default_rng(seed)
    a, b = _rand_op(rng), _rand_op(rng)
    assert np.allclose(spin_adjoint(spin_adjoint(a)).mat, a.mat)
    assert np.allclose(spin_adjoint(a @ b).mat, (spin_adjoint(b) @ spin_adjoint(a)).mat)


def test_trace_inner_normalization_and_symmetry(rng):
    a, b = _rand_op(rng), _rand_op(rng)
    ident = SpinOperator(np.eye(4, dtype=complex))
    assert trace_inner(ident, ident) == pytest.approx(1.0)
    assert trace_inner(a, b) == pytest.approx(np.trace(a.mat @ b.mat) / 4.0)
    assert trace_inner(a, b) == pytest.approx(trace_inner(b, a))


def test_is_spin_symmetric(rng):
    a = _rand_op(rng)
    sym = a + a.star
    assert is_spin_symmetric(sym, DEFAULT_TOL)
    skew = a - a.star
    assert not is_spin_symmetric(skew, DEFAULT_TOL) or operator_norm(skew) < 1e-12


def test_operator_norm_is_the_largest_singular_value(rng):
    a = _rand_op(rng)
    assert operator_norm(a) == pytest.approx(np.linalg.norm(a.mat, 2))
    assert operator_norm(a.mat) == pytest.approx(np.linalg.norm(a.mat, 2))


def test_spectrum_clusters_and_definiteness():
    es = spectrum(SpinOperator(np.diag([2.0, 1.0, 3.0, 1.0]).astype(complex)))
    assert np.allclose(es.values, [1.0, 1.0, 2.0, 3.0])
    assert es.clusters == ((0, 1), (2,), (3,))
    # degenerate pair spans one +1 and one -1 direction of the inner product
    assert es.definiteness == ("indefinite", "positive", "negative")

    es2 = spectrum(SpinOperator(np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)))
    assert es2.definiteness == ("negative", "positive")


def test_spectrum_eigenvectors_reconstruct(rng):
    a = _rand_op(rng)
    es = spectrum(a)
    for idx, lam in enumerate(es.values):
        v = es.vectors[:, idx]
        assert np.linalg.norm(a.mat @ v - lam * v) < 1e-8 * operator_norm(a)


def test_spectrum_rejects_defective_matrices():
    jordan = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]],
                      dtype=complex)
    with pytest.raises(DefectiveMatrix):
        spectrum(SpinOperator(jordan))


def test_principal_sqrt_squares_back(rng):
    w = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    pos = SpinOperator(w @ w.conj().T + 0.5 * np.eye(4))
    root = principal_sqrt(pos)
    assert np.allclose((root @ root).mat, pos.mat, atol=1e-10)
    inv_root = principal_inv_sqrt(pos)
    assert np.allclose((inv_root @ inv_root @ pos).mat, np.eye(4), atol=1e-9)


def test_principal_sqrt_of_rotated_positive_spectrum(rng):
    # non-normal input: positive spectrum does not require hermiticity
    w = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    a = w @ np.diag([4.0, 9.0, 1.0, 16.0]) @ np.linalg.inv(w)
    root = principal_sqrt(SpinOperator(a))
    assert np.allclose((root @ root).mat, a, atol=1e-8 * np.linalg.norm(a, 2))


def test_principal_sqrt_rejects_nonpositive_spectrum():
    with pytest.raises(NotPositiveSpectrum):
        principal_sqrt(SpinOperator(np.diag([-1.0, 1.0, 1.0, 1.0]).astype(complex)))
    with pytest.raises(NotPositiveSpectrum):
        principal_inv_sqrt(SpinOperator(np.diag([1j, 1.0, 1.0, 1.0])))


def test_tolerances_defaults():
    tol = Tolerances()
    assert tol.real_threshold == pytest.approx(1e-9)
    assert tol.definiteness_margin == pytest.approx(1e-9)
    assert tol.rank_threshold == pytest.approx(1e-9)
