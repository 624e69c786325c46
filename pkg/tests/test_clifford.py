"""Clifford extension, synchronization, and identification maps."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from cfsgeom.clifford import (
    CliffordSubspace,
    DegenerateGram,
    GAMMA,
    GAMMA5,
    NotGenericallySeparated,
    NotInStabilizer,
    NotSignature11,
    PAULI,
    ParityObstruction,
    STANDARD_GENERATORS,
    SignOperator,
    clifford_signature,
    extend_clifford,
    generically_separated,
    identification_map,
    is_sign_operator,
    stabilizer_rotation,
    standard_subspace,
    synchronize,
)
from cfsgeom.spin_algebra import (
    DEFAULT_TOL,
    SpinOperator,
    is_spin_symmetric,
    operator_norm,
)

from helpers import rand_pu, rand_sign

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
EYE = np.eye(4, dtype=complex)


def _op(mat) -> SpinOperator:
    return SpinOperator(np.asarray(mat, dtype=complex))


G = [_op(g) for g in GAMMA]
V0 = SignOperator(G[0])


def test_pauli_algebra():
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    for i in range(3):
        for j in range(3):
            prod = PAULI[i] @ PAULI[j]
            expect = (i == j) * np.eye(2) + 1j * sum(
                eps[i, j, k] * PAULI[k] for k in range(3))
            assert np.allclose(prod, expect)


def test_gamma_algebra():
    for mu in range(4):
        for nu in range(4):
            anti = GAMMA[mu] @ GAMMA[nu] + GAMMA[nu] @ GAMMA[mu]
            assert np.allclose(anti, 2.0 * ETA[mu, nu] * np.eye(4))
    assert np.allclose(GAMMA5, 1j * GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3])
    assert np.allclose(GAMMA5 @ GAMMA5, np.eye(4))
    for mu in range(4):
        assert np.allclose(GAMMA5 @ GAMMA[mu] + GAMMA[mu] @ GAMMA5, 0.0)


def test_standard_subspace_structure():
    k = standard_subspace()
    assert len(k.generators) == 5
    assert np.allclose(k.gram, np.diag([1.0, -1.0, -1.0, -1.0, -1.0]))
    assert clifford_signature(k, DEFAULT_TOL) == (1, 4)
    for i, a in enumerate(k.generators):
        assert is_spin_symmetric(a, DEFAULT_TOL)
        for j, b in enumerate(k.generators):
            anti = a.mat @ b.mat + b.mat @ a.mat
            assert np.allclose(anti, 2.0 * k.gram[i, j] * np.eye(4), atol=1e-12)
    assert len(STANDARD_GENERATORS) == 5


def test_is_sign_operator(rng):
    assert is_sign_operator(G[0], DEFAULT_TOL)
    assert is_sign_operator(rand_sign(rng), DEFAULT_TOL)
    # squares to one and symmetric, but the associated form is indefinite
    assert not is_sign_operator(_op(np.eye(4)), DEFAULT_TOL)
    assert not is_sign_operator(G[1], DEFAULT_TOL)
    assert not is_sign_operator(_op(-GAMMA[0]), DEFAULT_TOL)


def test_extend_clifford_structure(rng):
    for _ in range(10):
        # base and directional presented in a common frame, so that their
        # anticommutator is scalar (here: zero)
        frame = rand_pu(rng)
        frame_inv = np.linalg.inv(frame)
        v = SignOperator(_op(frame @ GAMMA[0] @ frame_inv))
        c = rng.normal(size=3)
        w = _op(frame @ sum(ci * GAMMA[i + 1] for i, ci in enumerate(c))
                @ frame_inv)
        k = extend_clifford(v.op, w, DEFAULT_TOL)
        assert np.allclose(k.gram, np.diag([1.0, -1.0, -1.0, -1.0, -1.0]),
                           atol=1e-10)
        assert operator_norm(k.generators[0].mat - v.mat) < 1e-12
        for i, a in enumerate(k.generators):
            assert is_spin_symmetric(a, DEFAULT_TOL)
            for j, b in enumerate(k.generators):
                anti = a.mat @ b.mat + b.mat @ a.mat
                assert np.allclose(anti, 2.0 * k.gram[i, j] * np.eye(4),
                                   atol=1e-9)
        assert clifford_signature(k, DEFAULT_TOL) == (1, 4)


def test_extend_clifford_keeps_unit_spacelike_directional():
    w = _op(0.6 * GAMMA[1] + 0.8 * GAMMA[2])
    k = extend_clifford(G[0], w, DEFAULT_TOL)
    assert operator_norm(k.generators[4].mat - w.mat) < 1e-12


def test_extend_clifford_respects_the_input_plane():
    # a timelike admixture tilts the plane; the first and last generators
    # stay inside span{u, w} and carry squares +1 and -1
    w = _op(0.3 * GAMMA[0] + GAMMA[1])
    k = extend_clifford(G[0], w, DEFAULT_TOL)
    span = np.array([GAMMA[0].ravel(), GAMMA[1].ravel()]).T
    for idx, square in ((0, 1.0), (4, -1.0)):
        g = k.generators[idx]
        _, res, *_ = np.linalg.lstsq(span, g.mat.ravel(), rcond=None)
        assert float(res[0]) < 1e-16
        assert operator_norm(g.mat @ g.mat - square * np.eye(4)) < 1e-10


def test_extend_clifford_rejections():
    with pytest.raises(NotSignature11):
        extend_clifford(G[0], G[0], DEFAULT_TOL)  # degenerate plane
    with pytest.raises(NotSignature11):
        extend_clifford(G[0], _op(1j * GAMMA[1]), DEFAULT_TOL)  # skew input
    with pytest.raises(NotSignature11):
        extend_clifford(G[1], G[2], DEFAULT_TOL)  # signature (0,2) plane


def test_clifford_signature_rejects_null_directions():
    k = standard_subspace()
    gram = np.diag([1.0, -1.0, -1.0, -1.0, 0.0])
    with pytest.raises(DegenerateGram):
        clifford_signature(CliffordSubspace(k.generators, gram, k.frame),
                           DEFAULT_TOL)


def test_generically_separated(rng):
    assert not generically_separated(V0, V0, DEFAULT_TOL)
    for _ in range(5):
        assert generically_separated(rand_sign(rng), rand_sign(rng), DEFAULT_TOL)


def test_synchronize_invariants(rng):
    for _ in range(25):
        v, w = rand_sign(rng), rand_sign(rng)
        sync = synchronize(v, w, DEFAULT_TOL)
        assert is_spin_symmetric(sync.rho, DEFAULT_TOL)
        assert operator_norm(sync.rho.mat @ v.mat + v.mat @ sync.rho.mat) < 1e-8
        assert operator_norm(sync.rho.mat @ w.mat + w.mat @ sync.rho.mat) < 1e-8
        assert operator_norm(sync.U.mat - expm(1j * sync.rho.mat)) < 1e-10
        assert operator_norm(sync.K_v.generators[0].mat - v.mat) < 1e-10
        u, u_inv = sync.U.mat, sync.U.inv().mat
        for a, b in zip(sync.K_v.generators, sync.K_vt.generators):
            assert operator_norm(u @ a.mat @ u_inv - b.mat) < 1e-8
        # the second input lies inside the synchronized extension
        span = np.array([g.mat.ravel() for g in sync.K_vt.generators]).T
        _, res, *_ = np.linalg.lstsq(span, w.mat.ravel(), rcond=None)
        assert float(res[0]) < 1e-16 if len(res) else True


def test_synchronize_swap_gives_inverse(rng):
    for _ in range(10):
        v, w = rand_sign(rng), rand_sign(rng)
        u_wv = synchronize(v, w, DEFAULT_TOL).U
        u_vw = synchronize(w, v, DEFAULT_TOL).U
        assert operator_norm((u_vw @ u_wv).mat - EYE) < 1e-9
        assert operator_norm((u_wv @ u_vw).mat - EYE) < 1e-9


def test_synchronize_trivial_for_scalar_anticommutator():
    boost = expm(0.25 * (GAMMA[0] @ GAMMA[1]))
    w = SignOperator(_op(boost @ GAMMA[0] @ np.linalg.inv(boost)))
    anti = w.mat @ GAMMA[0] + GAMMA[0] @ w.mat
    assert operator_norm(anti - anti[0, 0] * np.eye(4)) < 1e-12
    sync = synchronize(V0, w, DEFAULT_TOL)
    assert operator_norm(sync.rho.mat) < 1e-10
    assert operator_norm(sync.U.mat - EYE) < 1e-10


def test_synchronize_rejects_coincident_inputs():
    with pytest.raises(NotGenericallySeparated):
        synchronize(V0, V0, DEFAULT_TOL)


def test_identification_map_between_extensions():
    k_a = extend_clifford(G[0], G[1], DEFAULT_TOL)
    s4 = np.diag([1.0, 1.0, -1.0, -1.0])
    for theta in (0.3, 1.0, -0.7):
        w = _op(np.cos(theta) * GAMMA[1] + np.sin(theta) * GAMMA[2])
        k_c = extend_clifford(G[0], w, DEFAULT_TOL)
        ident, beta = identification_map(V0, k_a, k_c, DEFAULT_TOL)
        assert abs(beta) < np.pi / 2
        # pseudo-unitary, fixes the base operator, maps subspace onto subspace
        assert operator_norm(s4 @ ident.mat.conj().T @ s4 @ ident.mat - EYE) < 1e-9
        assert operator_norm(ident.mat @ GAMMA[0] - GAMMA[0] @ ident.mat) < 1e-9
        span = np.array([g.mat.ravel() for g in k_c.generators]).T
        inv = np.linalg.inv(ident.mat)
        for g in k_a.generators:
            img = (ident.mat @ g.mat @ inv).ravel()
            _, res, *_ = np.linalg.lstsq(span, img, rcond=None)
            assert float(res[0]) < 1e-16 if len(res) else True


def test_identification_map_parity_obstruction():
    k_a = extend_clifford(G[0], G[1], DEFAULT_TOL)
    k_b = extend_clifford(G[0], _op(-GAMMA[1]), DEFAULT_TOL)
    with pytest.raises(ParityObstruction):
        identification_map(V0, k_a, k_b, DEFAULT_TOL)


def test_stabilizer_rotation_of_spatial_rotation():
    k = standard_subspace()
    theta = 1.0
    u = _op(expm(0.5 * theta * (GAMMA[1] @ GAMMA[2])))
    rot = stabilizer_rotation(V0, k, u, DEFAULT_TOL)
    assert rot.shape == (4, 4)
    assert np.allclose(rot.T @ rot, np.eye(4), atol=1e-10)
    assert np.linalg.det(rot) == pytest.approx(1.0, abs=1e-10)
    expect = np.eye(4)
    expect[0, 0] = expect[1, 1] = np.cos(theta)
    expect[0, 1], expect[1, 0] = -np.sin(theta), np.sin(theta)
    assert np.allclose(rot, expect, atol=1e-10)


def test_stabilizer_rotation_rejects_boosts():
    k = standard_subspace()
    boost = _op(expm(0.5 * (GAMMA[0] @ GAMMA[1])))
    with pytest.raises(NotInStabilizer):
        stabilizer_rotation(V0, k, boost, DEFAULT_TOL)


def test_conjugated_subspace(rng):
    k = standard_subspace()
    u = _op(expm(0.3 * (GAMMA[1] @ GAMMA[3])))
    kc = k.conjugated(u)
    assert np.allclose(kc.gram, k.gram)
    u_inv = np.linalg.inv(u.mat)
    for a, b in zip(k.generators, kc.generators):
        assert operator_norm(u.mat @ a.mat @ u_inv - b.mat) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_synchronize_property(seed):
    rng = np.random.default_rng(seed)
    v, w = rand_sign(rng), rand_sign(rng)
    sync = synchronize(v, w, DEFAULT_TOL)
    assert operator_norm(sync.rho.mat @ v.mat + v.mat @ sync.rho.mat) < 1e-7
    assert operator_norm(sync.rho.mat @ w.mat + w.mat @ sync.rho.mat) < 1e-7
    u, u_inv = sync.U.mat, sync.U.inv().mat
    for a, b in zip(sync.K_v.generators, sync.K_vt.generators):
        assert operator_norm(u @ a.mat @ u_inv - b.mat) < 1e-7
