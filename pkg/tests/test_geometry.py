"""Causal classification, spin/metric connections, holonomy, desk checkers."""

import dataclasses

import numpy as np
import pytest

from cfsgeom.clifford import GAMMA, SignOperator, standard_subspace
from cfsgeom.geometry import (
    AmbiguousDirection,
    HomeMismatch,
    NotProperlyTimelike,
    NotSpacelike,
    NotSpinConnectable,
    PointPairData,
    TangentVector,
    check_causal_axioms,
    check_symmetries,
    classify_causal,
    closed_chain,
    curvatures,
    directional_sign,
    metric_connection,
    properly_timelike,
    reduce_tangent,
    spin_connection,
    splice_map,
    tangent_home_x,
    tangent_home_y,
    tangent_vectors,
)
from cfsgeom.spin_algebra import (
    DEFAULT_TOL,
    SpinOperator,
    operator_norm,
    spin_adjoint,
    trace_inner,
)

from helpers import connectable_pair, rand_sign, synth_pair

EYE = SpinOperator(np.eye(4, dtype=complex))


def _diag(*vals) -> SpinOperator:
    return SpinOperator(np.diag(np.asarray(vals, dtype=complex)))


def _span_dist(k_from, k_to) -> float:
    """Largest residual of k_from generators against the span of k_to."""
    span = np.array([g.mat.ravel() for g in k_to.generators]).T
    worst = 0.0
    for g in k_from.generators:
        _, res, *_ = np.linalg.lstsq(span, g.mat.ravel(), rcond=None)
        if len(res):
            worst = max(worst, float(np.sqrt(res[0])))
    return worst


# -- causal classification ------------------------------------------------------


def test_classify_causal_branches():
    th = 0.8
    assert classify_causal(_diag(1.0, 2.0, 3.0, 4.0)) == "timelike"
    sp = 1.7 * _diag(np.exp(1j * th), np.exp(1j * th),
                     np.exp(-1j * th), np.exp(-1j * th))
    assert classify_causal(sp) == "spacelike"
    assert classify_causal(
        _diag(1.0, 2.0, 1.3 * np.exp(1j * th), 1.3 * np.exp(-1j * th))
    ) == "lightlike"


def test_properly_timelike_cases():
    assert not properly_timelike(EYE)  # degenerate: whole space, indefinite
    assert properly_timelike(_diag(4.0, 4.0, 1.0, 1.0))
    assert not properly_timelike(_diag(-1.0, 4.0, 2.0, 3.0))
    assert not properly_timelike(
        1.7 * _diag(np.exp(0.8j), np.exp(0.8j), np.exp(-0.8j), np.exp(-0.8j)))


def test_classify_established_on_synthetic_chains(rng):
    for _ in range(10):
        pair = connectable_pair(rng)
        chain = closed_chain(pair)
        assert classify_causal(chain, DEFAULT_TOL) == "timelike"
        assert properly_timelike(chain, DEFAULT_TOL)


def test_directional_sign_matches_connection(rng):
    pair = connectable_pair(rng)
    conn = spin_connection(pair, DEFAULT_TOL)
    v = directional_sign(closed_chain(pair), DEFAULT_TOL)
    assert operator_norm(v.mat - conn.v_xy.mat) < 1e-12
    assert operator_norm(v.mat @ v.mat - np.eye(4)) < 1e-10


def test_directional_sign_guards():
    with pytest.raises(AmbiguousDirection):
        directional_sign(_diag(2.0, 2.0, 2.0, 2.0), DEFAULT_TOL)
    spacelike = 1.7 * _diag(np.exp(0.8j), np.exp(0.8j),
                            np.exp(-0.8j), np.exp(-0.8j))
    with pytest.raises(NotProperlyTimelike):
        directional_sign(spacelike, DEFAULT_TOL)


# -- spin and metric connection --------------------------------------------------


def test_connection_invariants(rng):
    for _ in range(25):
        pair = connectable_pair(rng)
        conn = spin_connection(pair, DEFAULT_TOL)

        assert np.pi / 2 < abs(conn.phi) < 3 * np.pi / 4
        assert conn.orientation in ("future", "past")
        d, d_star = conn.D, spin_adjoint(conn.D)
        assert operator_norm((d_star @ d).mat - np.eye(4)) < 1e-9

        a_xy, a_yx = closed_chain(pair), pair.P_yx @ pair.P_xy
        assert operator_norm((d @ a_yx @ d_star).mat - a_xy.mat) < 1e-8
        assert operator_norm((d @ conn.v_yx.op @ d_star).mat
                             - conn.v_xy.mat) < 1e-8
        assert _span_dist(conn.K_yx.conjugated(d), conn.K_xy) < 1e-8


def test_connection_reversal(rng):
    for _ in range(10):
        pair = connectable_pair(rng)
        conn = spin_connection(pair, DEFAULT_TOL)
        rev = PointPairData(P_xy=pair.P_yx, P_yx=pair.P_xy,
                            s_x=pair.s_y, s_y=pair.s_x)
        conn_r = spin_connection(rev, DEFAULT_TOL)
        assert operator_norm(conn_r.D.mat - conn.D.inv().mat) < 1e-9
        assert abs(conn_r.phi + conn.phi) < 1e-9
        assert conn_r.orientation != conn.orientation


def test_connection_requires_separated_sign_data(rng):
    pair = connectable_pair(rng)
    conn = spin_connection(pair, DEFAULT_TOL)
    bad = dataclasses.replace(pair, s_x=conn.v_xy)
    with pytest.raises(NotSpinConnectable) as exc:
        spin_connection(bad, DEFAULT_TOL)
    assert exc.value.reason == "not_generically_separated"


def test_tangent_vectors_and_metric_connection(rng):
    for _ in range(10):
        pair = connectable_pair(rng)
        conn = spin_connection(pair, DEFAULT_TOL)

        y_x, yhat_x = tangent_vectors(conn, pair, DEFAULT_TOL)
        assert abs(trace_inner(yhat_x.rep, yhat_x.rep).real - 1.0) < 1e-9

        home_y = tangent_home_y(conn)
        coeff = rng.normal(size=5)
        u_rep = sum((float(c) * e for c, e in zip(coeff, home_y.generators)),
                    start=SpinOperator(np.zeros((4, 4))))
        u_y = TangentVector(rep=u_rep, home=home_y)
        u_x = metric_connection(conn, u_y, DEFAULT_TOL)
        assert abs(trace_inner(u_x.rep, u_x.rep).real
                   - trace_inner(u_rep, u_rep).real) < 1e-8

        rev = PointPairData(P_xy=pair.P_yx, P_yx=pair.P_xy,
                            s_x=pair.s_y, s_y=pair.s_x)
        conn_r = spin_connection(rev, DEFAULT_TOL)
        back = metric_connection(
            conn_r, TangentVector(rep=u_x.rep, home=tangent_home_y(conn_r)),
            DEFAULT_TOL)
        assert operator_norm(back.rep.mat - u_rep.mat) < 1e-8


def test_metric_connection_rejects_foreign_home(rng):
    pair = connectable_pair(rng)
    conn = spin_connection(pair, DEFAULT_TOL)
    home_x = tangent_home_x(conn)
    with pytest.raises(HomeMismatch):
        metric_connection(
            conn, TangentVector(rep=home_x.generators[1], home=home_x),
            DEFAULT_TOL)


# -- splicing and holonomy --------------------------------------------------------


def test_splice_map_identity_on_coincident_directions(rng):
    for _ in range(10):
        s_x, v = rand_sign(rng), rand_sign(rng)
        sp = splice_map(s_x, v, v, DEFAULT_TOL)
        assert operator_norm(sp.mat - np.eye(4)) < 1e-12


def test_splice_map_is_pseudo_unitary(rng):
    s4 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
    for _ in range(10):
        sp = splice_map(rand_sign(rng), rand_sign(rng), rand_sign(rng),
                        DEFAULT_TOL)
        assert operator_norm(s4 @ sp.mat.conj().T @ s4 @ sp.mat
                             - np.eye(4)) < 1e-9


def test_triangle_curvatures(rng):
    for _ in range(8):
        s_x, s_y, s_z = rand_sign(rng), rand_sign(rng), rand_sign(rng)
        th = rng.uniform(-np.pi, np.pi, size=6)
        pxy = synth_pair(rng, th[0], th[1], s_x=s_x, s_y=s_y)
        pyz = synth_pair(rng, th[2], th[3], s_x=s_y, s_y=s_z)
        pzx = synth_pair(rng, th[4], th[5], s_x=s_z, s_y=s_x)
        out = curvatures(pxy, pyz, pzx, DEFAULT_TOL)
        assert set(out) >= {"R_spin_spliced", "R_spin_unspliced", "R_metric",
                            "compatibility_residual"}
        r_sp = out["R_spin_spliced"]
        assert operator_norm((spin_adjoint(r_sp) @ r_sp).mat
                             - np.eye(4)) < 1e-9
        assert out["compatibility_residual"] < 1e-9


def test_triangle_curvatures_validates_corner_data(rng):
    pxy = connectable_pair(rng)
    pyz = connectable_pair(rng)
    pzx = connectable_pair(rng)
    with pytest.raises(ValueError):
        curvatures(pxy, pyz, pzx, DEFAULT_TOL)


# -- desk checkers ---------------------------------------------------------------


def test_check_causal_axioms_clean_order():
    order = {(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)}

    def rel(i, j):
        if (i, j) in order:
            return "future"
        if (j, i) in order:
            return "past"
        return None

    rep = check_causal_axioms(range(4), rel)
    assert rep["irreflexivity_violations"] == 0
    assert rep["transitivity_violations"] == 0
    assert all(rep["future_transitive"].values())
    assert rep["triples_checked"] > 0


def test_check_causal_axioms_flags_cycles():
    cyc = {(0, 1), (1, 2), (2, 0)}

    def rel(i, j):
        if (i, j) in cyc:
            return "future"
        if (j, i) in cyc:
            return "past"
        return None

    rep = check_causal_axioms(range(3), rel)
    assert rep["transitivity_violations"] == 3


def test_check_causal_axioms_flags_reflexive_points():
    def rel(i, j):
        return "future"  # including i == j

    rep = check_causal_axioms(range(3), rel)
    assert rep["irreflexivity_violations"] == 3


def test_check_symmetries_generic_family(rng):
    points = list(range(3))
    signs = {p: rand_sign(rng) for p in points}
    cache = {}

    def pair_fn(p, q):
        if (p, q) not in cache:
            if (q, p) in cache:
                rev = cache[(q, p)]
                cache[(p, q)] = PointPairData(P_xy=rev.P_yx, P_yx=rev.P_xy,
                                              s_x=rev.s_y, s_y=rev.s_x)
            else:
                th = rng.uniform(-np.pi, np.pi, size=2)
                cache[(p, q)] = synth_pair(rng, th[0], th[1],
                                           s_x=signs[p], s_y=signs[q])
        return cache[(p, q)]

    audit = check_symmetries(points, pair_fn, DEFAULT_TOL)
    assert audit["parity_preserving"] in (True, False)
    assert audit["clifford_parallel"] is False  # generic random kernels
    assert set(audit["witness"]) == set(points)
    assert audit["witness_residual"] >= 0.0


def test_check_symmetries_on_translation_invariant_family():
    # pairs from a homogeneous field along a timelike line: every symmetry
    # of the audit should come out positive
    from cfsgeom.dirac_sea import Event, VacuumParams, dirac_sea_pair

    params = VacuumParams(1.0, 0.0)
    points = [Event(0.6 * k, 0.0, 0.0, 0.0) for k in range(4)]
    cache = {}

    def pair_fn(p, q):
        key = (p.t, q.t)
        if key not in cache:
            cache[key] = dirac_sea_pair(p, q, params)
        return cache[key]

    audit = check_symmetries(points, pair_fn, DEFAULT_TOL)
    assert audit["parity_preserving"] is True
    assert audit["clifford_parallel"] is True
    assert audit["chirally_symmetric"] is True
    assert audit["witness_residual"] < 1e-8


def test_reduce_tangent_by_spacelike_direction():
    k = standard_subspace()
    g3 = SpinOperator(GAMMA[3].astype(complex))
    red = reduce_tangent(k, TangentVector(rep=g3, home=k), DEFAULT_TOL)
    assert operator_norm((red.e5 @ red.e5).mat - np.eye(4)) < 1e-12
    gram = np.array([[trace_inner(a, b).real for b in red.generators]
                     for a in red.generators])
    assert np.allclose(gram, np.diag([1.0, -1.0, -1.0, -1.0]), atol=1e-12)
    for g in red.generators:
        assert operator_norm((g @ g3 + g3 @ g).mat) < 1e-12
    assert np.allclose(red.gram, np.diag([1.0, -1.0, -1.0, -1.0]), atol=1e-12)


def test_reduce_tangent_rejects_timelike_direction():
    k = standard_subspace()
    g0 = SpinOperator(GAMMA[0].astype(complex))
    with pytest.raises(NotSpacelike):
        reduce_tangent(k, TangentVector(rep=g0, home=k), DEFAULT_TOL)
