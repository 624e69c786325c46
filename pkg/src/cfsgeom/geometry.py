"""Causal structure and connections built from two-point kernel data.

Everything in this module consumes :class:`PointPairData` — the kernel of the
fermionic projector between two points together with the local Euclidean sign
operators — and produces the derived geometry: the closed chain and its causal
type, the directional sign operator, the distinguished unitary spin
connection, the induced metric connection on tangent vectors, splice maps
between differently-adapted Clifford extensions, and the holonomies of
triangles (spin curvature, spliced and unspliced, and metric curvature).

Conventions: the spin connection ``D`` of an ordered pair (x, y) maps the
spin space at y to the one at x and satisfies ``D^{-1} = D^*``; its phase
``phi`` lies in ``(-3 pi/4, -pi/2) u (pi/2, 3 pi/4)`` and is positive exactly
for future-directed pairs.  Tangent vectors at x are represented inside the
Clifford extension of the Euclidean sign operator ``s_x`` synchronized to the
partner point ("home" subspace).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import polar as _polar

from .errors import CfsGeomError, NumericalFailure
from .spin_algebra import (
    DEFAULT_TOL,
    DefectiveMatrix,
    SpinOperator,
    Tolerances,
    principal_inv_sqrt,
    principal_sqrt,
    spectrum,
    spin_adjoint,
    trace_inner,
    operator_norm,
)
from .clifford import (
    CliffordSubspace,
    NotGenericallySeparated,
    SignOperator,
    SyncResult,
    generically_separated,
    identification_map,
    synchronize,
)

__all__ = [
    "PointPairData",
    "SpinConnectionResult",
    "TangentVector",
    "ReducedTangent",
    "NotProperlyTimelike",
    "AmbiguousDirection",
    "NotSpinConnectable",
    "HomeMismatch",
    "NotSpacelike",
    "closed_chain",
    "classify_causal",
    "properly_timelike",
    "directional_sign",
    "spin_connection",
    "tangent_home_x",
    "tangent_home_y",
    "metric_connection",
    "tangent_vectors",
    "splice_map",
    "curvatures",
    "check_causal_axioms",
    "check_symmetries",
    "reduce_tangent",
]


class NotProperlyTimelike(CfsGeomError):
    """The closed chain fails strict positivity or eigenspace definiteness."""


class AmbiguousDirection(CfsGeomError):
    """Some eigenspace of the chain mixes positive and negative directions."""


class NotSpinConnectable(CfsGeomError):
    """The ordered pair admits no distinguished spin connection.

    The ``reason`` attribute is one of ``"not_properly_timelike"``,
    ``"not_generically_separated"``, ``"not_time_directed"``.
    """

    def __init__(self, reason: str, message: str = ""):
        self.reason = reason
        super().__init__(message or reason)


class HomeMismatch(CfsGeomError):
    """A tangent vector was handed to a transport with the wrong home."""


class NotSpacelike(CfsGeomError):
    """Reduction requires a spacelike direction."""


@dataclass(frozen=True)
class PointPairData:
    """Kernel data of an ordered point pair (x, y).

    P_xy maps the spin space at y to the one at x (and P_yx the reverse;
    for physical kernels ``P_yx = P_xy^*``).  ``s_x`` and ``s_y`` are the
    local Euclidean sign operators.
    """

    P_xy: SpinOperator
    P_yx: SpinOperator
    s_x: SignOperator
    s_y: SignOperator


@dataclass(frozen=True)
class SpinConnectionResult:
    """Spin connection of an ordered pair with all adapted structures.

    D
        the connection, spin space at y -> spin space at x; spin-unitary,
        ``D^{-1} = D^*``.
    phi
        connection phase in (-3 pi/4, -pi/2) u (pi/2, 3 pi/4).
    v_xy, v_yx
        directional sign operators of the closed chains at x and y.
    K_xy, K_yx
        Clifford extensions of ``v_xy``/``v_yx`` synchronized to the local
        Euclidean sign operators.
    U_xy, U_yx
        synchronization unitaries: ``K_xy = U_xy K_x^{(y)} U_xy^{-1}`` where
        ``K_x^{(y)}`` is the extension of ``s_x`` adapted to y (see
        :func:`tangent_home_x`).
    orientation
        "future" or "past" (the sign of ``phi``).
    """

    D: SpinOperator
    phi: float
    v_xy: SignOperator
    v_yx: SignOperator
    K_xy: CliffordSubspace
    K_yx: CliffordSubspace
    U_xy: SpinOperator
    U_yx: SpinOperator
    orientation: str


@dataclass(frozen=True)
class TangentVector:
    """An element of a Clifford subspace marked with its home.

    The same abstract tangent vector has different operator representatives
    in different homes; transports and identification maps move between them.
    """

    rep: SpinOperator
    home: CliffordSubspace


@dataclass(frozen=True)
class ReducedTangent:
    """Signature (1,3) reduction of a tangent space by a spacelike direction.

    generators
        four spin-symmetric operators with gram diag(1,-1,-1,-1).
    e5
        the induced pseudoscalar ``-i u / sqrt(-u^2)``: spin-antisymmetric,
        squares to +1, anticommutes with the reduced generators.
    """

    generators: tuple
    gram: np.ndarray
    e5: SpinOperator


# -- closed chain and causal classification ------------------------------------


def closed_chain(pair: PointPairData) -> SpinOperator:
    """The closed chain ``A_xy = P_xy P_yx`` acting on the spin space at x."""
    return pair.P_xy @ pair.P_yx


def classify_causal(a, tol: Tolerances = DEFAULT_TOL) -> str:
    """Causal type of a closed chain: "timelike", "spacelike" or "lightlike".

    Timelike: all four eigenvalues real (after snapping).  Spacelike: none
    real and all moduli pairwise equal within tolerance.  Everything else is
    lightlike.  Only eigenvalues are used, so defective chains classify fine.
    """
    m = a.mat if hasattr(a, "mat") else np.asarray(a, dtype=complex)
    lam = np.linalg.eigvals(m)
    is_real = np.abs(lam.imag) <= tol.real_threshold * (1.0 + np.abs(lam))
    if np.all(is_real):
        return "timelike"
    mods = np.abs(lam)
    mod_tol = tol.real_threshold * (1.0 + mods.max())
    if not np.any(is_real) and mods.max() - mods.min() <= mod_tol:
        return "spacelike"
    return "lightlike"


def _chain_clusters(a, tol: Tolerances):
    """Spectrum of a chain plus per-cluster Gram eigen-decompositions."""
    es = spectrum(a, tol)
    s4 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
    data = []
    for idx in es.clusters:
        cols = es.vectors[:, list(idx)]
        q, _ = np.linalg.qr(cols)
        gram = q.conj().T @ s4 @ q
        h, hv = np.linalg.eigh(0.5 * (gram + gram.conj().T))
        data.append((es.values[idx[0]], q, h, hv))
    return es, data


def properly_timelike(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Strictly positive real spectrum with definite eigenspaces.

    Every eigenspace must be a definite subspace of the spin space, so
    chains proportional to the identity fail (their single eigenspace has
    signature (2,2)).  This is what rules out spacelike Dirac-sea pairs,
    whose chains are exactly positive multiples of the identity.
    """
    try:
        es, data = _chain_clusters(a, tol)
    except DefectiveMatrix:
        return False
    vals = es.values
    if np.any(vals.imag != 0.0) or np.any(vals.real <= tol.definiteness_margin):
        return False
    for _, _, h, _ in data:
        if np.any(np.abs(h) <= tol.definiteness_margin):
            return False
        if np.any(h > 0.0) and np.any(h < 0.0):
            return False
    return True


def directional_sign(a, tol: Tolerances = DEFAULT_TOL) -> SignOperator:
    """The unique sign operator commuting with a properly timelike chain.

    Its +1 eigenspace collects the positive definite directions of the
    chain's eigenspaces (and -1 the negative ones).

    Raises
    ------
    NotProperlyTimelike
        if the chain fails :func:`properly_timelike`.
    AmbiguousDirection
        if some eigenspace is indefinite, so the split is not unique (e.g.
        chains proportional to the identity).
    """
    try:
        es, data = _chain_clusters(a, tol)
    except DefectiveMatrix as exc:
        raise NotProperlyTimelike(str(exc)) from exc
    vals = es.values
    if np.any(vals.imag != 0.0) or np.any(vals.real <= tol.definiteness_margin):
        raise NotProperlyTimelike(f"chain spectrum {np.round(vals, 12)}")
    pos_cols = []
    neg_cols = []
    for lam, q, h, hv in data:
        if np.any(np.abs(h) <= tol.definiteness_margin):
            raise NotProperlyTimelike(f"eigenspace of {lam:.6g} is degenerate")
        npos = int(np.sum(h > 0))
        if 0 < npos < len(h):
            raise AmbiguousDirection(
                f"eigenspace of {lam:.6g} is indefinite; the sign split is not unique"
            )
        target = pos_cols if npos == len(h) else neg_cols
        target.append(q @ hv)
    w = np.column_stack(pos_cols + neg_cols)
    npos = sum(c.shape[1] for c in pos_cols)
    signs = np.diag([1.0] * npos + [-1.0] * (4 - npos))
    v = w @ signs @ np.linalg.inv(w)
    from .clifford import is_sign_operator  # local import to avoid cycle noise

    v_op = SpinOperator(v)
    if not is_sign_operator(v_op, tol):
        raise NumericalFailure("assembled directional operator fails sign checks")
    return SignOperator(v_op)


# -- the spin connection --------------------------------------------------------


_QUARTER_PI_MARGIN = 1e-9


def _block_phase(block: np.ndarray) -> float:
    """Half the argument of det of the unitary polar factor, in (-pi/2, pi/2]."""
    u, _ = _polar(block, side="left")
    theta = 0.5 * np.angle(np.linalg.det(u))
    if theta <= -np.pi / 2:
        theta += np.pi
    elif theta > np.pi / 2:
        theta -= np.pi
    return float(theta)


def spin_connection(pair: PointPairData, tol: Tolerances = DEFAULT_TOL
                    ) -> SpinConnectionResult:
    """The distinguished unitary map between the two spin spaces of a pair.

    Pipeline: closed chains -> directional sign operators -> synchronized
    Clifford extensions (adapted frames) -> block phases of the kernel in
    the adapted frames -> phase lift -> ``D = exp(i phi v_xy) A^{-1/2} P_xy``.

    Raises
    ------
    NotSpinConnectable
        with reason "not_properly_timelike" (chain spectrum/eigenspaces bad
        or direction ambiguous), "not_generically_separated" (directional
        and Euclidean sign operators commute too much at either point), or
        "not_time_directed" (phase difference within tolerance of a
        multiple of pi/2).
    """
    a_xy = closed_chain(pair)
    a_yx = pair.P_yx @ pair.P_xy
    try:
        v_xy = directional_sign(a_xy, tol)
        v_yx = directional_sign(a_yx, tol)
    except (NotProperlyTimelike, AmbiguousDirection) as exc:
        raise NotSpinConnectable("not_properly_timelike", str(exc)) from exc

    for v, s, where in ((v_xy, pair.s_x, "x"), (v_yx, pair.s_y, "y")):
        if not generically_separated(v, s, tol):
            raise NotSpinConnectable(
                "not_generically_separated",
                f"directional and Euclidean sign operators at {where} are not "
                "generically separated",
            )

    # Synchronize the directional extension with the Euclidean one at each
    # point.  K_v extends the directional sign operator, so its frame sends
    # v_xy to gamma^0 exactly -- the frames in which the kernel must be
    # block diagonal.  The synchronization map from the Euclidean extension
    # to the directional one is the inverse of the returned U.
    sync_x = synchronize(v_xy, pair.s_x, tol)
    sync_y = synchronize(v_yx, pair.s_y, tol)
    k_xy, u_xy = sync_x.K_v, sync_x.U.inv()
    k_yx, u_yx = sync_y.K_v, sync_y.U.inv()

    t_x, t_y = k_xy.frame, k_yx.frame
    p_hat = np.linalg.inv(t_x) @ pair.P_xy.mat @ t_y
    scale = np.linalg.norm(p_hat, 2)
    off = max(np.linalg.norm(p_hat[:2, 2:], 2), np.linalg.norm(p_hat[2:, :2], 2))
    if off > 1e-8 * scale:
        raise NumericalFailure(
            f"kernel is not block-diagonal in adapted frames (off-norm {off:.3g})"
        )

    theta_p = _block_phase(p_hat[:2, :2])
    theta_m = _block_phase(p_hat[2:, 2:])
    d = theta_p - theta_m
    # Time-directedness: the phase difference must stay away from pi/2 Z.
    dist = abs(d / (np.pi / 2) - round(d / (np.pi / 2))) * (np.pi / 2)
    if dist <= _QUARTER_PI_MARGIN:
        raise NotSpinConnectable(
            "not_time_directed",
            f"block phase difference {d:.6g} is within tolerance of a multiple of pi/2",
        )
    d0 = d % np.pi                       # in (0, pi), away from 0, pi/2, pi
    d_lift = d0 + np.pi if d0 < np.pi / 2 else d0 - 2.0 * np.pi
    phi = -0.5 * d_lift

    exp_phase = SpinOperator(
        np.cos(phi) * np.eye(4) + 1j * np.sin(phi) * v_xy.mat
    )
    d_op = exp_phase @ principal_inv_sqrt(a_xy, tol) @ pair.P_xy

    # The construction guarantees unitarity; verify rather than trust.
    resid = operator_norm(spin_adjoint(d_op) @ d_op - SpinOperator(np.eye(4)))
    if resid > 1e-8:
        raise NumericalFailure(f"spin connection lost unitarity (residual {resid:.3g})")

    return SpinConnectionResult(
        D=d_op,
        phi=float(phi),
        v_xy=v_xy,
        v_yx=v_yx,
        K_xy=k_xy,
        K_yx=k_yx,
        U_xy=u_xy,
        U_yx=u_yx,
        orientation="future" if phi > 0 else "past",
    )


def tangent_home_x(conn: SpinConnectionResult) -> CliffordSubspace:
    """``K_x^{(y)}``: the extension of s_x adapted to y (de-synchronized)."""
    return conn.K_xy.conjugated(conn.U_xy.inv())


def tangent_home_y(conn: SpinConnectionResult) -> CliffordSubspace:
    """``K_y^{(x)}``: the extension of s_y adapted to x (de-synchronized)."""
    return conn.K_yx.conjugated(conn.U_yx.inv())


def _span_distance(k1: CliffordSubspace, k2: CliffordSubspace) -> float:
    from .clifford import _span_projector_complement, _vec

    p = _span_projector_complement(list(k2.generators))
    return max(
        float(np.linalg.norm(p @ _vec(e.mat))) / max(1.0, operator_norm(e))
        for e in k1.generators
    )


def metric_connection(conn: SpinConnectionResult, u_y: TangentVector,
                      tol: Tolerances = DEFAULT_TOL) -> TangentVector:
    """Transport a tangent vector at y to x along the spin connection.

    The vector's home must be ``K_y^{(x)}``; the result lives in
    ``K_x^{(y)}``.  The transport is an isometry of the Clifford inner
    product, and the transport of the reversed pair is the inverse map.

    Raises
    ------
    HomeMismatch
        if ``u_y.home`` does not coincide (as a span) with ``K_y^{(x)}``.
    """
    home_y = tangent_home_y(conn)
    if _span_distance(u_y.home, home_y) > 1e-8:
        raise HomeMismatch("tangent vector home is not the pair-adapted extension at y")
    d_inv = spin_adjoint(conn.D)  # D^{-1} = D^*
    w = conn.U_yx @ u_y.rep @ conn.U_yx.inv()
    w = conn.D @ w @ d_inv
    w = conn.U_xy.inv() @ w @ conn.U_xy
    return TangentVector(rep=w, home=tangent_home_x(conn))


def tangent_vectors(conn: SpinConnectionResult, pair: PointPairData,
                    tol: Tolerances = DEFAULT_TOL) -> tuple:
    """Directional tangent vectors of the pair at x.

    Returns ``(y_x, yhat_x)``: the projection of the symmetrized transported
    kernel onto the synchronized extension and the unit directional vector,
    both represented in ``K_x^{(y)}``.  They are proportional with factor
    ``sin(phi) tr(A^{1/2}) / 4``, which is verified to 1e-8 relative.
    """
    l_op = -1j * (conn.D @ pair.P_yx)
    m_op = 0.5 * (l_op + spin_adjoint(l_op))
    gens = conn.K_xy.generators
    rhs = np.array([trace_inner(e, m_op).real for e in gens])
    coeff = np.linalg.solve(conn.K_xy.gram, rhs)
    proj = sum((float(c) * e for c, e in zip(coeff, gens)),
               start=SpinOperator(np.zeros((4, 4))))
    u_inv = conn.U_xy.inv()
    y_rep = u_inv @ proj @ conn.U_xy
    yhat_rep = u_inv @ conn.v_xy.op @ conn.U_xy
    home = tangent_home_x(conn)

    a_half = principal_sqrt(closed_chain(pair), tol)
    factor = 0.25 * np.sin(conn.phi) * np.trace(a_half.mat).real
    resid = operator_norm(y_rep - factor * yhat_rep)
    if resid > 1e-8 * max(1.0, abs(factor)):
        raise NumericalFailure(
            f"directional tangent vector violates the proportionality law "
            f"(residual {resid:.3g})"
        )
    return TangentVector(y_rep, home), TangentVector(yhat_rep, home)


# -- splice maps and curvature ---------------------------------------------------


def splice_map(s_x: SignOperator, v1: SignOperator, v2: SignOperator,
               tol: Tolerances = DEFAULT_TOL) -> SpinOperator:
    """Unitary splicing the v2-adapted structures at x onto the v1-adapted ones.

    ``U = U_1 V U_2^{-1}`` where ``U_i`` synchronizes ``s_x`` with ``v_i``
    and ``V`` identifies the two adapted extensions of ``s_x``.  For
    ``v1 = v2`` this is exactly the identity.

    The extensions are presented exactly as the tangent homes of
    :func:`spin_connection` (synchronize the directional operator first,
    then conjugate back): the identification's parity selection reads the
    generator tuple, so both routes through a corner must see one and the
    same presentation.
    """
    gap = operator_norm(v1.op - v2.op)
    if gap <= 1e-8 * max(1.0, operator_norm(v1.op)):
        # Coincident directions: self-identification is the identity by
        # definition, and the frame machinery below is unstable there (the
        # two extensions sit in degenerate eigenspaces whose computed bases
        # need not track each other).
        return SpinOperator(np.eye(4, dtype=complex))
    sync1 = synchronize(v1, s_x, tol)
    sync2 = synchronize(v2, s_x, tol)
    ident, _beta = identification_map(s_x, sync2.K_vt, sync1.K_vt, tol)
    return sync1.U.inv() @ ident @ sync2.U


def _identify(s: SignOperator, u: TangentVector, target: CliffordSubspace,
              tol: Tolerances) -> TangentVector:
    """Move a tangent vector between two extensions of the same sign operator."""
    ident, _ = identification_map(s, u.home, target, tol)
    return TangentVector(ident @ u.rep @ ident.inv(), target)


def curvatures(pair_xy: PointPairData, pair_yz: PointPairData,
               pair_zx: PointPairData, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Holonomies of the triangle (x, y, z).

    Returns a dict with keys:

    ``R_spin_unspliced``
        ``D_xy D_yz D_zx`` on the spin space at x.
    ``R_spin_spliced``
        the same product with splice maps inserted at each corner.
    ``R_metric``
        callable mapping tangent vectors at x (home ``K_x^{(z)}``) around
        the triangle via the three metric connections and corner
        identification maps.
    ``compatibility_residual``
        the largest deviation between ``R_metric`` applied to the home
        generators and the conjugation by the spliced spin holonomy
        (synchronized at x); the two routes agree for exact data.

    The three pairs must share their corner data (``s`` operators match up).
    """
    for a, b, name in (
        (pair_xy.s_x, pair_zx.s_y, "x"),
        (pair_yz.s_x, pair_xy.s_y, "y"),
        (pair_zx.s_x, pair_yz.s_y, "z"),
    ):
        if operator_norm(a.op - b.op) > 1e-10:
            raise ValueError(f"corner {name} has inconsistent Euclidean sign data")

    conn_xy = spin_connection(pair_xy, tol)
    conn_yz = spin_connection(pair_yz, tol)
    conn_zx = spin_connection(pair_zx, tol)

    r_unspliced = conn_xy.D @ conn_yz.D @ conn_zx.D

    s_x, s_y, s_z = pair_xy.s_x, pair_yz.s_x, pair_zx.s_x
    # v_xz is the directional operator at x of the (x,z) chain = reversed (z,x).
    v_xz, v_xy = conn_zx.v_yx, conn_xy.v_xy
    v_yx, v_yz = conn_xy.v_yx, conn_yz.v_xy
    v_zy, v_zx = conn_yz.v_yx, conn_zx.v_xy

    sp_x = splice_map(s_x, v_xz, v_xy, tol)
    sp_y = splice_map(s_y, v_yx, v_yz, tol)
    sp_z = splice_map(s_z, v_zy, v_zx, tol)
    r_spliced = sp_x @ conn_xy.D @ sp_y @ conn_yz.D @ sp_z @ conn_zx.D

    home_x_z = tangent_home_y(conn_zx)   # K_x^{(z)}: x is the y-role of (z,x)
    home_x_y = tangent_home_x(conn_xy)
    home_y_x = tangent_home_y(conn_xy)
    home_y_z = tangent_home_x(conn_yz)
    home_z_y = tangent_home_y(conn_yz)
    home_z_x = tangent_home_x(conn_zx)

    def r_metric(u: TangentVector) -> TangentVector:
        if _span_distance(u.home, home_x_z) > 1e-8:
            raise HomeMismatch("metric holonomy expects vectors with home K_x^(z)")
        w = TangentVector(u.rep, home_x_z)
        w = metric_connection(conn_zx, w, tol)            # at z, home K_z^(x)
        w = _identify(s_z, w, home_z_y, tol)              # home K_z^(y)
        w = metric_connection(conn_yz, w, tol)            # at y, home K_y^(z)
        w = _identify(s_y, w, home_y_x, tol)              # home K_y^(x)
        w = metric_connection(conn_xy, w, tol)            # at x, home K_x^(y)
        return _identify(s_x, w, home_x_z, tol)           # back to K_x^(z)

    # Independent route: conjugation by the spliced holonomy, synchronized at x.
    u_xz = conn_zx.U_yx
    curly = u_xz.inv() @ r_spliced @ u_xz
    curly_inv = spin_adjoint(curly)
    resid = 0.0
    for e in home_x_z.generators:
        via_transport = r_metric(TangentVector(e, home_x_z)).rep
        via_conjugation = curly @ e @ curly_inv
        resid = max(resid, operator_norm(via_transport - via_conjugation))
    if resid > 1e-8:
        raise NumericalFailure(
            f"metric holonomy disagrees with spliced conjugation (residual {resid:.3g})"
        )

    return {
        "R_spin_unspliced": r_unspliced,
        "R_spin_spliced": r_spliced,
        "R_metric": r_metric,
        "compatibility_residual": resid,
    }


# -- desk checkers ---------------------------------------------------------------


def check_causal_axioms(points, relation: Callable) -> dict:
    """Causal-set style audit of a future relation on a finite point set.

    ``relation(i, j)`` returns "future" if j lies in the open future of i,
    "past" for the reverse, and None when the pair is not related (not
    spin-connectable or degenerate).  Reports irreflexivity violations,
    transitivity violations among fully related triples, and a per-point
    future-transitivity verdict (every pair of future neighbours of a point
    that is related at all is related consistently with some ordering).
    """
    points = list(points)
    irreflexive = sum(1 for p in points if relation(p, p) is not None)
    future = {p: {q for q in points if q is not p and relation(p, q) == "future"}
              for p in points}
    transitivity = 0
    checked = 0
    for p in points:
        for q in future[p]:
            for r in future[q]:
                if r is p or r is q:
                    continue
                if relation(p, r) is None:
                    continue
                checked += 1
                if r not in future[p]:
                    transitivity += 1
    future_transitive = {}
    for p in points:
        ok = True
        nb = sorted(future[p], key=points.index)
        for i, q in enumerate(nb):
            for r in nb[i + 1:]:
                rel = relation(q, r)
                if rel is None:
                    continue
                if rel == "future" and r not in future[q]:
                    ok = False
                if rel == "past" and q not in future[r]:
                    ok = False
        future_transitive[p] = ok
    return {
        "irreflexivity_violations": irreflexive,
        "transitivity_violations": transitivity,
        "triples_checked": checked,
        "future_transitive": future_transitive,
    }


def check_symmetries(points, pair_fn: Callable, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Audit parity, Clifford parallelism and chiral symmetry on a point set.

    ``pair_fn(p, q)`` returns the :class:`PointPairData` of the ordered pair
    or None.  Pairs whose spin connection does not exist are skipped.

    The chiral witness is a sampled least-squares surrogate: one vector per
    point (coefficients in the home adapted to its first connectable
    neighbour), subject to orthogonality against every directional vector
    and parallelity along every connection, solved homogeneously; accepted
    when the smallest singular value is below 1e-6 and the witness is
    spacelike.
    """
    points = list(points)
    conns = {}
    pairs = {}
    for p in points:
        for q in points:
            if p is q:
                continue
            data = pair_fn(p, q)
            if data is None:
                continue
            try:
                conns[(p, q)] = spin_connection(data, tol)
                pairs[(p, q)] = data
            except NotSpinConnectable:
                continue

    neighbours = {p: [q for q in points if (p, q) in conns] for p in points}
    active = [p for p in points if neighbours[p]]

    parity = True
    homes = {}
    for p in active:
        hs = [tangent_home_x(conns[(p, q)]) for q in neighbours[p]]
        homes[p] = hs[0]
        for h in hs[1:]:
            try:
                identification_map(pairs[(p, neighbours[p][0])].s_x, h, hs[0], tol)
            except CfsGeomError:
                parity = False

    parallel = True
    for p in active:
        s_p = pairs[(p, neighbours[p][0])].s_x
        for i, q in enumerate(neighbours[p]):
            for r in neighbours[p][i + 1:]:
                sp = splice_map(s_p, conns[(p, q)].v_xy, conns[(p, r)].v_xy, tol)
                if operator_norm(sp - SpinOperator(np.eye(4))) > 1e-8:
                    parallel = False

    # -- chiral witness ----------------------------------------------------
    index = {p: i for i, p in enumerate(active)}
    n = len(active)
    rows = []
    if n:
        for p in active:
            s_p = pairs[(p, neighbours[p][0])].s_x
            gens_p = homes[p].generators
            gram_p = homes[p].gram
            for q in neighbours[p]:
                conn = conns[(p, q)]
                _, yhat = tangent_vectors(conn, pairs[(p, q)], tol)
                yhat_home = _identify(s_p, yhat, homes[p], tol)
                row = np.zeros(5 * n)
                for a, e in enumerate(gens_p):
                    row[5 * index[p] + a] = trace_inner(e, yhat_home.rep).real
                rows.append(row)
                if q not in index:
                    continue
                # parallelity u_p = M u_q: transport q's home basis to p's home
                s_q = pairs[(q, neighbours[q][0])].s_x
                m = np.zeros((5, 5))
                for b, f in enumerate(homes[q].generators):
                    w = _identify(s_q, TangentVector(f, homes[q]),
                                  tangent_home_y(conn), tol)
                    w = metric_connection(conn, w, tol)
                    w = _identify(s_p, w, homes[p], tol)
                    m[:, b] = np.linalg.solve(
                        gram_p,
                        [trace_inner(e, w.rep).real for e in gens_p],
                    )
                block = np.zeros((5, 5 * n))
                for a in range(5):
                    block[a, 5 * index[p] + a] = 1.0
                    block[a, 5 * index[q]: 5 * index[q] + 5] = -m[a]
                rows.extend(block)
    chiral = False
    witness = None
    residual = float("inf")
    if rows:
        a_mat = np.vstack(rows)
        _, sv, vt = np.linalg.svd(a_mat, full_matrices=False)
        residual = float(sv[-1])
        if residual < 1e-6:
            coeffs = vt[-1]
            norms = []
            cand = {}
            for p in active:
                c = coeffs[5 * index[p]: 5 * index[p] + 5]
                op = sum((float(ci) * e for ci, e in zip(c, homes[p].generators)),
                         start=SpinOperator(np.zeros((4, 4))))
                cand[p] = op
                norms.append(trace_inner(op, op).real)
            mean = np.mean(norms)
            if mean < 0:
                scale = 1.0 / np.sqrt(-mean)
                witness = {
                    p: TangentVector(scale * cand[p], homes[p]) for p in active
                }
                chiral = True
    return {
        "parity_preserving": parity,
        "clifford_parallel": parallel,
        "chirally_symmetric": chiral,
        "witness": witness,
        "witness_residual": residual,
    }


def reduce_tangent(k: CliffordSubspace, u: TangentVector,
                   tol: Tolerances = DEFAULT_TOL) -> ReducedTangent:
    """Reduce a 5-dim Clifford subspace by a spacelike direction.

    Returns the signature (1,3) orthogonal complement of ``u`` inside
    ``span(k)`` together with the pseudoscalar ``e5 = -i u / sqrt(-u^2)``.

    Raises
    ------
    NotSpacelike
        if ``<u, u> >= -definiteness_margin``.
    """
    if _span_distance(u.home, k) > 1e-8:
        raise HomeMismatch("tangent vector does not live in the given subspace")
    usq = trace_inner(u.rep, u.rep).real
    if usq >= -tol.definiteness_margin:
        raise NotSpacelike(f"<u,u> = {usq:.6g} is not negative")
    unit = u.rep * ((-usq) ** -0.5)
    e5 = SpinOperator(-1j * unit.mat)

    frame = []
    signs = []
    for e in k.generators:
        w = e.mat + trace_inner(e, unit).real * unit.mat  # <unit,unit> = -1
        for f, sgn in zip(frame, signs):
            w = w - sgn * trace_inner(f, w).real * f.mat
        n2 = trace_inner(w, w).real
        if abs(n2) > tol.rank_threshold:
            sgn = 1.0 if n2 > 0 else -1.0
            frame.append(SpinOperator(w / np.sqrt(abs(n2))))
            signs.append(sgn)
        if len(frame) == 4:
            break
    if len(frame) != 4 or sorted(signs) != [-1.0, -1.0, -1.0, 1.0]:
        raise NotSpacelike("reduced complement does not have signature (1,3)")
    order = np.argsort(signs)[::-1]
    gens = tuple(frame[i] for i in order)
    return ReducedTangent(
        generators=gens,
        gram=np.diag([1.0, -1.0, -1.0, -1.0]),
        e5=e5,
    )
