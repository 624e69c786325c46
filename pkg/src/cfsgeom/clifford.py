"""Clifford subspaces of signature (1,4) inside the spin operators.

A *Clifford subspace* is a five-dimensional real span of spin-symmetric
operators whose pairwise anticommutators are multiples of the identity, with
induced inner product of signature (1,4).  A *sign operator* is a
spin-symmetric unitary-square involution ``v`` (``v^2 = 1``) that makes
``<<.|v.>>`` positive definite; sign operators are exactly the future
timelike unit elements of Clifford subspaces.

The two nontrivial constructions implemented here:

* :func:`synchronize` — given two generically separated sign operators,
  produce the distinguished pair of Clifford extensions together with the
  unitary ``exp(i rho)`` that maps one onto the other.  The generator ``rho``
  anticommutes with both sign operators and vanishes exactly when their
  anticommutator is already a multiple of the identity.
* :func:`identification_map` — given two Clifford subspaces sharing a sign
  operator ``v``, find ``exp(i beta v)`` conjugating one span onto the other
  with ``beta`` in the open interval (-pi/2, pi/2).  The solution set of the
  span equation is always a coset of ``(pi/2) Z``; the representative is
  fixed by requiring the induced map of spatial frames to have positive
  trace (the parity-preserving class).  If only the parity-flipped class
  solves the equation, :class:`ParityObstruction` is raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CfsGeomError, NumericalFailure
from .spin_algebra import (
    DEFAULT_TOL,
    SpinOperator,
    Tolerances,
    is_spin_symmetric,
    operator_norm,
    trace_inner,
)

__all__ = [
    "PAULI",
    "GAMMA",
    "GAMMA5",
    "STANDARD_GENERATORS",
    "standard_subspace",
    "SignOperator",
    "CliffordSubspace",
    "SyncResult",
    "DegenerateGram",
    "NotSignature11",
    "NotGenericallySeparated",
    "ParityObstruction",
    "NoSolution",
    "NotInStabilizer",
    "is_sign_operator",
    "clifford_signature",
    "extend_clifford",
    "generically_separated",
    "synchronize",
    "identification_map",
    "stabilizer_rotation",
]


class DegenerateGram(CfsGeomError):
    """Generator Gram matrix has (near-)null directions."""


class NotSignature11(CfsGeomError):
    """The input pair does not span a timelike/spacelike (1,1)-plane."""


class NotGenericallySeparated(CfsGeomError):
    """Two sign operators whose commutator has rank below 4."""


class ParityObstruction(CfsGeomError):
    """Only the parity-flipped class solves the identification equation."""


class NoSolution(CfsGeomError):
    """No rotation exp(i beta v) maps the first span onto the second."""


class NotInStabilizer(CfsGeomError):
    """The unitary does not fix the sign operator and subspace as required."""


# -- Dirac representation constants ------------------------------------------

_s1 = np.array([[0, 1], [1, 0]], dtype=complex)
_s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_s3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (_s1, _s2, _s3)

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)


def _blk(a, b, c, d):
    return np.block([[a, b], [c, d]])


GAMMA = (
    _blk(_I2, _Z2, _Z2, -_I2),           # gamma^0
    _blk(_Z2, _s1, -_s1, _Z2),           # gamma^1
    _blk(_Z2, _s2, -_s2, _Z2),           # gamma^2
    _blk(_Z2, _s3, -_s3, _Z2),           # gamma^3
)
GAMMA5 = _blk(_Z2, _I2, _I2, _Z2)

for _g in GAMMA + (GAMMA5,):
    _g.setflags(write=False)

#: generators of the standard Clifford subspace: gamma^0..gamma^3 and i gamma^5
STANDARD_GENERATORS = tuple(
    SpinOperator(g) for g in (GAMMA[0], GAMMA[1], GAMMA[2], GAMMA[3], 1j * GAMMA5)
)

_MINK14 = np.diag([1.0, -1.0, -1.0, -1.0, -1.0])


# -- types --------------------------------------------------------------------


@dataclass(frozen=True)
class SignOperator:
    """A spin-symmetric involution with positive definite <<.|v.>>."""

    op: SpinOperator

    def __post_init__(self):
        # Loose sanity net; precise admission goes through is_sign_operator.
        m = self.op.mat
        if np.linalg.norm(m @ m - np.eye(4), 2) > 1e-6:
            raise ValueError("sign operator must square to the identity")

    @property
    def mat(self) -> np.ndarray:
        return self.op.mat


@dataclass(frozen=True)
class CliffordSubspace:
    """Real span of five spin-symmetric generators with scalar anticommutators.

    generators
        ordered 5-tuple of :class:`SpinOperator`; the order and signs carry
        the frame (parity) information used by :func:`identification_map`.
    gram
        real symmetric 5x5 matrix of ``trace_inner`` values.
    frame
        optional 4x4 pseudo-unitary basis matrix ``T`` such that
        ``T^{-1} e_a T`` is the standard generator tuple; carried by the
        constructions that have one naturally.
    """

    generators: tuple
    gram: np.ndarray
    frame: np.ndarray | None = field(default=None, compare=False)

    def conjugated(self, u: SpinOperator) -> "CliffordSubspace":
        """The subspace ``u K u^{-1}`` (generator-wise), same gram."""
        ui = u.inv()
        gens = tuple(u @ e @ ui for e in self.generators)
        frame = None if self.frame is None else u.mat @ self.frame
        return CliffordSubspace(gens, self.gram.copy(), frame)


def clifford_subspace(generators, tol: Tolerances = DEFAULT_TOL) -> CliffordSubspace:
    """Validate generators and assemble the subspace with its Gram matrix."""
    gens = tuple(generators)
    if len(gens) != 5:
        raise ValueError("a Clifford subspace needs exactly 5 generators")
    gram = np.empty((5, 5))
    scale = max(operator_norm(e) for e in gens) ** 2
    for i, ei in enumerate(gens):
        if not is_spin_symmetric(ei, tol):
            raise ValueError(f"generator {i} is not spin-symmetric")
        for j, ej in enumerate(gens[: i + 1]):
            anti = ei.mat @ ej.mat + ej.mat @ ei.mat
            g = np.trace(anti).real / 8.0
            if np.linalg.norm(anti - 2.0 * g * np.eye(4), 2) > 1e-8 * max(1.0, scale):
                raise ValueError(
                    f"anticommutator of generators {i},{j} is not a multiple of 1"
                )
            gram[i, j] = gram[j, i] = g
    return CliffordSubspace(gens, gram)


def standard_subspace() -> CliffordSubspace:
    """The standard Clifford subspace in the Dirac representation."""
    return CliffordSubspace(
        STANDARD_GENERATORS, _MINK14.copy(), np.eye(4, dtype=complex)
    )


@dataclass(frozen=True)
class SyncResult:
    """Output of :func:`synchronize`.

    rho
        the spin-symmetric generator; anticommutes with both inputs.
    U
        ``exp(i rho)``, spin-unitary; ``K_vt = U K_v U^{-1}``.
    K_v
        Clifford extension of the first sign operator, synchronized to the
        second.
    K_vt
        Clifford extension of the second sign operator, synchronized to the
        first.
    """

    rho: SpinOperator
    U: SpinOperator
    K_v: CliffordSubspace
    K_vt: CliffordSubspace


# -- basic predicates ----------------------------------------------------------


def is_sign_operator(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Spin-symmetric, squares to 1, and <<.|a.>> positive definite."""
    m = a.mat if hasattr(a, "mat") else np.asarray(a, dtype=complex)
    if not is_spin_symmetric(m, tol):
        return False
    if np.linalg.norm(m @ m - np.eye(4), 2) > 1e-8:
        return False
    sa = np.diag([1.0, 1.0, -1.0, -1.0]) @ m
    sa = 0.5 * (sa + sa.conj().T)
    return bool(np.linalg.eigvalsh(sa).min() > tol.definiteness_margin)


def clifford_signature(k: CliffordSubspace, tol: Tolerances = DEFAULT_TOL) -> tuple:
    """Inertia (n_plus, n_minus) of the generator Gram matrix.

    Raises
    ------
    DegenerateGram
        when some Gram eigenvalue is within ``definiteness_margin`` of zero
        (relative to the largest magnitude).
    """
    ev = np.linalg.eigvalsh(0.5 * (k.gram + k.gram.T))
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.any(np.abs(ev) <= tol.definiteness_margin * scale):
        raise DegenerateGram(f"gram spectrum {np.round(ev, 12)} has a null direction")
    return int(np.sum(ev > 0)), int(np.sum(ev < 0))


def generically_separated(v: SignOperator, w: SignOperator,
                          tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether the commutator [v, w] has full rank 4.

    Decided on the fourth singular value exceeding ``rank_threshold``; this
    is the regularity needed for the synchronization construction.
    """
    comm = v.mat @ w.mat - w.mat @ v.mat
    sv = np.linalg.svd(comm, compute_uv=False)
    return bool(sv[3] > tol.rank_threshold)


# -- internal helpers ----------------------------------------------------------


def _vec(m: np.ndarray) -> np.ndarray:
    """Flatten a matrix into a real 32-vector (real parts then imaginary)."""
    f = np.asarray(m, dtype=complex).ravel()
    return np.concatenate([f.real, f.imag])


def _orient(col: np.ndarray) -> np.ndarray:
    """Deterministic phase: largest-modulus entry made real positive."""
    i = int(np.argmax(np.abs(col)))
    ph = col[i] / abs(col[i])
    return col / ph


def _eigenspace_of_involution(m: np.ndarray, sign: float) -> np.ndarray:
    """Basis of the (+1 or -1)-eigenspace of an involution, via projector SVD."""
    p = 0.5 * (np.eye(4) + sign * m)
    u, s, _ = np.linalg.svd(p)
    cols = u[:, s > 0.5]
    if cols.shape[1] != 2:
        raise NumericalFailure(
            f"involution eigenspace has dimension {cols.shape[1]}, expected 2"
        )
    return np.column_stack([_orient(cols[:, j]) for j in range(cols.shape[1])])


_S4 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)


def _pseudo_orthonormalize(cols: np.ndarray, sign: float) -> np.ndarray:
    """Make basis columns satisfy B^dagger S B = sign * I (Cholesky of the Gram)."""
    gram = sign * (cols.conj().T @ _S4 @ cols)
    gram = 0.5 * (gram + gram.conj().T)
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise NotSignature11(
            "restricted spin product is not definite with the required sign"
        ) from exc
    return cols @ np.linalg.inv(chol).conj().T


def _spatial_frame(k: CliffordSubspace, v: SpinOperator,
                   tol: Tolerances) -> list:
    """In-order Gram-Schmidt frame of the v-orthogonal part of the generators.

    Processing the generators in their stored order (skipping near-zero
    residuals) keeps the frame covariant under generator-wise conjugation,
    which is what lets identification_map see parity.
    """
    frame = []
    for e in k.generators:
        w = e.mat - trace_inner(e, v).real * v.mat
        for f in frame:
            w = w + trace_inner(f, w).real * f.mat  # <f,f> = -1
        nrm2 = -trace_inner(w, w).real
        if nrm2 > tol.rank_threshold:
            frame.append(SpinOperator(w * nrm2 ** -0.5))
        if len(frame) == 4:
            break
    if len(frame) != 4:
        raise ValueError("generators do not span a 4-dimensional spatial part")
    return frame


def _span_projector_complement(ops) -> np.ndarray:
    """Matrix of the projector onto the Euclidean complement of a real span."""
    basis = np.column_stack([_vec(o.mat) for o in ops])
    q, _ = np.linalg.qr(basis)
    return np.eye(32) - q @ q.T


# -- constructions -------------------------------------------------------------


def extend_clifford(u: SpinOperator, w: SpinOperator,
                    tol: Tolerances = DEFAULT_TOL) -> CliffordSubspace:
    """The unique Clifford subspace containing a (1,1)-signature plane.

    Parameters
    ----------
    u, w : SpinOperator
        Spin-symmetric operators whose squares and anticommutator are
        multiples of the identity and whose real span carries signature
        (1,1).  They need not be normalized or orthogonal.

    Returns
    -------
    CliffordSubspace
        Five generators with gram diag(1,-1,-1,-1,-1); the first generator
        is the normalized future-pointing timelike direction of the plane,
        the last the normalized spacelike one.  The ``frame`` field holds
        the pseudo-unitary change of basis to the standard representation.

    Raises
    ------
    NotSignature11
        if the plane is not spin-symmetric/scalar-anticommutator or its
        signature is not (1,1).
    """
    for name, a in (("u", u), ("w", w)):
        if not is_spin_symmetric(a, tol):
            raise NotSignature11(f"{name} is not spin-symmetric")
    pairs = {}
    for (na, a), (nb, b) in (
        (("u", u), ("u", u)), (("w", w), ("w", w)), (("u", u), ("w", w))
    ):
        anti = a.mat @ b.mat + b.mat @ a.mat
        g = np.trace(anti).real / 8.0
        if np.linalg.norm(anti - 2 * g * np.eye(4), 2) > 1e-8 * max(
            1.0, operator_norm(a) * operator_norm(b)
        ):
            raise NotSignature11(f"anticommutator of {na},{nb} is not scalar")
        pairs[(na, nb)] = g
    gram2 = np.array(
        [[pairs[("u", "u")], pairs[("u", "w")]],
         [pairs[("u", "w")], pairs[("w", "w")]]]
    )
    ev, rot = np.linalg.eigh(gram2)
    if not (ev[0] < -tol.definiteness_margin < tol.definiteness_margin < ev[1]):
        raise NotSignature11(f"plane has Gram spectrum {ev}, not signature (1,1)")
    # eigh leaves the eigenvector signs free; pin them so that nearby planes
    # get nearby presentations (a stray sdir flip negates four generators at
    # once, which no parity class can absorb).
    rot = np.column_stack([_orient(rot[:, j]) for j in range(2)]).real
    # Unit timelike and unit spacelike directions of the plane.
    tdir = (rot[0, 1] * u.mat + rot[1, 1] * w.mat) / np.sqrt(ev[1])
    sdir = (rot[0, 0] * u.mat + rot[1, 0] * w.mat) / np.sqrt(-ev[0])
    # <<.|t.>> is definite for unit timelike elements; flip to the future one.
    st = 0.5 * (_S4 @ tdir + (_S4 @ tdir).conj().T)
    if np.linalg.eigvalsh(st).min() < 0:
        tdir = -tdir

    bp = _pseudo_orthonormalize(_eigenspace_of_involution(tdir, +1.0), +1.0)
    bm = _pseudo_orthonormalize(_eigenspace_of_involution(tdir, -1.0), -1.0)
    t_mat = np.column_stack([bp, bm])
    # In this basis tdir = gamma^0 and sdir is block-off-diagonal [[0,X],[-X^+,0]]
    # with X unitary; diag(1, i X^+) rotates it onto i gamma^5.
    ti = np.linalg.inv(t_mat)
    shat = ti @ sdir @ t_mat
    x = shat[:2, 2:]
    if np.linalg.norm(x @ x.conj().T - np.eye(2), 2) > 1e-7:
        raise NumericalFailure("spacelike direction is not unitary off-diagonal")
    t_mat = t_mat @ _blk(_I2, _Z2, _Z2, 1j * x.conj().T)
    ti = np.linalg.inv(t_mat)

    gens = [SpinOperator(tdir)]
    for g in GAMMA[1:]:
        gens.append(SpinOperator(t_mat @ g @ ti))
    gens.append(SpinOperator(sdir))
    return CliffordSubspace(tuple(gens), _MINK14.copy(), t_mat)


def synchronize(v: SignOperator, w: SignOperator,
                tol: Tolerances = DEFAULT_TOL) -> SyncResult:
    """Distinguished Clifford extensions of two sign operators.

    The restriction of ``w`` to the +1 eigenspace of ``v`` (with respect to
    the spin product, which is positive definite there) has two eigenvalues
    ``cosh(alpha) <= cosh(beta)``; the generator is
    ``rho = (alpha - beta)/4`` times the pseudoscalar of the adapted basis.
    ``K_v`` is the unique Clifford extension of the plane spanned by ``v``
    and the de-synchronized partner ``U^{-1} w U``, and ``K_vt = U K_v U^{-1}``.

    When the anticommutator of the inputs is already a multiple of the
    identity, ``rho`` is exactly zero and ``U = 1``.

    Raises
    ------
    NotGenericallySeparated
        if the commutator of the inputs is rank deficient.
    """
    if not generically_separated(v, w, tol):
        raise NotGenericallySeparated("sign operators' commutator is rank deficient")

    vm, wm = v.mat, w.mat
    anti = vm @ wm + wm @ vm
    anti_scalar = np.trace(anti) / 4.0
    already_sync = (
        np.linalg.norm(anti - anti_scalar * np.eye(4), 2) < tol.real_threshold
    )

    if already_sync:
        rho_mat = np.zeros((4, 4), dtype=complex)
        u_mat = np.eye(4, dtype=complex)
    else:
        bp = _pseudo_orthonormalize(_eigenspace_of_involution(vm, +1.0), +1.0)
        wp = bp.conj().T @ _S4 @ wm @ bp
        wp = 0.5 * (wp + wp.conj().T)
        nu, rot = np.linalg.eigh(wp)
        f12 = bp @ rot
        nu = np.maximum(nu, 1.0)
        alpha, beta = np.arccosh(nu[0]), np.arccosh(nu[1])
        # Columns f3, f4 from the w-images; the sign of f3 is flipped so the
        # normal form of w matches the convention in which the generator is
        # proportional to the standard pseudoscalar of the adapted basis.
        f3 = -(wm - nu[0] * np.eye(4)) @ f12[:, 0]
        f4 = (wm - nu[1] * np.eye(4)) @ f12[:, 1]
        cols = []
        for f in (f3, f4):
            n2 = -(f.conj() @ _S4 @ f).real
            if n2 <= 0:
                raise NumericalFailure("synchronization basis lost negativity")
            cols.append(f / np.sqrt(n2))
        t_mat = np.column_stack([f12[:, 0], f12[:, 1], cols[0], cols[1]])
        ti = np.linalg.inv(t_mat)
        d = 0.25 * (alpha - beta)
        e4 = 1j * GAMMA5
        rho_mat = t_mat @ (d * e4) @ ti
        # exp(i rho) in closed form: (i rho)^ = -d gamma^5, (gamma^5)^2 = 1.
        u_mat = t_mat @ (np.cosh(d) * np.eye(4) - np.sinh(d) * GAMMA5) @ ti

    u_op = SpinOperator(u_mat)
    u_inv = SpinOperator(np.linalg.inv(u_mat))
    w_desync = u_inv @ SpinOperator(wm) @ u_op
    c = trace_inner(v.op, w_desync).real
    w_perp = w_desync.mat - c * vm
    n2 = -trace_inner(w_perp, w_perp).real
    if n2 <= 0:
        raise NumericalFailure("de-synchronized partner has no spacelike part")
    k_v = extend_clifford(v.op, SpinOperator(w_perp / np.sqrt(n2)), tol)
    k_vt = k_v.conjugated(u_op)

    rho = SpinOperator(rho_mat)
    scale = max(1.0, operator_norm(rho))
    for s_op in (vm, wm):
        if np.linalg.norm(rho_mat @ s_op + s_op @ rho_mat, 2) > 1e-8 * scale:
            raise NumericalFailure("synchronization generator fails to anticommute")
    return SyncResult(rho=rho, U=u_op, K_v=k_v, K_vt=k_vt)


def identification_map(v: SignOperator, k: CliffordSubspace, k2: CliffordSubspace,
                       tol: Tolerances = DEFAULT_TOL) -> tuple:
    """Rotation ``exp(i beta v)`` whose conjugation maps span(k) onto span(k2).

    Writes the span condition in the unknowns (cos 2 beta, sin 2 beta); the
    nullspace fixes beta modulo pi/2, i.e. two classes of solutions that are
    parity flips of each other on the spatial frames.  The class whose
    induced frame map has positive trace is selected; ties (trace within
    tolerance of zero) go to the smaller |beta|.

    Returns
    -------
    (U, beta)
        ``U = exp(i beta v)`` with ``beta`` in the open interval
        (-pi/2, pi/2).

    Raises
    ------
    NoSolution
        if no rotation of this form maps the spans onto each other.
    ParityObstruction
        if only the parity-flipped class (representatives on the interval
        boundary) solves the span condition.
    """
    vm = v.mat
    for name, kk in (("first", k), ("second", k2)):
        resid = _span_projector_complement(kk.generators) @ _vec(vm)
        if np.linalg.norm(resid) > 1e-8:
            raise ValueError(f"v does not lie in the {name} subspace")

    frame_k = _spatial_frame(k, v.op, tol)
    frame_k2 = _spatial_frame(k2, v.op, tol)
    p_perp = _span_projector_complement(list(k2.generators))

    rows = []
    for e in frame_k:
        rows.append(np.column_stack([
            p_perp @ _vec(e.mat),
            p_perp @ _vec(1j * vm @ e.mat),
        ]))
    a = np.vstack(rows)
    _, sv, vt = np.linalg.svd(a, full_matrices=False)
    if sv[1] > 1e-8 * max(1.0, sv[0]):
        raise NoSolution(
            f"span condition has no cos/sin solution (residual {sv[1]:.3g})"
        )
    c, s = vt[1]
    nrm = float(np.hypot(c, s))
    c, s = c / nrm, s / nrm

    beta_a = 0.5 * np.arctan2(s, c)          # in (-pi/4, pi/4]
    beta_b = beta_a - np.pi / 2 if beta_a > 0 else beta_a + np.pi / 2

    def frame_map(beta: float) -> np.ndarray:
        g = np.cos(beta) * np.eye(4) + 1j * np.sin(beta) * vm
        gi = np.cos(beta) * np.eye(4) - 1j * np.sin(beta) * vm
        o = np.empty((4, 4))
        for i, e in enumerate(frame_k):
            img = g @ e.mat @ gi
            for j, f in enumerate(frame_k2):
                o[j, i] = -trace_inner(f, img).real
        return o

    o_a = frame_map(beta_a)
    if np.linalg.norm(o_a.T @ o_a - np.eye(4), 2) > 1e-6:
        raise NoSolution("candidate rotation does not map the frames isometrically")
    tr = float(np.trace(o_a))
    if abs(tr) <= 1e-9:
        beta = beta_a if abs(beta_a) <= abs(beta_b) else beta_b
    else:
        beta = beta_a if tr > 0 else beta_b

    if abs(abs(beta) - np.pi / 2) <= 1e-9:
        raise ParityObstruction(
            "parity-preserving class has no representative inside (-pi/2, pi/2)"
        )
    u = SpinOperator(np.cos(beta) * np.eye(4) + 1j * np.sin(beta) * vm)
    return u, float(beta)


def stabilizer_rotation(v: SignOperator, k: CliffordSubspace, u: SpinOperator,
                        tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The SO(4) matrix induced on the spatial frame by a stabilizing unitary.

    ``u`` must be spin-unitary, commute with ``v``, and map span(k) onto
    itself; the total parity flip (frame map -1) is excluded by convention.

    Raises
    ------
    NotInStabilizer
        if any of the conditions fails at 1e-8.
    """
    um = u.mat
    ui = np.linalg.inv(um)
    if np.linalg.norm(spin_adjoint_mat(um) @ um - np.eye(4), 2) > 1e-8:
        raise NotInStabilizer("not spin-unitary")
    if np.linalg.norm(um @ v.mat @ ui - v.mat, 2) > 1e-8:
        raise NotInStabilizer("does not commute with the sign operator")
    p_perp = _span_projector_complement(list(k.generators))
    for e in k.generators:
        if np.linalg.norm(p_perp @ _vec(um @ e.mat @ ui)) > 1e-8:
            raise NotInStabilizer("conjugation does not preserve the span")

    frame = _spatial_frame(k, v.op, tol)
    o = np.empty((4, 4))
    for i, e in enumerate(frame):
        img = um @ e.mat @ ui
        for j, f in enumerate(frame):
            o[j, i] = -trace_inner(f, img).real
    if np.linalg.norm(o.T @ o - np.eye(4), 2) > 1e-8:
        raise NotInStabilizer("induced frame map is not orthogonal")
    if np.linalg.det(o) < 0:
        raise NotInStabilizer("induced frame map is orientation-reversing")
    if np.linalg.norm(o + np.eye(4), 2) <= 1e-8:
        raise NotInStabilizer("total parity flip is excluded")
    return o


def spin_adjoint_mat(m: np.ndarray) -> np.ndarray:
    """Matrix-level spin adjoint (kept here to avoid import cycles)."""
    return _S4 @ np.asarray(m, dtype=complex).conj().T @ _S4
