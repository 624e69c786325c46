"""Finite families of rank-four Hermitian operators and their spin geometry.

A point of such a system is a Hermitian operator on an f-dimensional complex
Hilbert space with at most two positive and at most two negative eigenvalues.
Regular points (rank exactly four) carry a four-dimensional image with an
indefinite inner product; :func:`localize` extracts a pseudo-orthonormal
basis of that image together with the induced sign and Euclidean operators,
and :func:`kernel` represents the projected product of two points as a 4x4
spin operator.  The eigenvalues of the resulting closed chain coincide with
the nontrivial eigenvalues of the full f x f product, which is what lets
every causal question be answered inside 4x4 matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CfsGeomError, NumericalFailure
from .spin_algebra import (
    DEFAULT_TOL,
    SPIN4,
    SpinOperator,
    SpinSpace,
    Tolerances,
    spin_adjoint,
)
from .clifford import SignOperator
from .geometry import PointPairData

__all__ = [
    "AmbientOperator",
    "AmbientSystem",
    "Localization",
    "NotAdmissible",
    "NotRegular",
    "validate_point",
    "localize",
    "kernel",
    "pair_data",
    "random_system",
    "save_system",
    "load_system",
]


class NotAdmissible(CfsGeomError):
    """The operator violates the admission constraints of a system point."""


class NotRegular(CfsGeomError):
    """The point operator has rank below four."""


_S4 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class AmbientOperator:
    """A Hermitian operator on the ambient Hilbert space.

    Hermiticity is enforced at construction (1e-12 relative); the inertia
    constraint (at most two positive and two negative eigenvalues) is the
    job of :func:`validate_point`, so that diagnostics can be reported for
    inadmissible candidates.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"point operator must be square, got {m.shape}")
        if m.shape[0] < 4:
            raise ValueError("ambient dimension must be at least 4")
        scale = max(1.0, float(np.linalg.norm(m, 2)))
        if np.linalg.norm(m - m.conj().T, 2) > 1e-12 * scale:
            raise ValueError("point operator must be Hermitian")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def f(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class AmbientSystem:
    """A finite family of point operators with positive weights."""

    points: tuple
    weights: np.ndarray

    def __post_init__(self):
        pts = tuple(self.points)
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(pts) != w.size:
            raise ValueError("points and weights must have matching lengths")
        if w.size and w.min() <= 0:
            raise ValueError("weights must be positive")
        if len({p.f for p in pts}) > 1:
            raise ValueError("all points must share the ambient dimension")
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class Localization:
    """Spin data of a regular point.

    basis
        f x 4 matrix whose columns are the pseudo-orthonormal spin basis of
        the image of the point (eigenvectors scaled by 1/sqrt|nu|).
    spin
        the abstract spin space carrying the signature matrix.
    s_x
        Euclidean sign operator, diag(1,1,-1,-1) in this basis.
    E_x
        positive part of the Euclidean operator, diag(1/|nu_j|); the
        operator itself is s_x @ E_x.
    """

    basis: np.ndarray
    spin: SpinSpace
    s_x: SignOperator
    E_x: SpinOperator
    eigenvalues: np.ndarray = field(compare=False, default=None)


def validate_point(x: AmbientOperator, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Admission diagnostics of a candidate point operator.

    Returns ``{"rank": int, "inertia": (n_plus, n_minus), "regular": bool}``.

    Raises
    ------
    NotAdmissible
        naming the violated clause when there are more than two positive or
        more than two negative eigenvalues.
    """
    ev = np.linalg.eigvalsh(x.entries)
    scale = max(1.0, float(np.max(np.abs(ev))))
    pos = int(np.sum(ev > tol.rank_threshold * scale))
    neg = int(np.sum(ev < -tol.rank_threshold * scale))
    if pos > 2:
        raise NotAdmissible(f"{pos} positive eigenvalues (at most 2 allowed)")
    if neg > 2:
        raise NotAdmissible(f"{neg} negative eigenvalues (at most 2 allowed)")
    return {"rank": pos + neg, "inertia": (pos, neg), "regular": pos == 2 and neg == 2}


def _orient_column(col: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(col)))
    return col / (col[i] / abs(col[i]))


def localize(x: AmbientOperator, tol: Tolerances = DEFAULT_TOL) -> Localization:
    """Pseudo-orthonormal spin basis and induced operators of a regular point.

    The eigenvalues are sorted ascending, so the two negative ones come
    first: with the spin product ``-<u|x v>`` this makes the basis Gram
    exactly diag(1,1,-1,-1).  Eigenvectors are oriented by making their
    largest-modulus component real positive, which pins the basis (and
    everything downstream) deterministically.

    Raises
    ------
    NotRegular
        if the point does not have rank four.
    NumericalFailure
        if the Euclidean-operator identity <u,v> = <<u | s E v>> fails at
        1e-9 on the basis.
    """
    diag = validate_point(x, tol)
    if not diag["regular"]:
        raise NotRegular(f"point has rank {diag['rank']}, needs 4")
    ev, vec = np.linalg.eigh(x.entries)
    idx = [0, 1, x.f - 2, x.f - 1]          # two most negative, two largest
    nu = ev[idx]
    cols = [
        _orient_column(vec[:, j]) / np.sqrt(abs(ev[j])) for j in idx
    ]
    basis = np.column_stack(cols)

    s_x = SignOperator(SpinOperator(_S4))
    e_x = SpinOperator(np.diag(1.0 / np.abs(nu)).astype(complex))

    # <f_a, f_b> must equal <<f_a | (s E) f_b>> = s_a (S E)_{ab} = E_{ab}.
    gram = basis.conj().T @ basis
    target = e_x.mat
    resid = np.linalg.norm(gram - target, 2)
    if resid > 1e-9 * max(1.0, np.linalg.norm(gram, 2)):
        raise NumericalFailure(
            f"Euclidean operator identity fails on the spin basis ({resid:.3g})"
        )
    return Localization(basis=basis, spin=SPIN4, s_x=s_x, E_x=e_x, eigenvalues=nu)


def kernel(x: AmbientOperator, y: AmbientOperator,
           loc_x: Localization, loc_y: Localization,
           tol: Tolerances = DEFAULT_TOL) -> SpinOperator:
    """The 4x4 matrix of the projected product ``pi_x y`` between spin bases.

    ``P(x,y)_{ab} = -s_a <f^x_a | x y f^y_b>``.  Two guarantees are checked
    before returning: the adjoint symmetry ``P(x,y)^* = P(y,x)`` (1e-10) and
    the chain-spectrum identity -- the eigenvalues of ``P(x,y) P(y,x)``
    must reproduce the nontrivial eigenvalues of the f x f product ``x y``
    (1e-8 relative), which is the bridge between the ambient product and
    the 4x4 causal analysis.
    """
    s_diag = np.array([1.0, 1.0, -1.0, -1.0])
    p_xy = -(s_diag[:, None] * (loc_x.basis.conj().T @ x.entries @ y.entries
                                @ loc_y.basis))
    p_yx = -(s_diag[:, None] * (loc_y.basis.conj().T @ y.entries @ x.entries
                                @ loc_x.basis))
    scale = max(1.0, np.linalg.norm(p_xy, 2))
    sym = np.linalg.norm(spin_adjoint(SpinOperator(p_xy)).mat - p_yx, 2)
    if sym > 1e-10 * scale:
        raise NumericalFailure(f"kernel adjoint symmetry fails ({sym:.3g})")

    chain = np.linalg.eigvals(p_xy @ p_yx)
    big = np.linalg.eigvals(x.entries @ y.entries)
    big = big[np.argsort(np.abs(big))][-4:]
    ref = max(1.0, float(np.max(np.abs(chain))))
    if _multiset_residual(chain, big) > 1e-8 * ref:
        raise NumericalFailure(
            "chain spectrum does not match the nontrivial ambient spectrum"
        )
    return SpinOperator(p_xy)


def _multiset_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Greedy matching distance between two small eigenvalue multisets."""
    left = list(b)
    worst = 0.0
    for z in a:
        k = int(np.argmin([abs(z - w) for w in left]))
        worst = max(worst, abs(z - left.pop(k)))
    return worst


def pair_data(x: AmbientOperator, y: AmbientOperator,
              loc_x: Localization, loc_y: Localization,
              tol: Tolerances = DEFAULT_TOL) -> PointPairData:
    """Bundle both kernels and sign operators of an ordered pair of points."""
    p_xy = kernel(x, y, loc_x, loc_y, tol)
    return PointPairData(
        P_xy=p_xy,
        P_yx=spin_adjoint(p_xy),
        s_x=loc_x.s_x,
        s_y=loc_y.s_x,
    )


def random_system(f: int, n_points: int, seed: int) -> AmbientSystem:
    """Reproducible system of regular points on a dimension-f Hilbert space.

    Each point is ``-iota S iota^dagger`` for a complex Gaussian injection
    ``iota``: the congruence forces exactly two positive and two negative
    eigenvalues, so every generated point is regular (with probability one,
    and verified by the constructor checks downstream).
    """
    if f < 4:
        raise ValueError("ambient dimension must be at least 4")
    rng = np.random.default_rng(seed)
    points = []
    for _ in range(n_points):
        iota = (rng.standard_normal((f, 4)) + 1j * rng.standard_normal((f, 4)))
        iota /= np.sqrt(2.0 * f)
        points.append(AmbientOperator(-iota @ _S4 @ iota.conj().T))
    return AmbientSystem(points=tuple(points), weights=np.ones(n_points))


def save_system(system: AmbientSystem, path) -> None:
    """Write a system to JSON: {"f", "points" (row-major [re,im]), "weights"}."""
    f = system.points[0].f if system.points else 4
    doc = {
        "f": f,
        "points": [
            [[float(z.real), float(z.imag)] for z in p.entries.ravel()]
            for p in system.points
        ],
        "weights": [float(w) for w in system.weights],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True)


def load_system(path, tol: Tolerances = DEFAULT_TOL) -> AmbientSystem:
    """Read and fully validate a system written by :func:`save_system`.

    Raises
    ------
    NotAdmissible
        propagated from :func:`validate_point` for any offending point.
    ValueError
        for malformed shapes, non-Hermitian entries or bad weights.
    """
    with open(path) as fh:
        doc = json.load(fh)
    f = int(doc["f"])
    points = []
    for flat in doc["points"]:
        if len(flat) != f * f:
            raise ValueError(f"point data has {len(flat)} entries, expected {f * f}")
        m = np.array([complex(re, im) for re, im in flat]).reshape(f, f)
        op = AmbientOperator(m)
        validate_point(op, tol)
        points.append(op)
    return AmbientSystem(points=tuple(points), weights=np.asarray(doc["weights"]))
