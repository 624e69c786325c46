"""Linear algebra of an indefinite inner-product space of signature (2,2).

A spin space here is :math:`\\mathbb{C}^4` together with the indefinite
product ``<<u|w>> = u^\\dagger S w`` where ``S = diag(1, 1, -1, -1)``.  The
adjoint with respect to this product is ``A^* = S A^\\dagger S``; operators
with ``A^* = A`` ("spin-symmetric") have real trace but in general complex
eigenvalues that come in conjugate pairs.

This module provides the handful of primitives everything else is built on:
the adjoint, the normalized trace pairing ``(A, B) -> tr(A B) / 4``, spectral
decompositions that keep track of the definiteness of each eigenspace with
respect to ``<<.|.>>``, and principal inverse square roots of operators with
strictly positive spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CfsGeomError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SpinSpace",
    "SPIN4",
    "SpinOperator",
    "EigenSystem",
    "DefectiveMatrix",
    "NotPositiveSpectrum",
    "spin_adjoint",
    "trace_inner",
    "operator_norm",
    "is_spin_symmetric",
    "spectrum",
    "principal_inv_sqrt",
    "principal_sqrt",
]


class DefectiveMatrix(CfsGeomError):
    """An operator is not diagonalizable within the rank tolerance."""


class NotPositiveSpectrum(CfsGeomError):
    """Principal powers need a strictly positive, real spectrum."""


@dataclass(frozen=True)
class Tolerances:
    """Numerical policy shared across the package.

    real_threshold
        an eigenvalue ``lam`` counts as real when
        ``|Im lam| <= real_threshold * (1 + |lam|)``; also used for
        eigenvalue clustering (at twice this value) and modulus comparisons.
    definiteness_margin
        eigenspace Gram eigenvalues within this margin of zero make the
        eigenspace "null"; spectra must clear this margin to count as
        strictly positive.
    rank_threshold
        relative singular-value cutoff for numerical rank decisions
        (defectiveness, generic separation, nullspace extraction).
    """

    real_threshold: float = 1e-9
    definiteness_margin: float = 1e-9
    rank_threshold: float = 1e-9


DEFAULT_TOL = Tolerances()

# Signature matrix of the spin product; fixed once for the whole package.
_S4 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
_S4.setflags(write=False)


class SpinSpace:
    """A four-dimensional spin space with signature (2,2).

    All spaces in this package share the canonical signature matrix
    ``diag(1,1,-1,-1)``; distinct instances compare equal.  The class exists
    so operators can assert they act on compatible spaces.
    """

    dim = 4

    @property
    def s_matrix(self) -> np.ndarray:
        return _S4

    def product(self, u: np.ndarray, w: np.ndarray) -> complex:
        """The indefinite product <<u|w>> = u^dagger S w."""
        return complex(np.conjugate(u) @ _S4 @ w)

    def __eq__(self, other) -> bool:
        return isinstance(other, SpinSpace)

    def __hash__(self) -> int:
        return hash("SpinSpace(2,2)")

    def __repr__(self) -> str:
        return "SpinSpace(dim=4, signature=(2,2))"


SPIN4 = SpinSpace()


@dataclass(frozen=True)
class SpinOperator:
    """A linear operator on a spin space, stored as a dense 4x4 array.

    Thin value type: arithmetic (`+`, `-`, scalar `*`, `@`) is elementwise on
    the underlying matrices, and `.star` is the spin adjoint.  The matrix is
    copied on construction and frozen.
    """

    mat: np.ndarray
    space: SpinSpace = field(default=SPIN4)

    def __post_init__(self):
        m = np.array(self.mat, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"spin operators are 4x4, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    # -- arithmetic sugar ---------------------------------------------------

    def __matmul__(self, other: "SpinOperator") -> "SpinOperator":
        return SpinOperator(self.mat @ other.mat, self.space)

    def __add__(self, other: "SpinOperator") -> "SpinOperator":
        return SpinOperator(self.mat + other.mat, self.space)

    def __sub__(self, other: "SpinOperator") -> "SpinOperator":
        return SpinOperator(self.mat - other.mat, self.space)

    def __mul__(self, c) -> "SpinOperator":
        return SpinOperator(self.mat * complex(c), self.space)

    __rmul__ = __mul__

    def __neg__(self) -> "SpinOperator":
        return SpinOperator(-self.mat, self.space)

    @property
    def star(self) -> "SpinOperator":
        """Spin adjoint S A^dagger S."""
        return SpinOperator(_S4 @ self.mat.conj().T @ _S4, self.space)

    def inv(self) -> "SpinOperator":
        return SpinOperator(np.linalg.inv(self.mat), self.space)

    def apply(self, u: np.ndarray) -> np.ndarray:
        return self.mat @ u

    def __repr__(self) -> str:
        return f"SpinOperator(norm={operator_norm(self):.4g})"


@dataclass(frozen=True)
class EigenSystem:
    """Spectral data of a 4x4 operator with eigenspace definiteness tags.

    values
        the four eigenvalues, grouped by cluster, real parts snapped when
        within tolerance of the real axis.
    vectors
        matrix whose columns are eigenvectors aligned with ``values``.
    clusters
        index tuples into ``values`` grouping numerically equal eigenvalues.
    definiteness
        one tag per cluster: "positive", "negative", "indefinite" or "null",
        describing the spin product restricted to the eigenspace.
    """

    values: np.ndarray
    vectors: np.ndarray
    clusters: tuple
    definiteness: tuple


def _as_matrix(a) -> np.ndarray:
    return a.mat if isinstance(a, SpinOperator) else np.asarray(a, dtype=complex)


def spin_adjoint(a) -> SpinOperator:
    """Adjoint with respect to the indefinite product: ``S A^dagger S``.

    Involution, and anti-multiplicative: ``(A B)^* = B^* A^*``.
    """
    m = _as_matrix(a)
    return SpinOperator(_S4 @ m.conj().T @ _S4)


def trace_inner(a, b) -> complex:
    """Normalized trace pairing ``tr(A B) / 4``.

    For spin-symmetric arguments the value is real (up to roundoff); it is
    the Minkowski-type inner product when restricted to a Clifford subspace.
    """
    return complex(np.trace(_as_matrix(a) @ _as_matrix(b))) / 4.0


def operator_norm(a) -> float:
    """Largest singular value (the C*-norm of the matrix representation)."""
    return float(np.linalg.norm(_as_matrix(a), 2))


def is_spin_symmetric(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether ``A^* = A`` holds within ``real_threshold`` (relative)."""
    m = _as_matrix(a)
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    return float(np.linalg.norm(_S4 @ m.conj().T @ _S4 - m, 2)) <= tol.real_threshold * scale


def _cluster_indices(vals: np.ndarray, ctol: float) -> list:
    """Group indices of numerically coincident eigenvalues (union-find)."""
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= ctol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    # Deterministic cluster order: by (Re, Im) of the first member.
    ordered = sorted(groups.values(), key=lambda g: (vals[g[0]].real, vals[g[0]].imag))
    return ordered


def spectrum(a, tol: Tolerances = DEFAULT_TOL) -> EigenSystem:
    """Eigen-decomposition with definiteness tags per eigenspace.

    Eigenvalues within ``2 * real_threshold * (1 + max|lam|)`` of each other
    are treated as a single cluster; eigenvalues within
    ``real_threshold * (1 + |lam|)`` of the real axis are snapped onto it.
    Each cluster's eigenspace is tagged by the inertia of the restricted spin
    product: positive / negative (definite), indefinite (mixed, nondegenerate)
    or null (some Gram eigenvalue within ``definiteness_margin`` of zero).

    Raises
    ------
    DefectiveMatrix
        if some cluster's eigenvectors do not span a space of the cluster's
        algebraic multiplicity (rank decided at ``rank_threshold``).
    """
    m = _as_matrix(a)
    vals, vecs = np.linalg.eig(m)
    scale = 1.0 + float(np.max(np.abs(vals)))
    clusters = _cluster_indices(vals, 2.0 * tol.real_threshold * scale)

    snapped = vals.copy()
    near_real = np.abs(vals.imag) <= tol.real_threshold * (1.0 + np.abs(vals))
    snapped[near_real] = vals[near_real].real

    out_vals = []
    out_vecs = []
    out_clusters = []
    tags = []
    pos = 0
    for group in clusters:
        cols = vecs[:, group]
        sv = np.linalg.svd(cols, compute_uv=False)
        rank = int(np.sum(sv > tol.rank_threshold * max(1.0, sv[0])))
        if rank < len(group):
            raise DefectiveMatrix(
                f"eigenvalue {snapped[group[0]]:.6g} has geometric multiplicity "
                f"{rank} < algebraic multiplicity {len(group)}"
            )
        # Cluster eigenvalues agree within tolerance; use their mean so a
        # snapped cluster stays exactly real.
        lam = snapped[group].mean()
        if abs(lam.imag) <= tol.real_threshold * (1.0 + abs(lam)):
            lam = complex(lam.real)
        q, _ = np.linalg.qr(cols)
        gram = q.conj().T @ _S4 @ q
        h = np.linalg.eigvalsh(gram)
        if np.any(np.abs(h) <= tol.definiteness_margin):
            tag = "null"
        elif np.all(h > 0):
            tag = "positive"
        elif np.all(h < 0):
            tag = "negative"
        else:
            tag = "indefinite"
        for k, idx in enumerate(group):
            out_vals.append(lam)
            out_vecs.append(vecs[:, idx])
        out_clusters.append(tuple(range(pos, pos + len(group))))
        pos += len(group)
        tags.append(tag)

    return EigenSystem(
        values=np.array(out_vals),
        vectors=np.column_stack(out_vecs),
        clusters=tuple(out_clusters),
        definiteness=tuple(tags),
    )


def principal_inv_sqrt(a, tol: Tolerances = DEFAULT_TOL) -> SpinOperator:
    """Principal branch of ``A^{-1/2}`` for strictly positive spectrum.

    The operator must be diagonalizable with all eigenvalues real (after
    snapping) and larger than ``definiteness_margin``.  The result commutes
    with ``A`` and satisfies ``B B A = 1`` to 1e-10; spin symmetry of ``A``
    is inherited because the functional calculus uses real weights.

    Raises
    ------
    NotPositiveSpectrum
        for non-real or non-positive eigenvalues.
    DefectiveMatrix
        propagated from :func:`spectrum`.
    """
    m = _as_matrix(a)
    es = spectrum(m, tol)
    vals = es.values
    if np.any(np.abs(vals.imag) > 0) or np.any(vals.real <= tol.definiteness_margin):
        raise NotPositiveSpectrum(f"spectrum {np.round(vals, 12)} is not strictly positive")
    v = es.vectors
    b = v @ np.diag(vals.real ** -0.5) @ np.linalg.inv(v)
    resid = np.linalg.norm(b @ b @ m - np.eye(4), 2)
    if resid > 1e-10 * max(1.0, np.linalg.norm(m, 2)):
        raise NotPositiveSpectrum(
            f"inverse square root residual {resid:.3g} exceeds 1e-10 (ill-conditioned input)"
        )
    return SpinOperator(b)


def principal_sqrt(a, tol: Tolerances = DEFAULT_TOL) -> SpinOperator:
    """Principal ``A^{1/2}``; same domain and guarantees as the inverse root."""
    m = _as_matrix(a)
    return SpinOperator(m @ principal_inv_sqrt(m, tol).mat)
