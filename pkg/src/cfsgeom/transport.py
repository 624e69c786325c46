"""Polygonal parallel transport along timelike curves, with curved-background correctors.

The flat backend subdivides a future-directed timelike curve, builds the spin
connection of every consecutive sample pair from the vacuum-sea kernels, and
composes the legs in order; the deviation of the composite from the identity
is the quantity whose decay under refinement is studied.  On a curved
background the corrections that survive the continuum limit are evaluated
directly from user-supplied curvature data in a parallel pseudo-orthonormal
frame: the per-leg tangent increment ``delta_u``, its time-ordered
exponential along the curve, and the leading scalar / van Vleck coefficients
of the short-distance expansion.  No manifold machinery is involved — the
curvature enters through callbacks or sampled arrays only.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid, solve_ivp

from .clifford import GAMMA, GAMMA5
from .dirac_sea import Event, OnLightCone, VacuumParams, chain_analysis, dirac_sea_pair
from .errors import CfsGeomError, NumericalFailure
from .geometry import NotSpinConnectable, spin_connection, splice_map
from .spin_algebra import (
    DEFAULT_TOL,
    SpinOperator,
    Tolerances,
    operator_norm,
    spin_adjoint,
)

__all__ = [
    "NotAdmissible",
    "MassShellDegenerate",
    "IntegrationFailure",
    "TimelikeCurve",
    "CurvatureField",
    "DeltaU",
    "TransportStep",
    "TransportResult",
    "compose_transport",
    "delta_u",
    "texp_generator",
    "texp_correction",
    "hadamard_leading",
    "curvature_field_from_json",
    "curvature_field_to_json",
]

#: signature factors of a pseudo-orthonormal tangent frame, e_0 timelike
SIGNATURE = (1.0, -1.0, -1.0, -1.0)

#: default frame operators: Clifford multiplication by e_0..e_3 plus the
#: pseudoscalar slot (never contracted over, carried for completeness)
_FRAME5 = np.stack([GAMMA[0], GAMMA[1], GAMMA[2], GAMMA[3], 1j * GAMMA5])
_FRAME5.setflags(write=False)

_EYE4 = np.eye(4, dtype=complex)

# Construction-time admissibility resolution of a curve; per-call resolutions
# are re-checked by compose_transport.
_CURVE_RESOLUTION = 1024

# m^2 - s/12 below this relative size counts as degenerate.
_MASS_SHELL_RTOL = 1e-12


class NotAdmissible(CfsGeomError):
    """A curve leg cannot carry a spin connection at the requested resolution."""

    def __init__(self, segment: int, message: str):
        super().__init__(f"segment {segment}: {message}")
        self.segment = segment


class MassShellDegenerate(CfsGeomError):
    """The corrector prefactor 1/(m^2 - s/12) has no usable value."""


class IntegrationFailure(NumericalFailure):
    """The transport ODE stalled or its solution left the spin-unitary group."""


# -- curves ---------------------------------------------------------------------


@dataclass(frozen=True)
class TimelikeCurve:
    """Future-directed timelike curve, parametrized by arc length on [0, length].

    ``gamma`` must map every parameter in the domain to an :class:`Event`.
    Construction samples the curve at resolution 1024 and requires successive
    samples to be timelike separated with increasing time coordinate.
    """

    gamma: Callable[[float], Event]
    length: float

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0.0):
            raise ValueError("curve length must be positive and finite")
        pts = self.samples(_CURVE_RESOLUTION)
        for n in range(1, len(pts)):
            step = pts[n] - pts[n - 1]
            if step.t <= 0.0:
                raise ValueError(
                    f"segment {n} of {_CURVE_RESOLUTION}: time coordinate does not increase"
                )
            if step.square <= 0.0:
                raise ValueError(
                    f"segment {n} of {_CURVE_RESOLUTION}: samples are not timelike separated"
                )

    def point(self, t: float) -> Event:
        """Curve point at arc-length parameter t in [0, length]."""
        slack = 1e-12 * self.length
        if t < -slack or t > self.length + slack:
            raise ValueError(f"parameter {t} outside [0, {self.length}]")
        return self.gamma(min(max(t, 0.0), self.length))

    def samples(self, n: int) -> list:
        """n+1 equally spaced points from start to end."""
        if n < 1:
            raise ValueError("need at least one segment")
        return [self.gamma(t) for t in np.linspace(0.0, self.length, n + 1)]

    @classmethod
    def straight(cls, start: Event, end: Event) -> "TimelikeCurve":
        """Straight segment between two timelike separated events, future-directed."""
        diff = end - start
        sq = diff.square
        if sq <= 0.0 or diff.t <= 0.0:
            raise ValueError("endpoints are not future-directed timelike separated")
        length = math.sqrt(sq)
        origin = start.as_array()
        direction = diff.as_array() / length
        return cls(lambda s: Event.from_array(origin + s * direction), length)

    @classmethod
    def from_parametric(cls, f: Callable[[float], Event], t_max: float,
                        resolution: int = 4096) -> "TimelikeCurve":
        """Re-parametrize an arbitrary future-directed timelike curve by arc length.

        The speed is computed by differencing ``f`` on a uniform grid and the
        cumulative arc length by trapezoid quadrature; the inverse map is
        linear interpolation on that grid.  ``resolution`` controls both.
        """
        if not (math.isfinite(t_max) and t_max > 0.0):
            raise ValueError("parameter range must be positive and finite")
        ts = np.linspace(0.0, t_max, resolution + 1)
        coords = np.array([f(t).as_array() for t in ts])
        deriv = np.gradient(coords, ts, axis=0)
        speed_sq = deriv[:, 0] ** 2 - np.sum(deriv[:, 1:] ** 2, axis=1)
        if np.any(speed_sq <= 0.0) or np.any(deriv[:, 0] <= 0.0):
            k = int(np.argmin(speed_sq))
            raise ValueError(
                f"curve is not future-directed timelike near parameter {ts[k]:.6g}"
            )
        arc = cumulative_trapezoid(np.sqrt(speed_sq), ts, initial=0.0)

        def gamma(s: float) -> Event:
            return f(float(np.interp(s, arc, ts)))

        return cls(gamma, float(arc[-1]))


# -- polygonal transport ----------------------------------------------------------


@dataclass(frozen=True)
class TransportStep:
    """One leg of a polygonal transport: sample index-1 -> index.

    ``kappa`` is the pure vacuum phase when the analytic backend ran, None
    for the generic backend; ``eps_used`` is the regularization the leg
    finally succeeded with.  ``orientation`` records the time direction of
    the step itself (sample index-1 to index) and is uniformly "future" on
    an admissible curve; the underlying leg connection, built on the ordered
    pair (later, earlier), carries the opposite label.
    """

    index: int
    D: SpinOperator
    kappa: Optional[float]
    eps_used: float
    orientation: str = "future"


@dataclass(frozen=True)
class TransportResult:
    """Composite connection along the curve, its deviation from the identity,
    and the per-leg records in composition order."""

    D_total: SpinOperator
    deviation: float
    per_step: tuple
    eps_used: float


def compose_transport(curve: TimelikeCurve, N: int, params: VacuumParams, *,
                      mode: str = "analytic", spliced: bool = False,
                      max_halvings: int = 60,
                      tol: Tolerances = DEFAULT_TOL) -> TransportResult:
    """Compose per-leg spin connections over an N-fold subdivision of the curve.

    Backends
    --------
    ``mode="analytic"``
        each leg is the closed-form vacuum connection ``e^{i kappa} 1``
        (requires ``params.eps == 0``); valid for purely temporal legs too.
    ``mode="generic"``
        each leg runs the full synchronization pipeline on the sea kernels;
        with ``params.eps > 0`` a leg that fails to be spin-connectable is
        retried with the regularization halved until it succeeds, and the
        final value is reported.  ``spliced=True`` additionally inserts the
        corner splice maps between consecutive legs.

    The legs are mutually independent (safe to compute concurrently); the
    product is reduced strictly in index order, latest leg leftmost.

    Raises
    ------
    NotAdmissible
        naming the failing segment, when a leg is not future-directed
        timelike at this resolution or never becomes spin-connectable.
    """
    if N < 1:
        raise ValueError("subdivision count must be >= 1")
    if mode not in ("analytic", "generic"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "analytic":
        if params.eps != 0.0:
            raise ValueError("the analytic backend is the eps = 0 limit")
        if spliced:
            raise ValueError("splicing applies to the generic backend only")

    points = curve.samples(N)
    steps = []
    conns = []
    pairs = []
    for n in range(1, N + 1):
        x, y = points[n], points[n - 1]  # x later, y earlier
        xi = y - x
        if xi.t >= 0.0:
            raise NotAdmissible(n, "time coordinate does not increase")
        if xi.square <= 0.0:
            raise NotAdmissible(n, "samples are not timelike separated at this resolution")
        if mode == "analytic":
            try:
                analysis = chain_analysis(xi, params, tol)
            except OnLightCone as exc:
                raise NotAdmissible(n, str(exc)) from exc
            kappa = analysis["kappa"]
            steps.append(TransportStep(
                n, SpinOperator(cmath.exp(1j * kappa) * _EYE4), kappa, 0.0,
            ))
            continue
        eps_n = params.eps
        conn = None
        last_exc = None
        for _ in range(max_halvings + 1):
            try:
                pair = dirac_sea_pair(x, y, VacuumParams(params.m, eps_n))
                conn = spin_connection(pair, tol)
                # leg pairs are ordered (later, earlier), so a future-directed
                # traversal shows the separation y - x uniformly in the past;
                # a flipped label at eps > 0 is a regularization artifact
                if conn.orientation != "past":
                    raise NotSpinConnectable(
                        "not_time_directed", "leg pair is not future-ordered"
                    )
                break
            except (NotSpinConnectable, OnLightCone) as exc:
                last_exc = exc
                if eps_n == 0.0:
                    raise NotAdmissible(n, str(exc)) from exc
                eps_n *= 0.5
            except CfsGeomError as exc:
                # Regularization-dominated legs fail through several guards
                # (complex chain spectra, unresolvable time direction,
                # synchronization breakdown); with eps > 0 all of them mean
                # "not connectable at this eps" and halving is the remedy.
                if eps_n == 0.0:
                    raise
                last_exc = exc
                eps_n *= 0.5
        if conn is None:
            raise NotAdmissible(
                n, f"not spin-connectable after {max_halvings} halvings "
                   f"(last failure: {last_exc})"
            ) from last_exc
        steps.append(TransportStep(n, conn.D, None, eps_n))
        conns.append(conn)
        pairs.append(pair)

    total = steps[0].D.mat
    for n in range(2, N + 1):
        if spliced:
            # corner at sample n-1: splice the structures adapted to the
            # previous leg onto the ones adapted to the next leg
            corner = splice_map(
                pairs[n - 2].s_x, conns[n - 1].v_yx, conns[n - 2].v_xy, tol
            )
            total = corner.mat @ total
        total = steps[n - 1].D.mat @ total

    d_total = SpinOperator(total)
    deviation = operator_norm(d_total - SpinOperator(_EYE4.copy()))
    eps_used = max((s.eps_used for s in steps), default=0.0)
    return TransportResult(d_total, float(deviation), tuple(steps), eps_used)


# -- curvature data ---------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureField:
    """Curvature data along a curve, in a parallel pseudo-orthonormal frame.

    All vector arguments and values are frame components with respect to
    ``(e_0 = curve tangent, e_1..e_3)`` and metric diag(1,-1,-1,-1); the
    frame is taken to be parallel along the curve, so components at
    different parameters are directly comparable.

    scalar
        t -> scalar curvature s(t) along the curve.
    riemann
        (t, X, Y) -> 4x4 real matrix of Z |-> R(X,Y)Z, or None when only
        sampled contractions are available.
    nabla_riemann
        (t, W, X, Y) -> 4x4 real matrix of Z |-> (nabla_W R)(X,Y)Z, or None.
    frame
        t -> (5,4,4) complex stack of the Clifford representatives of
        e_0..e_3 and the pseudoscalar slot; None selects the standard
        constant frame.
    scalar_rate
        t -> ds/dt along the curve; central differences of ``scalar`` when
        None.
    w_unit
        t -> frame components of sum_j eps_j (nabla_{e_j} R)(e_0, e_j) e_0;
        overrides the contraction of ``nabla_riemann`` (sampled fields).
    ric_row
        t -> the four values Ric(e_0, e_j); overrides tracing ``riemann``.
    """

    scalar: Callable[[float], float]
    riemann: Optional[Callable] = None
    nabla_riemann: Optional[Callable] = None
    frame: Optional[Callable] = None
    scalar_rate: Optional[Callable] = None
    w_unit: Optional[Callable] = None
    ric_row: Optional[Callable] = None

    def __post_init__(self):
        if self.riemann is not None:
            e0, e1 = np.eye(4)[0], np.eye(4)[1]
            fwd = np.asarray(self.riemann(0.0, e0, e1), dtype=float)
            rev = np.asarray(self.riemann(0.0, e1, e0), dtype=float)
            scale = max(1.0, float(np.linalg.norm(fwd)))
            if np.linalg.norm(fwd + rev) > 1e-9 * scale:
                raise ValueError("riemann callback is not antisymmetric in its vector slots")

    # frame-component helpers

    def frame_ops(self, t: float) -> np.ndarray:
        if self.frame is None:
            return _FRAME5
        ops = np.asarray(self.frame(t), dtype=complex)
        if ops.shape != (5, 4, 4):
            raise ValueError("frame callback must return a (5, 4, 4) stack")
        return ops

    def slash(self, t: float, vec) -> np.ndarray:
        """Clifford multiplication by a tangent vector in frame components."""
        ops = self.frame_ops(t)
        vec = np.asarray(vec, dtype=float)
        return np.tensordot(vec, ops[:4], axes=(0, 0))

    def w_vector(self, t: float) -> np.ndarray:
        """sum_j eps_j (nabla_{e_j} R)(e_0, e_j) e_0 in frame components."""
        if self.w_unit is not None:
            return np.asarray(self.w_unit(t), dtype=float)
        if self.nabla_riemann is None:
            raise ValueError("field supplies neither nabla_riemann nor w_unit")
        basis = np.eye(4)
        out = np.zeros(4)
        for j in range(4):
            mat = np.asarray(self.nabla_riemann(t, basis[j], basis[0], basis[j]), dtype=float)
            out += SIGNATURE[j] * (mat @ basis[0])
        return out

    def ric(self, t: float, x_vec, y_vec) -> float:
        """Ricci contraction tr(Z -> R(Z, X) Y); needs the riemann callback."""
        if self.riemann is None:
            raise ValueError("Ricci contraction of general arguments needs the riemann callback")
        x_vec = np.asarray(x_vec, dtype=float)
        y_vec = np.asarray(y_vec, dtype=float)
        basis = np.eye(4)
        return float(sum(
            (np.asarray(self.riemann(t, basis[j], x_vec), dtype=float) @ y_vec)[j]
            for j in range(4)
        ))

    def ric_tt(self, t: float) -> float:
        """Ric(e_0, e_0)."""
        if self.ric_row is not None:
            return float(np.asarray(self.ric_row(t), dtype=float)[0])
        basis = np.eye(4)
        return self.ric(t, basis[0], basis[0])

    def nabla_ric_tt(self, t: float) -> float:
        """(nabla_{e_0} Ric)(e_0, e_0); for sampled data the parameter
        derivative of ric_tt (the frame is parallel)."""
        if self.nabla_riemann is not None:
            basis = np.eye(4)
            return float(sum(
                (np.asarray(self.nabla_riemann(t, basis[0], basis[j], basis[0]),
                            dtype=float) @ basis[0])[j]
                for j in range(4)
            ))
        h = 1e-5 * max(1.0, abs(t))
        return (self.ric_tt(t + h) - self.ric_tt(t - h)) / (2.0 * h)

    def rate(self, t: float) -> float:
        """ds/dt along the curve."""
        if self.scalar_rate is not None:
            return float(self.scalar_rate(t))
        h = 1e-5 * max(1.0, abs(t))
        return (float(self.scalar(t + h)) - float(self.scalar(t - h))) / (2.0 * h)

    def bound_value(self, t: float, m: float) -> Optional[float]:
        """||R||/m^2 + ||nabla R||/m^3 over the frame arguments, None when the
        tensor callbacks are absent (sampled fields carry contractions only;
        second derivatives are never available here)."""
        if self.riemann is None:
            return None
        basis = np.eye(4)
        r_norm = max(
            np.linalg.norm(np.asarray(self.riemann(t, basis[j], basis[k]), dtype=float), 2)
            for j in range(4) for k in range(j + 1, 4)
        )
        n_norm = 0.0
        if self.nabla_riemann is not None:
            n_norm = max(
                np.linalg.norm(
                    np.asarray(self.nabla_riemann(t, basis[l], basis[j], basis[k]),
                               dtype=float), 2)
                for l in range(4) for j in range(4) for k in range(j + 1, 4)
            )
        return float(r_norm / m**2 + n_norm / m**3)

    @classmethod
    def flat(cls) -> "CurvatureField":
        """Vanishing curvature."""
        zero = np.zeros((4, 4))
        return cls(
            scalar=lambda t: 0.0,
            riemann=lambda t, x, y: zero,
            nabla_riemann=lambda t, w, x, y: zero,
            scalar_rate=lambda t: 0.0,
        )


@dataclass(frozen=True)
class DeltaU:
    """Leading tangent increment of one leg, with its Clifford actions.

    ``vector`` holds frame components; ``operator`` is Clifford
    multiplication by it and ``bilinear`` the product (Delta u) . e_0 that
    enters the leg connection ``1 + (Delta u) . e_0``.
    """

    vector: np.ndarray
    operator: SpinOperator
    bilinear: SpinOperator


def _mass_shell_prefactor(m: float, s: float) -> float:
    denom = m * m - s / 12.0
    if abs(denom) < _MASS_SHELL_RTOL * m * m:
        raise MassShellDegenerate(
            f"m^2 - s/12 = {denom:.3e} is degenerate at scale m^2 = {m * m:.3e}"
        )
    return denom


def delta_u(field: CurvatureField, t: float, delta: float,
            params: VacuumParams) -> DeltaU:
    """Leading tangent increment over a leg of arc length delta at parameter t.

    The increment is ``(1/(6 delta)) (m^2 - s/12)^{-1}
    sum_j eps_j (nabla_{e_j} R)(T, e_j) T`` with ``T = delta e_0``; by
    bilinearity of the curvature slots this is linear in delta.

    Raises
    ------
    MassShellDegenerate
        when ``|m^2 - s/12| < 1e-12 m^2``.
    """
    if delta <= 0.0:
        raise ValueError("leg length must be positive")
    denom = _mass_shell_prefactor(params.m, float(field.scalar(t)))
    vec = (delta / 6.0) / denom * field.w_vector(t)
    op = field.slash(t, vec)
    e0_op = field.frame_ops(t)[0]
    return DeltaU(vec, SpinOperator(op), SpinOperator(op @ e0_op))


def texp_generator(field: CurvatureField, params: VacuumParams) -> Callable:
    """Generator ``G(t)`` of the corrector ODE ``dD/dt = G(t) D`` as a 4x4 array.

    ``G(t) = (1/6) (m^2 - s/12)^{-1} slash(w(t)) slash(e_0)``; shared by
    :func:`texp_correction` and by reference integrators in tests/CLI.
    """
    m = params.m

    def generator(t: float) -> np.ndarray:
        denom = _mass_shell_prefactor(m, float(field.scalar(t)))
        w = field.w_vector(t)
        return (1.0 / 6.0) / denom * (field.slash(t, w) @ field.frame_ops(t)[0])

    return generator


def texp_correction(curve: TimelikeCurve, field: CurvatureField,
                    params: VacuumParams, *, rtol: float = 1e-10,
                    atol: float = 1e-12, bound_samples: int = 65) -> SpinOperator:
    """Time-ordered exponential of the curvature corrector along the curve.

    Solves ``dD/dt = G(t) D`` with ``D(0) = 1`` and generator
    ``G(t) = (1/6) (m^2 - s/12)^{-1} slash(w(t)) slash(e_0)`` where
    ``w = sum_j eps_j (nabla_{e_j} R)(e_0, e_j) e_0``.  The generator is
    spin-antisymmetric (w is orthogonal to the tangent), so the result is
    spin-unitary; this is verified to 1e-8 and enforced.

    Raises
    ------
    ValueError
        when the supplied tensor callbacks violate the curvature bound
        policy ``||R||/m^2 + ||nabla R||/m^3 < 1`` somewhere on the curve.
    MassShellDegenerate, IntegrationFailure
    """
    m = params.m
    grid = np.linspace(0.0, curve.length, bound_samples)
    for t in grid:
        _mass_shell_prefactor(m, float(field.scalar(t)))
        bound = field.bound_value(t, m)
        if bound is not None and bound >= 1.0:
            raise ValueError(
                f"curvature bound policy violated at t = {t:.6g}: {bound:.3g} >= 1"
            )

    generator = texp_generator(field, params)

    def rhs(t, y):
        return (generator(t) @ y.reshape(4, 4)).ravel()

    sol = solve_ivp(rhs, (0.0, curve.length), _EYE4.ravel().copy(),
                    method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise IntegrationFailure(f"transport ODE failed: {sol.message}")
    result = SpinOperator(sol.y[:, -1].reshape(4, 4))
    drift = operator_norm(spin_adjoint(result) @ result - SpinOperator(_EYE4.copy()))
    if drift > 1e-8:
        raise IntegrationFailure(
            f"solution left the spin-unitary group (residual {drift:.3g}); "
            "the supplied curvature data cannot be antisymmetry-consistent"
        )
    return result


def hadamard_leading(field: CurvatureField, t: float, T_vec,
                     params: VacuumParams) -> dict:
    """Leading scalar and van Vleck coefficients of the short-distance expansion.

    Returns ``{"V_scalar": m^2 - s/12 + (d_T s)/24, "vleck":
    1 + (t^2/12) Ric(T,T) - (t^3/24) (nabla_T Ric)(T,T)}``.  The scalar
    rate is known along the curve only, so ``d_T s = T^0 s'(t)``; fields
    without tensor callbacks accept tangent-aligned ``T_vec`` only.
    """
    T = np.asarray(T_vec, dtype=float)
    if T.shape != (4,):
        raise ValueError("T_vec must have four frame components")
    s = float(field.scalar(t))
    v_scalar = complex(params.m ** 2 - s / 12.0 + T[0] * field.rate(t) / 24.0)
    if field.riemann is not None:
        ric_tt = field.ric(t, T, T)
        basis = np.eye(4)
        nabla_ric_tt = float(sum(
            (np.asarray(field.nabla_riemann(t, T, basis[j], T), dtype=float) @ T)[j]
            for j in range(4)
        )) if field.nabla_riemann is not None else 0.0
    else:
        spatial = math.hypot(T[1], math.hypot(T[2], T[3]))
        if spatial > 1e-12 * max(1.0, abs(T[0])):
            raise ValueError("sampled fields evaluate tangent-aligned T_vec only")
        ric_tt = T[0] ** 2 * field.ric_tt(t)
        nabla_ric_tt = T[0] ** 3 * field.nabla_ric_tt(t)
    vleck = 1.0 + t * t / 12.0 * ric_tt - t ** 3 / 24.0 * nabla_ric_tt
    return {"V_scalar": v_scalar, "vleck": float(vleck)}


# -- sampled-field exchange -------------------------------------------------------


def curvature_field_from_json(source) -> CurvatureField:
    """Build a sampled curvature field from its JSON exchange form.

    Expects ``schema = "cfs-field/1"`` with a uniform ascending grid and the
    per-point arrays ``scalar``, ``ricci_T`` (rows Ric(e_0, e_j)) and
    ``w_T`` (rows of the contracted derivative vector); evaluation is linear
    interpolation, constant beyond the grid ends.
    """
    obj = json.loads(source) if isinstance(source, (str, bytes)) else source
    if obj.get("schema") != "cfs-field/1":
        raise ValueError(f"unsupported field schema {obj.get('schema')!r}")
    grid = np.asarray(obj["grid"], dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must hold at least two points")
    gaps = np.diff(grid)
    if np.any(gaps <= 0.0):
        raise ValueError("grid must be strictly ascending")
    if not np.allclose(gaps, gaps[0], rtol=1e-9, atol=0.0):
        raise ValueError("grid must be uniform")
    scalar = np.asarray(obj["scalar"], dtype=float)
    ricci = np.asarray(obj["ricci_T"], dtype=float)
    w_t = np.asarray(obj["w_T"], dtype=float)
    if scalar.shape != grid.shape or ricci.shape != (grid.size, 4) \
            or w_t.shape != (grid.size, 4):
        raise ValueError("array shapes do not match the grid")

    def interp_rows(rows):
        return lambda t: np.array([np.interp(t, grid, rows[:, j]) for j in range(4)])

    return CurvatureField(
        scalar=lambda t: float(np.interp(t, grid, scalar)),
        ric_row=interp_rows(ricci),
        w_unit=interp_rows(w_t),
    )


def curvature_field_to_json(field: CurvatureField, grid) -> dict:
    """Sample a field onto a uniform grid in the JSON exchange form."""
    grid = np.asarray(grid, dtype=float)
    basis = np.eye(4)

    def ric_row_at(t):
        if field.ric_row is not None:
            return np.asarray(field.ric_row(t), dtype=float)
        return np.array([field.ric(t, basis[0], basis[j]) for j in range(4)])

    return {
        "schema": "cfs-field/1",
        "grid": [float(t) for t in grid],
        "scalar": [float(field.scalar(t)) for t in grid],
        "ricci_T": [[float(v) for v in ric_row_at(t)] for t in grid],
        "w_T": [[float(v) for v in field.w_vector(t)] for t in grid],
    }
