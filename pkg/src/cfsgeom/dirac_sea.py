"""Closed-form Dirac-sea vacuum kernels and their chain analysis.

In the distinguished eigenvector bases of a regularized sea of mass ``m``,
both local sign operators equal ``gamma^0`` and the two-point kernel depends
on the separation four-vector alone.  Off the light cone it collapses to two
complex coefficients multiplying the slashed separation and the identity;
everything geometric (causal class, directional sign operators, connection
phases, curvature-free holonomy) then has a closed form.  This module
evaluates those coefficients with and without regularization, the induced
closed-chain data, the analytic connection phase, and the eigenvalue scales
of the local correlation operators.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._bessel import OutOfDomain, bessel_J0J1Y0Y1, bessel_K0K1
from .clifford import GAMMA, SignOperator
from .errors import CfsGeomError, NumericalFailure
from .geometry import NotProperlyTimelike, PointPairData
from .spin_algebra import DEFAULT_TOL, SpinOperator, Tolerances, spin_adjoint

__all__ = [
    "Event",
    "VacuumParams",
    "KernelCoeffs",
    "OnLightCone",
    "QuadratureFailure",
    "slash",
    "kernel",
    "kernel_reg",
    "chain_analysis",
    "nu_eigenvalues",
    "dirac_sea_pair",
    "analytic_connection",
    "lorentz_boost",
    "boost_event",
]

# Relative width of the excluded neighborhood of the light cone: the
# unregularized coefficients blow up like 1/xi^4 there, so no tolerance
# rescue is attempted.
LIGHT_CONE_MARGIN = 1e-9


class OnLightCone(CfsGeomError):
    """Separation too close to the light cone for the unregularized kernel."""


class QuadratureFailure(NumericalFailure):
    """Adaptive quadrature stalled above the requested error estimate."""


@dataclass(frozen=True)
class Event(object):
    """A point of Minkowski space, or a separation vector between two points.

    Metric convention: ``square = t^2 - x^2 - y^2 - z^2``.  Differences of
    events are again events, so ``y - x`` is the separation vector fed to the
    kernel functions.
    """

    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValueError(f"event coordinate {name} must be finite")
            object.__setattr__(self, name, val)

    def __sub__(self, other: "Event") -> "Event":
        return Event(self.t - other.t, self.x - other.x,
                     self.y - other.y, self.z - other.z)

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def r(self) -> float:
        """Euclidean length of the spatial part."""
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @property
    def square(self) -> float:
        """Minkowski square t^2 - |spatial|^2."""
        return self.t * self.t - self.x * self.x - self.y * self.y - self.z * self.z

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z])

    @classmethod
    def from_array(cls, arr) -> "Event":
        t, x, y, z = np.asarray(arr, dtype=float)
        return cls(t, x, y, z)


@dataclass(frozen=True)
class VacuumParams:
    """Mass and regularization length of a Dirac-sea configuration."""

    m: float
    eps: float = 0.0

    def __post_init__(self):
        if not (self.m > 0.0):
            raise ValueError("mass must be positive")
        if self.eps < 0.0:
            raise ValueError("regularization length must be nonnegative")


@dataclass(frozen=True)
class KernelCoeffs:
    """Coefficients of a vacuum kernel.

    The kernel at separation xi is ``alpha * (slash(xi) - i eps gamma^0)
    + beta * 1``; the extra ``gamma^0`` term is absent when ``eps == 0``.
    """

    alpha: complex
    beta: complex
    eps: float = 0.0

    def matrix(self, xi: Event) -> np.ndarray:
        p = self.alpha * slash(xi) + self.beta * np.eye(4)
        if self.eps:
            p = p - 1j * self.eps * self.alpha * GAMMA[0]
        return p

    def operator(self, xi: Event) -> SpinOperator:
        return SpinOperator(self.matrix(xi))


def slash(xi: Event) -> np.ndarray:
    """Index-lowered contraction xi^0 gamma^0 - vec(xi).vec(gamma)."""
    return (xi.t * GAMMA[0] - xi.x * GAMMA[1]
            - xi.y * GAMMA[2] - xi.z * GAMMA[3])


def _spatial_slash(xi: Event) -> np.ndarray:
    return xi.x * GAMMA[1] + xi.y * GAMMA[2] + xi.z * GAMMA[3]


def _square_off_cone(xi: Event) -> float:
    scale = xi.t * xi.t + xi.x * xi.x + xi.y * xi.y + xi.z * xi.z
    sq = xi.square
    if scale == 0.0 or abs(sq) < LIGHT_CONE_MARGIN * scale:
        raise OnLightCone(
            f"separation with square {sq:.3e} is within {LIGHT_CONE_MARGIN:g} "
            "of the light cone (relative to the Euclidean norm)"
        )
    return sq


def kernel(xi: Event, params: VacuumParams) -> KernelCoeffs:
    """Unregularized coefficients: P = alpha slash(xi) + beta.

    Timelike branch: oscillatory Bessel pair with the sign of ``xi.t``
    entering the imaginary part.  Spacelike branch: decaying pair, beta real
    and alpha purely imaginary.  alpha is the closed-form derivative
    ``-(2i/m) d beta / d(xi^2)`` in both branches.

    Raises
    ------
    OnLightCone
        when ``|xi^2|`` is below ``LIGHT_CONE_MARGIN`` times the Euclidean
        norm squared of xi.
    """
    if params.eps != 0.0:
        raise ValueError("kernel is the eps = 0 form; use kernel_reg")
    m = params.m
    sq = _square_off_cone(xi)
    if sq > 0.0:
        z = m * math.sqrt(sq)
        j0, j1, y0, y1 = bessel_J0J1Y0Y1(z)
        sgn = 1.0 if xi.t > 0.0 else -1.0
        g0 = y0 + 1j * sgn * j0
        g1 = y1 + 1j * sgn * j1
        beta = m**3 / (16 * np.pi**2) * g1 / z
        alpha = -1j * m**4 / (16 * np.pi**2) * (g0 / z**2 - 2 * g1 / z**3)
    else:
        u = m * math.sqrt(-sq)
        k0, k1 = bessel_K0K1(complex(u))
        beta = m**3 / (8 * np.pi**3) * k1 / u
        alpha = -1j * m**4 / (8 * np.pi**3) * (k0 / u**2 + 2 * k1 / u**3)
    return KernelCoeffs(complex(alpha), complex(beta), 0.0)


def kernel_reg(xi: Event, params: VacuumParams) -> KernelCoeffs:
    """Regularized coefficients at z = m sqrt(r^2 + (eps + i t)^2).

    The principal square root keeps ``Re z > 0`` for every real separation
    when ``eps > 0``, so the two decaying Bessel functions are evaluated away
    from their branch cut.  Smooth on all of Minkowski space, including
    coincident points.
    """
    if params.eps <= 0.0:
        raise ValueError("kernel_reg needs eps > 0; use kernel for eps = 0")
    m, eps = params.m, params.eps
    z = m * np.sqrt(complex(xi.r**2 + (eps + 1j * xi.t) ** 2))
    if z.real <= 0.0:
        raise OutOfDomain(f"regularized argument {z:.3e} left the right half plane")
    k0, k1 = bessel_K0K1(z)
    beta = m**3 / (8 * np.pi**3) * k1 / z
    alpha = -1j * m**4 / (8 * np.pi**3) * (k0 / z**2 + 2 * k1 / z**3)
    return KernelCoeffs(complex(alpha), complex(beta), eps)


def _wrap(angle: float) -> float:
    """Reduce to the principal interval (-pi, pi]."""
    return math.remainder(angle, 2.0 * math.pi)


def _connection_phases(plus: complex, minus: complex,
                       tol: Tolerances) -> tuple:
    """Connection phase phi and holonomy phase kappa of a diagonal pair.

    ``plus``/``minus`` are the kernel values on the two eigenspaces of the
    directional sign operator.  The phase difference must lift into the
    window (-3 pi/2, -pi) u (pi, 3 pi/2); the lift fixes phi mod 2 pi and
    the two expressions for kappa must then agree.
    """
    delta = cmath.phase(plus / minus)
    margin = min(math.pi - abs(delta), abs(delta) - 0.5 * math.pi)
    if margin <= tol.real_threshold:
        raise NumericalFailure(
            f"phase difference {delta:.6f} does not resolve the time "
            "direction (too close to the admissible window boundary)"
        )
    lift = delta - 2.0 * math.pi if delta > 0.0 else delta + 2.0 * math.pi
    phi = -0.5 * lift
    kappa = _wrap(phi + cmath.phase(plus))
    kappa_alt = _wrap(-phi + cmath.phase(minus))
    if abs(_wrap(kappa - kappa_alt)) > 1e-9:
        raise NumericalFailure(
            "the two holonomy phase expressions disagree: "
            f"{kappa:.12f} vs {kappa_alt:.12f}"
        )
    return phi, kappa


def chain_analysis(xi: Event, params: VacuumParams,
                   tol: Tolerances = DEFAULT_TOL) -> dict:
    """Closed-chain data of a separation vector, in closed form.

    Returns a dict with the unregularized chain coefficients ``a`` and
    ``b`` (chain = a slash(xi) + b), the chain eigenvalues ``lambda_plus``
    and ``lambda_minus``, and, for timelike separations, the analytic
    directional sign operator ``v_analytic = sign(t) slash(xi)/sqrt(xi^2)``
    together with the connection phases ``phi`` and ``kappa``.  For
    spacelike separations the eigenvalues form a conjugate pair and the
    sign-operator/phase entries are None.

    With ``eps > 0`` the regularized coefficients ``a_eps``..``d_eps`` are
    added (chain = a_eps slash(xi) + b_eps + c_eps gamma^0
    - i d_eps vec(xi).vec(gamma) gamma^0), and ``v_eps``, the regularized
    directional sign operator assembled from them — None for spacelike
    separations and when the regularization leaves no resolvable time
    direction.
    """
    sq = _square_off_cone(xi)
    coeffs = kernel(xi, VacuumParams(params.m, 0.0))
    alpha, beta = coeffs.alpha, coeffs.beta
    a = 2.0 * (alpha * np.conj(beta)).real
    b = abs(alpha) ** 2 * sq + abs(beta) ** 2
    out = {"a": a, "b": b}
    if sq > 0.0:
        root = math.sqrt(sq)
        out["lambda_plus"] = b + abs(a) * root
        out["lambda_minus"] = b - abs(a) * root
        sgn = 1.0 if xi.t > 0.0 else -1.0
        out["v_analytic"] = SignOperator(SpinOperator(sgn * slash(xi) / root))
        plus = beta + sgn * alpha * root
        minus = beta - sgn * alpha * root
        phi, kappa = _connection_phases(plus, minus, tol)
        out["phi"], out["kappa"] = phi, kappa
    else:
        im = abs(a) * math.sqrt(-sq)
        out["lambda_plus"] = complex(b, im)
        out["lambda_minus"] = complex(b, -im)
        out["v_analytic"] = None
        out["phi"] = out["kappa"] = None

    if params.eps > 0.0:
        reg = kernel_reg(xi, params)
        ar, br = reg.alpha, reg.beta
        eps = params.eps
        a_eps = 2.0 * (ar * np.conj(br)).real
        b_eps = abs(ar) ** 2 * (sq + eps * eps) + abs(br) ** 2
        c_eps = 2.0 * eps * (ar * np.conj(br)).imag
        d_eps = 2.0 * eps * abs(ar) ** 2
        out.update(a_eps=a_eps, b_eps=b_eps, c_eps=c_eps, d_eps=d_eps)
        norm_sq = (a_eps**2 * sq + 2.0 * a_eps * c_eps * xi.t
                   + c_eps**2 - d_eps**2 * xi.r**2)
        gauge = (a_eps**2 * abs(sq) + 2.0 * abs(a_eps * c_eps * xi.t)
                 + c_eps**2 + d_eps**2 * xi.r**2)
        if sq > 0.0 and norm_sq > 1e-12 * gauge:
            # The normalized traceless chain part takes the value -1 on the
            # positive definite invariant subspace (the coefficient of the
            # slashed separation is negative for future-directed xi), so the
            # directional sign operator is its negative.
            v_mat = -(a_eps * slash(xi) + c_eps * GAMMA[0]
                      - 1j * d_eps * _spatial_slash(xi) @ GAMMA[0])
            out["v_eps"] = SignOperator(SpinOperator(v_mat / math.sqrt(norm_sq)))
        else:
            # Spacelike, or the regularization washed out the time direction.
            out["v_eps"] = None
    return out


def nu_eigenvalues(params: VacuumParams) -> tuple:
    """Eigenvalue scales (nu_12, nu_34) of the local correlation operators.

    Radial integrals ``int_0^inf p^2/omega (-/+ omega + m) e^{-eps omega} dp``
    with ``omega = sqrt(p^2 + m^2)``, evaluated after the substitution
    ``p = m sinh(s)`` which removes the square root and leaves smooth
    exponential decay.  Always ``nu_12 < 0 < nu_34``.

    Raises
    ------
    QuadratureFailure
        if the adaptive error estimate exceeds 1e-9 relative.
    """
    if params.eps <= 0.0:
        raise ValueError("eigenvalue scales need eps > 0")
    m, eps = params.m, params.eps

    def integrand(sign):
        def f(s):
            if s > 700.0:
                return 0.0
            ch = math.cosh(s)
            ex = eps * m * ch
            if ex > 745.0:
                return 0.0
            sh = math.sinh(s)
            return m**3 * sh * sh * (1.0 + sign * ch) * math.exp(-ex)
        return f

    values = []
    for sign in (-1.0, 1.0):
        val, err = quad(integrand(sign), 0.0, np.inf,
                        epsabs=1e-300, epsrel=1e-12, limit=200)
        if err > 1e-9 * abs(val):
            raise QuadratureFailure(
                f"eigenvalue-scale quadrature error {err:.3e} exceeds "
                f"1e-9 relative to {val:.6e}"
            )
        values.append(val)
    nu12, nu34 = values
    if not (nu12 < 0.0 < nu34):
        raise NumericalFailure(
            f"eigenvalue scales have the wrong signs: {nu12:.3e}, {nu34:.3e}"
        )
    return nu12, nu34


def dirac_sea_pair(x: Event, y: Event, params: VacuumParams) -> PointPairData:
    """Kernel data of an ordered event pair, ready for the geometry layer.

    In the distinguished bases both local sign operators equal ``gamma^0``
    and the kernels depend on the separation alone: ``P(x,y) = P(y - x)``
    and ``P(y,x)`` is its adjoint (equivalently the kernel at ``x - y``).
    """
    xi = y - x
    if xi.t == 0.0 and xi.r == 0.0:
        raise ValueError("events coincide")
    if params.eps > 0.0:
        coeffs = kernel_reg(xi, params)
    else:
        coeffs = kernel(xi, params)
    p_xy = coeffs.operator(xi)
    s = SignOperator(SpinOperator(GAMMA[0]))
    return PointPairData(p_xy, spin_adjoint(p_xy), s, s)


def analytic_connection(x: Event, y: Event, params: VacuumParams,
                        tol: Tolerances = DEFAULT_TOL) -> SpinOperator:
    """The closed-form spin connection ``e^{i kappa} 1`` of a timelike pair.

    Valid for every timelike separation, in particular for purely temporal
    ones where the generic construction has no preferred spatial direction
    to synchronize with.  The phase is the unregularized one.
    """
    analysis = chain_analysis(y - x, params, tol)
    kappa = analysis["kappa"]
    if kappa is None:
        raise NotProperlyTimelike(
            "the analytic connection exists for timelike separations only"
        )
    return SpinOperator(cmath.exp(1j * kappa) * np.eye(4))


def lorentz_boost(rapidity: float, axis=(0.0, 0.0, 1.0)) -> tuple:
    """A pure boost on (t, x, y, z) together with its spin representation.

    Returns ``(lam, u)`` where ``lam`` is the real 4x4 vector matrix and
    ``u`` the spin-unitary operator with
    ``u slash(xi) u^{-1} = slash(lam xi)``.
    """
    n = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0.0:
        raise ValueError("boost axis must be nonzero")
    n = n / norm
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    lam = np.eye(4)
    lam[0, 0] = ch
    lam[0, 1:] = -sh * n
    lam[1:, 0] = -sh * n
    lam[1:, 1:] = np.eye(3) + (ch - 1.0) * np.outer(n, n)
    gen = GAMMA[0] @ (n[0] * GAMMA[1] + n[1] * GAMMA[2] + n[2] * GAMMA[3])
    # gen squares to +1, so the exponential closes in degree one.
    u = math.cosh(0.5 * rapidity) * np.eye(4) - math.sinh(0.5 * rapidity) * gen
    return lam, SpinOperator(u)


def boost_event(lam: np.ndarray, e: Event) -> Event:
    return Event.from_array(np.asarray(lam) @ e.as_array())
