"""Shared random factories and independent oracles for the test suite.

Everything takes an explicit ``numpy.random.Generator`` so tests stay
reproducible; nothing here imports the algorithms under test beyond the
basic value types.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm

from cfsgeom.clifford import GAMMA, SignOperator
from cfsgeom.dirac_sea import Event
from cfsgeom.geometry import PointPairData
from cfsgeom.spin_algebra import SpinOperator, spin_adjoint

S4 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)


def rand_pu(rng) -> np.ndarray:
    """Random pseudo-unitary 4x4 matrix (exp of i times a spin-symmetric)."""
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = 0.5 * (m + S4 @ m.conj().T @ S4)
    return expm(1j * 0.4 * h)


def rand_su2(rng) -> np.ndarray:
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(m)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    return q / np.sqrt(np.linalg.det(q) + 0j)


def rand_posdef2(rng) -> np.ndarray:
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return m @ m.conj().T + 0.3 * np.eye(2)


def rand_sign(rng) -> SignOperator:
    """Random sign operator: a pseudo-unitary conjugate of gamma^0."""
    w = rand_pu(rng)
    return SignOperator(SpinOperator(w @ GAMMA[0] @ np.linalg.inv(w)))


def synth_kernel(rng, th_p: float, th_m: float) -> np.ndarray:
    """Kernel whose closed chain has eigenvalue phases 2*th_p, 2*th_m.

    Block-diagonal positive * unitary factors in an adapted basis, then
    conjugated out by independent pseudo-unitaries at both ends.
    """
    phat = np.zeros((4, 4), dtype=complex)
    phat[:2, :2] = np.exp(1j * th_p) * (rand_posdef2(rng) @ rand_su2(rng))
    phat[2:, 2:] = np.exp(1j * th_m) * (rand_posdef2(rng) @ rand_su2(rng))
    return rand_pu(rng) @ phat @ np.linalg.inv(rand_pu(rng))


def synth_pair(rng, th_p: float, th_m: float, s_x=None, s_y=None) -> PointPairData:
    """Spin-connectable synthetic pair with prescribed chain phases."""
    p_xy = SpinOperator(synth_kernel(rng, th_p, th_m))
    return PointPairData(
        P_xy=p_xy, P_yx=spin_adjoint(p_xy),
        s_x=s_x if s_x is not None else rand_sign(rng),
        s_y=s_y if s_y is not None else rand_sign(rng),
    )


def connectable_pair(rng) -> PointPairData:
    """Synthetic pair with phases in the spin-connectable window."""
    th_p, th_m = rng.uniform(-np.pi, np.pi, size=2)
    return synth_pair(rng, th_p, th_m)


def rand_timelike(rng, tmin: float = 0.3, tmax: float = 3.0,
                  future: bool = True) -> Event:
    """Timelike separation with nonzero spatial part (generic position)."""
    while True:
        vec = rng.normal(size=3)
        r = float(np.linalg.norm(vec))
        if r < 1e-3:
            continue
        extra = rng.uniform(tmin, tmax)
        t = math.sqrt(r * r + extra ** 2)
        return Event(t if future else -t, *vec)


def rand_spacelike(rng) -> Event:
    """Spacelike separation bounded away from the light cone."""
    while True:
        vec = rng.normal(size=3)
        r = float(np.linalg.norm(vec))
        if r < 1e-2:
            continue
        xi = Event(rng.uniform(-0.9, 0.9) * r, *vec)
        if abs(xi.square) > 1e-4 * (xi.t ** 2 + r * r):
            return xi


# -- quadrature oracles ---------------------------------------------------------


def k0k1_quadrature(z: complex) -> tuple:
    """Modified Bessel K0, K1 from the cosh integral representation.

    K_n(z) = int_0^inf cosh(n t) e^{-z cosh t} dt for Re z > 0; truncated
    where the integrand falls below 1e-20 of its peak, integrated piecewise
    with tight tolerances.  Independent of the implementation under test.
    """
    if z.real <= 0.0:
        raise ValueError("oracle needs Re z > 0")
    upper = math.acosh(max(46.0 / z.real, 2.0))

    def integrand(weight):
        def f(t):
            return weight(t) * np.exp(-z * math.cosh(t))
        return f

    out = []
    for weight in (lambda t: 1.0, math.cosh):
        re, re_err = quad(lambda t: integrand(weight)(t).real, 0.0, upper,
                          limit=400, epsabs=1e-14, epsrel=1e-12)
        im, im_err = quad(lambda t: integrand(weight)(t).imag, 0.0, upper,
                          limit=400, epsabs=1e-14, epsrel=1e-12)
        out.append(complex(re, im))
    return out[0], out[1]


def rk4_product_integral(generator, length: float, steps: int) -> np.ndarray:
    """Fixed-step classical RK4 for dD/dt = G(t) D, D(0) = 1."""
    d = np.eye(4, dtype=complex)
    h = length / steps
    for k in range(steps):
        t = k * h
        k1 = generator(t) @ d
        k2 = generator(t + 0.5 * h) @ (d + 0.5 * h * k1)
        k3 = generator(t + 0.5 * h) @ (d + 0.5 * h * k2)
        k4 = generator(t + h) @ (d + h * k3)
        d = d + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return d
