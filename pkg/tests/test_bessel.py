"""Cylinder-function kernels against quadrature and library oracles."""

import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings, strategies as st

from cfsgeom._bessel import EULER_GAMMA, OutOfDomain, bessel_J0J1Y0Y1, bessel_K0K1

from helpers import k0k1_quadrature


def test_euler_gamma_constant():
    assert EULER_GAMMA == pytest.approx(np.euler_gamma, abs=1e-15)


def test_oscillatory_values_match_library():
    for x in np.geomspace(0.05, 80.0, 60):
        j0, j1, y0, y1 = bessel_J0J1Y0Y1(float(x))
        assert j0 == pytest.approx(sp.j0(x), abs=1e-13)
        assert j1 == pytest.approx(sp.j1(x), abs=1e-13)
        assert y0 == pytest.approx(sp.y0(x), abs=max(1e-13, 1e-13 * abs(sp.y0(x))))
        assert y1 == pytest.approx(sp.y1(x), abs=max(1e-13, 1e-13 * abs(sp.y1(x))))


def test_oscillatory_wronskian():
    # J1 Y0 - J0 Y1 = 2/(pi x), the lightlike-matching consistency identity
    for x in np.geomspace(0.1, 40.0, 20):
        j0, j1, y0, y1 = bessel_J0J1Y0Y1(float(x))
        assert j1 * y0 - j0 * y1 == pytest.approx(2.0 / (math.pi * x), rel=1e-12)


def test_decaying_values_match_quadrature_oracle():
    pts = [0.3 + 0.0j, 2.5 + 1.0j, 0.5 - 3.0j, 9.0 + 0.1j, 6.0 + 6.5j,
           1.0 + 8.9j, 20.0 - 4.0j, 0.05 + 0.2j]
    for z in pts:
        k0, k1 = bessel_K0K1(z)
        q0, q1 = k0k1_quadrature(z)
        assert abs(k0 - q0) <= 1e-9 * max(1.0, abs(q0))
        assert abs(k1 - q1) <= 1e-9 * max(1.0, abs(q1))


def test_decaying_seam_is_smooth():
    # series / continued-fraction handover must not leave a visible jump
    for phase in (0.0, 0.7, -1.2, 2.9):
        for r in (1.99, 1.999999, 2.000001, 2.01):
            z = r * np.exp(1j * phase)
            if z.real <= 0:
                continue
            k0, k1 = bessel_K0K1(z)
            assert abs(k0 - sp.kv(0, z)) <= 1e-12 * abs(sp.kv(0, z))
            assert abs(k1 - sp.kv(1, z)) <= 1e-12 * abs(sp.kv(1, z))


def test_decaying_small_argument_logarithm():
    for r in (1e-4, 1e-6, 1e-8):
        k0, _k1 = bessel_K0K1(complex(r))
        assert k0.real == pytest.approx(-math.log(r / 2.0) - EULER_GAMMA, rel=1e-8)
        assert abs(k0.imag) < 1e-12


def test_decaying_cross_wronskian_with_growing_solutions():
    # K0(z) I1(z) + K1(z) I0(z) = 1/z
    for z in (0.4 + 0.3j, 3.0 - 2.0j, 11.0 + 1.0j):
        k0, k1 = bessel_K0K1(z)
        val = k0 * sp.iv(1, z) + k1 * sp.iv(0, z)
        assert abs(val - 1.0 / z) <= 1e-12 * abs(1.0 / z)


def test_domain_guards():
    with pytest.raises(OutOfDomain):
        bessel_J0J1Y0Y1(0.0)
    with pytest.raises(OutOfDomain):
        bessel_J0J1Y0Y1(-3.0)
    with pytest.raises(OutOfDomain):
        bessel_K0K1(0.0 + 0.0j)
    with pytest.raises(OutOfDomain):
        bessel_K0K1(-1.0 + 1.0j)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.05, max_value=25.0),
       st.floats(min_value=-20.0, max_value=20.0))
def test_decaying_matches_library_on_right_half_plane(re, im):
    z = complex(re, im)
    k0, k1 = bessel_K0K1(z)
    ref0, ref1 = sp.kv(0, z), sp.kv(1, z)
    assert abs(k0 - ref0) <= 1e-11 * max(abs(ref0), 1e-30)
    assert abs(k1 - ref1) <= 1e-11 * max(abs(ref1), 1e-30)
