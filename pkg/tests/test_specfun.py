import math

import numpy as np
import pytest

from kpzmarkov.config import QuadratureSpec
from kpzmarkov.errors import AccuracyError, DomainError
from kpzmarkov.specfun import (BesselOrder, abs_gamma_sq, bessel_k, bessel_k_exparg,
                               bessel_k_mellin, hartman_watson_theta, rgamma, theta_laplace)

R = BesselOrder.real
I = BesselOrder.imaginary


def test_half_order_closed_form():
    assert bessel_k(R(0.5), 1.0) == pytest.approx(math.sqrt(math.pi / 2) / math.e, rel=1e-12)


@pytest.mark.parametrize("i", range(5))
def test_real_order_matches_mpmath(oracles, i):
    r = oracles["bessel_k_real"][i]
    assert bessel_k(R(r["nu"]), r["x"]) == pytest.approx(r["value"], rel=1e-10)


@pytest.mark.parametrize("i", range(4))
def test_imaginary_order_matches_mpmath(oracles, i):
    r = oracles["bessel_k_imag"][i]
    assert bessel_k(I(r["u"]), r["x"]) == pytest.approx(r["value"], rel=1e-9, abs=1e-14)


def test_imaginary_order_even():
    assert bessel_k(I(0.7), 2.0) == bessel_k(I(-0.7), 2.0)


def test_x_k0_integrates_to_one():
    assert bessel_k_mellin(0.0, 2.0) == pytest.approx(1.0, rel=1e-10)


def test_bessel_k_rejects_nonpositive_x():
    with pytest.raises(DomainError):
        bessel_k(R(0.0), 0.0)
    with pytest.raises(DomainError):
        bessel_k(R(1.0), -1.0)


def test_imaginary_order_cap():
    with pytest.raises(DomainError):
        I(250.0)


def test_step_doubling_failure_is_reported():
    # a single coarse node cannot resolve the integral at 1e-12
    quad = QuadratureSpec(upper_cutoff=40.0, nodes=16, rel_tol=1e-12, abs_tol=1e-300)
    with pytest.raises(AccuracyError) as info:
        bessel_k_exparg(I(150.0), 3.0, quad)
    assert info.value.coarse != info.value.fine


def test_log_argument_reaches_far_tails():
    # K_1(z) ~ 1/z as z -> 0: e^{-s} K_1(e^{-s}) -> 1
    assert math.exp(-300.0) * bessel_k_exparg(R(1.0), 300.0) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("s", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0])
def test_mellin_moments(oracles, s, nu):
    ref = next(r["value"] for r in oracles["mellin"] if r["s"] == s and r["nu"] == nu)
    assert bessel_k_mellin(nu, s) == pytest.approx(ref, rel=1e-5)


def test_mellin_needs_s_above_order():
    with pytest.raises(DomainError):
        bessel_k_mellin(1.0, 1.0)


def test_small_index_bound_single_constant():
    xs = np.linspace(0.02, 1.0, 50)
    ratios = []
    for nu in (-0.2, -0.1, 0.05, 0.15, 0.24):
        k = bessel_k(R(nu), xs)
        approx = 0.5 * (math.gamma(nu) * (xs / 2) ** -nu + math.gamma(-nu) * (xs / 2) ** nu)
        ratios.append(np.max(np.abs(k - approx) / np.sqrt(xs)))
    c_fit = max(ratios)
    # one constant covers the whole grid and it is of order one
    assert c_fit < 1.0
    for nu in (-0.2, 0.24):
        k = bessel_k(R(nu), xs)
        approx = 0.5 * (math.gamma(nu) * (xs / 2) ** -nu + math.gamma(-nu) * (xs / 2) ** nu)
        assert np.all(np.abs(k - approx) <= c_fit * np.sqrt(xs) + 1e-15)


def test_scaled_order_converges_to_sinh():
    nu = 1.0
    xs = np.array([-0.5, -0.1, 0.2, 0.5, 1.0])
    target = np.where(xs > 0, np.sinh(nu * xs) / nu, 0.0)
    devs = []
    for T in (10.0, 100.0, 1000.0):
        vals = np.array([bessel_k_exparg(R(nu / T), x * T) for x in xs]) / T
        devs.append(float(np.max(np.abs(vals - target))))
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-2


@pytest.mark.parametrize("z", [10.0, 100.0])
def test_k0_large_argument(z):
    val = bessel_k(R(0.0), z) * math.sqrt(2 * z / math.pi) * math.exp(z)
    assert val == pytest.approx(1.0, abs=1.0 / (8 * z) + 1e-6)


def test_k0_small_argument():
    devs = [abs(bessel_k(R(0.0), z) / -math.log(z) - 1.0) for z in (1e-3, 1e-6)]
    assert devs[1] < devs[0] < 0.1


@pytest.mark.parametrize("i", range(5))
def test_abs_gamma_sq_matches_mpmath(oracles, i):
    r = oracles["abs_gamma_sq"][i]
    assert abs_gamma_sq(r["re"], r["im"]) == pytest.approx(r["value"], rel=1e-12)


def test_abs_gamma_sq_reflection():
    assert abs_gamma_sq(0.0, 1.0) == pytest.approx(math.pi / math.sinh(math.pi), rel=1e-13)
    assert abs_gamma_sq(1.0, 0.0) == pytest.approx(1.0, rel=1e-15)


def test_gamma_small_imaginary_limit():
    tau, v = 1e6, 2.0
    assert tau / abs_gamma_sq(0.0, v / math.sqrt(tau)) == pytest.approx(4.0, abs=1e-3)


def test_abs_gamma_sq_pole():
    with pytest.raises(DomainError):
        abs_gamma_sq(-2.0, 0.0)
    assert rgamma(0.0) == 0.0


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("xi", [0.5, 1.0, 2.0])
def test_theta_laplace_identity(oracles, lam, xi):
    ref = next(r["value"] for r in oracles["bessel_i"] if r["lam"] == lam and r["xi"] == xi)
    assert theta_laplace(lam, xi) == pytest.approx(ref, rel=1e-4)


def test_theta_nonnegative_on_grid():
    xi = np.linspace(0.1, 5.0, 25)
    for t in np.linspace(0.5, 10.0, 12):
        assert np.all(hartman_watson_theta(xi, float(t)) >= -1e-14)


def test_theta_floor_and_domain():
    with pytest.raises(AccuracyError):
        hartman_watson_theta(1.0, 0.01)
    with pytest.raises(DomainError):
        hartman_watson_theta(0.0, 1.0)
    with pytest.raises(DomainError):
        hartman_watson_theta(1.0, -1.0)
    # at the floor theta(1, t) is below the rounding floor of its sum
    assert abs(hartman_watson_theta(1.0, 0.05)) < 1e-7
    # the floor is configurable
    assert math.isfinite(hartman_watson_theta(5.0, 0.04, t_floor=0.03))
