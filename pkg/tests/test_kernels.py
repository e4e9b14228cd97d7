import math

import numpy as np
import pytest
from scipy import special

from kpzmarkov import kernels
from kpzmarkov.config import BoundaryParams as BP
from kpzmarkov.errors import AccuracyError, DomainError
from kpzmarkov.processes.identities import k_functional_exact
from kpzmarkov.processes.laws import transition_mass
from kpzmarkov.processes.paths import k_functional_mc
from kpzmarkov.processes.types import ProcessKind


def _trap(f, x):
    return float(np.trapezoid(f, x))


# --- Yakubovich kernel ------------------------------------------------------

@pytest.mark.parametrize("i", range(3))
def test_spectral_p_matches_mpmath(oracles, i):
    r = oracles["yakubovich_p"][i]
    assert kernels.yakubovich_p(r["x"], r["y"], r["t"]).value == pytest.approx(r["value"],
                                                                             rel=1e-9)


def test_p_symmetric():
    assert kernels.yakubovich_p(0.5, 2.0, 1.0).value == kernels.yakubovich_p(2.0, 0.5, 1.0).value


def test_p_mass_far_from_killing():
    ys = np.linspace(2.0, 18.0, 3001)
    mass = _trap(kernels.p_matrix([10.0], ys, 1.0)[0], ys)
    assert mass == pytest.approx(1.0, abs=1e-3)


def test_p_spectral_vs_theta_at_origin():
    s = kernels.yakubovich_p(0.0, 0.0, 1.0)
    t = kernels.yakubovich_p(0.0, 0.0, 1.0, method="theta")
    assert abs(s.value - t.value) < 1e-4
    assert s.method == "spectral" and t.method == "theta"


def test_p_theta_floor():
    with pytest.raises(AccuracyError):
        kernels.yakubovich_p(0.0, 0.0, 0.1, method="theta")
    with pytest.raises(DomainError):
        kernels.yakubovich_p(0.0, 0.0, 0.0)


def test_semigroup():
    zs = np.linspace(-9.0, 9.0, 2401)
    pts = [-1.0, 0.0, 1.5]
    left = kernels.p_matrix(pts, zs, 0.5)
    for i, x in enumerate(pts):
        for y in pts:
            lhs = _trap(left[i] * kernels.p_matrix([y], zs, 0.5)[0], zs)
            assert lhs == pytest.approx(kernels.yakubovich_p(x, y, 1.0).value, abs=1e-4)


def test_sub_markov_monotone():
    xs = np.linspace(-3.0, 3.0, 13)
    masses = [kernels.doob_H(float(x), 0.0, BP(0.0, 1.0, 1.0)).value for x in xs]
    assert np.all(np.diff(masses) >= -1e-12)
    assert masses[-1] < 1.0 and masses[0] > 0.0


# --- absorbed kernel --------------------------------------------------------

def test_g_closed_value(oracles):
    assert kernels.absorbing_g(1.0, 1.0, 1.0).value == pytest.approx(oracles["g_1_1_1"],
                                                                      rel=1e-14)


def test_g_symmetric():
    assert kernels.absorbing_g(2.0, 3.0, 0.7).value == kernels.absorbing_g(3.0, 2.0, 0.7).value


def test_g_spectral_equals_closed_form_on_grid():
    for x in (0.2, 1.0, 2.5):
        for y in (0.3, 1.0, 3.0):
            for t in (0.3, 1.0, 2.0):
                a = kernels.absorbing_g(x, y, t).value
                b = kernels.absorbing_g(x, y, t, method="spectral").value
                assert abs(a - b) < 1e-8


def test_g_scaling_fixed_point():
    tau, t, x, y = 9.0, 0.5, 1.0, 2.0
    r = math.sqrt(tau)
    lhs = r * kernels.absorbing_g(x * r, y * r, tau * t).value
    assert lhs == pytest.approx(kernels.absorbing_g(x, y, t).value, abs=1e-12)


def test_g_domain():
    with pytest.raises(DomainError):
        kernels.absorbing_g(0.0, 1.0, 1.0)


# --- Doob transforms --------------------------------------------------------

def test_doob_H_no_residues_matches_quadrature():
    p = BP(1.0, 1.0, 1.0)
    res = kernels.doob_H(0.0, 0.5, p)
    quad = kernels.doob_H(0.0, 0.5, p, method="spectral")
    assert res.meta["n_residues"] == 0
    assert res.value == pytest.approx(quad.value, abs=1e-6)


@pytest.mark.parametrize("a", [-0.5, -1.0, -2.5])
def test_doob_H_residues_match_direct_integral(a):
    # for a < 0 the y-integral of e^{-ay} p still converges; compare with it
    p = BP(a, 3.0, 1.0)
    res = kernels.doob_H(0.3, 0.4, p)
    ys = np.linspace(-12.0, 30.0, 8001)
    direct = _trap(np.exp(-a * ys) * kernels.p_matrix([0.3], ys, 0.6)[0], ys)
    assert res.meta["n_residues"] == kernels.n_residues(a)
    assert res.value == pytest.approx(direct, rel=1e-6)


def test_residue_count_is_strict():
    assert kernels.n_residues(-2.0) == 1
    assert kernels.n_residues(-2.0001) == 2
    assert kernels.n_residues(0.0) == 0


def test_doob_H_boundary_convention():
    assert kernels.doob_H(0.3, 1.0, BP(2.0, 1.0, 1.0)).value == pytest.approx(math.exp(-0.6))
    with pytest.raises(DomainError):
        kernels.doob_H(0.3, 1.5, BP(2.0, 1.0, 1.0))


def test_doob_H_martingale():
    p = BP(1.0, 1.0, 1.0)
    zs = np.linspace(-9.0, 14.0, 3001)
    h_t = kernels.doob_H_values(zs, 0.6, p)
    lhs = _trap(kernels.p_matrix([0.0], zs, 0.4)[0] * h_t, zs)
    assert lhs == pytest.approx(kernels.doob_H(0.0, 0.2, p).value, abs=1e-5)


def test_doob_H_continuous_at_zero():
    vals = [kernels.doob_H(0.2, 0.3, BP(a, 1.0, 1.0)).value for a in (-1e-6, 0.0, 1e-6)]
    assert abs(vals[0] - vals[1]) < 1e-5 and abs(vals[2] - vals[1]) < 1e-5


def test_doob_h_eta_gaussian(oracles):
    assert kernels.doob_h_eta(1.0, 0.0, 0.0).value == pytest.approx(oracles["erf_1"], rel=1e-9)


def test_doob_h_eta_closed_form_oracle():
    for x, t, a in ((0.5, 0.2, 1.0), (2.0, 0.7, -1.5), (0.1, 0.0, 3.0)):
        assert kernels.doob_h_eta(x, t, a).value == pytest.approx(
            float(kernels.h_eta_closed(x, t, a)), rel=1e-9)


def test_doob_h_eta_boundary_and_absorbed():
    assert kernels.doob_h_eta(2.0, 1.0, 3.0).value == pytest.approx(math.exp(-6.0))
    v = kernels.doob_h_eta(-0.5, 0.3, 1.0)
    assert v.value == 0.0 and v.meta["absorbed"]


def test_doob_h_eta_martingale():
    a, x = 1.0, 0.5
    ys = np.linspace(0.0, 12.0, 6001)
    h_t = kernels.h_eta_values(ys, 0.8, a)
    lhs = _trap(kernels.g_closed(x, ys, 0.7) * h_t, ys)
    assert lhs == pytest.approx(kernels.doob_h_eta(x, 0.1, a).value, abs=1e-6)


# --- constants --------------------------------------------------------------

@pytest.mark.parametrize("i", range(3))
def test_const_C_two_routes_and_oracle(oracles, i):
    r = oracles["const_C"][i]
    p = BP(r["a"], r["c"], r["tau"])
    series = kernels.const_C(p).value
    double = kernels.const_C(p, method="double_integral").value
    assert series == pytest.approx(double, rel=1e-5)
    assert series == pytest.approx(r["value"], rel=1e-9)


def test_const_C_symmetric_with_residues():
    one = kernels.const_C(BP(2.0, -0.5, 1.0))
    two = kernels.const_C(BP(-0.5, 2.0, 1.0))
    assert one.value == pytest.approx(two.value, rel=1e-12)
    assert one.meta["n_residues"] == 1


def test_const_C_large_tau_limit():
    tau = 100.0
    ratio = tau ** 1.5 * kernels.const_C(BP(1.0, 1.0, tau)).value / math.pi ** 1.5
    assert abs(ratio - 1.0) < 0.05


def test_const_C_diverging_branch_grows():
    vals = [t ** 1.5 * kernels.const_C(BP(2.0, -0.5, t)).value for t in (10.0, 20.0, 40.0)]
    assert vals[0] < vals[1] < vals[2]


def test_const_C_domain():
    with pytest.raises(DomainError):
        kernels.const_C(BP(1.0, -1.0, 1.0))
    with pytest.raises(DomainError):
        kernels.const_C(BP(2.0, -0.5, 1.0), method="double_integral")


def test_const_C_continuous_at_zero():
    vals = [kernels.const_C(BP(a, 1.5, 1.0)).value for a in (-1e-6, 0.0, 1e-6)]
    assert vals[0] == pytest.approx(vals[1], rel=1e-5)
    assert vals[2] == pytest.approx(vals[1], rel=1e-5)


def test_frakC_first_branch():
    e = math.e
    closed = (2 * e * special.erfc(1.0) - math.exp(0.25) * special.erfc(0.5)) / 3.0
    v = kernels.const_frakC(2.0, 1.0)
    assert v.value == pytest.approx(closed, rel=1e-12)
    assert abs(v.value - kernels.const_frakC(2.0, 1.0, "integral").value) < 1e-8


@pytest.mark.parametrize("i", range(3))
def test_frakC_matches_mpmath(oracles, i):
    r = oracles["frakC"][i]
    assert kernels.const_frakC(r["a"], r["c"]).value == pytest.approx(r["value"], rel=1e-10)


def test_frakC_continuous_at_equal_parameters():
    mid = kernels.const_frakC(1.0, 1.0).value
    gaps = [abs(kernels.const_frakC(1.0, 1.0 + h).value - mid) for h in (1e-3, 1e-4, 1e-5, 1e-7)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[-1] < 1e-6


def test_frakC_reflection_identity():
    lhs = kernels.const_frakC(2.0, -1.0).value
    rhs = kernels.const_frakC(2.0, 1.0).value - 2.0 * (-1.0) * math.exp(0.25) / (4.0 - 1.0)
    assert abs(lhs - rhs) < 1e-8
    assert abs(kernels.const_frakC(2.0, -1.0, "integral").value - lhs) < 1e-8


def test_frakC_domain():
    with pytest.raises(DomainError):
        kernels.const_frakC(1.0, -1.0)


def test_const_K_reduces_to_C_when_sum_is_two():
    p = BP(0.5, 1.5, 1.0)
    assert kernels.const_K(p).value == pytest.approx(kernels.const_C(p).value, rel=1e-14)


@pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
def test_const_K_positive(tau):
    assert kernels.const_K(BP(2.0, 1.0, tau)).value > 0


@pytest.mark.slow
def test_exponential_functional_expectation_mc():
    # the expectation the K-constant normalises, by MC and by the subordination formula
    p = BP(1.0, 1.0, 1.0)
    est = k_functional_mc(p, 100_000, seed=7)
    assert abs(est.value - k_functional_exact(p)) < 3 * est.stderr
    assert est.bias_ok


# --- transition kernels -----------------------------------------------------

TRANSITIONS = [
    ("Y", BP(1.0, 1.0, 1.0), 0.3, 0.7, 0.0),
    ("Y", BP(2.0, -0.5, 1.0), 0.2, 1.0, 0.5),
    ("eta", BP(1.0, 1.0, 1.0), 0.2, 0.6, 0.5),
    ("Z_mc", BP(1.0, 2.0), 0.5, 1.5, 0.0),
    ("Z_hd", BP(-0.5, 1.5), 0.5, 1.5, 0.0),
    ("rho_mc", BP(1.0, 1.0), 0.5, 1.5, 0.7),
    ("rho_hd", BP(-0.5, 1.5), 0.5, 1.5, 0.7),
]


@pytest.mark.parametrize("tag,params,s,t,x", TRANSITIONS)
def test_transition_kernels_conserve_mass(tag, params, s, t, x):
    assert transition_mass(ProcessKind(tag, params), s, t, x) == pytest.approx(1.0, abs=1e-4)
