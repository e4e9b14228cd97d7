import math

import numpy as np
import pytest

from kpzmarkov.config import BoundaryParams as BP
from kpzmarkov.errors import DomainError
from kpzmarkov.processes import (HY_CATALOG, hy_identity_check, hy_vs_markov_check,
                                 k_functional_exact, laplace_y0)
from kpzmarkov.processes.identities import HY_CATALOG_VERSION


def test_laplace_at_zero():
    assert laplace_y0(BP(1.0, 1.0, 1.0), 0.0) == 1.0


@pytest.mark.parametrize("a,c,s", [(1.0, 1.0, 0.5), (2.0, -0.5, 1.0), (-0.5, 1.5, 2.0)])
def test_laplace_two_routes(a, c, s):
    p = BP(a, c, 1.0)
    assert laplace_y0(p, s) == pytest.approx(laplace_y0(p, s, "quadrature"), abs=1e-4)


def test_laplace_domain():
    with pytest.raises(DomainError):
        laplace_y0(BP(1.0, 1.0, 1.0), -0.5)
    with pytest.raises(DomainError):
        laplace_y0(BP(1.0, -1.0, 1.0), 1.0)


def test_exponential_limit_trend():
    # a_eps + c_eps = eps with c_eps -> -1: E e^{-s eps Y_0} -> 1/(1+s)
    s = 1.0
    devs = []
    for eps in (0.1, 0.02, 0.004):
        p = BP(1.0 + eps, -1.0, 1.0)
        devs.append(abs(laplace_y0(p, s * eps) - 1.0 / (1.0 + s)))
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.02


def test_k_functional_formula_sum_two():
    p = BP(1.0, 1.0, 1.0)
    from kpzmarkov import kernels
    assert k_functional_exact(p) == pytest.approx(kernels.const_C(p).value / 2.0, rel=1e-12)


def test_hy_catalog_is_versioned():
    assert HY_CATALOG_VERSION == 1
    assert set(HY_CATALOG) == {"one", "exp_endpoint_0.5", "exp_endpoint_1"}
    with pytest.raises(DomainError):
        hy_identity_check(-0.5, 0.0, 1.0, "square")
    with pytest.raises(DomainError):
        hy_identity_check(0.5, 0.0, 1.0, "one")


def test_hy_right_weight_scaling():
    # the deterministic factor e^{-a^2 t/4} halves its exponent when t halves
    a = -0.5
    f1, f2 = -a * a * 1.0 / 4.0, -a * a * 0.5 / 4.0
    assert f2 == f1 / 2.0


@pytest.mark.slow
@pytest.mark.parametrize("a,x,functional", [(0.0, 1.0, "one"), (-0.5, 0.5, "exp_endpoint_1"),
                                            (-0.5, 0.0, "exp_endpoint_0.5")])
def test_hy_identity(a, x, functional):
    rep = hy_identity_check(a, x, 1.0, functional, n=100_000, seed=31)
    assert rep.passed, rep.summary_lines()


@pytest.mark.slow
@pytest.mark.parametrize("params", [BP(0.0, 2.0), BP(-0.5, 2.0)])
def test_path_formula_vs_markov(params):
    checks = hy_vs_markov_check(params, 1.0, 100_000, seed=41)
    assert all(c.passed for c in checks), [c.to_dict() for c in checks]
