import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from kpzmarkov import kernels
from kpzmarkov.config import BoundaryParams
from kpzmarkov.limits import ks_distance
from kpzmarkov.processes import FddSpec, ProcessKind, sample_markov
from kpzmarkov.processes.types import DensityTable

coord = st.floats(-3.0, 3.0, allow_nan=False)
pos = st.floats(0.1, 3.0, allow_nan=False)
times = st.floats(0.3, 2.0, allow_nan=False)
fast = settings(max_examples=40, deadline=None)
slow = settings(max_examples=6, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@fast
@given(coord, coord, times)
def test_p_symmetric_and_below_free_kernel(x, y, t):
    pxy = kernels.yakubovich_p(x, y, t).value
    assert pxy == kernels.yakubovich_p(y, x, t).value
    assert 0.0 <= pxy <= math.exp(-(x - y) ** 2 / t) / math.sqrt(math.pi * t) * (1 + 1e-12)


@fast
@given(pos, pos, times)
def test_g_symmetric_and_positive(x, y, t):
    g = kernels.absorbing_g(x, y, t).value
    assert g == kernels.absorbing_g(y, x, t).value
    assert g >= 0.0


@fast
@given(pos, pos, times, st.floats(1.5, 20.0))
def test_g_diffusive_scaling(x, y, t, tau):
    r = math.sqrt(tau)
    scaled = r * kernels.absorbing_g(x * r, y * r, tau * t).value
    assert math.isclose(scaled, kernels.absorbing_g(x, y, t).value, rel_tol=1e-9, abs_tol=1e-14)


@fast
@given(st.floats(0.2, 4.0), st.floats(0.2, 4.0))
def test_frakC_symmetric_in_its_parameters(a, c):
    assert math.isclose(kernels.const_frakC(a, c).value, kernels.const_frakC(c, a).value,
                        rel_tol=1e-12)


samples = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=60)


@fast
@given(samples, samples)
def test_ks_bounded_and_symmetric(u, v):
    d = ks_distance(np.array(u), np.array(v))
    assert 0.0 <= d <= 1.0
    assert d == ks_distance(np.array(v), np.array(u))


@fast
@given(samples)
def test_ks_zero_on_itself_and_permutation(u):
    arr = np.array(u)
    assert ks_distance(arr, arr) == 0.0
    assert ks_distance(arr, arr[::-1].copy()) == 0.0


@fast
@given(samples, st.integers(2, 5))
def test_ks_repeated_equals_weighted(u, k):
    arr = np.array(u)
    assert math.isclose(ks_distance(np.repeat(arr, k), arr), 0.0, abs_tol=1e-12)
    assert math.isclose(ks_distance((arr, np.full(arr.size, float(k))), arr), 0.0, abs_tol=1e-12)


@fast
@given(st.lists(st.floats(0.0, 5.0, allow_nan=False), min_size=3, max_size=40),
       st.floats(0.05, 1.0))
def test_table_csv_round_trip(vals, h):
    vals = np.array(vals) + 0.01
    grid = np.arange(vals.size) * h
    vals = vals / np.trapezoid(vals, grid)
    table = DensityTable.from_values(grid, vals, {"case": "rt"})
    back = DensityTable.from_csv(table.to_csv({"case": "rt"}))
    assert np.array_equal(back.grid, table.grid)
    assert np.array_equal(back.values, table.values)
    assert back.context == {"case": "rt"}


@slow
@given(st.integers(0, 2**31 - 1), st.integers(1, 30))
def test_sampler_deterministic_in_seed(seed, n):
    kind = ProcessKind("Y", BoundaryParams(1.0, 1.0, 1.0))
    spec = FddSpec((0.5, 1.0), includes_t0=True)
    first = sample_markov(kind, spec, n, seed)
    second = sample_markov(kind, spec, n, seed)
    assert np.array_equal(first.values, second.values)
    assert first.to_csv() == second.to_csv()
