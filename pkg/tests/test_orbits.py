import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgraph import (
    DIRICHLET,
    KIRCHHOFF,
    NEUMANN,
    ExplosionError,
    ScanConfig,
    counting_function,
    cycle_graph,
    delta_condition,
    density_of_states,
    enumerate_orbits,
    find_spectrum,
    interval,
    metric_graph,
    star_graph,
    trace_power,
)
from qgraph.orbits import orbit_trace_sum
from qgraph.vertex import sigma_matrix

from conftest import random_bcs, random_connected_graph


@pytest.fixture
def s3():
    lengths = [1.0, 1.7]
    bcs = {1: delta_condition(2, 0.9), 2: DIRICHLET, 3: NEUMANN}
    return star_graph(3, lengths), bcs


def test_s3_period_two(s3):
    g, bcs = s3
    k = 1.3
    orbits = enumerate_orbits(g, bcs, k, 2)
    sig = sigma_matrix(bcs[1], 2, k)
    r1 = sig[0, 0]
    assert [o.labels for o in orbits] == [("1>2", "2>1"), ("1>3", "3>1")]
    np.testing.assert_allclose([o.amplitude for o in orbits], [-r1, r1])
    np.testing.assert_allclose([o.length for o in orbits], [2.0, 3.4])


def test_s3_period_four(s3):
    g, bcs = s3
    k = 1.3
    sig = sigma_matrix(bcs[1], 2, k)
    r1, t1 = sig[0, 0], sig[1, 0]
    orbits = enumerate_orbits(g, bcs, k, 4)
    assert len(orbits) == 3
    cover = [o for o in orbits if o.visits_edges() == {0, 1}]
    assert len(cover) == 1 and cover[0].primitive
    # t1^2 r2 r3 with r2 = -1 (Dirichlet), r3 = 1 (Neumann)
    assert np.isclose(cover[0].amplitude, -(t1**2))
    assert np.isclose(cover[0].length, 2 * (1.0 + 1.7))
    reps = sorted(o.repetitions for o in orbits)
    assert reps == [1, 2, 2]
    assert np.isclose(orbit_trace_sum(orbits, k), trace_power(g, bcs, k, 4))


def test_trace_sum_identity_on_random_graphs(rng):
    for _ in range(5):
        g = random_connected_graph(rng, 4)
        bcs = random_bcs(g, rng)
        k = rng.uniform(0.5, 10)
        for nu in range(1, 7):
            tr = trace_power(g, bcs, k, nu)
            assert abs(orbit_trace_sum(enumerate_orbits(g, bcs, k, nu), k) - tr) < 1e-12 * (1 + abs(tr))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6), nu=st.sampled_from([1, 3, 5]))
def test_odd_periods_absent_on_trees(seed, n, nu):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n, extra_edges=0)
    assert enumerate_orbits(g, KIRCHHOFF, None, nu) == []


def test_triangle_period_three():
    g = cycle_graph(3, [1.0, 1.2, 0.9])
    orbits = enumerate_orbits(g, KIRCHHOFF, None, 3)
    assert len(orbits) == 2
    assert all(np.isclose(o.amplitude, 1.0) for o in orbits)   # Kirchhoff at degree 2 is transparent
    assert all(np.isclose(o.length, 3.1) for o in orbits)
    assert abs(trace_power(g, KIRCHHOFF, 2.0, 3)) > 1


def test_include_zero_flag():
    g = star_graph(4, 1.0)
    bcs = {1: KIRCHHOFF, 2: DIRICHLET, 3: DIRICHLET, 4: DIRICHLET}
    with_zero = enumerate_orbits(g, bcs, None, 2)
    assert len(with_zero) == len(enumerate_orbits(g, bcs, None, 2, include_zero=False))
    # Kirchhoff at degree 2 never reflects: period-2 orbits all have zero amplitude
    tri = cycle_graph(3)
    assert all(o.amplitude == 0 for o in enumerate_orbits(tri, KIRCHHOFF, None, 2))
    assert enumerate_orbits(tri, KIRCHHOFF, None, 2, include_zero=False) == []


def test_k_required_for_k_dependent_conditions():
    g = star_graph(3)
    with pytest.raises(ValueError):
        enumerate_orbits(g, {1: delta_condition(2, 1.0), 2: NEUMANN, 3: NEUMANN}, None, 2)


def test_trace_invariant_under_edge_reordering():
    lengths = {(1, 2): 1.0, (2, 3): 1.3, (1, 3): 0.7, (3, 4): 1.9}
    order_a = [(1, 2), (2, 3), (1, 3), (3, 4)]
    order_b = [(3, 4), (1, 3), (1, 2), (2, 3)]
    a = metric_graph(4, order_a, [lengths[e] for e in order_a])
    b = metric_graph(4, order_b, [lengths[e] for e in order_b])
    for nu in (1, 2, 3, 4, 5):
        assert abs(trace_power(a, KIRCHHOFF, 2.3, nu) - trace_power(b, KIRCHHOFF, 2.3, nu)) < 1e-12


def test_explosion_guard():
    with pytest.raises(ExplosionError):
        enumerate_orbits(metric_graph(5, [(i, j) for i in range(1, 6) for j in range(i + 1, 6)], 1.0),
                         KIRCHHOFF, None, 12, max_cycles=1000)


class TestCountingFunction:
    def test_neumann_interval_staircase(self):
        ell = 1.0
        ks = (np.arange(6) + 0.5) * np.pi / ell
        sf = counting_function(interval(ell), NEUMANN, ks, nu_max=400)
        # zero mode plus n positive roots below (n + 1/2) pi
        np.testing.assert_allclose(sf.N, np.arange(1, 7), atol=0.01)

    def test_dirichlet_interval_with_explicit_offset(self):
        ks = (np.arange(1, 6) + 0.5) * np.pi
        sf = counting_function(interval(1.0), DIRICHLET, ks, nu_max=400, smooth_offset=-0.5)
        np.testing.assert_allclose(sf.N, np.arange(1, 6), atol=0.01)

    def test_non_neumann_class_has_no_default_smooth_term(self):
        sf = counting_function(interval(1.0), DIRICHLET, [1.0, 2.0], nu_max=5)
        assert sf.N_smooth is None
        np.testing.assert_array_equal(sf.N, sf.N_oscillatory)

    def test_smooth_slope_and_nu_zero(self):
        g = star_graph(4, [1.0, 1.3, 0.4])
        ks = np.linspace(0.5, 5, 7)
        sf = counting_function(g, KIRCHHOFF, ks, nu_max=0)
        assert sf.total_length == pytest.approx(2 * 2.7)
        assert sf.smooth_slope == pytest.approx(2 * 2.7 / (2 * np.pi))
        np.testing.assert_allclose(sf.N, sf.smooth_slope * ks + 0.5)
        np.testing.assert_allclose(sf.d, sf.smooth_slope)

    def test_staircase_matches_spectrum(self):
        g = star_graph(4, [1.0, 1.3, 0.4])
        pts = find_spectrum(g, KIRCHHOFF, ScanConfig(0.05, 12, 2000))
        roots = np.repeat([p.k for p in pts], [p.multiplicity for p in pts])
        # midpoints between distinct roots, away from jumps
        distinct = np.unique(np.round(roots, 8))
        mids = 0.5 * (distinct[:-1] + distinct[1:])
        sf = counting_function(g, KIRCHHOFF, mids, nu_max=3000)
        exact = 1 + np.searchsorted(roots, mids)   # zero mode included
        assert np.max(np.abs(sf.N - exact)) < 0.15

    def test_density_is_derivative_of_counting_function(self):
        g = star_graph(3, [1.0, 1.4], )
        bcs = {1: delta_condition(2, 0.7), 2: NEUMANN, 3: DIRICHLET}
        k0 = 2.3
        for h in (1e-3, 5e-4):
            N = counting_function(g, bcs, [k0 - h, k0 + h], nu_max=30, smooth_offset=0.0).N
            d = density_of_states(g, bcs, [k0], nu_max=30, smooth_offset=0.0).d[0]
            fd = (N[1] - N[0]) / (2 * h)
            assert abs(fd - d) < 50 * h**2 * (1 + abs(d))

    def test_integral_of_density_is_increment(self):
        g = cycle_graph(3, [1.0, 1.2, 0.9])
        ks = np.linspace(1.0, 3.0, 4001)
        sf = counting_function(g, KIRCHHOFF, ks, nu_max=20)
        integral = np.trapezoid(sf.d, ks) if hasattr(np, "trapezoid") else np.trapz(sf.d, ks)
        assert abs(integral - (sf.N[-1] - sf.N[0])) < 1e-5

    def test_smoothed_density_peaks_at_roots(self):
        ks = np.linspace(0.5, 10, 2000)
        sf = counting_function(interval(1.0), DIRICHLET, ks, nu_max=400, smooth_offset=-0.5, eta=0.05)
        peaks = [i for i in range(1, len(ks) - 1)
                 if sf.d_smoothed[i] > sf.d_smoothed[i - 1] and sf.d_smoothed[i] >= sf.d_smoothed[i + 1]]
        np.testing.assert_allclose(ks[peaks], np.pi * np.arange(1, 4), atol=2 * (ks[1] - ks[0]))

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            counting_function(interval(), KIRCHHOFF, [0.0, 1.0])
        with pytest.raises(ValueError):
            counting_function(interval(), KIRCHHOFF, [1.0], nu_max=-1)
