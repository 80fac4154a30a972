import numpy as np
import pytest

from stagflow.errors import FlowDegenerate
from stagflow.eulerian import SimConfig, evolve
from stagflow.lagrangian import (
    FlowState, compose, eulerian_velocity, evolve_flow, flow_jacobian, jacobian_from_integral, transported_uxx,
    uxx_along_flow,
)
from stagflow.operators import Dimension, PeriodicGrid, deriv

TWO_PI = 2 * np.pi


def sine(g, amp=0.1):
    return g.sample(lambda x: amp * np.sin(TWO_PI * x))


@pytest.fixture(scope="module")
def flow_n3():
    g = PeriodicGrid(128)
    cfg = SimConfig(Dimension(3), M=128, dt=2e-3, T_end=0.5, record_every=125)
    return sine(g), cfg, evolve_flow(sine(g), cfg)


class TestTrivialFlows:
    def test_constant_velocity(self):
        g = PeriodicGrid(32)
        u0 = g.sample(lambda x: 0.25 + 0 * x)
        states = evolve_flow(u0, SimConfig(Dimension(3), M=32, dt=0.01, T_end=0.2))
        last = states[-1]
        assert np.abs(last.gamma - (g.x + 0.25 * last.t)).max() <= 1e-14
        assert np.abs(last.gdot - 0.25).max() <= 1e-15
        assert np.abs(flow_jacobian(last).values - 1).max() <= 1e-13

    def test_zero_velocity(self):
        g = PeriodicGrid(32)
        states = evolve_flow(g.sample(lambda x: 0 * x), SimConfig(Dimension(4), M=32, dt=0.01, T_end=0.1))
        assert all(np.array_equal(s.gamma, g.x) for s in states)

    def test_identity_flow_transport(self):
        g = PeriodicGrid(32)
        fs = FlowState(0.0, g.x.copy(), np.zeros(32), np.zeros(32))
        u0xx = deriv(sine(g), 2)
        for n in (3.0, 5.0, 9.0):
            assert np.array_equal(transported_uxx(fs, u0xx, Dimension(n)).values, u0xx.values)


class TestCrossChecks:
    def test_matches_eulerian(self, flow_n3):
        u0, cfg, states = flow_n3
        eul, _ = evolve(u0, cfg)
        assert np.abs(eulerian_velocity(states[-1]).values - eul.u.values).max() <= 1e-3

    def test_two_jacobian_routes(self, flow_n3):
        _, _, states = flow_n3
        for fs in states:
            assert np.abs(flow_jacobian(fs).values - jacobian_from_integral(fs).values).max() <= 1e-4

    def test_uxx_constant_along_paths_n3(self, flow_n3):
        u0, _, states = flow_n3
        u0xx = deriv(u0, 2)
        for fs in states:
            assert np.array_equal(transported_uxx(fs, u0xx, Dimension(3)).values, u0xx.values)
            assert np.abs(uxx_along_flow(fs).values - u0xx.values).max() <= 1e-4

    def test_n5_against_eulerian_composed(self):
        g = PeriodicGrid(128)
        dim = Dimension(5)
        cfg = SimConfig(dim, M=128, dt=2e-3, T_end=0.5, record_every=10**6)
        u0 = sine(g)
        fs = evolve_flow(u0, cfg)[-1]
        eul, _ = evolve(u0, cfg)
        composed = compose(deriv(eul.u, 2), fs)
        assert np.abs(composed.values - transported_uxx(fs, deriv(u0, 2), dim).values).max() <= 1e-3

    def test_periodic_displacement(self, flow_n3):
        _, _, states = flow_n3
        last = states[-1]
        assert np.all(np.diff(last.gamma) > 0)
        assert last.gamma[-1] - last.gamma[0] < 1.0


def test_degenerate_map_detected():
    g = PeriodicGrid(64)
    with pytest.raises(FlowDegenerate) as info:
        evolve_flow(sine(g, 0.5), SimConfig(Dimension(1.5), M=64, dt=1e-3, T_end=1.0), eps_jac=0.05)
    assert info.value.min_jacobian < 0.05
