import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stagflow.errors import DimensionUnsupported
from stagflow.operators import Dimension, Field, PeriodicGrid
from stagflow.separable import (
    BlowUpAt, SeparableConfig, exact_derivative_identity, implied_lambda, riccati_T, separable_residual,
)

from conftest import bandlimited

TWO_PI = 2 * np.pi


class TestRiccati:
    def test_unit_blowup(self):
        assert riccati_T(1.0, 1.0, 0.5) == 2.0
        assert riccati_T(1.0, 1.0, 1.0) == BlowUpAt(1.0)
        assert riccati_T(1.0, 1.0, 3.0) == BlowUpAt(1.0)

    def test_zero_lambda(self):
        assert all(riccati_T(0.0, 1.7, t) == 1.7 for t in (0.0, 5.0, 1e6))

    def test_decay(self):
        for t in (0.0, 1.0, 10.0, 1e3):
            assert riccati_T(-1.0, 1.0, t) == pytest.approx(1 / (1 + t))

    @settings(max_examples=50, deadline=None)
    @given(lam=st.floats(-3, 3), T0=st.floats(-3, 3), t=st.floats(0, 0.2))
    def test_solves_ode(self, lam, T0, t):
        h = 1e-6
        vals = [riccati_T(lam, T0, s) for s in (t - h, t, t + h)]
        if any(isinstance(v, BlowUpAt) for v in vals) or t < h or abs(lam * T0) * (t + h) > 0.5:
            return
        deriv = (vals[2] - vals[0]) / (2 * h)
        assert deriv == pytest.approx(lam * vals[1] ** 2, rel=1e-5, abs=1e-8)


class TestIdentity:
    def test_sine(self):
        X = PeriodicGrid(256).sample(lambda x: np.sin(TWO_PI * x))
        assert abs(exact_derivative_identity(X, Dimension(5))) <= 1e-8

    def test_zero(self):
        X = PeriodicGrid(64).sample(lambda x: 0 * x)
        assert exact_derivative_identity(X, Dimension(5)) == 0.0

    @pytest.mark.parametrize("n", [3.0, 2.0])
    def test_needs_n_above_3(self, n):
        with pytest.raises(DimensionUnsupported):
            exact_derivative_identity(PeriodicGrid(64).sample(np.sin), Dimension(n))

    def test_random_profile_n7(self):
        g = PeriodicGrid(256)
        v = bandlimited(g, np.random.default_rng(7))
        X = Field(g, v / np.abs(Field(g, v).values).max())
        assert abs(exact_derivative_identity(X, Dimension(7))) <= 1e-8


class TestResidual:
    def test_zero_and_constant(self):
        g = PeriodicGrid(64)
        for c in (0.0, 2.5):
            cfg = SeparableConfig(1.0, 1.0, g.sample(lambda x: c + 0 * x), Dimension(5))
            assert np.abs(separable_residual(cfg).values).max() <= 1e-12

    def test_sine_not_a_solution(self):
        g = PeriodicGrid(64)
        cfg = SeparableConfig(0.0, 1.0, g.sample(lambda x: np.sin(TWO_PI * x)), Dimension(3))
        expected = -4 * np.pi**3 * np.sin(4 * np.pi * g.x)
        assert np.abs(separable_residual(cfg).values - expected).max() <= 1e-9

    def test_implied_lambda_recovers_weight_constant(self):
        # for any smooth profile the weighted residual returns the lambda it was built with
        g = PeriodicGrid(256)
        X = Field(g, bandlimited(g, np.random.default_rng(3), modes=4) / 50)
        lam, bound = implied_lambda(SeparableConfig(0.7, 1.0, X, Dimension(5)))
        assert lam == pytest.approx(0.7, abs=1e-12)
        assert bound > 0

    def test_implied_lambda_empty_constraint(self):
        X = PeriodicGrid(64).sample(lambda x: 0 * x)
        with pytest.raises(ValueError):
            implied_lambda(SeparableConfig(1.0, 1.0, X, Dimension(5)))
