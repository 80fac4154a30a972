"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and shown in the pytest terminal summary.
"""
import math
import time
import warnings

import numpy as np
import pytest

from stagflow.diagnostics import c1_bound, drift_report, dt_u_bound, lp_functional
from stagflow.errors import BlowUp, PhaseCollapse
from stagflow.eulerian import SimConfig, convergence_study, evolve, temporal_study
from stagflow.lagrangian import eulerian_velocity, evolve_flow, flow_jacobian, transported_uxx, uxx_along_flow
from stagflow.lift import divergence, euler_residual, sample_points, twophase_residual
from stagflow.operators import Dimension, Field, PeriodicGrid, deriv, rhs_eq3
from stagflow.separable import BlowUpAt, exact_derivative_identity, riccati_T
from stagflow.twophase import TwoPhaseState, evolve_twophase, partition_residual, polar_oracle

from conftest import ACCEPTANCE_LINES, bandlimited

TWO_PI = 2 * np.pi


def report(k: int, title: str, checks: list[tuple[str, bool]]) -> None:
    ok = all(c for _, c in checks)
    detail = "; ".join(f"{d} [{'ok' if c else 'FAIL'}]" for d, c in checks)
    line = f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def sine(grid, amp):
    return grid.sample(lambda x: amp * np.sin(TWO_PI * x))


@pytest.fixture(scope="module")
def run_n3():
    g = PeriodicGrid(256)
    dim = Dimension(3)
    t0 = time.perf_counter()
    state, recs = evolve(sine(g, 0.5), SimConfig(dim, M=256, dt=1e-3, T_end=5.0, record_every=10))
    return state, recs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def run_n5():
    g = PeriodicGrid(256)
    u0 = sine(g, 0.5)
    state, recs = evolve(u0, SimConfig(Dimension(5), M=256, dt=1e-3, T_end=2.0, record_every=10))
    return u0, state, recs


@pytest.fixture(scope="module")
def flow_n3():
    g = PeriodicGrid(256)
    cfg = SimConfig(Dimension(3), M=256, dt=2e-3, T_end=1.0, record_every=50)
    return sine(g, 0.1), cfg, evolve_flow(sine(g, 0.1), cfg)


@pytest.fixture(scope="module")
def canonical_twophase():
    s0 = TwoPhaseState.initial(1.0, -1.0, 0.2, 0.7, Dimension(3))
    t0 = time.perf_counter()
    series = evolve_twophase(s0, 2e-3, 50.0, record_every=10)
    return s0, series, time.perf_counter() - t0


def test_criterion_01_mean_conservation(run_n3):
    _, recs, elapsed = run_n3
    drift = max(abs(r.mean_u - recs[0].mean_u) for r in recs)
    report(1, "mean conservation (n=3, T=5)", [
        (f"|mean drift| = {drift:.2e} <= 1e-10", drift <= 1e-10),
        (f"runtime {elapsed:.2f}s < 10s", elapsed < 10.0),
    ])


def test_criterion_02_lp_conservation(run_n5):
    u0, state, recs = run_n5
    d = drift_report(recs, Dimension(5))
    ctrl = abs(lp_functional(state.u, 3.0) - lp_functional(u0, 3.0)) / lp_functional(u0, 3.0)
    report(2, "L^p conservation (n=5, p=2, T=2)", [
        (f"relative drift of |u_xx|_2 = {d.uxx_drift_rel:.2e} <= 1e-5", d.uxx_drift_rel <= 1e-5),
        (f"control p'=3 drift = {ctrl:.2e} > 1e-3", ctrl > 1e-3),
    ])


def test_criterion_03_transport_identity(flow_n3):
    u0, _, states = flow_n3
    u0xx = deriv(u0, 2).values
    err3 = max(np.abs(uxx_along_flow(fs).values - u0xx).max() for fs in states)
    g = PeriodicGrid(256)
    dim5 = Dimension(5)
    states5 = evolve_flow(sine(g, 0.1), SimConfig(dim5, M=256, dt=2e-3, T_end=1.0, record_every=50))
    err5 = max(
        np.abs(uxx_along_flow(fs).values * flow_jacobian(fs).values ** dim5.b - u0xx).max() for fs in states5
    )
    exact5 = max(
        np.abs(uxx_along_flow(fs).values - transported_uxx(fs, deriv(u0, 2), dim5).values).max() for fs in states5
    )
    report(3, "transport identity along characteristics (T=1)", [
        (f"n=3 max|u_xx o gamma - u0''| = {err3:.2e} <= 1e-4", err3 <= 1e-4),
        (f"n=5 max|u_xx o gamma * gamma_x^(1/2) - u0''| = {err5:.2e} <= 1e-3", err5 <= 1e-3),
        (f"n=5 transported form agrees to {exact5:.2e}", exact5 <= 1e-3),
    ])


def test_criterion_04_c1_bounds(run_n3, run_n5):
    checks = []
    for n, recs in ((3, run_n3[1]), (5, run_n5[2])):
        dim = Dimension(n)
        B = c1_bound(recs[0], dim)
        Bt = dt_u_bound(recs[0], dim)
        c1 = max(r.c1_norm_u for r in recs)
        dt_u = max(r.dt_u_sup for r in recs)
        checks.append((f"n={n} max C1 {c1:.3f} <= {B:.3f} + 1e-3", c1 <= B + 1e-3))
        checks.append((f"n={n} max |u_t| {dt_u:.3f} <= {Bt:.1f} + 1e-3", dt_u <= Bt + 1e-3))
    report(4, "a-priori C1 and time-derivative bounds", checks)


def test_criterion_05_dichotomy():
    g = PeriodicGrid(512)
    u0 = sine(g, 2.0)
    blew, t_blow, min_ux = False, None, None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        try:
            _, recs2 = evolve(u0, SimConfig(Dimension(2), M=512, dt=2e-4, T_end=5.0, adaptive=True,
                                            record_every=500))
            min_ux = min(r.min_dxu for r in recs2)
        except BlowUp as e:
            blew, t_blow = True, e.t
            min_ux = min(h[1] for h in e.history)
        _, recs3 = evolve(u0, SimConfig(Dimension(3), M=512, dt=2e-4, T_end=5.0, record_every=500))
    B = c1_bound(recs3[0], Dimension(3))
    c1 = max(r.c1_norm_u for r in recs3)
    report(5, "n=2 / n=3 dichotomy for the amplitude-2 sine", [
        (f"n=2 BlowUp before T=5 (raised={blew}, t={t_blow})", blew and t_blow < 5.0),
        (f"n=2 min u_x = {min_ux:.3g} < -1e3", min_ux < -1e3),
        (f"n=3 reaches T={recs3[-1].t:g} with C1 {c1:.3f} <= {B:.3f} + 1e-3",
         recs3[-1].t == pytest.approx(5.0) and c1 <= B + 1e-3),
    ])


def test_criterion_06_cross_validation(flow_n3):
    u0, cfg, states = flow_n3
    fs = next(s for s in states if abs(s.t - 0.5) < 1e-9)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        eul, _ = evolve(u0, SimConfig(cfg.dim, M=256, dt=cfg.dt, T_end=0.5, record_every=10**6))
    diff = float(np.abs(eulerian_velocity(fs).values - eul.u.values).max())
    report(6, "Eulerian vs Lagrangian (n=3, T=0.5, M=256)", [(f"L-inf difference {diff:.2e} <= 1e-3", diff <= 1e-3)])


def test_criterion_07_twophase_dynamics(canonical_twophase):
    s0, series, elapsed = canonical_twophase
    last = series[-1]
    N = max(abs(s.N) for s in series)
    part = max(abs(partition_residual(s0, s)) for s in series)
    picks = [s for s in series if any(abs(s.t - t) < 1e-9 for t in (5.0, 25.0, 50.0))]
    r, _ = polar_oracle(s0, [s.t for s in picks])
    polar = max(abs(math.hypot(s.p, s.q) - rr) / rr for s, rr in zip(picks, r))
    report(7, "two-phase exact dynamics (n=3, T=50)", [
        (f"N residual {N:.1e} <= 1e-12", N <= 1e-12),
        (f"partition identity {part:.1e} <= 1e-8", part <= 1e-8),
        (f"phi={last.phi:.6f}, psi={last.psi:.6f} within 1e-3 of 0.45",
         abs(last.phi - 0.45) <= 1e-3 and abs(last.psi - 0.45) <= 1e-3),
        (f"int_p={last.int_p:.6f} within 1e-3 of ln 2", abs(last.int_p - math.log(2)) <= 1e-3),
        (f"polar oracle relative error {polar:.1e} <= 1e-6", polar <= 1e-6),
        (f"runtime {elapsed:.3f}s < 1s", elapsed < 1.0),
    ])


def test_criterion_08_twophase_global_existence():
    checks = []
    for n in (2.0, 3.0, 5.0):
        s0 = TwoPhaseState.initial(1.0, -1.0, 0.2, 0.7, Dimension(n))
        try:
            t = evolve_twophase(s0, 2e-3, 50.0, record_every=1000)[-1].t
            checks.append((f"n={n:g} reached t={t:g}", abs(t - 50.0) < 1e-9))
        except PhaseCollapse as e:
            checks.append((f"n={n:g} collapsed at t={e.t:g}", False))
    report(8, "two-phase global existence", checks)


def test_criterion_09_exact_derivative_identity():
    rng = np.random.default_rng(2024)
    g = PeriodicGrid(256)
    worst = {}
    for n in (4, 5, 7, 10):
        dim = Dimension(n)
        w = 0.0
        for _ in range(100):
            v = bandlimited(g, rng, modes=8)
            # fix the scale: sup |X''| = 1
            v /= np.abs(deriv(Field(g, v), 2).values).max()
            w = max(w, abs(exact_derivative_identity(Field(g, v), dim)))
        worst[n] = w
    report(9, "exact-derivative identity (100 profiles per n)",
           [(f"n={n} max |integral| = {w:.1e} <= 1e-8", w <= 1e-8) for n, w in worst.items()])


def test_criterion_10_riccati():
    blow = riccati_T(1.0, 1.0, 1.0)
    ts = np.linspace(0, 100, 1001)
    decay = [riccati_T(-1.0, 1.0, t) for t in ts]
    err = max(abs(v - 1 / (1 + t)) for v, t in zip(decay, ts))
    report(10, "Riccati time factor", [
        (f"lambda=1, T0=1 gives {blow}", isinstance(blow, BlowUpAt) and blow.t_star == 1.0),
        (f"just before t*: T(0.999) = {riccati_T(1.0, 1.0, 0.999):.1f}", riccati_T(1.0, 1.0, 0.999) > 999),
        (f"lambda=-1 matches 1/(1+t) to {err:.1e} and decreases",
         err <= 1e-14 and all(b < a for a, b in zip(decay, decay[1:]))),
    ])


def test_criterion_11_lift(canonical_twophase):
    dim = Dimension(3)
    # a snapshot the grid still resolves; later on u_xxx grows without bound at M=256
    state, _ = evolve(sine(PeriodicGrid(256), 0.5), SimConfig(dim, M=256, dt=1e-3, T_end=0.5, record_every=10**6))
    rng = np.random.default_rng(11)
    pts = sample_points(3, 100, rng, radius=1.0)
    div = float(np.abs(divergence(state.u, pts, dim)).max())
    res = euler_residual(state.u, rhs_eq3(state.u, dim), dim, pts)
    s0, series, _ = canonical_twophase
    tp = 0.0
    for s in series[::250]:
        tp = max(tp, twophase_residual(s, sample_points(3, 100, rng, avoid=(s.phi, s.psi), margin=0.05)))
    report(11, "lift certification", [
        (f"Eulerian snapshot t={state.t:g}: divergence {div:.1e} <= 1e-8", div <= 1e-8),
        (f"Eulerian snapshot: momentum residual {res:.1e} <= 1e-4", res <= 1e-4),
        (f"two-phase exact solution: residual {tp:.1e} <= 1e-6", tp <= 1e-6),
    ])


def test_criterion_12_convergence():
    dim = Dimension(3)
    g = PeriodicGrid(256)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        tt = temporal_study(sine(g, 0.1), SimConfig(dim, M=256, T_end=0.5), [0.02, 0.01, 0.005, 0.0025])
    orders = tt.orders()
    st = convergence_study(lambda gr: sine(gr, 0.5), SimConfig(dim, dt=1e-3, T_end=0.5), [32, 64, 128, 256])
    report(12, "convergence", [
        ("temporal orders " + ", ".join(f"{o:.3f}" for o in orders) + " >= 3.8", min(orders) >= 3.8),
        ("spatial errors " + ", ".join(f"{e:.1e}" for e in st.errors) + " strictly decreasing",
         st.strictly_decreasing()),
    ])


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v", "-s"]))
