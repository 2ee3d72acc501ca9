import math

import pytest

from twozone.builder import reference_instance
from twozone.detect import detect_all
from twozone.flow import OrbitTrace, TraceOutcome
from twozone.geometry import Zone
from twozone.rk4 import NotClosed, cross_check_cycle, integrate_with_events
from twozone.system import TwoCenterSystem, first_integral


def test_quarter_turn_about_the_origin():
    boundary, system = reference_instance("corrected-2.1")
    # (5, 2) sits in the outer zone and its quarter turn stays there
    traj = integrate_with_events(
        system, boundary, (5.0, 2.0), Zone.OUTER, math.pi / 2, 1e-4
    )
    t, p = traj.samples[-1]
    assert t == pytest.approx(math.pi / 2)
    assert math.hypot(p[0] + 2.0, p[1] - 5.0) < 1e-6
    assert not traj.events


def test_integral_drift_within_zone():
    boundary, system = reference_instance("corrected-2.1")
    # the circle of radius 10 about the origin never meets the loop, so
    # a full revolution exercises the integrator without events
    traj = integrate_with_events(
        system, boundary, (10.0, 0.0), Zone.OUTER, 2 * math.pi, 1e-4
    )
    assert not traj.events
    h0 = first_integral(0.0, (10.0, 0.0))
    worst = max(abs(first_integral(0.0, p) - h0) for _, p in traj.samples)
    assert worst < 1e-10 * h0


def test_event_agrees_with_exact_tracer():
    boundary, system = reference_instance("corrected-2.1")
    traj = integrate_with_events(
        system, boundary, (1.0, 1.0), Zone.OUTER, 2.0, 1e-4
    )
    assert traj.events, "expected a cap crossing"
    _, p, _, cls = traj.events[0]
    assert math.hypot(p[0] + 1.0, p[1] - 1.0) < 1e-6
    assert cls.is_sewing


def test_cross_check_deviation_small():
    boundary, system = reference_instance("corrected-2.1")
    cyc = detect_all(system, boundary).verified[0]
    dev = cross_check_cycle(system, boundary, cyc.trace, 1e-4)
    assert dev < 1e-3


def test_cross_check_envelope_cycle():
    boundary, system = reference_instance("keycurve-3")
    cyc = detect_all(system, boundary).verified[0]
    dev = cross_check_cycle(system, boundary, cyc.trace, 1e-4)
    assert dev < 1e-3


def test_fourth_order_convergence():
    boundary, system = reference_instance("corrected-2.1")
    cyc = detect_all(system, boundary).verified[0]
    hs = [0.4, 0.2, 0.1, 0.05, 0.025]
    devs = [cross_check_cycle(system, boundary, cyc.trace, h) for h in hs]
    for d1, d2 in zip(devs, devs[1:]):
        if d2 < 1e-9:
            break
        assert d1 / d2 >= 8.0


def test_not_closed_rejects_open_trace():
    boundary, system = reference_instance("corrected-2.1")
    open_trace = OrbitTrace([], TraceOutcome.BUDGET)
    with pytest.raises(NotClosed):
        cross_check_cycle(system, boundary, open_trace, 1e-3)
