import json
import math

import numpy as np
import pytest

from tripartite_qpt import qpt
from tripartite_qpt.errors import ValidationError

LAMBDA_STAR = 2 / ((math.sqrt(2) - 1) * math.pi)


def rec(x, tau=0.0, c=0.0, s=0.0):
    return qpt.SweepRecord(float(x), float(tau), float(c), float(s))


def test_derivative_constant_and_linear():
    xs = np.linspace(-1, 2, 31)
    out = qpt.central_derivative([rec(x, 0.3, x) for x in xs])
    assert out[0].d_tau is None and out[-1].d_concurrence is None
    for r in out[1:-1]:
        assert abs(r.d_tau) <= 1e-12
        assert abs(r.d_concurrence - 1.0) <= 1e-12


def test_derivative_rejects_bad_grids():
    with pytest.raises(ValidationError):
        qpt.central_derivative([rec(0), rec(1)])
    with pytest.raises(ValidationError):
        qpt.central_derivative([rec(0), rec(1), rec(3)])


def test_step_function_single_value_jump():
    xs = np.linspace(-1, 1, 101)
    rep = qpt.detect_series(xs, (xs >= 0).astype(float))
    assert len(rep.events) == 1
    e = rep.events[0]
    assert e.kind == "value_jump"
    assert abs(e.location) <= xs[1] - xs[0]
    assert e.magnitude == pytest.approx(1.0)


@pytest.mark.parametrize("fn", [np.sin, np.exp, lambda x: x**3 - x, lambda x: 0 * x + 2])
def test_smooth_inputs_raise_no_events(fn):
    xs = np.linspace(-2, 2, 401)
    assert qpt.detect_series(xs, fn(xs)).events == ()


@pytest.mark.parametrize("kink", [-0.3, 0.0, 0.4567])
def test_slope_break_located(kink):
    xs = np.linspace(-1, 1, 201)
    f = np.where(xs < kink, 0.2 * xs, 0.2 * kink - 0.5 * (xs - kink))
    rep = qpt.detect_series(xs, f)
    assert len(rep.events) == 1
    e = rep.events[0]
    assert e.kind == "derivative_jump"
    assert abs(e.location - kink) <= xs[1] - xs[0]
    assert e.magnitude == pytest.approx(0.7, rel=1e-6)


def test_value_jump_not_double_counted():
    xs = np.linspace(0, 1, 101)
    f = np.where(xs < 0.5, 1.0, 0.2 + 0.3 * xs)
    rep = qpt.detect_series(xs, f)
    assert [e.kind for e in rep.events] == ["value_jump"]


def test_floor_suppresses_tiny_steps():
    xs = np.linspace(0, 1, 101)
    f = np.where(xs < 0.5, 0.0, 1e-4)
    assert qpt.detect_series(xs, f).events == ()
    assert len(qpt.detect_series(xs, f, floor_abs=1e-5).events) == 1


def test_sweep_spec_validation():
    with pytest.raises(ValidationError):
        qpt.SweepSpec("xy", 0, 3, 4)
    with pytest.raises(ValidationError):
        qpt.SweepSpec("xy", 3, 0, 100)
    with pytest.raises(ValidationError):
        qpt.SweepSpec("xy", -1, 0, 100)
    with pytest.raises(ValidationError):
        qpt.SweepSpec("ising", 0, 1, 100)
    with pytest.raises(ValidationError):
        qpt.SweepSpec("xxz", -1, 0, 100, sites=7)
    with pytest.raises(ValidationError):
        qpt.SweepSpec("xy", 0, float("nan"), 100)


def test_xy_sweep_signals():
    recs = qpt.run_sweep(qpt.SweepSpec("xy", 0.0, 3.0, 601))
    h = 3.0 / 600
    below = [r for r in recs if r.param < 1]
    assert max(abs(r.tau - 0.4518904913) for r in below) < 1e-9
    assert all(abs(r.d_tau) < 1e-12 for r in below[1:-1])
    # closed form: tau leaves the plateau upward (one-sided slope about +0.155)
    just_above = [r for r in recs if 1 < r.param < 1.1]
    assert all(r.d_tau > 0 for r in just_above)
    # concurrence touches zero at lambda* within one grid step
    star = min(recs, key=lambda r: abs(r.param - LAMBDA_STAR))
    assert star.concurrence < 0.005
    zero_from = min(r.param for r in recs if r.concurrence == 0.0)
    assert abs(zero_from - LAMBDA_STAR) <= h

    rep = qpt.detect_discontinuities(recs)
    tau_events = rep.select("tau")
    assert len(tau_events) == 1
    assert tau_events[0].kind == "derivative_jump"
    assert abs(tau_events[0].location - 1.0) <= 0.005
    conc = rep.select("concurrence", "derivative_jump")
    assert any(abs(e.location - LAMBDA_STAR) < 0.05 for e in conc)


def test_xxz_ferro_branch_flat():
    recs = qpt.run_sweep(qpt.SweepSpec("xxz", -2.0, -1.2, 41))
    assert len({(r.tau, r.concurrence, r.entropy_bits) for r in recs}) == 1


def test_workers_match_serial():
    spec = qpt.SweepSpec("xy", 0.5, 2.0, 64)
    par = qpt.SweepSpec("xy", 0.5, 2.0, 64, workers=4)
    assert qpt.run_sweep(spec) == qpt.run_sweep(par)


def test_sweep_point_error_carries_parameter(monkeypatch):
    def boom(p):
        raise ArithmeticError("synthetic")

    monkeypatch.setattr(qpt.sm, "xy_rdm", boom)
    with pytest.raises(qpt.SweepPointError) as info:
        qpt.run_sweep(qpt.SweepSpec("xy", 0.0, 1.0, 16))
    assert info.value.param == 0.0


def test_csv_header_only_and_small(tmp_path):
    p = qpt.emit_csv([], None, tmp_path / "empty.csv")
    assert p.read_text().splitlines() == [",".join(qpt.CSV_HEADER)]
    assert json.loads((tmp_path / "empty.csv.events.json").read_text()) == {"events": []}
    recs = qpt.central_derivative([rec(x, x, 1 - x, 0.5) for x in (0.0, 0.5, 1.0)])
    p = qpt.emit_csv(recs, None, tmp_path / "three.csv")
    lines = p.read_text().splitlines()
    assert len(lines) == 4
    assert lines[1].endswith(",,")  # endpoint derivatives left empty


def test_csv_round_trip_and_bytes(tmp_path):
    recs = qpt.run_sweep(qpt.SweepSpec("xy", 0.0, 3.0, 121))
    rep = qpt.detect_discontinuities(recs)
    a = qpt.emit_csv(recs, rep, tmp_path / "a.csv")
    back = qpt.read_csv(a)
    for r, s in zip(recs, back):
        for col in qpt.CSV_HEADER:
            x, y = getattr(r, col), getattr(s, col)
            assert (x is None and y is None) or abs(x - y) <= 1e-10
    b = qpt.emit_csv(qpt.run_sweep(qpt.SweepSpec("xy", 0.0, 3.0, 121)), rep, tmp_path / "b.csv")
    assert a.read_bytes() == b.read_bytes()
    events = json.loads((tmp_path / "a.csv.events.json").read_text())["events"]
    assert {"location", "kind", "magnitude", "measure"} <= set(events[0])


def test_read_csv_rejects_wrong_header(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValidationError):
        qpt.read_csv(p)
