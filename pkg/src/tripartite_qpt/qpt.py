"""Parameter sweeps and discontinuity detection.

A sweep evaluates tau, concurrence and the two-site entropy on a uniform grid.
The detector flags a gap between neighbouring grid points when its change is
larger than both an absolute floor and ``ratio`` times the median change of the
surrounding gaps (window of 9). ``value_jump`` applies the rule to the values,
``derivative_jump`` to the forward difference quotients. Consecutive flagged
gaps are merged into one event, and slope changes caused by a value jump are
not reported again as derivative jumps. A derivative event also needs a net
slope change above the floor, so a slope spike that returns to its old value
does not count.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import spinmodels as sm
from .errors import ValidationError
from .measures import all_measures

MEASURES = ("tau", "concurrence", "entropy_bits")
CSV_HEADER = ("param", "tau", "concurrence", "entropy_bits", "d_tau", "d_concurrence")
MIN_STEPS, MAX_STEPS = 16, 10**6


@dataclass(frozen=True)
class SweepSpec:
    model: str
    param_min: float
    param_max: float
    steps: int
    backend: str = "ferro_analytic_plus_ed"
    sites: int = 12
    fd_step: float = 1e-3
    workers: int = 1

    def __post_init__(self):
        if self.model not in ("xy", "xxz"):
            raise ValidationError(f"model must be 'xy' or 'xxz', got {self.model!r}")
        if not (math.isfinite(self.param_min) and math.isfinite(self.param_max)):
            raise ValidationError("sweep bounds must be finite")
        if not self.param_min < self.param_max:
            raise ValidationError("param_min must be smaller than param_max")
        if int(self.steps) != self.steps or not MIN_STEPS <= self.steps <= MAX_STEPS:
            raise ValidationError(f"steps must be an integer in [{MIN_STEPS}, {MAX_STEPS}]")
        if self.model == "xy" and self.param_min < 0:
            raise ValidationError("lambda must be >= 0")
        if self.model == "xxz":
            # validates backend, sites and fd_step
            self.point(self.param_min)

    def grid(self) -> np.ndarray:
        return np.linspace(self.param_min, self.param_max, int(self.steps))

    def point(self, x: float):
        if self.model == "xy":
            return sm.XYParams(float(x))
        return sm.XXZParams(float(x), self.backend, self.sites, self.fd_step)


@dataclass(frozen=True)
class SweepRecord:
    param: float
    tau: float
    concurrence: float
    entropy_bits: float
    d_tau: float | None = None
    d_concurrence: float | None = None


@dataclass(frozen=True)
class Event:
    location: float
    kind: str  # "value_jump" | "derivative_jump"
    magnitude: float
    measure: str


@dataclass(frozen=True)
class DiscontinuityReport:
    events: tuple[Event, ...]

    def select(self, measure=None, kind=None) -> list[Event]:
        return [
            e for e in self.events
            if (measure is None or e.measure == measure) and (kind is None or e.kind == kind)
        ]

    def to_json(self) -> dict:
        return {"events": [asdict(e) for e in self.events]}


class SweepPointError(RuntimeError):
    """Wraps a backend failure with the parameter value where it happened."""

    def __init__(self, param, cause):
        super().__init__(f"at param={param!r}: {cause}")
        self.param = param
        self.cause = cause


def _evaluate(spec: SweepSpec, x: float) -> SweepRecord:
    p = spec.point(x)
    try:
        rho = sm.xy_rdm(p) if spec.model == "xy" else sm.xxz_rdm(p)
        tau, conc, ent = all_measures(rho)
    except Exception as exc:
        raise SweepPointError(float(x), exc) from exc
    return SweepRecord(float(x), tau, conc, ent)


def run_sweep(spec: SweepSpec) -> list[SweepRecord]:
    """Evaluate every grid point (optionally on ``spec.workers`` threads) and fill derivatives."""
    xs = spec.grid()
    if spec.workers > 1:
        with ThreadPoolExecutor(spec.workers) as pool:
            records = list(pool.map(lambda x: _evaluate(spec, x), xs))
    else:
        records = [_evaluate(spec, x) for x in xs]
    return central_derivative(records)


def _check_uniform(xs: np.ndarray) -> float:
    steps = np.diff(xs)
    h = (xs[-1] - xs[0]) / (len(xs) - 1)
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)):
        raise ValidationError("records must lie on a uniform increasing grid")
    return h


def central_derivative(records) -> list[SweepRecord]:
    records = list(records)
    if len(records) < 3:
        raise ValidationError("central differences need at least 3 records")
    xs = np.array([r.param for r in records])
    h = _check_uniform(xs)
    tau = np.array([r.tau for r in records])
    conc = np.array([r.concurrence for r in records])
    out = [replace(records[0], d_tau=None, d_concurrence=None)]
    for i in range(1, len(records) - 1):
        out.append(
            replace(
                records[i],
                d_tau=float((tau[i + 1] - tau[i - 1]) / (2 * h)),
                d_concurrence=float((conc[i + 1] - conc[i - 1]) / (2 * h)),
            )
        )
    out.append(replace(records[-1], d_tau=None, d_concurrence=None))
    return out


def _flag_gaps(changes: np.ndarray, floor_abs: float, ratio: float, window: int = 9) -> np.ndarray:
    mags = np.abs(changes)
    half = window // 2
    flags = np.zeros(mags.size, dtype=bool)
    for i in range(mags.size):
        lo, hi = max(0, i - half), min(mags.size, i + half + 1)
        neighbours = np.concatenate([mags[lo:i], mags[i + 1:hi]])
        med = float(np.median(neighbours)) if neighbours.size else 0.0
        flags[i] = mags[i] > max(floor_abs, ratio * med)
    return flags


def _runs(flags: np.ndarray):
    i = 0
    while i < flags.size:
        if flags[i]:
            j = i
            while j + 1 < flags.size and flags[j + 1]:
                j += 1
            yield i, j
            i = j + 1
        else:
            i += 1


def _detect_series(xs, f, measure, floor_abs, ratio) -> list[Event]:
    h = xs[1] - xs[0]
    gaps = np.diff(f)
    value_flags = _flag_gaps(gaps, floor_abs, ratio)
    events = []
    for i, j in _runs(value_flags):
        # gaps i..j span x[i] .. x[j+1]
        events.append(Event(float(0.5 * (xs[i] + xs[j + 1])), "value_jump",
                            float(abs(f[j + 1] - f[i])), measure))

    slopes = gaps / h
    slope_changes = np.diff(slopes)  # change k sits between slopes k, k+1, i.e. at x[k+1]
    deriv_flags = _flag_gaps(slope_changes, floor_abs, ratio)
    near_value = value_flags[:-1] | value_flags[1:]
    deriv_flags &= ~near_value
    for i, j in _runs(deriv_flags):
        net = abs(slopes[j + 1] - slopes[i])
        if net <= floor_abs:
            continue  # slope spike that returns to its old value: a sub-floor step, not a kink
        loc = 0.5 * (xs[i + 1] + xs[j + 1])
        events.append(Event(float(loc), "derivative_jump", float(net), measure))
    return events


def detect_discontinuities(records, floor_abs: float = 1e-3, ratio: float = 10.0,
                           measures=MEASURES) -> DiscontinuityReport:
    """Scan each measure column for value and derivative jumps."""
    records = list(records)
    if len(records) < 5:
        raise ValidationError("discontinuity detection needs at least 5 records")
    xs = np.array([r.param for r in records])
    _check_uniform(xs)
    events = []
    for m in measures:
        f = np.array([getattr(r, m) for r in records], dtype=float)
        events.extend(_detect_series(xs, f, m, floor_abs, ratio))
    events.sort(key=lambda e: (e.location, e.measure, e.kind))
    return DiscontinuityReport(tuple(e for e in events if e.magnitude > 0))


def detect_series(xs, values, floor_abs: float = 1e-3, ratio: float = 10.0,
                  measure: str = "f") -> DiscontinuityReport:
    """Detector on a bare ``(x, f(x))`` series."""
    xs = np.asarray(xs, dtype=float)
    f = np.asarray(values, dtype=float)
    if xs.size < 5 or xs.shape != f.shape:
        raise ValidationError("need at least 5 matching samples")
    _check_uniform(xs)
    return DiscontinuityReport(tuple(_detect_series(xs, f, measure, floor_abs, ratio)))


# -- output ------------------------------------------------------------------

def _fmt(x) -> str:
    return "" if x is None else f"{x:.12g}"


def emit_csv(records, report: DiscontinuityReport | None, path) -> Path:
    """Write the sweep CSV and ``<path>.events.json``."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([_fmt(getattr(r, c)) for c in CSV_HEADER])
    events = report.to_json() if report is not None else {"events": []}
    Path(f"{path}.events.json").write_text(json.dumps(events, indent=1) + "\n")
    return path


def read_csv(path) -> list[SweepRecord]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValidationError(f"unexpected CSV header {reader.fieldnames}")
        return [
            SweepRecord(**{k: (float(v) if v != "" else None) for k, v in row.items()})
            for row in reader
        ]
