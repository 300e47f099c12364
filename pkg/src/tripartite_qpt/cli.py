"""Command line front end.

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 property failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import ed, qstate, qpt
from . import measures as ms
from .errors import NumericalError, PropertyFailure, ValidationError
from .verify import run_verification

log = logging.getLogger("tripartite_qpt")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_PROPERTY = 0, 1, 2, 3


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever ``sys.stderr`` is at emit time."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, _):
        pass


def _setup_logging() -> None:
    if not any(isinstance(h, _StderrHandler) for h in log.handlers):
        handler = _StderrHandler()
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        log.addHandler(handler)
        log.setLevel(logging.INFO)
        log.propagate = False


def _g(x: float) -> str:
    return f"{x:.12g}"


def cmd_tau(args) -> int:
    if args.state:
        rho = qstate.partial_trace_C(qstate.load_state(args.state))
    else:
        rho = qstate.load_rdm(args.rdm)
    t = ms.tau_from_rdm(rho)
    print(f"tau {_g(t.tau)}")
    print(f"radicand {_g(t.radicand)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = qpt.SweepSpec(
        model=args.model, param_min=args.min, param_max=args.max, steps=args.steps,
        backend=args.backend, sites=args.sites, fd_step=args.fd_step, workers=args.workers,
    )
    try:
        records = qpt.run_sweep(spec)
    except qpt.SweepPointError as exc:
        log.error("%s", exc)
        return EXIT_NUMERICAL if isinstance(exc.cause, NumericalError) else EXIT_VALIDATION
    report = qpt.detect_discontinuities(records, floor_abs=args.floor, ratio=args.ratio)
    qpt.emit_csv(records, report, args.out)
    print(f"{len(records)} records -> {args.out}; {len(report.events)} events")
    for e in report.events:
        print(f"  {e.kind:<16s} {e.measure:<13s} at {_g(e.location)}  magnitude {_g(e.magnitude)}")
    return EXIT_OK


def cmd_ed(args) -> int:
    h = ed.build_hamiltonian(args.model, args.sites, args.param)
    g = ed.ground_state(h, method=args.method)
    rho = ed.two_site_rdm(g, args.bond)
    tau, conc, ent = ms.all_measures(rho)
    report = {
        "model": h.model,
        "sites": g.sites,
        "param": h.coupling,
        "energy_total": g.energy_total,
        "energy_per_site": g.energy_per_site,
        "degeneracy_flag": g.degeneracy_flag,
        "multiplet_size": int(g.multiplet.shape[1]),
        "residual": g.residual,
        "bond": args.bond,
        "bond_correlators": dict(zip(("xx", "yy", "zz"), ed.bond_correlators(g, args.bond))),
        "two_site_rdm": qstate.rdm_to_json(rho),
        "tau": tau,
        "concurrence": conc,
        "entropy_bits": ent,
    }
    text = json.dumps(report, indent=1)
    if args.report:
        Path(args.report).write_text(text + "\n")
        print(f"report -> {args.report}")
    else:
        print(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = args.seed if args.verify_seed is None else args.verify_seed
    results = run_verification(args.trials, seed, args.tol)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties passed")
    if failed:
        raise PropertyFailure(", ".join(failed))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tripartite-qpt", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=42, help="seed for all randomness")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tau", help="tau of a state or two-qubit density file")
    src = t.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", help="state JSON {dims, amplitudes}")
    src.add_argument("--rdm", help="density JSON {dim, entries}")
    t.set_defaults(func=cmd_tau)

    s = sub.add_parser("sweep", help="parameter sweep with discontinuity report")
    s.add_argument("--model", choices=("xy", "xxz"), required=True)
    s.add_argument("--min", type=float, required=True)
    s.add_argument("--max", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--out", required=True, help="CSV path; events go to <out>.events.json")
    s.add_argument("--sites", type=int, default=12, help="ED ring size for xxz")
    s.add_argument("--fd-step", type=float, default=1e-3)
    s.add_argument("--backend", choices=("ferro_analytic_plus_ed", "ed_only"),
                   default="ferro_analytic_plus_ed")
    s.add_argument("--floor", type=float, default=1e-3, help="absolute jump floor")
    s.add_argument("--ratio", type=float, default=10.0, help="jump / rolling-median ratio")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    e = sub.add_parser("ed", help="exact-diagonalization ground-state report")
    e.add_argument("--model", choices=("xy", "xxz"), required=True)
    e.add_argument("--param", type=float, required=True, help="lambda (xy) or delta (xxz)")
    e.add_argument("--sites", type=int, required=True)
    e.add_argument("--bond", type=int, default=0)
    e.add_argument("--method", choices=("auto", "dense", "iterative"), default="auto")
    e.add_argument("--report", help="write JSON here instead of stdout")
    e.set_defaults(func=cmd_ed)

    v = sub.add_parser("verify", help="randomized property suite")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--seed", dest="verify_seed", type=int, default=None,
                   help="overrides the global --seed")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    _setup_logging()
    config = {k: v for k, v in vars(args).items() if k != "func"}
    log.info("config %s", json.dumps(config, sort_keys=True))
    try:
        return args.func(args)
    except ValidationError as exc:
        log.error("validation error: %s", exc)
        return EXIT_VALIDATION
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except PropertyFailure as exc:
        log.error("property failure: %s", exc)
        return EXIT_PROPERTY
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
