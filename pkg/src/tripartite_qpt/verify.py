"""Randomized property suite behind ``tripartite-qpt verify``.

Every property draws from its own child of ``numpy.random.SeedSequence(seed)``,
so a given ``(trials, seed)`` pair always yields the same report.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import ed, qmat, qstate
from . import measures as ms
from .errors import ValidationError

PARTY_C_DIMS = (1, 2, 3, 4, 8)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    max_deviation: float
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<32s} max_dev={self.max_deviation:.3e}  "
                f"tol={self.tolerance:.1e}  n={self.samples}")


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _states(trials, rng):
    for t in range(trials):
        yield qstate.random_pure_state(PARTY_C_DIMS[t % len(PARTY_C_DIMS)], rng)


def route_equivalence(trials, rng, tol, decompositions=3):
    worst, worst_spread = 0.0, 0.0
    for s in _states(trials, rng):
        rho = qstate.partial_trace_C(s)
        ref = ms.tau_from_rdm(rho).tau
        rank = ms.eigen_decomposition(rho).rank
        vals = []
        for _ in range(decompositions):
            d = ms.random_decomposition(rho, int(rng.integers(rank, rank + 4)), rng)
            vals.append(ms.tau_via_ensemble(d).tau)
        worst = max(worst, max(abs(v - ref) for v in vals))
        worst_spread = max(worst_spread, max(vals) - min(vals))
    return [
        PropertyResult("rdm_vs_ensemble", worst, tol, trials * decompositions),
        PropertyResult("decomposition_independence", worst_spread, tol, trials),
    ]


def local_unitary_invariance(trials, rng, tol):
    worst = 0.0
    for s in _states(trials, rng):
        ua, ub, uc = (qmat.random_unitary(d, rng) for d in (2, 2, s.n))
        moved = qstate.apply_local_unitary(s, ua, ub, uc)
        worst = max(worst, abs(ms.tau_from_pure(moved).tau - ms.tau_from_pure(s).tau))
    return [PropertyResult("local_unitary_invariance", worst, tol, trials)]


def biseparable_null(trials, rng, tol=1e-10):
    worst = 0.0
    for kind in ("a|bc", "b|ac", "ab|c"):
        for t in range(trials):
            s = qstate.biseparable_state(kind, rng, PARTY_C_DIMS[t % len(PARTY_C_DIMS)])
            worst = max(worst, ms.tau_from_pure(s).tau)
    return [PropertyResult("biseparable_null", worst, tol, 3 * trials)]


def density_properties(trials, rng):
    flip_err = spec_err = radicand_neg = trace_gap = 0.0
    for t in range(trials):
        rho = random_density(4, rng, rank=1 + t % 4)
        flipped = ms.spin_flip(rho)
        flip_err = max(flip_err, float(np.max(np.abs(ms.spin_flip(flipped) - rho))))
        spec_err = max(spec_err, float(np.max(np.abs(
            np.linalg.eigvalsh(flipped) - np.linalg.eigvalsh(rho)))))
        rad = ms.tau_from_rdm(rho).radicand
        radicand_neg = max(radicand_neg, -rad)
        trace_gap = max(trace_gap, abs(ms.tau_trace_formula(rho) - rad))
    return [
        PropertyResult("spin_flip_involution", flip_err, 1e-12, trials),
        PropertyResult("spin_flip_spectrum", spec_err, 1e-10, trials),
        PropertyResult("radicand_nonnegative", max(radicand_neg, 0.0), 1e-12, trials),
        PropertyResult("radicand_trace_formula", trace_gap, 1e-12, trials),
    ]


def partial_trace_properties(trials, rng, tol=1e-10):
    valid = c_inv = ab_cov = conc = 0.0
    for s in _states(trials, rng):
        rho = qstate.partial_trace_C(s)
        valid = max(valid, qmat.hermiticity_error(rho), abs(np.trace(rho) - 1),
                    max(0.0, -np.linalg.eigvalsh(rho)[0]))
        uc = qmat.random_unitary(s.n, rng)
        rho_c = qstate.partial_trace_C(qstate.apply_local_unitary(s, qmat.I2, qmat.I2, uc))
        c_inv = max(c_inv, float(np.max(np.abs(rho_c - rho))))
        ua, ub = qmat.random_unitary(2, rng), qmat.random_unitary(2, rng)
        u = np.kron(ua, ub)
        rho_ab = qstate.partial_trace_C(qstate.apply_local_unitary(s, ua, ub, np.eye(s.n)))
        ab_cov = max(ab_cov, float(np.max(np.abs(rho_ab - u @ rho @ u.conj().T))))
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v /= np.linalg.norm(v)
        conc = max(conc, abs(ms.concurrence(np.outer(v, v.conj())) - ms.pure_concurrence(v)))
    return [
        PropertyResult("partial_trace_density", valid, tol, trials),
        PropertyResult("partial_trace_c_unitary", c_inv, tol, trials),
        PropertyResult("partial_trace_ab_covariance", ab_cov, tol, trials),
        PropertyResult("pure_concurrence", conc, tol, trials),
    ]


def ed_properties(trials, rng, tol=1e-10):
    probes = max(1, min(trials, 20))
    mf = herm = rdm = 0.0
    for k in range(probes):
        n = 4 + 2 * (k % 3)
        h = (ed.build_xxz_hamiltonian(n, float(rng.uniform(-2, 2))) if k % 2
             else ed.build_xy_hamiltonian(n, float(rng.uniform(0, 3))))
        v = rng.standard_normal(h.dim) + 1j * rng.standard_normal(h.dim)
        u = rng.standard_normal(h.dim) + 1j * rng.standard_normal(h.dim)
        mf = max(mf, float(np.max(np.abs(h.apply(v) - h.dense() @ v))))
        herm = max(herm, abs(np.vdot(u, h.apply(v)) - np.conj(np.vdot(v, h.apply(u)))))
        r = ed.two_site_rdm(v, int(rng.integers(n)), n)
        rdm = max(rdm, qmat.hermiticity_error(r), abs(np.trace(r) - 1),
                  max(0.0, -np.linalg.eigvalsh(r)[0]))
    return [
        PropertyResult("ed_matrix_free_vs_dense", mf, tol, probes),
        PropertyResult("ed_hermiticity", herm, tol, probes),
        PropertyResult("ed_two_site_density", rdm, tol, probes),
    ]


SUITES: tuple[tuple[str, Callable], ...] = (
    ("routes", route_equivalence),
    ("unitary", local_unitary_invariance),
    ("biseparable", biseparable_null),
    ("density", density_properties),
    ("partial_trace", partial_trace_properties),
    ("ed", ed_properties),
)


def run_verification(trials: int = 1000, seed: int = 42, tol: float = 1e-9) -> list[PropertyResult]:
    """Run every property suite; ``tol`` governs the tau comparisons."""
    if int(trials) != trials or trials < 1:
        raise ValidationError("trials must be a positive integer")
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    results = []
    for (name, fn), child in zip(SUITES, children):
        rng = np.random.default_rng(child)
        if name in ("routes", "unitary"):
            results.extend(fn(trials, rng, tol))
        else:
            results.extend(fn(trials, rng))
    return results
