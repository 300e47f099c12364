"""Nearest-neighbour reduced density matrices of the two chain models.

Both models share the flip-symmetric two-site form (basis uu, ud, du, dd)::

        | u  0  0  0 |
        | 0  w  z  0 |
        | 0  z  w  0 |
        | 0  0  0  u |

XY chain with three-spin interaction: ``G = 2/pi`` for ``lam < 1`` and
``2/(pi lam)`` otherwise, with ``u = (1 - G^2)/4``, ``w = (1 + G^2)/4``, ``z = G/2``.

XXZ chain: with ``e`` the ground-state energy per site and ``e' = de/ddelta``,
``u = (1 + e')/4`` and ``z = (e - delta e')/4``; unit trace fixes ``w = (1 - e')/4``.
For ``delta < -1`` the ground state is the ferromagnet (``e = delta``, ``e' = 1``);
elsewhere the energy comes from exact diagonalization of a finite ring.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import ed
from .errors import NumericalError, ValidationError
from .measures import TauValue, tau_from_rdm

LAMBDA_C = 1.0
BACKENDS = ("ferro_analytic_plus_ed", "ed_only")


@dataclass(frozen=True)
class XYParams:
    lam: float

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ValidationError(f"lambda must be finite and >= 0, got {self.lam}")


@dataclass(frozen=True)
class XXZParams:
    delta: float
    backend: str = "ferro_analytic_plus_ed"
    sites_for_ed: int = 12
    fd_step: float = 1e-3

    def __post_init__(self):
        if not math.isfinite(self.delta):
            raise ValidationError("delta must be finite")
        if self.backend not in BACKENDS:
            raise ValidationError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        n = self.sites_for_ed
        if int(n) != n or n < 8 or n % 2 or n > ed.MAX_SITES:
            raise ValidationError(f"sites_for_ed must be even, 8 <= N <= {ed.MAX_SITES}, got {n}")
        if not self.fd_step > 0:
            raise ValidationError("fd_step must be positive")


class RdmElements(NamedTuple):
    u: float
    w: float
    z: float

    def matrix(self) -> np.ndarray:
        u, w, z = self
        return np.array(
            [[u, 0, 0, 0], [0, w, z, 0], [0, z, w, 0], [0, 0, 0, u]], dtype=complex
        )

    def check(self, tol=1e-10, floor=-1e-12) -> "RdmElements":
        u, w, z = self
        if abs(2 * u + 2 * w - 1) > tol:
            raise NumericalError(f"two-site density has trace {2 * u + 2 * w!r}")
        if min(u, w + z, w - z) < floor:
            raise NumericalError(f"two-site density is not PSD (u={u}, w={w}, z={z})")
        return self


class EnergyCurve(NamedTuple):
    energy: float
    derivative: float
    provenance: str  # "analytic_ferro" | "ed_finite_n"


def tau4_closed_form(el: RdmElements) -> float:
    """``tau^4`` for the flip-symmetric form; eigenvalues of ``rho rho~`` are u^2, u^2, (w+z)^2, (w-z)^2."""
    u, w, z = el
    a, b = (w + z) ** 2, (w - z) ** 2
    return 2 * (u**4 + 2 * u**2 * (a + b) + a * b)


# -- XY chain with three-spin interaction ------------------------------------

def xy_correlator_g(p: XYParams) -> float:
    return 2 / math.pi if p.lam < LAMBDA_C else 2 / (math.pi * p.lam)


def xy_elements(p: XYParams) -> RdmElements:
    g = xy_correlator_g(p)
    return RdmElements((1 - g * g) / 4, (1 + g * g) / 4, g / 2).check()


def xy_rdm(p: XYParams) -> np.ndarray:
    return xy_elements(p).matrix()


def xy_tau(p: XYParams) -> TauValue:
    return tau_from_rdm(xy_rdm(p))


# -- XXZ chain ---------------------------------------------------------------

@functools.lru_cache(maxsize=4096)
def ed_energy_per_site(n_sites: int, delta: float) -> float:
    return ed.ground_state(ed.build_xxz_hamiltonian(n_sites, delta)).energy_per_site


def xxz_energy(p: XXZParams) -> EnergyCurve:
    """Energy per site and its derivative in ``delta``.

    The ED derivative is a central difference of step ``fd_step``. On the
    analytic-ferro backend the ED branch is the closed interval ``delta >= -1``;
    stencils that would reach below -1 switch to a second-order forward
    difference so the level crossing at -1 is never straddled.
    """
    d, h, n = p.delta, p.fd_step, p.sites_for_ed
    if p.backend == "ferro_analytic_plus_ed" and d < -1:
        return EnergyCurve(d, 1.0, "analytic_ferro")
    e0 = ed_energy_per_site(n, d)
    if p.backend == "ferro_analytic_plus_ed" and d - h < -1:
        e1, e2 = ed_energy_per_site(n, d + h), ed_energy_per_site(n, d + 2 * h)
        de = (-3 * e0 + 4 * e1 - e2) / (2 * h)
    else:
        de = (ed_energy_per_site(n, d + h) - ed_energy_per_site(n, d - h)) / (2 * h)
    return EnergyCurve(e0, de, "ed_finite_n")


def xxz_elements(p: XXZParams) -> RdmElements:
    e, de, _ = xxz_energy(p)
    return RdmElements((1 + de) / 4, (1 - de) / 4, (e - p.delta * de) / 4).check()


def xxz_rdm(p: XXZParams) -> np.ndarray:
    return xxz_elements(p).matrix()


def xxz_tau(p: XXZParams) -> TauValue:
    return tau_from_rdm(xxz_rdm(p))
