"""Entanglement quantities built on the two-qubit spin flip.

``tau`` is the genuine tripartite entanglement of a (2x2xn) pure state. It only
needs the two-qubit reduction ``rho`` of parties A and B::

    tau^4 = [tr(rho rho~)]^2 - tr[(rho rho~)^2],   rho~ = (sy sy) rho* (sy sy)

The same number follows from any ensemble decomposition of ``rho`` through the
symmetric matrix ``M = sqrt(W) Psi^T (sy sy) Psi sqrt(W)``; both routes are
implemented so that each can check the other.

With ``mu`` the spectrum of ``rho rho~`` (or of ``M M^dagger``), the radicand is
``(sum mu)^2 - sum mu^2 = 2 sum_{i<j} mu_i mu_j``. Both routes evaluate it from
that spectrum, with values below ``1e-14`` set to zero: tau is a fourth root, so
roundoff of 1e-17 in the radicand would otherwise show up as tau ~ 1e-4 on
states where it vanishes exactly (pure ``rho``, biseparable states).
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import qmat
from .errors import NumericalError, ValidationError
from .qstate import EnsembleDecomposition, PureStateABC, partial_trace_C, validate_density

RADICAND_FLOOR = -1e-12
SPECTRAL_ZERO = 1e-14
ENTROPY_ZERO = SPECTRAL_ZERO

SYSY = np.kron(qmat.SY, qmat.SY)
SYSY.setflags(write=False)


class TauValue(NamedTuple):
    tau: float
    radicand: float


class MeasureTriple(NamedTuple):
    tau: float
    concurrence: float
    entropy_bits: float


def spin_flip(rho) -> np.ndarray:
    """``(sy (x) sy) rho* (sy (x) sy)``."""
    rho = validate_density(rho)
    return SYSY @ rho.conj() @ SYSY


def _tau_from_radicand(radicand: float) -> TauValue:
    if radicand < RADICAND_FLOOR:
        raise NumericalError(f"tau radicand {radicand:.3e} is negative beyond roundoff")
    return TauValue(max(radicand, 0.0) ** 0.25, radicand)


def _radicand(mu: np.ndarray) -> float:
    # [tr X]^2 - tr X^2 = 2 sum_{i<j} mu_i mu_j, summed without cancellation
    mu = np.where(mu <= SPECTRAL_ZERO, 0.0, mu)
    return float(2.0 * np.triu(np.outer(mu, mu), 1).sum())


def flip_spectrum(rho) -> np.ndarray:
    """Eigenvalues of ``rho rho~`` (descending), via the Hermitian ``sqrt(rho) rho~ sqrt(rho)``."""
    rho = validate_density(rho)
    root = qmat.psd_sqrt(rho, zero_below=SPECTRAL_ZERO)
    r = root @ (SYSY @ rho.conj() @ SYSY) @ root
    return np.linalg.eigvalsh(0.5 * (r + r.conj().T))[::-1]


def tau_from_rdm(rho) -> TauValue:
    return _tau_from_radicand(_radicand(flip_spectrum(rho)))


def tau_trace_formula(rho) -> float:
    """Radicand by explicit 4x4 products, ``[tr X]^2 - tr X^2`` with ``X = rho rho~``.

    Accurate for well-mixed ``rho``; loses everything below ~1e-16 absolute.
    """
    rho = validate_density(rho)
    x = rho @ (SYSY @ rho.conj() @ SYSY)
    t = np.trace(x)
    return float((t * t - np.trace(x @ x)).real)


def tau_from_pure(s: PureStateABC) -> TauValue:
    return tau_from_rdm(partial_trace_C(s))


def build_m(d: EnsembleDecomposition) -> np.ndarray:
    """``M = sqrt(W) Psi^T (sy sy) Psi sqrt(W)`` for members ``Psi`` (columns) and weights ``W``."""
    root = np.sqrt(d.weights)
    return (root[:, None] * (d.members.T @ SYSY @ d.members)) * root[None, :]


def tau_via_ensemble(d: EnsembleDecomposition) -> TauValue:
    m = d.m_matrix if d.m_matrix is not None else build_m(d)
    s = np.linalg.svd(m, compute_uv=False)
    return _tau_from_radicand(_radicand(s * s))


def eigen_decomposition(rho, cutoff=1e-14) -> EnsembleDecomposition:
    """Spectral decomposition of ``rho`` keeping eigenvalues above ``cutoff``."""
    rho = validate_density(rho)
    vals, vecs = qmat.hermitian_eigensystem(rho)
    keep = vals > cutoff
    p = vals[keep] / vals[keep].sum()
    return EnsembleDecomposition(p, vecs[:, keep])


def random_decomposition(rho, members: int, rng: np.random.Generator) -> EnsembleDecomposition:
    """Another decomposition of ``rho`` with ``members`` states.

    Subnormalized vectors ``sqrt(p_k) |e_k>`` of the spectral decomposition are
    mixed by a random isometry (``members >= rank``); every decomposition of
    ``rho`` arises this way.
    """
    eig = eigen_decomposition(rho)
    if members < eig.rank:
        raise ValidationError(f"need at least rank(rho) = {eig.rank} members, got {members}")
    u = qmat.random_isometry(members, eig.rank, rng)
    unnorm = (eig.members * np.sqrt(eig.weights)) @ u.T  # 4 x members
    p = np.sum(np.abs(unnorm) ** 2, axis=0)
    keep = p > 1e-15
    p, unnorm = p[keep], unnorm[:, keep]
    return EnsembleDecomposition(p / p.sum(), unnorm / np.sqrt(p))


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_k`` are square roots of the eigenvalues of ``rho rho~``, obtained from
    the Hermitian matrix ``sqrt(rho) rho~ sqrt(rho)`` which has the same spectrum.
    """
    mu = flip_spectrum(rho)
    lam = np.sqrt(np.where(mu <= SPECTRAL_ZERO, 0.0, mu))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def pure_concurrence(v) -> float:
    """``2|ad - bc|`` for a normalized two-qubit vector ``(a, b, c, d)``."""
    a, b, c, d = qmat.as_vector(v)
    return float(2 * abs(a * d - b * c))


def von_neumann_entropy(rho) -> float:
    """Entropy in bits of a density matrix of any dimension."""
    rho = validate_density(rho, dim=None)
    vals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    vals = vals[vals > ENTROPY_ZERO]
    return float(max(0.0, -np.sum(vals * np.log2(vals))))


def single_site_density(rho, site: int = 0) -> np.ndarray:
    """One-qubit reduction of a two-qubit density (``site`` 0 = first factor)."""
    r = validate_density(rho).reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", r) if site == 0 else np.einsum("ijil->jl", r)


def all_measures(rho) -> MeasureTriple:
    rho = validate_density(rho)
    return MeasureTriple(tau_from_rdm(rho).tau, concurrence(rho), von_neumann_entropy(rho))
