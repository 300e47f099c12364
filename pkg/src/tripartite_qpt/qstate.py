"""Tripartite (2x2xn) pure states and two-qubit density matrices.

A state is stored as the amplitude tensor ``a[i, j, k]`` with ``i`` (party A)
and ``j`` (party B) qubit indices and ``k`` indexing the ``n``-dimensional
party C. Flattened amplitudes use C order: ``k`` fastest, then ``j``, then ``i``.

File formats (JSON)::

    state: {"dims": [2, 2, n], "amplitudes": [[re, im], ...]}   # 4n pairs, flattened as above
    rdm:   {"dim": 4, "entries": [[re, im], ...]}              # 16 pairs, row-major
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import qmat
from .errors import ValidationError

NORM_TOL = 1e-10
RENORM_WINDOW = 1e-6


@dataclass(frozen=True)
class PureStateABC:
    """Normalized pure state of a ``2 x 2 x n`` system."""

    amplitudes: np.ndarray  # shape (2, 2, n)

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim != 3 or a.shape[:2] != (2, 2) or a.shape[2] < 1:
            raise ValidationError(f"amplitude tensor must have shape (2, 2, n), got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValidationError("amplitudes must be finite")
        norm2 = float(np.vdot(a, a).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized (norm^2 = {norm2!r})")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def n(self) -> int:
        return self.amplitudes.shape[2]

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)


@dataclass(frozen=True)
class EnsembleDecomposition:
    """Weights ``p_i`` and unit vectors ``|phi_i>`` with ``rho = sum_i p_i |phi_i><phi_i|``.

    ``members`` holds the vectors as columns (a ``4 x r`` array).
    """

    weights: np.ndarray
    members: np.ndarray
    m_matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        p = np.array(self.weights, dtype=float).reshape(-1)
        psi = np.array(self.members, dtype=complex)
        if psi.ndim != 2 or psi.shape[0] != 4 or psi.shape[1] != p.size:
            raise ValidationError(
                f"members must be a 4 x {p.size} array of column vectors, got {psi.shape}"
            )
        if np.any(p < 0) or abs(p.sum() - 1.0) > NORM_TOL:
            raise ValidationError("weights must be nonnegative and sum to 1")
        norms = np.linalg.norm(psi, axis=0)
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ValidationError("ensemble members must be unit vectors")
        p.setflags(write=False)
        psi.setflags(write=False)
        object.__setattr__(self, "weights", p)
        object.__setattr__(self, "members", psi)

    @property
    def rank(self) -> int:
        return self.weights.size

    def density(self) -> np.ndarray:
        return (self.members * self.weights) @ self.members.conj().T


def validate_state(amplitudes, n: int | None = None) -> PureStateABC:
    """Build a state from ``4n`` flattened amplitudes (or a ``(2, 2, n)`` tensor).

    Norm deviations up to ``1e-6`` are renormalized away; larger ones are rejected.
    """
    a = np.asarray(amplitudes, dtype=complex)
    if n is None:
        if a.ndim == 3:
            n = a.shape[2]
        elif a.ndim == 1 and a.size % 4 == 0 and a.size > 0:
            n = a.size // 4
        else:
            raise ValidationError(f"cannot infer party-C dimension from shape {a.shape}")
    if n < 1 or a.size != 4 * n:
        raise ValidationError(f"expected {4 * n} amplitudes for n={n}, got {a.size}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("amplitudes must be finite")
    norm = float(np.linalg.norm(a))
    if abs(norm - 1.0) > RENORM_WINDOW:
        raise ValidationError(f"state norm {norm!r} deviates from 1 by more than {RENORM_WINDOW}")
    return PureStateABC(a.reshape(2, 2, n) / norm)


def validate_density(m, dim: int | None = 4, name="density matrix") -> np.ndarray:
    """Check hermiticity, unit trace and positivity; return a read-only copy."""
    a = qmat.check_hermitian(m, name=name)
    if dim is not None and a.shape != (dim, dim):
        raise ValidationError(f"{name} must be {dim}x{dim}, got {a.shape}")
    tr = np.trace(a)
    if abs(tr - 1.0) > NORM_TOL:
        raise ValidationError(f"{name} trace is {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(0.5 * (a + a.conj().T))[0]
    if lo < qmat.PSD_FLOOR:
        raise ValidationError(f"{name} is not positive semidefinite (eigenvalue {lo:.3e})")
    a = a.copy()
    a.setflags(write=False)
    return a


def partial_trace_C(s: PureStateABC) -> np.ndarray:
    """Two-qubit reduced density matrix ``rho_AB = tr_C |psi><psi|``."""
    a = s.amplitudes.reshape(4, s.n)
    rho = a @ a.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    rho.setflags(write=False)
    return rho


def random_pure_state(n: int, seed=None) -> PureStateABC:
    """Haar-random state from normalized complex Gaussians.

    ``seed`` may be an int or a ``numpy.random.Generator`` (which is advanced).
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(4 * n) + 1j * rng.standard_normal(4 * n)
    return PureStateABC((z / np.linalg.norm(z)).reshape(2, 2, n))


_CANONICAL = {
    "ghz": {(0, 0, 0): 1, (1, 1, 1): 1},
    "w": {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1},
    "product": {(0, 0, 0): 1},
    # |0>_A (x) (|00> + |11>)_BC / sqrt2
    "bisep_a_bc": {(0, 0, 0): 1, (0, 1, 1): 1},
}


def canonical_state(name: str) -> PureStateABC:
    """Three-qubit fixtures: ``ghz``, ``w``, ``product`` and ``bisep_a_bc``."""
    try:
        terms = _CANONICAL[name.lower()]
    except KeyError:
        raise ValidationError(f"unknown canonical state {name!r}; choose from {sorted(_CANONICAL)}")
    a = np.zeros((2, 2, 2), dtype=complex)
    for idx, c in terms.items():
        a[idx] = c
    return PureStateABC(a / np.linalg.norm(a))


def apply_local_unitary(s: PureStateABC, ua, ub, uc) -> PureStateABC:
    """Return ``(ua (x) ub (x) uc) |psi>``."""
    ua, ub, uc = (qmat.as_matrix(u, name) for u, name in ((ua, "uA"), (ub, "uB"), (uc, "uC")))
    for u, d, name in ((ua, 2, "uA"), (ub, 2, "uB"), (uc, s.n, "uC")):
        if u.shape != (d, d):
            raise ValidationError(f"{name} must be {d}x{d}, got {u.shape}")
        if not qmat.is_unitary(u):
            raise ValidationError(f"{name} is not unitary")
    a = np.einsum("ai,bj,ck,ijk->abc", ua, ub, uc, s.amplitudes)
    return PureStateABC(a / np.linalg.norm(a))


def biseparable_state(kind: str, rng: np.random.Generator, n: int = 2) -> PureStateABC:
    """Random product across one cut: ``a|bc``, ``b|ac`` or ``ab|c``."""

    def ket(*shape):
        z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        return z / np.linalg.norm(z)

    if kind == "a|bc":
        a = np.einsum("i,jk->ijk", ket(2), ket(2, n))
    elif kind == "b|ac":
        a = np.einsum("j,ik->ijk", ket(2), ket(2, n))
    elif kind == "ab|c":
        a = np.einsum("ij,k->ijk", ket(2, 2), ket(n))
    else:
        raise ValidationError(f"unknown bipartition {kind!r}")
    return PureStateABC(a / np.linalg.norm(a))


# -- JSON file formats -------------------------------------------------------

def _pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).reshape(-1)]


def _complex(pairs, what) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{what} must be a list of [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError(f"{what} must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def state_to_json(s: PureStateABC) -> dict:
    return {"dims": [2, 2, s.n], "amplitudes": _pairs(s.amplitudes)}


def state_from_json(obj: dict) -> PureStateABC:
    try:
        dims = [int(d) for d in obj["dims"]]
        raw = obj["amplitudes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("state JSON needs 'dims' and 'amplitudes'") from exc
    if len(dims) != 3 or dims[:2] != [2, 2]:
        raise ValidationError(f"dims must be [2, 2, n], got {dims}")
    return validate_state(_complex(raw, "amplitudes"), dims[2])


def rdm_to_json(rho) -> dict:
    return {"dim": 4, "entries": _pairs(rho)}


def rdm_from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        raw = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("rdm JSON needs 'dim' and 'entries'") from exc
    if dim != 4:
        raise ValidationError(f"only two-qubit (dim 4) matrices are supported, got {dim}")
    entries = _complex(raw, "entries")
    if entries.size != 16:
        raise ValidationError(f"expected 16 entries, got {entries.size}")
    return validate_density(entries.reshape(4, 4))


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc})") from exc


def load_state(path) -> PureStateABC:
    return state_from_json(_read_json(path))


def load_rdm(path) -> np.ndarray:
    return rdm_from_json(_read_json(path))


def save_state(s: PureStateABC, path) -> None:
    Path(path).write_text(json.dumps(state_to_json(s), indent=1))


def save_rdm(rho, path) -> None:
    Path(path).write_text(json.dumps(rdm_to_json(rho), indent=1))
