"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The functions here
add the validation the rest of the package relies on (finite entries,
conformable shapes, hermiticity within a fixed tolerance) on top of numpy/LAPACK.

Two-qubit basis order is ``{|00>, |01>, |10>, |11>}`` with the first factor
major, i.e. the ordering produced by :func:`kron`.
"""
from __future__ import annotations

import numpy as np

from .errors import NumericalError, ValidationError

HERMITIAN_TOL = 1e-10
PSD_FLOOR = -1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"x": SX, "y": SY, "z": SZ}

for _m in (I2, SX, SY, SZ):
    _m.setflags(write=False)


def as_matrix(m, name="matrix") -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array or raise :class:`ValidationError`."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def as_vector(v, name="vector") -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1:
        raise ValidationError(f"{name} must be 1-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def _square(m, name="matrix") -> np.ndarray:
    a = as_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    return a


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValidationError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``a``'s indices major."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def kron_all(*factors) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def trace(m) -> complex:
    return complex(np.trace(_square(m)))


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def scale(m, c) -> np.ndarray:
    return complex(c) * as_matrix(m)


def add(a, b) -> np.ndarray:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape != b.shape:
        raise ValidationError(f"cannot add {a.shape} and {b.shape}")
    return a + b


def hermiticity_error(m) -> float:
    """Largest entry of ``|m - m^dagger|``."""
    a = _square(m)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def check_hermitian(m, tol=HERMITIAN_TOL, name="matrix") -> np.ndarray:
    a = _square(m, name)
    err = hermiticity_error(a)
    if err > tol:
        raise ValidationError(f"{name} is not Hermitian (max deviation {err:.3e} > {tol:.1e})")
    return a


def hermitian_eigensystem(m, tol=HERMITIAN_TOL):
    """Eigenvalues in ascending order and orthonormal eigenvectors (as columns).

    The input is symmetrized before the LAPACK call so the returned pair
    reconstructs ``(m + m^dagger)/2``; deviations above ``tol`` are rejected.
    """
    a = check_hermitian(m, tol)
    a = 0.5 * (a + a.conj().T)
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    return vals, vecs


def psd_sqrt(m, floor=PSD_FLOOR, zero_below=0.0) -> np.ndarray:
    """Hermitian positive square root.

    Eigenvalues in ``[floor, 0)`` are clipped to 0, as are those ``<= zero_below``.
    """
    vals, vecs = hermitian_eigensystem(m)
    if vals.size and vals[0] < floor:
        raise ValidationError(f"matrix is not PSD (smallest eigenvalue {vals[0]:.3e})")
    vals = np.where(vals <= zero_below, 0.0, vals)
    root = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * root) @ vecs.conj().T


def is_unitary(u, tol=1e-10) -> bool:
    u = _square(u)
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with the phase fix of Mezzadri."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns (``rows >= cols``)."""
    if rows < cols:
        raise ValidationError(f"isometry needs rows >= cols, got {rows} < {cols}")
    return random_unitary(rows, rng)[:, :cols]
