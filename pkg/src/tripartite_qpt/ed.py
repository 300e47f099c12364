"""Exact diagonalization of periodic spin-1/2 chains.

Two models are supported::

    xy_three_spin:  H = -sum_i [ sx_i sx_{i+1} + sy_i sy_{i+1}
                                 + (lam/2) (sx_{i-1} sz_i sy_{i+1} - sy_{i-1} sz_i sx_{i+1}) ]
    xxz:            H =  sum_i [ sx_i sx_{i+1} + sy_i sy_{i+1} + delta sz_i sz_{i+1} ]

Site 0 is the most significant bit of a basis index, so the computational basis
coincides with ``kron(site_0, site_1, ...)`` and ``|0> = up`` (``sz = +1``).

Hamiltonians are applied matrix-free. Each local term (a 4x4 bond operator or an
8x8 operator on the triple ``(i-1, i, i+1)``) is compiled into gather/scatter
index arrays over basis states, one pair of arrays per nonzero local matrix
element. A Hamiltonian is ``part0 + coupling * part1``; the compiled structure is
cached per ``(model, N)`` so parameter sweeps only rescale.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from . import qmat
from .errors import NumericalError, ValidationError
from .measures import TauValue, tau_from_rdm

log = logging.getLogger(__name__)

MIN_SITES, MAX_SITES = 4, 20
MAX_DENSE_SITES = 12
DENSE_AUTO_SITES = 8
DEGENERACY_GAP = 1e-8
SOLVER_TOL = 1e-12
MAX_MULTIPLET = 64


@dataclass(frozen=True)
class _Part:
    """Compiled sum of local operators: ``diag * v`` plus scattered off-diagonal pieces."""

    diag: np.ndarray
    pieces: tuple  # ((src, dst, coeff), ...) with H[dst, src] = coeff

    def apply(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        for src, dst, coeff in self.pieces:
            out[dst] += coeff * v[src]
        return out

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.diag) and all(np.isreal(c) for _, _, c in self.pieces)


def _compile(n_sites: int, terms) -> _Part:
    """``terms`` is an iterable of ``(sites, local_matrix)``."""
    dim = 2**n_sites
    idx = np.arange(dim)
    diag = np.zeros(dim, dtype=complex)
    pieces = {}
    for sites, local in terms:
        k = len(sites)
        shifts = [n_sites - 1 - s for s in sites]
        local_idx = np.zeros(dim, dtype=np.int64)
        for s in shifts:
            local_idx = (local_idx << 1) | ((idx >> s) & 1)
        cleared = idx.copy()
        for s in shifts:
            cleared &= ~(1 << s)
        for r in range(2**k):
            for c in range(2**k):
                coeff = local[r, c]
                if coeff == 0:
                    continue
                src = np.flatnonzero(local_idx == c)
                if r == c:
                    diag[src] += coeff
                    continue
                dst = cleared[src]
                for pos, s in enumerate(shifts):
                    bit = (r >> (k - 1 - pos)) & 1
                    dst = dst | (bit << s)
                key = (src.tobytes(), dst.tobytes())
                if key in pieces:
                    pieces[key][2] += coeff
                else:
                    pieces[key] = [src, dst, complex(coeff)]
    if np.all(diag.imag == 0):
        diag = diag.real.copy()
    compiled = []
    for src, dst, coeff in pieces.values():
        if coeff == 0:
            continue
        coeff = coeff.real if coeff.imag == 0 else coeff
        src.setflags(write=False)
        dst.setflags(write=False)
        compiled.append((src, dst, coeff))
    diag.setflags(write=False)
    return _Part(diag, tuple(compiled))


@functools.lru_cache(maxsize=32)
def _parts(model: str, n_sites: int) -> tuple[_Part, _Part]:
    sx, sy, sz = qmat.SX, qmat.SY, qmat.SZ
    bonds = [((i, (i + 1) % n_sites)) for i in range(n_sites)]
    if model == "xxz":
        xy = qmat.kron(sx, sx) + qmat.kron(sy, sy)
        zz = qmat.kron(sz, sz)
        return (
            _compile(n_sites, [(b, xy) for b in bonds]),
            _compile(n_sites, [(b, zz) for b in bonds]),
        )
    if model == "xy_three_spin":
        xy = -(qmat.kron(sx, sx) + qmat.kron(sy, sy))
        three = -0.5 * (qmat.kron_all(sx, sz, sy) - qmat.kron_all(sy, sz, sx))
        triples = [((i - 1) % n_sites, i, (i + 1) % n_sites) for i in range(n_sites)]
        return (
            _compile(n_sites, [(b, xy) for b in bonds]),
            _compile(n_sites, [(t, three) for t in triples]),
        )
    raise ValidationError(f"unknown model {model!r}")


@dataclass(frozen=True)
class SpinChainHamiltonian:
    """Periodic chain Hamiltonian ``part0 + coupling * part1`` with a matrix-free apply."""

    model: str
    sites: int
    coupling: float
    _parts: tuple = field(repr=False, compare=False, default=())

    @property
    def dim(self) -> int:
        return 2**self.sites

    @property
    def dtype(self):
        return float if all(p.is_real for p in self._parts) else complex

    def apply(self, v) -> np.ndarray:
        v = np.asarray(v)
        if v.ndim == 2 and v.shape[1] == 1:
            return self.apply(v[:, 0])[:, None]
        if v.shape[0] != self.dim:
            raise ValidationError(f"vector of length {v.shape[0]} does not match 2^{self.sites}")
        p0, p1 = self._parts
        out = p0.apply(v)
        if self.coupling != 0:
            out = out + self.coupling * p1.apply(v)
        return out

    def dense(self) -> np.ndarray:
        if self.sites > MAX_DENSE_SITES:
            raise ValidationError(f"dense form limited to N <= {MAX_DENSE_SITES}")
        h = np.zeros((self.dim, self.dim), dtype=complex)
        for scale_, part in zip((1.0, self.coupling), self._parts):
            h[np.arange(self.dim), np.arange(self.dim)] += scale_ * part.diag
            for src, dst, coeff in part.pieces:
                h[dst, src] += scale_ * coeff
        return h

    def as_operator(self) -> LinearOperator:
        dtype = np.dtype(self.dtype)
        return LinearOperator((self.dim, self.dim), matvec=self.apply, dtype=dtype)

    def norm_bound(self) -> float:
        """Cheap upper bound on the operator norm (sum of local-term norms)."""
        return self.sites * (2.0 + abs(self.coupling))


def _check_sites(n_sites: int, even: bool = False) -> int:
    if int(n_sites) != n_sites or not MIN_SITES <= n_sites <= MAX_SITES:
        raise ValidationError(f"number of sites must be in [{MIN_SITES}, {MAX_SITES}], got {n_sites}")
    if even and n_sites % 2:
        raise ValidationError(f"number of sites must be even, got {n_sites}")
    return int(n_sites)


def build_xy_hamiltonian(n_sites: int, lam: float) -> SpinChainHamiltonian:
    n_sites = _check_sites(n_sites)
    if not np.isfinite(lam):
        raise ValidationError("lambda must be finite")
    return SpinChainHamiltonian("xy_three_spin", n_sites, float(lam), _parts("xy_three_spin", n_sites))


def build_xxz_hamiltonian(n_sites: int, delta: float) -> SpinChainHamiltonian:
    n_sites = _check_sites(n_sites, even=True)
    if not np.isfinite(delta):
        raise ValidationError("delta must be finite")
    return SpinChainHamiltonian("xxz", n_sites, float(delta), _parts("xxz", n_sites))


def build_hamiltonian(model: str, n_sites: int, coupling: float) -> SpinChainHamiltonian:
    if model in ("xy", "xy_three_spin"):
        return build_xy_hamiltonian(n_sites, coupling)
    if model == "xxz":
        return build_xxz_hamiltonian(n_sites, coupling)
    raise ValidationError(f"unknown model {model!r}")


@dataclass(frozen=True)
class GroundStateResult:
    energy_total: float
    energy_per_site: float
    vector: np.ndarray
    degeneracy_flag: bool
    residual: float
    sites: int
    multiplet: np.ndarray = field(repr=False)  # columns span the (near-)degenerate ground space
    gap: float = float("nan")


def _start_vector(dim: int, dtype, stream: int = 0) -> np.ndarray:
    # fixed seeds keep every solve reproducible; a random start avoids symmetry sectors
    rng = np.random.default_rng([20260101, stream])
    v = rng.standard_normal(dim)
    if np.dtype(dtype).kind == "c":
        v = v + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _lowest(op: LinearOperator, k: int, v0: np.ndarray, maxiter: int):
    try:
        vals, vecs = eigsh(op, k=k, which="SA", v0=v0, tol=SOLVER_TOL, maxiter=maxiter)
    except ArpackNoConvergence as exc:
        raise NumericalError(f"Lanczos solver did not converge: {exc}") from exc
    order = np.argsort(vals)
    return vals[order], vecs[:, order]


def _iterative(h: SpinChainHamiltonian, maxiter: int):
    op = h.as_operator()
    v0 = _start_vector(h.dim, op.dtype)
    vals, vecs = _lowest(op, 2, v0, maxiter)
    e0 = vals[0]
    if vals[1] - e0 >= DEGENERACY_GAP:
        return vals, vecs[:, :1]
    # degenerate: deflate found ground vectors until the next level is above E0
    shift = 2.0 * h.norm_bound() + 1.0
    basis = vecs[:, vals - e0 < DEGENERACY_GAP]
    basis, _ = np.linalg.qr(basis)
    levels = list(vals)
    while basis.shape[1] < MAX_MULTIPLET:
        proj = basis

        def matvec(v, proj=proj):
            return h.apply(v) + shift * (proj @ (proj.conj().T @ v))

        dop = LinearOperator(op.shape, matvec=matvec, dtype=op.dtype)
        # Krylov spaces see one direction per degenerate level: new start each round
        w0 = _start_vector(h.dim, op.dtype, stream=basis.shape[1])
        v_start = w0 - basis @ (basis.conj().T @ w0)
        v_start /= np.linalg.norm(v_start)
        dvals, dvecs = _lowest(dop, 1, v_start, maxiter)
        levels.append(dvals[0])
        if dvals[0] - e0 >= DEGENERACY_GAP:
            break
        basis, _ = np.linalg.qr(np.column_stack([basis, dvecs[:, 0]]))
    gap_vals = sorted(set(x for x in levels if x - e0 >= DEGENERACY_GAP))
    first_excited = gap_vals[0] if gap_vals else np.inf
    return np.array([e0, first_excited]), basis


def ground_state(h: SpinChainHamiltonian, method: str = "auto", maxiter: int = 20000) -> GroundStateResult:
    """Lowest eigenpair of ``h``.

    ``method='dense'`` diagonalizes the full matrix (N <= 12, the oracle route);
    ``'iterative'`` runs implicitly restarted Lanczos (ARPACK) on the matrix-free
    operator. ``'auto'`` picks dense for N <= 8. Degenerate ground spaces
    (gap < 1e-8) are returned whole in ``multiplet``.
    """
    if method == "auto":
        method = "dense" if h.sites <= DENSE_AUTO_SITES else "iterative"
    if method == "dense":
        vals, vecs = qmat.hermitian_eigensystem(h.dense())
        e0 = vals[0]
        deg = vals - e0 < DEGENERACY_GAP
        basis = vecs[:, deg]
        excited = vals[~deg]
        levels = np.array([e0, excited[0] if excited.size else np.inf])
    elif method == "iterative":
        levels, basis = _iterative(h, maxiter)
        e0 = levels[0]
    else:
        raise ValidationError(f"unknown method {method!r}")
    v = basis[:, 0]
    v = v / np.linalg.norm(v)
    resid = float(np.linalg.norm(h.apply(v) - e0 * v))
    if resid > 1e-8 * max(1.0, abs(e0)):
        raise NumericalError(f"ground state residual {resid:.3e} too large")
    gap = float(levels[1] - e0)
    basis = np.array(basis)
    basis.setflags(write=False)
    v.setflags(write=False)
    return GroundStateResult(
        energy_total=float(e0),
        energy_per_site=float(e0) / h.sites,
        vector=v,
        degeneracy_flag=bool(basis.shape[1] > 1 or gap < DEGENERACY_GAP),
        residual=resid,
        sites=h.sites,
        multiplet=basis,
        gap=gap,
    )


def chain_state_rdm(vector, n_sites: int, i: int) -> np.ndarray:
    """Two-site density of sites ``(i, i+1 mod N)`` for a normalized chain state."""
    v = np.asarray(vector, dtype=complex)
    if v.shape != (2**n_sites,):
        raise ValidationError(f"state of length {v.shape} does not match N={n_sites}")
    if not 0 <= i < n_sites:
        raise ValidationError(f"site index {i} out of range for N={n_sites}")
    j = (i + 1) % n_sites
    t = np.moveaxis(v.reshape((2,) * n_sites), (i, j), (0, 1)).reshape(4, -1)
    rho = t @ t.conj().T
    return 0.5 * (rho + rho.conj().T)


def two_site_rdm(g, i: int, n_sites: int | None = None) -> np.ndarray:
    """Reduced density of bond ``(i, i+1)``.

    ``g`` is a :class:`GroundStateResult` or a raw chain vector (then pass
    ``n_sites``). For a degenerate ground space the result is the equal-weight
    mixture over the multiplet, which differs from reducing a single vector.
    """
    if isinstance(g, GroundStateResult):
        vecs = g.multiplet if g.degeneracy_flag else g.vector[:, None]
        rhos = [chain_state_rdm(vecs[:, c], g.sites, i) for c in range(vecs.shape[1])]
        return sum(rhos) / len(rhos)
    v = np.asarray(g, dtype=complex)
    if n_sites is None:
        n_sites = int(round(np.log2(v.size)))
    return chain_state_rdm(v / np.linalg.norm(v), n_sites, i)


def bond_correlators(g, i: int, n_sites: int | None = None) -> tuple[float, float, float]:
    """``(<sx sx>, <sy sy>, <sz sz>)`` on bond ``(i, i+1)``."""
    rho = two_site_rdm(g, i, n_sites)
    return tuple(float(np.trace(rho @ qmat.kron(p, p)).real) for p in (qmat.SX, qmat.SY, qmat.SZ))


def chain_tau(g, i: int = 0, n_sites: int | None = None) -> TauValue:
    return tau_from_rdm(two_site_rdm(g, i, n_sites))


def basis_state(bits) -> np.ndarray:
    """Product basis vector from a sequence of 0 (up) / 1 (down) bits, site 0 first."""
    n = len(bits)
    v = np.zeros(2**n, dtype=complex)
    v[int("".join(str(int(b)) for b in bits), 2)] = 1.0
    return v


def chain_ghz(n_sites: int) -> np.ndarray:
    v = np.zeros(2**n_sites, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v
