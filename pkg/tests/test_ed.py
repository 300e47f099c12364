import numpy as np
import pytest

from tripartite_qpt import ed, qmat
from tripartite_qpt import measures as ms
from tripartite_qpt.errors import ValidationError

from conftest import naive_chain_operator, naive_reduce

SX, SY, SZ = qmat.SX, qmat.SY, qmat.SZ
GHZ_TAU = 8 ** -0.25


def naive_xxz(n, delta):
    h = 0
    for i in range(n):
        j = (i + 1) % n
        for p, c in ((SX, 1.0), (SY, 1.0), (SZ, delta)):
            h = h + c * naive_chain_operator(n, {i: p, j: p})
    return h


def naive_xy(n, lam):
    h = 0
    for i in range(n):
        a, b, c = (i - 1) % n, i, (i + 1) % n
        h = h - naive_chain_operator(n, {b: SX, c: SX}) - naive_chain_operator(n, {b: SY, c: SY})
        h = h - 0.5 * lam * (naive_chain_operator(n, {a: SX, b: SZ, c: SY})
                             - naive_chain_operator(n, {a: SY, b: SZ, c: SX}))
    return h


def free_fermion_energy(n, lam):
    """Ground energy of the XY + three-spin ring from its Jordan-Wigner modes.

    Modes ``eps_k = -4 cos k + 2 lam sin 2k``; even fermion number lives on
    antiperiodic momenta, odd on periodic ones.
    """
    best = np.inf
    for shift, parity in ((0.5, 0), (0.0, 1)):
        k = 2 * np.pi * (np.arange(n) + shift) / n
        eps = np.sort(-4 * np.cos(k) + 2 * lam * np.sin(2 * k))
        best = min(best, min(eps[:m].sum() for m in range(n + 1) if m % 2 == parity))
    return best


@pytest.mark.parametrize("n", [4, 5, 6])
@pytest.mark.parametrize("coupling", [0.0, 0.7, -1.3])
def test_dense_matches_kron_oracle(n, coupling):
    assert np.allclose(ed.build_xy_hamiltonian(n, coupling).dense(), naive_xy(n, coupling), atol=1e-13)
    if n % 2 == 0:
        assert np.allclose(ed.build_xxz_hamiltonian(n, coupling).dense(), naive_xxz(n, coupling),
                           atol=1e-13)


def test_matrix_free_matches_dense(rng):
    for h in (ed.build_xy_hamiltonian(8, 1.4), ed.build_xxz_hamiltonian(8, 0.3)):
        v = rng.standard_normal(h.dim) + 1j * rng.standard_normal(h.dim)
        assert np.max(np.abs(h.apply(v) - h.dense() @ v)) < 1e-12
        assert qmat.hermiticity_error(h.dense()) < 1e-14
        assert h.apply(v[:, None]).shape == (h.dim, 1)


def test_builder_validation():
    with pytest.raises(ValidationError):
        ed.build_xxz_hamiltonian(7, 0.0)
    with pytest.raises(ValidationError):
        ed.build_xxz_hamiltonian(2, 0.0)
    with pytest.raises(ValidationError):
        ed.build_xy_hamiltonian(22, 0.0)
    with pytest.raises(ValidationError):
        ed.build_xy_hamiltonian(6, float("nan"))
    with pytest.raises(ValidationError):
        ed.build_hamiltonian("ising", 6, 1.0)
    with pytest.raises(ValidationError):
        ed.ground_state(ed.build_xxz_hamiltonian(4, 1.0), method="qr")


def test_heisenberg_four_sites():
    g = ed.ground_state(ed.build_xxz_hamiltonian(4, 1.0))
    assert g.energy_total == pytest.approx(-8.0, abs=1e-9)
    assert not g.degeneracy_flag
    for bond in range(4):
        assert np.allclose(ed.bond_correlators(g, bond), (-2 / 3,) * 3, atol=1e-8)
    # singlet-rich bond: diag (1/12, 5/12, 5/12, 1/12), flip-flop element -1/3
    rho = ed.two_site_rdm(g, 0)
    assert np.allclose(np.diag(rho).real, [1 / 12, 5 / 12, 5 / 12, 1 / 12], atol=1e-10)
    assert rho[1, 2].real == pytest.approx(-1 / 3, abs=1e-10)


@pytest.mark.parametrize("n", [4, 6, 8, 10])
@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 1.7, 2.5])
def test_xy_energy_matches_free_fermions(n, lam):
    g = ed.ground_state(ed.build_xy_hamiltonian(n, lam))
    assert g.energy_total == pytest.approx(free_fermion_energy(n, lam), abs=1e-9)


def test_xy_energy_approaches_bulk():
    e = [ed.ground_state(ed.build_xy_hamiltonian(n, 0.0)).energy_per_site for n in (8, 10, 12)]
    bulk = -4 / np.pi
    gaps = [abs(x - bulk) for x in e]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 0.05 * abs(bulk)


@pytest.mark.parametrize("model, n, c", [("xxz", 10, 0.5), ("xxz", 10, -0.6), ("xy", 10, 1.7)])
def test_dense_vs_iterative(model, n, c):
    h = ed.build_hamiltonian(model, n, c)
    gd = ed.ground_state(h, method="dense")
    gi = ed.ground_state(h, method="iterative")
    assert abs(gd.energy_total - gi.energy_total) <= 1e-8
    assert gi.residual <= 1e-8 * max(1, abs(gi.energy_total))
    assert np.allclose(ed.two_site_rdm(gd, 0), ed.two_site_rdm(gi, 0), atol=1e-6)


def test_ferromagnet_energy_and_degeneracy():
    for n in (8, 12):
        g = ed.ground_state(ed.build_xxz_hamiltonian(n, -2.0))
        assert g.energy_total == pytest.approx(-2.0 * n, abs=1e-8)
        assert g.degeneracy_flag
    g = ed.ground_state(ed.build_xxz_hamiltonian(8, -5.0))
    assert np.allclose(ed.two_site_rdm(g, 0), np.diag([0.5, 0, 0, 0.5]), atol=1e-10)


def test_isotropic_ferro_multiplet_complete():
    # at delta = -1 the ground space is the spin N/2 multiplet, dimension N + 1
    for n in (8, 10, 12):
        g = ed.ground_state(ed.build_xxz_hamiltonian(n, -1.0), method="iterative")
        assert g.multiplet.shape[1] == n + 1


def test_translation_invariance():
    g = ed.ground_state(ed.build_xxz_hamiltonian(10, 0.5))
    ref = ed.two_site_rdm(g, 0)
    for i in range(1, 10):
        assert np.allclose(ed.two_site_rdm(g, i), ref, atol=1e-9)


def test_rdm_matches_naive_reduce(rng):
    n = 6
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    v /= np.linalg.norm(v)
    for i in range(n):
        keep = [i, (i + 1) % n]
        assert np.allclose(ed.two_site_rdm(v, i, n), naive_reduce(v, n, keep), atol=1e-13)


def test_product_states():
    neel = ed.basis_state([0, 1, 0, 1, 0, 1])
    assert np.allclose(ed.two_site_rdm(neel, 0, 6), np.diag([0, 1, 0, 0]))
    assert np.allclose(ed.two_site_rdm(neel, 1, 6), np.diag([0, 0, 1, 0]))
    assert ed.chain_tau(neel, 0, 6).tau == 0.0
    ghz = ed.chain_ghz(8)
    assert np.allclose(ed.two_site_rdm(ghz, 3, 8), np.diag([0.5, 0, 0, 0.5]))
    assert ed.chain_tau(ghz, 3, 8).tau == pytest.approx(GHZ_TAU, abs=1e-12)


def test_flip_symmetric_zeros():
    g = ed.ground_state(ed.build_xxz_hamiltonian(10, 0.5))
    rho = ed.two_site_rdm(g, 0)
    mask = np.ones((4, 4), bool)
    for r, c in ((0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)):
        mask[r, c] = False
    assert np.max(np.abs(rho[mask])) < 1e-10
    assert rho[0, 0].real == pytest.approx(rho[3, 3].real, abs=1e-10)


def test_xxz_just_above_ferro_boundary():
    g = ed.ground_state(ed.build_xxz_hamiltonian(12, -0.999))
    limit = (9 / 128) ** 0.25
    assert limit == pytest.approx(0.514942, abs=1e-6)
    assert abs(ms.tau_from_rdm(ed.two_site_rdm(g, 0)).tau - limit) < 0.02


def test_determinism():
    h = ed.build_xxz_hamiltonian(12, 0.3)
    a = ed.ground_state(h, method="iterative")
    b = ed.ground_state(h, method="iterative")
    assert a.energy_total == b.energy_total
    assert np.array_equal(ed.two_site_rdm(a, 0), ed.two_site_rdm(b, 0))


def test_exchange_conserves_magnetization():
    h = ed.build_xy_hamiltonian(4, 0.0)
    up = ed.basis_state([0, 0, 0, 0])
    assert np.allclose(h.apply(up), 0)
    out = h.apply(ed.basis_state([0, 1, 0, 0]))
    hit = np.flatnonzero(np.abs(out) > 1e-12)
    assert all(bin(k).count("1") == 1 for k in hit)


def test_ferro_expectation_and_correlators():
    h = ed.build_xxz_hamiltonian(4, -5.0)
    up = ed.basis_state([0, 0, 0, 0])
    assert np.vdot(up, h.apply(up)).real == -20.0
    assert ed.bond_correlators(up, 0, 4) == pytest.approx((0.0, 0.0, 1.0))


@pytest.mark.parametrize("delta", [-0.7, 0.4, 1.3])
def test_bond_energy_decomposition(delta):
    g = ed.ground_state(ed.build_xxz_hamiltonian(8, delta))
    total = sum(
        xx + yy + delta * zz for xx, yy, zz in (ed.bond_correlators(g, i) for i in range(8))
    )
    assert total == pytest.approx(g.energy_total, abs=1e-8)
