import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def naive_chain_operator(n_sites, factors):
    """Dense operator from a {site: 2x2 matrix} dict, identity elsewhere (site 0 leftmost)."""
    out = np.eye(1, dtype=complex)
    for s in range(n_sites):
        out = np.kron(out, factors.get(s, np.eye(2)))
    return out


def naive_reduce(vector, n_sites, keep):
    """Reduced density of the sites in ``keep`` (in that order) via the full projector."""
    rho = np.outer(vector, vector.conj()).reshape((2,) * (2 * n_sites))
    ket = list(range(n_sites))
    bra = list(range(n_sites, 2 * n_sites))
    for s in range(n_sites):
        if s not in keep:
            bra[s] = ket[s]
    out = [ket[s] for s in keep] + [bra[s] for s in keep]
    r = np.einsum(rho, ket + bra, out)
    d = 2 ** len(keep)
    return r.reshape(d, d)
