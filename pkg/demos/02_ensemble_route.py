"""
Two routes to the same number
=============================

tau can be read off the two-qubit density directly, or from the symmetric
matrix M built from any ensemble that realises that density. Here we draw a
random state, decompose its reduced density several different ways and compare.
"""
import numpy as np

from tripartite_qpt import measures as ms
from tripartite_qpt import qstate

rng = np.random.default_rng(11)
s = qstate.random_pure_state(3, rng)
rho = qstate.partial_trace_C(s)

direct = ms.tau_from_rdm(rho).tau
print("from the density:", direct)

eig = ms.eigen_decomposition(rho)
print("rank of rho:", eig.rank)

# mix the spectral ensemble with random isometries: every such mix is a valid ensemble
for members in (eig.rank, eig.rank + 2, 8):
    d = ms.random_decomposition(rho, members, rng)
    m = ms.build_m(d)
    via_m = ms.tau_via_ensemble(d).tau
    print(f"{members} members, M is {m.shape[0]}x{m.shape[1]} symmetric "
          f"(|M - M^T| = {np.abs(m - m.T).max():.1e}), tau = {via_m:.15f}")

# the explicit trace formula agrees on the radicand; its fourth root is noisier near zero
print("trace-formula radicand:", ms.tau_trace_formula(rho), " spectral:", ms.tau_from_rdm(rho).radicand)
