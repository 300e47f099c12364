"""
Tau on a few hand-made three-party states
=========================================

Builds GHZ, W and product states, reduces them to the two-qubit density of
parties A and B, and evaluates tau, the concurrence of that density and its
entropy.
"""
import numpy as np

from tripartite_qpt import measures as ms
from tripartite_qpt import qmat, qstate

# the reduced density of GHZ is diagonal: half |00>, half |11>
ghz = qstate.canonical_state("ghz")
rho = qstate.partial_trace_C(ghz)
print(np.round(rho.real, 3))

# tau^4 = 1/8 here, so tau = 8^(-1/4)
t = ms.tau_from_rdm(rho)
print("GHZ   tau =", t.tau, " radicand =", t.radicand)

# W and product states carry no three-way entanglement
for name in ("w", "product", "bisep_a_bc"):
    tau, conc, ent = ms.all_measures(qstate.partial_trace_C(qstate.canonical_state(name)))
    print(f"{name:<11s} tau = {tau:.3g}   C = {conc:.4f}   S = {ent:.4f} bits")

# local unitaries move the amplitudes around but leave tau alone
rng = np.random.default_rng(0)
moved = qstate.apply_local_unitary(
    ghz, qmat.random_unitary(2, rng), qmat.random_unitary(2, rng), qmat.random_unitary(2, rng)
)
print("GHZ after local unitaries: tau =", ms.tau_from_pure(moved).tau)

# party C may be larger than a qubit; a random state with n = 4
s = qstate.random_pure_state(4, rng)
print("random (2x2x4) state:      tau =", ms.tau_from_pure(s).tau)
