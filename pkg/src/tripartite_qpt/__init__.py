"""Genuine tripartite entanglement of (2x2xn) pure states and its use as a
quantum-phase-transition indicator in exactly solvable spin chains."""
from .errors import NumericalError, PropertyFailure, ValidationError
from .measures import (
    MeasureTriple,
    TauValue,
    all_measures,
    build_m,
    concurrence,
    spin_flip,
    tau_from_pure,
    tau_from_rdm,
    tau_via_ensemble,
    von_neumann_entropy,
)
from .qstate import (
    EnsembleDecomposition,
    PureStateABC,
    canonical_state,
    partial_trace_C,
    random_pure_state,
    validate_state,
)

__version__ = "0.1.0"
