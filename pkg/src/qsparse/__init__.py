"""Sparse state-vector circuit simulation with selectable storage backends.

The package simulates quantum circuits by storing only the basis states
with non-negligible amplitude, either in memory or in an embedded
database, next to a dense reference simulator, a static backend selector,
a bounded-support drop approximation, and a benchmark harness. A small
HTTP service and CLI sit on top.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .circuits import (
    CCXGate,
    CXGate,
    Circuit,
    DiffusionGate,
    HGate,
    MCXGate,
    ResetGate,
    SwapGate,
    XGate,
    ZeroOracleGate,
    addition_circuit,
    grover_circuit,
    grover_success_probability,
    hadamard_touched,
    optimal_grover_iterations,
    parse_circuit,
    serialize_circuit,
    superposition_circuit,
)
from .config import (
    DEFAULT_DENSE_CAP,
    DEFAULT_DROP_LIMIT,
    MAX_QUBITS,
    NORM_TOL,
    PRUNE_EPS,
)
from .dense import apply_gate_dense, run_dense
from .errors import (
    CapacityError,
    CircuitFormatError,
    ParameterError,
    QsparseError,
    ResetDiscardWarning,
    StateError,
)
from .runner import ExecutionResult, execute
from .selector import BackendChoice, run_mixed, select_backend
from .sparse import (
    RunReport,
    apply_gate_sparse,
    diffusion_direct,
    run_sparse,
    state_drop,
)
from .state import (
    DenseState,
    DropConfig,
    SparseState,
    from_dense,
    l2_norm,
    max_entrywise_diff,
    measure_probability,
    new_zero_dense,
    new_zero_state,
    nonzero_count,
    overlap,
    prune,
    renormalize,
    sample_measurement,
    to_dense,
)

__all__ = [
    "__version__",
    "Circuit",
    "HGate",
    "XGate",
    "CXGate",
    "CCXGate",
    "SwapGate",
    "ResetGate",
    "MCXGate",
    "ZeroOracleGate",
    "DiffusionGate",
    "parse_circuit",
    "serialize_circuit",
    "hadamard_touched",
    "superposition_circuit",
    "addition_circuit",
    "grover_circuit",
    "grover_success_probability",
    "optimal_grover_iterations",
    "PRUNE_EPS",
    "NORM_TOL",
    "DEFAULT_DROP_LIMIT",
    "DEFAULT_DENSE_CAP",
    "MAX_QUBITS",
    "QsparseError",
    "ParameterError",
    "CircuitFormatError",
    "CapacityError",
    "StateError",
    "ResetDiscardWarning",
    "SparseState",
    "DenseState",
    "DropConfig",
    "new_zero_state",
    "new_zero_dense",
    "nonzero_count",
    "l2_norm",
    "renormalize",
    "prune",
    "overlap",
    "max_entrywise_diff",
    "sample_measurement",
    "measure_probability",
    "to_dense",
    "from_dense",
    "apply_gate_sparse",
    "apply_gate_dense",
    "run_sparse",
    "run_dense",
    "state_drop",
    "diffusion_direct",
    "RunReport",
    "run_mixed",
    "select_backend",
    "BackendChoice",
    "execute",
    "ExecutionResult",
]
