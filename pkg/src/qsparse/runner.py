"""Uniform entry point over the four execution backends."""

from __future__ import annotations

from dataclasses import dataclass

from .circuits import Circuit
from .dense import run_dense
from .errors import ParameterError
from .selector import run_mixed
from .sparse import run_sparse
from .state import DenseState, DropConfig, SparseState

BACKENDS = ("array", "store", "dense", "mixed")


@dataclass
class ExecutionResult:
    backend_requested: str
    backend_used: str
    state: SparseState | DenseState
    gate_count: int
    dropped_mass: float | None = None
    peak_support: int | None = None

    def close(self) -> None:
        if isinstance(self.state, SparseState):
            self.state.close()


def execute(
    circuit: Circuit,
    backend: str = "store",
    drop: DropConfig | None = None,
    cap: int | None = None,
    store_directory: str | None = None,
) -> ExecutionResult:
    """Run a circuit on the named backend ("array", "store", "dense", "mixed")."""
    if backend in ("array", "store"):
        report = run_sparse(circuit, backend, drop, store_directory)
        return ExecutionResult(
            backend_requested=backend,
            backend_used=backend,
            state=report.final_state,
            gate_count=report.gate_count,
            dropped_mass=report.dropped_mass,
            peak_support=report.peak_support,
        )
    if backend == "dense":
        state = run_dense(circuit, cap)
        return ExecutionResult(
            backend_requested=backend,
            backend_used="dense",
            state=state,
            gate_count=circuit.gate_count,
        )
    if backend == "mixed":
        outcome = run_mixed(circuit, drop, cap, store_directory)
        if outcome.report is not None:
            return ExecutionResult(
                backend_requested=backend,
                backend_used=outcome.choice.label,
                state=outcome.report.final_state,
                gate_count=outcome.report.gate_count,
                dropped_mass=outcome.report.dropped_mass,
                peak_support=outcome.report.peak_support,
            )
        assert outcome.dense_state is not None
        return ExecutionResult(
            backend_requested=backend,
            backend_used="dense",
            state=outcome.dense_state,
            gate_count=circuit.gate_count,
        )
    raise ParameterError(
        f"unknown backend {backend!r}; expected one of {', '.join(BACKENDS)}"
    )
