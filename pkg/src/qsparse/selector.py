"""Static backend selection.

The rule: count the distinct qubits that receive a Hadamard (Diffusion
counts its listed qubits); choose sparse execution when 3*h < 2*n, dense
otherwise. Exact integer arithmetic, so the boundary never wobbles. The
sparse side pairs with the on-disk store backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .circuits import Circuit, hadamard_touched
from .config import dense_cap
from .dense import run_dense
from .errors import CapacityError
from .sparse import RunReport, run_sparse
from .state import DenseState, DropConfig


@dataclass(frozen=True)
class BackendChoice:
    kind: Literal["sparse", "dense"]
    sparse_backend: str | None = None

    @property
    def label(self) -> str:
        return self.sparse_backend if self.kind == "sparse" else "dense"


def select_backend(circuit: Circuit) -> BackendChoice:
    h = len(hadamard_touched(circuit))
    if 3 * h < 2 * circuit.n_qubits:
        return BackendChoice(kind="sparse", sparse_backend="store")
    return BackendChoice(kind="dense")


@dataclass
class MixedRun:
    choice: BackendChoice
    report: RunReport | None = None
    dense_state: DenseState | None = None


def run_mixed(
    circuit: Circuit,
    drop: DropConfig | None = None,
    cap: int | None = None,
    store_directory: str | None = None,
) -> MixedRun:
    """Select a backend for the circuit and run it there.

    A dense choice that exceeds the capacity cap raises CapacityError
    naming the heuristic, rather than silently falling back to sparse.
    """
    choice = select_backend(circuit)
    if choice.kind == "dense":
        limit = dense_cap(cap)
        if circuit.n_qubits > limit:
            h = len(hadamard_touched(circuit))
            raise CapacityError(
                f"selector chose dense execution (3*{h} >= 2*{circuit.n_qubits}) "
                f"but {circuit.n_qubits} qubits exceed the dense capacity of "
                f"{limit}"
            )
        return MixedRun(choice=choice, dense_state=run_dense(circuit, cap))
    report = run_sparse(circuit, "store", drop, store_directory)
    return MixedRun(choice=choice, report=report)
