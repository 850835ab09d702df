"""Request and response schemas for the service."""

from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, Field, model_validator

from ..bench import BenchPoint
from ..circuits import (
    Circuit,
    addition_circuit,
    grover_circuit,
    optimal_grover_iterations,
    superposition_circuit,
)
from ..errors import ParameterError


class SuperpositionSpec(BaseModel):
    generator: Literal["superposition"]
    n: int
    r: int


class AdditionSpec(BaseModel):
    generator: Literal["addition"]
    k: int
    r: int = 0


class GroverSpec(BaseModel):
    generator: Literal["grover"]
    search_qubits: int
    iterations: int | None = None


GeneratorSpec = Annotated[
    Union[SuperpositionSpec, AdditionSpec, GroverSpec],
    Field(discriminator="generator"),
]


def build_circuit(spec: SuperpositionSpec | AdditionSpec | GroverSpec) -> Circuit:
    if isinstance(spec, SuperpositionSpec):
        return superposition_circuit(spec.n, spec.r)
    if isinstance(spec, AdditionSpec):
        return addition_circuit(spec.k, spec.r)
    iterations = spec.iterations
    if iterations is None:
        iterations = optimal_grover_iterations(spec.search_qubits)
    return grover_circuit(spec.search_qubits, iterations)


class MeasureSpec(BaseModel):
    """A pattern over a qubit subset; bit i of pattern maps to qubits[i].

    ``qubits`` may also name a register recorded in the circuit metadata,
    e.g. "search" for the generated search circuits.
    """

    pattern: int = Field(ge=0)
    qubits: list[int] | str


class RunRequest(BaseModel):
    circuit: Circuit | None = None
    generate: GeneratorSpec | None = None
    backend: Literal["array", "store", "dense", "mixed"] = "store"
    drop_limit: int | None = None
    seed: int = 0
    top: int = Field(default=10, ge=0)
    measure: MeasureSpec | None = None
    dense_cap: int | None = None

    @model_validator(mode="after")
    def _exactly_one_source(self) -> "RunRequest":
        if (self.circuit is None) == (self.generate is None):
            raise ValueError("provide exactly one of 'circuit' or 'generate'")
        return self


class StateEntry(BaseModel):
    index: int
    bits: str
    probability: float
    amplitude_re: float
    amplitude_im: float


class MeasureResult(BaseModel):
    pattern: int
    qubits: list[int]
    probability: float


class RunResponse(BaseModel):
    backend_requested: str
    backend_used: str
    n_qubits: int
    gate_count: int
    support: int
    norm: float
    dropped_mass: float | None
    peak_support: int | None
    top_entries: list[StateEntry]
    measure: MeasureResult | None
    sample_index: int
    sample_bits: str
    wall_time_s: float


class BenchRequest(BaseModel):
    suite: Literal[
        "superposition",
        "addition",
        "grover",
        "drop-superposition",
        "drop-addition",
        "drop-grover",
    ]
    n_max: int | None = None
    n: int | None = None
    r_max: int | None = None
    backends: list[str] | None = None
    drop_limit: int = Field(default=1000, ge=1)
    repeats: int = Field(default=3, ge=1)
    time_cutoff_s: float = Field(default=60.0, gt=0.0)
    seed: int = 0
    serial: bool = True
    dense_cap: int | None = None
    format: Literal["points", "csv", "json"] = "points"


class BenchSummary(BaseModel):
    cells: int
    ok: int
    capacity_cutoff: int
    time_cutoff: int


class BenchResponse(BaseModel):
    suite: str
    points: list[BenchPoint]
    summary: BenchSummary


class ErrorBody(BaseModel):
    kind: str
    message: str


class ErrorResponse(BaseModel):
    error: ErrorBody


def resolve_measure_qubits(
    spec: MeasureSpec, circuit: Circuit
) -> list[int]:
    """Map a register name to qubit indices via circuit metadata."""
    if isinstance(spec.qubits, list):
        return spec.qubits
    registers = circuit.metadata.get("registers")
    if not isinstance(registers, dict) or spec.qubits not in registers:
        known = sorted(registers) if isinstance(registers, dict) else []
        raise ParameterError(
            f"circuit metadata defines no register named {spec.qubits!r}"
            + (f"; known registers: {', '.join(known)}" if known else "")
        )
    qubits = registers[spec.qubits]
    if not isinstance(qubits, list) or not all(isinstance(q, int) for q in qubits):
        raise ParameterError(f"register {spec.qubits!r} is not a list of qubits")
    return list(qubits)
