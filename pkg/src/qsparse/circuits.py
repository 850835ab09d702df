"""Gate set, circuit container, JSON document format, and circuit generators.

Basis indices are little-endian: qubit ``i`` lives at bit ``i`` of the
index, so an n-qubit circuit addresses qubits ``0 .. n-1``.
"""

from __future__ import annotations

import json
import math
from typing import Annotated, Any, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .config import MAX_QUBITS
from .errors import CircuitFormatError, ParameterError


class _FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class HGate(_FrozenModel):
    kind: Literal["h"] = "h"
    q: int = Field(ge=0)

    def operands(self) -> tuple[int, ...]:
        return (self.q,)


class XGate(_FrozenModel):
    kind: Literal["x"] = "x"
    q: int = Field(ge=0)

    def operands(self) -> tuple[int, ...]:
        return (self.q,)


class CXGate(_FrozenModel):
    kind: Literal["cx"] = "cx"
    c: int = Field(ge=0)
    t: int = Field(ge=0)

    @model_validator(mode="after")
    def _distinct(self) -> "CXGate":
        if self.c == self.t:
            raise ValueError("control and target must differ")
        return self

    def operands(self) -> tuple[int, ...]:
        return (self.c, self.t)


class CCXGate(_FrozenModel):
    kind: Literal["ccx"] = "ccx"
    c1: int = Field(ge=0)
    c2: int = Field(ge=0)
    t: int = Field(ge=0)

    @model_validator(mode="after")
    def _distinct(self) -> "CCXGate":
        if len({self.c1, self.c2, self.t}) != 3:
            raise ValueError("controls and target must be pairwise distinct")
        return self

    def operands(self) -> tuple[int, ...]:
        return (self.c1, self.c2, self.t)


class SwapGate(_FrozenModel):
    kind: Literal["swap"] = "swap"
    a: int = Field(ge=0)
    b: int = Field(ge=0)

    @model_validator(mode="after")
    def _distinct(self) -> "SwapGate":
        if self.a == self.b:
            raise ValueError("swap qubits must differ")
        return self

    def operands(self) -> tuple[int, ...]:
        return (self.a, self.b)


class ResetGate(_FrozenModel):
    """Project qubit ``q`` onto 0 and renormalize the survivors."""

    kind: Literal["reset"] = "reset"
    q: int = Field(ge=0)

    def operands(self) -> tuple[int, ...]:
        return (self.q,)


class MCXGate(_FrozenModel):
    kind: Literal["mcx"] = "mcx"
    controls: tuple[int, ...] = Field(min_length=1)
    t: int = Field(ge=0)

    @model_validator(mode="after")
    def _distinct(self) -> "MCXGate":
        seen = set(self.controls)
        if len(seen) != len(self.controls):
            raise ValueError("duplicate control qubits")
        if self.t in seen:
            raise ValueError("target must not be a control")
        if any(c < 0 for c in self.controls):
            raise ValueError("qubit indices must be non-negative")
        return self

    def operands(self) -> tuple[int, ...]:
        return (*self.controls, self.t)


class ZeroOracleGate(_FrozenModel):
    """Flip the phase of every basis state whose listed qubits are all 0."""

    kind: Literal["zero_oracle"] = "zero_oracle"
    qubits: tuple[int, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def _distinct(self) -> "ZeroOracleGate":
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("duplicate qubits")
        if any(q < 0 for q in self.qubits):
            raise ValueError("qubit indices must be non-negative")
        return self

    def operands(self) -> tuple[int, ...]:
        return self.qubits


class DiffusionGate(_FrozenModel):
    """Reflect amplitudes about their mean over the listed qubits.

    Equivalent to H^(x) (2|0><0| - I) H^(x) on those qubits; both
    simulators implement it so that equivalence holds, and the sparse path
    uses the reflection a -> 2*mean - a directly within each group of
    basis states that agree outside the listed qubits.
    """

    kind: Literal["diffusion"] = "diffusion"
    qubits: tuple[int, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def _distinct(self) -> "DiffusionGate":
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("duplicate qubits")
        if any(q < 0 for q in self.qubits):
            raise ValueError("qubit indices must be non-negative")
        return self

    def operands(self) -> tuple[int, ...]:
        return self.qubits


Gate = Annotated[
    Union[
        HGate,
        XGate,
        CXGate,
        CCXGate,
        SwapGate,
        ResetGate,
        MCXGate,
        ZeroOracleGate,
        DiffusionGate,
    ],
    Field(discriminator="kind"),
]


class Circuit(_FrozenModel):
    n_qubits: int = Field(ge=1, le=MAX_QUBITS)
    gates: tuple[Gate, ...] = ()
    metadata: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _qubits_in_range(self) -> "Circuit":
        for pos, gate in enumerate(self.gates):
            for q in gate.operands():
                if q >= self.n_qubits:
                    raise ValueError(
                        f"gates[{pos}] ({gate.kind}): qubit {q} out of range "
                        f"for a {self.n_qubits}-qubit circuit"
                    )
        return self

    @property
    def gate_count(self) -> int:
        return len(self.gates)


def parse_circuit(document: str) -> Circuit:
    """Parse a JSON circuit document, raising CircuitFormatError with position info."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    try:
        return Circuit.model_validate(raw)
    except ValidationError as exc:
        raise CircuitFormatError(_summarize(exc)) from None


def serialize_circuit(circuit: Circuit) -> str:
    """Render a circuit as a deterministic JSON document."""
    return json.dumps(circuit.model_dump(mode="json"), indent=2) + "\n"


def _summarize(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors()[:3]:
        loc = ""
        for piece in err["loc"]:
            if isinstance(piece, int):
                loc += f"[{piece}]"
            else:
                loc = f"{loc}.{piece}" if loc else str(piece)
        parts.append(f"{loc or 'document'}: {err['msg']}")
    more = len(exc.errors()) - 3
    if more > 0:
        parts.append(f"(+{more} more)")
    return "; ".join(parts)


def hadamard_touched(circuit: Circuit) -> set[int]:
    """Qubits that receive a Hadamard, counting each Diffusion's qubits.

    Diffusion expands to H on every listed qubit, so those qubits count as
    touched even when no explicit H gate appears.
    """
    touched: set[int] = set()
    for gate in circuit.gates:
        if gate.kind == "h":
            touched.add(gate.q)
        elif gate.kind == "diffusion":
            touched.update(gate.qubits)
    return touched


# --- generators -----------------------------------------------------------


def superposition_circuit(n: int, r: int) -> Circuit:
    """H on the first ``r`` of ``n`` qubits: a uniform 2**r superposition."""
    if not 1 <= n <= MAX_QUBITS:
        raise ParameterError(f"n must lie in [1, {MAX_QUBITS}], got {n}")
    if not 0 <= r <= n:
        raise ParameterError(f"r must lie in [0, {n}], got {r}")
    gates = tuple(HGate(q=i) for i in range(r))
    return Circuit(
        n_qubits=n,
        gates=gates,
        metadata={
            "generator": "superposition",
            "n": n,
            "r": r,
            "registers": {"nondet": list(range(r))},
        },
    )


def _adder_gates(k: int) -> list[Any]:
    """Gates computing out := (a + b) mod 2**k with inputs preserved.

    Layout: a = qubits 0..k-1, b = k..2k-1, out = 2k..3k-1, carry = 3k.
    The b register is first copied into out, then a ripple of
    majority/unmajority blocks adds a into out in place. The carry ancilla
    returns to 0; dropping the final carry-out is what makes the sum mod
    2**k. 7k gates total, all CX/CCX.
    """
    gates: list[Any] = []
    for i in range(k):
        gates.append(CXGate(c=k + i, t=2 * k + i))

    def maj(c: int, s: int, a: int) -> list[Any]:
        return [CXGate(c=a, t=s), CXGate(c=a, t=c), CCXGate(c1=c, c2=s, t=a)]

    def uma(c: int, s: int, a: int) -> list[Any]:
        return [CCXGate(c1=c, c2=s, t=a), CXGate(c=a, t=c), CXGate(c=c, t=s)]

    chain = []
    carry = 3 * k
    for i in range(k):
        chain.append((carry, 2 * k + i, i))
        carry = i
    for triple in chain:
        gates.extend(maj(*triple))
    for triple in reversed(chain):
        gates.extend(uma(*triple))
    return gates


def _adder_registers(k: int) -> dict[str, list[int]]:
    return {
        "input_a": list(range(k)),
        "input_b": list(range(k, 2 * k)),
        "output": list(range(2 * k, 3 * k)),
        "ancilla": list(range(3 * k, 3 * k + 5)),
    }


def addition_circuit(k: int, r: int) -> Circuit:
    """Reversible k-bit adder on 3k + 5 qubits, preceded by H on the first r.

    Registers: a = 0..k-1, b = k..2k-1, out = 2k..3k-1, ancillas =
    3k..3k+4. The trailing SWAP and resets tidy the ancilla block; on any
    run that starts from |0> they are no-ops because the adder already
    returns its carry ancilla to 0.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    n = 3 * k + 5
    if n > MAX_QUBITS:
        raise ParameterError(f"k={k} needs {n} qubits, above the {MAX_QUBITS} cap")
    if not 0 <= r <= 2 * k:
        raise ParameterError(f"r must lie in [0, {2 * k}], got {r}")
    gates: list[Any] = [HGate(q=i) for i in range(r)]
    gates.extend(_adder_gates(k))
    gates.append(SwapGate(a=3 * k, b=3 * k + 4))
    gates.extend(ResetGate(q=3 * k + i) for i in range(5))
    registers = _adder_registers(k)
    registers["nondet"] = list(range(r))
    return Circuit(
        n_qubits=n,
        gates=tuple(gates),
        metadata={"generator": "addition", "k": k, "r": r, "registers": registers},
    )


def grover_circuit(search_qubits: int, iterations: int) -> Circuit:
    """Grover search for the all-zeros pattern, with an adder as the workload.

    The search register (qubits 0..r-1) doubles as the first input of an
    r-bit adder whose output register feeds a phase oracle on 0. Each
    iteration recomputes the adder, flips the phase where the output is
    all zeros, uncomputes the adder, and reflects the search register
    about its mean, so the oracle register returns to |0> before every
    diffusion and the success probability follows
    sin^2((2t+1) asin(2**(-r/2))).

    Total qubits: 3r + 5 (search, second input, output, five ancillas).
    """
    r = search_qubits
    t = iterations
    if r < 1:
        raise ParameterError(f"search_qubits must be >= 1, got {r}")
    if t < 0:
        raise ParameterError(f"iterations must be >= 0, got {t}")
    n = 3 * r + 5
    if n > MAX_QUBITS:
        raise ParameterError(
            f"search_qubits={r} needs {n} qubits, above the {MAX_QUBITS} cap"
        )
    adder = _adder_gates(r)
    output = tuple(range(2 * r, 3 * r))
    search = tuple(range(r))

    gates: list[Any] = [HGate(q=i) for i in search]
    gates.extend(adder)
    for _ in range(t):
        gates.append(ZeroOracleGate(qubits=output))
        gates.extend(reversed(adder))
        gates.append(DiffusionGate(qubits=search))
        gates.extend(adder)

    registers = _adder_registers(r)
    registers["search"] = list(search)
    registers["oracle"] = list(output)
    return Circuit(
        n_qubits=n,
        gates=tuple(gates),
        metadata={
            "generator": "grover",
            "search_qubits": r,
            "iterations": t,
            "marked_pattern": 0,
            "registers": registers,
        },
    )


def grover_success_probability(search_qubits: int, iterations: int) -> float:
    """Analytic probability of measuring the marked (all-zeros) pattern."""
    theta = math.asin(2.0 ** (-search_qubits / 2.0))
    return math.sin((2 * iterations + 1) * theta) ** 2


def optimal_grover_iterations(search_qubits: int) -> int:
    """Iteration count maximizing the analytic success probability."""
    if search_qubits < 1:
        raise ParameterError(f"search_qubits must be >= 1, got {search_qubits}")
    theta = math.asin(2.0 ** (-search_qubits / 2.0))
    guess = max(0, round(math.pi / (4.0 * theta) - 0.5))
    candidates = [c for c in (guess - 1, guess, guess + 1) if c >= 0]
    return max(
        candidates,
        key=lambda c: grover_success_probability(search_qubits, c),
    )
