"""Shared fixtures: random circuit corpus, scalar reference oracles."""

from __future__ import annotations

import warnings

import numpy as np
import pytest

from qsparse.circuits import (
    CCXGate,
    Circuit,
    CXGate,
    DiffusionGate,
    HGate,
    MCXGate,
    ResetGate,
    SwapGate,
    XGate,
    ZeroOracleGate,
)
from qsparse.config import ENV_DENSE_CAP, ENV_STORE_DIR

with warnings.catch_warnings():
    warnings.filterwarnings("ignore", message="Using .httpx. with")
    from starlette.testclient import TestClient  # noqa: F401  (re-exported)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Keep ambient capacity/store overrides out of the tests."""
    monkeypatch.delenv(ENV_DENSE_CAP, raising=False)
    monkeypatch.delenv(ENV_STORE_DIR, raising=False)


# --- random circuit corpus --------------------------------------------------


def random_circuit(rng: np.random.Generator, n: int, max_gates: int = 60) -> Circuit:
    """A random circuit over the full gate set.

    The last qubit serves as a deterministic ancilla: it only ever sees X
    and RESET, and every RESET lands while it is provably 0, so resets
    never discard probability mass.
    """
    if n >= 3:
        data = list(range(n - 1))
        ancilla = n - 1
    else:
        data = list(range(n))
        ancilla = None
    gates: list = []
    parity = 0
    budget = int(rng.integers(8, max_gates + 1))

    def pick(count: int) -> list[int]:
        return [int(q) for q in rng.choice(data, size=count, replace=False)]

    while len(gates) < budget:
        roll = float(rng.random())
        if roll < 0.30:
            gates.append(HGate(q=pick(1)[0]))
        elif roll < 0.40:
            if ancilla is not None and rng.random() < 0.2:
                gates.append(XGate(q=ancilla))
                parity ^= 1
            else:
                gates.append(XGate(q=pick(1)[0]))
        elif roll < 0.55 and len(data) >= 2:
            c, t = pick(2)
            gates.append(CXGate(c=c, t=t))
        elif roll < 0.65 and len(data) >= 3:
            c1, c2, t = pick(3)
            gates.append(CCXGate(c1=c1, c2=c2, t=t))
        elif roll < 0.75 and len(data) >= 2:
            a, b = pick(2)
            gates.append(SwapGate(a=a, b=b))
        elif roll < 0.80 and len(data) >= 4:
            qs = pick(int(rng.integers(3, 5)))
            gates.append(MCXGate(controls=tuple(qs[:-1]), t=qs[-1]))
        elif roll < 0.88:
            count = int(rng.integers(1, min(4, len(data)) + 1))
            gates.append(ZeroOracleGate(qubits=tuple(sorted(pick(count)))))
        elif roll < 0.95:
            count = int(rng.integers(1, min(3, len(data)) + 1))
            gates.append(DiffusionGate(qubits=tuple(sorted(pick(count)))))
        elif ancilla is not None:
            if parity == 1:
                gates.append(XGate(q=ancilla))
                parity = 0
            gates.append(ResetGate(q=ancilla))
    return Circuit(n_qubits=n, gates=tuple(gates[:budget]))


# --- scalar reference oracle ------------------------------------------------


def reference_unitary(n: int, gate) -> np.ndarray:
    """Full 2**n matrix for one gate, built index-by-index from definitions.

    Scalar python arithmetic, no shared code with either simulator; meant
    for n small enough that 4**n entries are cheap.
    """
    dim = 1 << n
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    kind = gate.kind
    if kind == "diffusion":
        # H^(x) (2|0><0| - I) H^(x) composed from the H matrices.
        result = np.eye(dim, dtype=np.complex128)
        for q in gate.qubits:
            result = reference_unitary(n, HGate(q=q)) @ result
        reflect = -np.eye(dim, dtype=np.complex128)
        mask = sum(1 << q for q in gate.qubits)
        for j in range(dim):
            if j & mask == 0:
                reflect[j, j] = 1.0
        result = reflect @ result
        for q in gate.qubits:
            result = reference_unitary(n, HGate(q=q)) @ result
        return result
    for j in range(dim):
        if kind == "h":
            bit = 1 << gate.q
            value = 1.0 / np.sqrt(2.0)
            matrix[j & ~bit, j] += value
            matrix[j | bit, j] += -value if j & bit else value
        elif kind == "x":
            matrix[j ^ (1 << gate.q), j] = 1.0
        elif kind == "cx":
            out = j ^ (1 << gate.t) if j & (1 << gate.c) else j
            matrix[out, j] = 1.0
        elif kind == "ccx":
            both = (1 << gate.c1) | (1 << gate.c2)
            out = j ^ (1 << gate.t) if (j & both) == both else j
            matrix[out, j] = 1.0
        elif kind == "swap":
            bit_a = (j >> gate.a) & 1
            bit_b = (j >> gate.b) & 1
            out = j
            if bit_a != bit_b:
                out = j ^ (1 << gate.a) ^ (1 << gate.b)
            matrix[out, j] = 1.0
        elif kind == "mcx":
            want = sum(1 << c for c in gate.controls)
            out = j ^ (1 << gate.t) if (j & want) == want else j
            matrix[out, j] = 1.0
        elif kind == "zero_oracle":
            mask = sum(1 << q for q in gate.qubits)
            matrix[j, j] = -1.0 if (j & mask) == 0 else 1.0
        else:
            raise AssertionError(f"no reference matrix for {kind!r}")
    return matrix


def reference_run(circuit: Circuit) -> np.ndarray:
    """Run a unitary-only circuit through the matrix oracle."""
    vec = np.zeros(1 << circuit.n_qubits, dtype=np.complex128)
    vec[0] = 1.0
    for gate in circuit.gates:
        assert gate.kind != "reset", "reference_run handles unitary gates only"
        vec = reference_unitary(circuit.n_qubits, gate) @ vec
    return vec
