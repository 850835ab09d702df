"""Circuit model validation, JSON round-trips, and generator contracts."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsparse.circuits import (
    CCXGate,
    Circuit,
    CXGate,
    DiffusionGate,
    HGate,
    MCXGate,
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
from qsparse.errors import CircuitFormatError, ParameterError

from conftest import random_circuit
import numpy as np


class TestGateValidation:
    def test_gate_kinds_parse_from_json(self):
        doc = json.dumps(
            {
                "n_qubits": 5,
                "gates": [
                    {"kind": "h", "q": 0},
                    {"kind": "x", "q": 1},
                    {"kind": "cx", "c": 0, "t": 1},
                    {"kind": "ccx", "c1": 0, "c2": 1, "t": 2},
                    {"kind": "swap", "a": 3, "b": 4},
                    {"kind": "reset", "q": 4},
                    {"kind": "mcx", "controls": [0, 1, 2], "t": 3},
                    {"kind": "zero_oracle", "qubits": [1, 2]},
                    {"kind": "diffusion", "qubits": [0, 1]},
                ],
            }
        )
        circuit = parse_circuit(doc)
        assert circuit.gate_count == 9
        assert [g.kind for g in circuit.gates] == [
            "h", "x", "cx", "ccx", "swap", "reset", "mcx", "zero_oracle", "diffusion",
        ]

    def test_rejects_duplicate_operands(self):
        with pytest.raises(ValueError):
            CXGate(c=1, t=1)
        with pytest.raises(ValueError):
            CCXGate(c1=0, c2=0, t=1)
        with pytest.raises(ValueError):
            MCXGate(controls=(0, 1), t=1)
        with pytest.raises(ValueError):
            ZeroOracleGate(qubits=(2, 2))
        with pytest.raises(ValueError):
            DiffusionGate(qubits=())

    def test_rejects_out_of_range_qubits(self):
        with pytest.raises(ValueError, match="out of range"):
            Circuit(n_qubits=2, gates=(HGate(q=2),))

    def test_rejects_bad_width(self):
        with pytest.raises(ValueError):
            Circuit(n_qubits=0)
        with pytest.raises(ValueError):
            Circuit(n_qubits=65)

    def test_frozen(self):
        gate = HGate(q=0)
        with pytest.raises(ValueError):
            gate.q = 1


class TestDocumentFormat:
    def test_parse_error_reports_position(self):
        with pytest.raises(CircuitFormatError, match=r"line 1"):
            parse_circuit("{not json")

    def test_validation_error_names_offending_gate(self):
        doc = json.dumps(
            {"n_qubits": 2, "gates": [{"kind": "h", "q": 0}, {"kind": "cx", "c": 0}]}
        )
        with pytest.raises(CircuitFormatError, match=r"gates\[1\]"):
            parse_circuit(doc)

    def test_unknown_kind_rejected(self):
        doc = json.dumps({"n_qubits": 1, "gates": [{"kind": "rx", "q": 0}]})
        with pytest.raises(CircuitFormatError):
            parse_circuit(doc)

    def test_extra_fields_rejected(self):
        doc = json.dumps({"n_qubits": 1, "gates": [{"kind": "h", "q": 0, "z": 1}]})
        with pytest.raises(CircuitFormatError):
            parse_circuit(doc)

    def test_round_trip_identity(self):
        circuit = grover_circuit(3, 2)
        assert parse_circuit(serialize_circuit(circuit)) == circuit

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 10))
    def test_round_trip_random_circuits(self, seed, n):
        circuit = random_circuit(np.random.default_rng(seed), n, max_gates=30)
        assert parse_circuit(serialize_circuit(circuit)) == circuit


class TestHadamardTouched:
    def test_counts_distinct_qubits_not_gates(self):
        circuit = Circuit(
            n_qubits=3, gates=(HGate(q=0), HGate(q=0), HGate(q=1))
        )
        assert hadamard_touched(circuit) == {0, 1}

    def test_diffusion_counts_its_qubits(self):
        circuit = Circuit(n_qubits=4, gates=(DiffusionGate(qubits=(1, 3)),))
        assert hadamard_touched(circuit) == {1, 3}

    def test_other_gates_do_not_count(self):
        circuit = Circuit(
            n_qubits=3,
            gates=(CXGate(c=0, t=1), ZeroOracleGate(qubits=(2,))),
        )
        assert hadamard_touched(circuit) == set()


class TestSuperpositionGenerator:
    def test_shape(self):
        circuit = superposition_circuit(8, 3)
        assert circuit.n_qubits == 8
        assert [g.kind for g in circuit.gates] == ["h"] * 3
        assert [g.q for g in circuit.gates] == [0, 1, 2]

    def test_r_zero_is_empty(self):
        assert superposition_circuit(4, 0).gate_count == 0

    def test_bad_params(self):
        with pytest.raises(ParameterError):
            superposition_circuit(4, 5)
        with pytest.raises(ParameterError):
            superposition_circuit(0, 0)
        with pytest.raises(ParameterError):
            superposition_circuit(65, 0)

    @given(n=st.integers(1, 64), seed=st.integers(0, 1000))
    @settings(max_examples=30, deadline=None)
    def test_h_count_matches_r(self, n, seed):
        r = seed % (n + 1)
        circuit = superposition_circuit(n, r)
        assert len(hadamard_touched(circuit)) == r

    def test_deterministic(self):
        assert superposition_circuit(6, 4) == superposition_circuit(6, 4)


class TestAdditionGenerator:
    def test_width_and_registers(self):
        circuit = addition_circuit(3, 2)
        assert circuit.n_qubits == 14
        regs = circuit.metadata["registers"]
        assert regs["input_a"] == [0, 1, 2]
        assert regs["input_b"] == [3, 4, 5]
        assert regs["output"] == [6, 7, 8]
        assert regs["ancilla"] == [9, 10, 11, 12, 13]

    def test_h_prefix(self):
        circuit = addition_circuit(2, 3)
        kinds = [g.kind for g in circuit.gates[:3]]
        assert kinds == ["h", "h", "h"]
        assert len(hadamard_touched(circuit)) == 3

    def test_tail_is_swap_then_resets(self):
        circuit = addition_circuit(2, 0)
        tail = circuit.gates[-6:]
        assert tail[0].kind == "swap"
        assert (tail[0].a, tail[0].b) == (6, 10)
        assert all(g.kind == "reset" for g in tail[1:])
        assert [g.q for g in tail[1:]] == [6, 7, 8, 9, 10]

    def test_r_bounds(self):
        addition_circuit(2, 4)
        with pytest.raises(ParameterError):
            addition_circuit(2, 5)
        with pytest.raises(ParameterError):
            addition_circuit(0, 0)
        with pytest.raises(ParameterError):
            addition_circuit(20, 0)  # 65 qubits


class TestGroverGenerator:
    def test_width_is_3r_plus_5(self):
        for r in (1, 2, 3, 4):
            assert grover_circuit(r, 1).n_qubits == 3 * r + 5

    def test_structure(self):
        r, t = 3, 2
        circuit = grover_circuit(r, t)
        kinds = [g.kind for g in circuit.gates]
        assert kinds[:r] == ["h"] * r
        assert kinds.count("zero_oracle") == t
        assert kinds.count("diffusion") == t
        oracle = next(g for g in circuit.gates if g.kind == "zero_oracle")
        assert oracle.qubits == (6, 7, 8)
        diffusion = next(g for g in circuit.gates if g.kind == "diffusion")
        assert diffusion.qubits == (0, 1, 2)

    def test_metadata(self):
        circuit = grover_circuit(4, 3)
        md = circuit.metadata
        assert md["marked_pattern"] == 0
        assert md["registers"]["search"] == [0, 1, 2, 3]
        assert md["registers"]["oracle"] == md["registers"]["output"]

    def test_zero_iterations_allowed(self):
        circuit = grover_circuit(2, 0)
        assert not any(g.kind == "diffusion" for g in circuit.gates)

    def test_bad_params(self):
        with pytest.raises(ParameterError):
            grover_circuit(0, 1)
        with pytest.raises(ParameterError):
            grover_circuit(3, -1)
        with pytest.raises(ParameterError):
            grover_circuit(20, 1)  # 65 qubits


class TestOptimalIterations:
    def test_reference_values(self):
        assert optimal_grover_iterations(3) == 2
        assert optimal_grover_iterations(4) == 3
        assert optimal_grover_iterations(5) == 4

    @given(r=st.integers(1, 16))
    @settings(max_examples=16, deadline=None)
    def test_is_argmax_among_neighbors(self, r):
        best = optimal_grover_iterations(r)
        p_best = grover_success_probability(r, best)
        for other in (best - 1, best + 1):
            if other >= 0:
                assert grover_success_probability(r, other) <= p_best
