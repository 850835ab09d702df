"""Dense simulator against scalar matrix oracles."""

from __future__ import annotations

import math

import numpy as np
import pytest

import qsparse.dense as dense_mod
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
    superposition_circuit,
)
from qsparse.errors import CapacityError, ResetDiscardWarning, StateError
from qsparse.state import l2_norm, new_zero_dense
from qsparse.dense import apply_gate_dense, run_dense

from conftest import reference_run, reference_unitary

UNITARY_GATES_N4 = [
    HGate(q=0),
    HGate(q=3),
    XGate(q=1),
    CXGate(c=0, t=2),
    CXGate(c=3, t=0),
    CCXGate(c1=0, c2=1, t=3),
    SwapGate(a=1, b=3),
    MCXGate(controls=(0, 2, 3), t=1),
    ZeroOracleGate(qubits=(0, 2)),
    DiffusionGate(qubits=(1, 2)),
    DiffusionGate(qubits=(0, 1, 3)),
]


def _random_dense(n: int, seed: int):
    rng = np.random.default_rng(seed)
    vec = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    vec /= np.linalg.norm(vec)
    state = new_zero_dense(n)
    state.amplitudes[:] = vec
    return state, vec


class TestGateKernels:
    @pytest.mark.parametrize("gate", UNITARY_GATES_N4, ids=lambda g: repr(g))
    def test_matches_matrix_oracle(self, gate):
        n = 4
        state, vec = _random_dense(n, seed=11)
        apply_gate_dense(state, gate)
        expected = reference_unitary(n, gate) @ vec
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12, rtol=0)

    def test_h_involution(self):
        state, vec = _random_dense(5, seed=3)
        apply_gate_dense(state, HGate(q=2))
        apply_gate_dense(state, HGate(q=2))
        np.testing.assert_allclose(state.amplitudes, vec, atol=1e-12, rtol=0)

    def test_permutations_preserve_magnitudes(self):
        for gate in (XGate(q=2), CXGate(c=1, t=0), SwapGate(a=0, b=3),
                     CCXGate(c1=2, c2=3, t=1)):
            state, vec = _random_dense(4, seed=7)
            apply_gate_dense(state, gate)
            np.testing.assert_array_equal(
                np.sort(np.abs(state.amplitudes)), np.sort(np.abs(vec))
            )

    def test_zero_oracle_flips_only_zero_block(self):
        state, vec = _random_dense(3, seed=5)
        apply_gate_dense(state, ZeroOracleGate(qubits=(0, 1)))
        for j in range(8):
            expected = -vec[j] if (j & 0b11) == 0 else vec[j]
            assert state.amplitudes[j] == expected


class TestChunkedKernels:
    """Tiny chunk size forces the tiled code paths on small vectors."""

    @pytest.fixture(autouse=True)
    def tiny_chunks(self, monkeypatch):
        monkeypatch.setattr(dense_mod, "_CHUNK", 4)

    @pytest.mark.parametrize("gate", UNITARY_GATES_N4, ids=lambda g: repr(g))
    def test_tiled_matches_oracle(self, gate):
        n = 4
        state, vec = _random_dense(n, seed=13)
        apply_gate_dense(state, gate)
        expected = reference_unitary(n, gate) @ vec
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12, rtol=0)

    def test_tiled_reset(self):
        state, vec = _random_dense(4, seed=17)
        with pytest.warns(ResetDiscardWarning):
            apply_gate_dense(state, ResetGate(q=1))
        bit = 1 << 1
        expected = vec.copy()
        expected[[j for j in range(16) if j & bit]] = 0.0
        expected /= np.linalg.norm(expected)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12, rtol=0)


class TestReset:
    def test_projects_and_renormalizes(self):
        state = new_zero_dense(2)
        apply_gate_dense(state, HGate(q=0))
        with pytest.warns(ResetDiscardWarning):
            apply_gate_dense(state, ResetGate(q=0))
        assert state.amplitudes[0] == pytest.approx(1.0)
        assert l2_norm(state) == pytest.approx(1.0)

    def test_no_warning_when_already_zero(self):
        state = new_zero_dense(2)
        apply_gate_dense(state, HGate(q=0))
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error", ResetDiscardWarning)
            apply_gate_dense(state, ResetGate(q=1))

    def test_deterministic_one_fails(self):
        state = new_zero_dense(2)
        apply_gate_dense(state, XGate(q=1))
        with pytest.raises(StateError):
            apply_gate_dense(state, ResetGate(q=1))


class TestRunDense:
    def test_uniform_superposition(self):
        state = run_dense(superposition_circuit(3, 3))
        np.testing.assert_allclose(
            state.amplitudes, np.full(8, 1 / math.sqrt(8)), atol=1e-12, rtol=0
        )

    def test_matches_matrix_oracle_on_circuit(self):
        gates = (
            HGate(q=0), HGate(q=1), CXGate(c=0, t=2),
            DiffusionGate(qubits=(0, 1)), ZeroOracleGate(qubits=(2,)),
            SwapGate(a=0, b=2), CCXGate(c1=0, c2=1, t=2),
        )
        circuit = Circuit(n_qubits=3, gates=gates)
        state = run_dense(circuit)
        np.testing.assert_allclose(
            state.amplitudes, reference_run(circuit), atol=1e-12, rtol=0
        )

    def test_norm_preserved_many_gates(self):
        rng = np.random.default_rng(0)
        n = 6
        state = new_zero_dense(n)
        apply_gate_dense(state, HGate(q=0))
        for _ in range(2000):
            q = int(rng.integers(n))
            apply_gate_dense(state, HGate(q=q))
        assert abs(l2_norm(state) - 1.0) <= 1e-10

    def test_capacity_cap_enforced(self):
        with pytest.raises(CapacityError):
            run_dense(superposition_circuit(30, 2))

    def test_cap_override_param(self):
        with pytest.raises(CapacityError):
            run_dense(superposition_circuit(8, 2), cap=6)
        run_dense(superposition_circuit(8, 2), cap=8)

    def test_cap_override_env(self, monkeypatch):
        from qsparse.config import ENV_DENSE_CAP

        monkeypatch.setenv(ENV_DENSE_CAP, "5")
        with pytest.raises(CapacityError):
            run_dense(superposition_circuit(6, 1))
        run_dense(superposition_circuit(5, 1))
