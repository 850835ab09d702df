"""Dense full-vector reference simulator.

Implements the same gate semantics as the sparse path over an explicit
2**n amplitude vector, as an independent oracle for equivalence tests.
Kernels stream over fixed-size tiles so the n=26 case (a 1 GiB vector)
never allocates more than a few tens of MB of temporaries.
"""

from __future__ import annotations

import math
import warnings
from typing import Iterator

import numpy as np

from .circuits import Circuit
from .config import NORM_TOL, dense_cap
from .errors import CapacityError, ParameterError, ResetDiscardWarning, StateError
from .state import DenseState, new_zero_dense

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

_CHUNK = 1 << 20


def _h(vec: np.ndarray, q: int) -> None:
    stride = 1 << q
    paired = vec.reshape(-1, 2, stride)
    major = paired.shape[0]
    major_step = max(1, _CHUNK // stride)
    minor_step = min(stride, _CHUNK)
    for m0 in range(0, major, major_step):
        m1 = min(major, m0 + major_step)
        for s0 in range(0, stride, minor_step):
            s1 = min(stride, s0 + minor_step)
            low = paired[m0:m1, 0, s0:s1]
            high = paired[m0:m1, 1, s0:s1]
            total = (low + high) * _INV_SQRT2
            diff = (low - high) * _INV_SQRT2
            low[...] = total
            high[...] = diff


def _iter_subspace(n: int, fixed: dict[int, int]) -> Iterator[np.ndarray]:
    """Chunked int64 indices of basis states with the given bits pinned."""
    free = [b for b in range(n) if b not in fixed]
    base = 0
    for b, val in fixed.items():
        if val:
            base |= 1 << b
    size = 1 << len(free)
    for start in range(0, size, _CHUNK):
        stop = min(size, start + _CHUNK)
        counter = np.arange(start, stop, dtype=np.int64)
        idx = np.full(counter.size, base, dtype=np.int64)
        for i, pos in enumerate(free):
            idx |= ((counter >> i) & 1) << pos
        yield idx


def _swap_pairs(vec: np.ndarray, n: int, fixed: dict[int, int], flip: int) -> None:
    for idx in _iter_subspace(n, fixed):
        partner = idx ^ flip
        tmp = vec[idx].copy()
        vec[idx] = vec[partner]
        vec[partner] = tmp


def _zero_oracle(vec: np.ndarray, n: int, qubits: tuple[int, ...]) -> None:
    for idx in _iter_subspace(n, {q: 0 for q in qubits}):
        vec[idx] = -vec[idx]


def _slice_mass(paired: np.ndarray, side: int) -> float:
    """Probability mass of one side of a pinned bit, streamed in tiles."""
    stride = paired.shape[2]
    major = paired.shape[0]
    major_step = max(1, _CHUNK // stride)
    minor_step = min(stride, _CHUNK)
    total = 0.0
    for m0 in range(0, major, major_step):
        m1 = min(major, m0 + major_step)
        for s0 in range(0, stride, minor_step):
            s1 = min(stride, s0 + minor_step)
            block = paired[m0:m1, side, s0:s1]
            total += float(np.vdot(block, block).real)
    return total


def _reset(vec: np.ndarray, q: int) -> None:
    stride = 1 << q
    paired = vec.reshape(-1, 2, stride)
    kept = _slice_mass(paired, 0)
    discarded = _slice_mass(paired, 1)
    total = kept + discarded
    if kept <= 0.0 or total <= 0.0:
        raise StateError(
            f"reset on qubit {q} removed all support; the qubit was "
            "deterministically 1"
        )
    if discarded > NORM_TOL:
        warnings.warn(
            f"reset on qubit {q} discarded probability {discarded:.6g}",
            ResetDiscardWarning,
            stacklevel=4,
        )
    paired[:, 1, :] = 0.0
    scale = 1.0 / math.sqrt(kept / total)
    major = paired.shape[0]
    major_step = max(1, _CHUNK // stride)
    for m0 in range(0, major, major_step):
        m1 = min(major, m0 + major_step)
        paired[m0:m1, 0, :] *= scale


def _diffusion(vec: np.ndarray, n: int, qubits: tuple[int, ...]) -> None:
    # H^(x) (2|0><0| - I) H^(x), streamed: global sign flip, then restore
    # the all-zeros pattern of the listed qubits to +.
    for q in qubits:
        _h(vec, q)
    np.negative(vec, out=vec)
    _zero_oracle(vec, n, qubits)
    for q in qubits:
        _h(vec, q)


def apply_gate_dense(state: DenseState, gate) -> DenseState:
    """Apply one gate to the vector in place."""
    vec = state.amplitudes
    n = state.n_qubits
    kind = gate.kind
    if kind == "h":
        _h(vec, gate.q)
    elif kind == "x":
        _swap_pairs(vec, n, {gate.q: 0}, 1 << gate.q)
    elif kind == "cx":
        _swap_pairs(vec, n, {gate.c: 1, gate.t: 0}, 1 << gate.t)
    elif kind == "ccx":
        _swap_pairs(vec, n, {gate.c1: 1, gate.c2: 1, gate.t: 0}, 1 << gate.t)
    elif kind == "swap":
        _swap_pairs(vec, n, {gate.a: 1, gate.b: 0}, (1 << gate.a) | (1 << gate.b))
    elif kind == "mcx":
        fixed = {c: 1 for c in gate.controls}
        fixed[gate.t] = 0
        _swap_pairs(vec, n, fixed, 1 << gate.t)
    elif kind == "zero_oracle":
        _zero_oracle(vec, n, gate.qubits)
    elif kind == "reset":
        _reset(vec, gate.q)
    elif kind == "diffusion":
        _diffusion(vec, n, gate.qubits)
    else:
        raise ParameterError(f"unknown gate kind {kind!r}")
    return state


def run_dense(circuit: Circuit, cap: int | None = None) -> DenseState:
    """Execute a circuit from |0...0> on the full vector.

    Raises CapacityError before allocating anything when the circuit is
    wider than the dense cap.
    """
    limit = dense_cap(cap)
    if circuit.n_qubits > limit:
        raise CapacityError(
            f"{circuit.n_qubits} qubits exceed the dense capacity of {limit} "
            f"(2**{limit} amplitudes); use a sparse backend or raise the cap"
        )
    state = new_zero_dense(circuit.n_qubits, cap)
    for gate in circuit.gates:
        apply_gate_dense(state, gate)
    return state
