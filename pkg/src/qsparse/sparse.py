"""Gate application over sparse states and the bounded-support drop.

Every kernel loads the state's (keys, amps) arrays, computes replacement
arrays, and writes them back in one batch, so a store-backed state sees
exactly one table rewrite per gate. Keys stay uint64 throughout; kernels
that rewrite keys re-sort, and kernels that can collide entries merge
duplicate keys by summing amplitudes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit
from .config import NORM_TOL, PRUNE_EPS
from .errors import ParameterError, ResetDiscardWarning, StateError
from .state import (
    BackendName,
    DropConfig,
    SparseState,
    new_zero_state,
    prune,
    renormalize,
)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

_ONE = np.uint64(1)


def _bit(q: int) -> np.uint64:
    return _ONE << np.uint64(q)


def _mask(qubits: tuple[int, ...] | list[int]) -> np.uint64:
    mask = np.uint64(0)
    for q in qubits:
        mask |= _bit(q)
    return mask


def _sorted_pair(keys: np.ndarray, amps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable")
    return keys[order], amps[order]


def _merge_sum(keys: np.ndarray, amps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort by key and sum amplitudes of duplicate keys."""
    if keys.size == 0:
        return keys, amps
    keys, amps = _sorted_pair(keys, amps)
    fresh = np.empty(keys.size, dtype=bool)
    fresh[0] = True
    np.not_equal(keys[1:], keys[:-1], out=fresh[1:])
    (starts,) = np.nonzero(fresh)
    return keys[starts], np.add.reduceat(amps, starts)


def _pruned(keys: np.ndarray, amps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keep = np.abs(amps) >= PRUNE_EPS
    if keep.all():
        return keys, amps
    return keys[keep], amps[keep]


def _apply_h(
    keys: np.ndarray, amps: np.ndarray, q: int
) -> tuple[np.ndarray, np.ndarray]:
    bit = _bit(q)
    low = keys & ~bit
    high = keys | bit
    # |0> -> (|0> + |1>)/sqrt2, |1> -> (|0> - |1>)/sqrt2: the low image always
    # gets +a/sqrt2, the high image is signed by the source bit.
    sign = np.where((keys & bit) != 0, -_INV_SQRT2, _INV_SQRT2)
    out_keys = np.concatenate([low, high])
    out_amps = np.concatenate([amps * _INV_SQRT2, amps * sign])
    return _pruned(*_merge_sum(out_keys, out_amps))


def _apply_permutation(
    keys: np.ndarray, amps: np.ndarray, new_keys: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    return _sorted_pair(new_keys, amps)


def _apply_reset(
    keys: np.ndarray, amps: np.ndarray, q: int
) -> tuple[np.ndarray, np.ndarray]:
    bit = _bit(q)
    keep = (keys & bit) == 0
    if not keep.any():
        raise StateError(
            f"reset on qubit {q} removed all support; the qubit was "
            "deterministically 1"
        )
    if keep.all():
        return keys, amps
    survivors = amps[keep]
    kept_mass = float(np.sum(np.abs(survivors) ** 2))
    total_mass = kept_mass + float(np.sum(np.abs(amps[~keep]) ** 2))
    discarded = total_mass - kept_mass
    if discarded > NORM_TOL:
        warnings.warn(
            f"reset on qubit {q} discarded probability {discarded:.6g}",
            ResetDiscardWarning,
            stacklevel=4,
        )
    return keys[keep], survivors / math.sqrt(kept_mass / total_mass)


def _spread_patterns(qubits: tuple[int, ...] | list[int]) -> np.ndarray:
    """All 2**r key patterns over the given bit positions, counter order."""
    r = len(qubits)
    counter = np.arange(1 << r, dtype=np.uint64)
    patterns = np.zeros(1 << r, dtype=np.uint64)
    for i, q in enumerate(sorted(qubits)):
        patterns |= ((counter >> np.uint64(i)) & _ONE) << np.uint64(q)
    return patterns


def diffusion_direct(
    state: SparseState, qubits: tuple[int, ...] | list[int]
) -> SparseState:
    """Reflect amplitudes about their mean within each co-set of ``qubits``.

    Entries agreeing outside ``qubits`` form a group of size 2**r; each
    present entry a becomes 2*mean - a, and absent group members
    materialize with amplitude 2*mean when that is non-negligible.
    """
    keys, amps = state.entries()
    if keys.size == 0:
        return state
    r = len(qubits)
    group_mask = ~_mask(qubits)
    group_keys = keys & group_mask
    groups, inverse = np.unique(group_keys, return_inverse=True)
    sums = np.zeros(groups.size, dtype=np.complex128)
    np.add.at(sums, inverse, amps)
    twice_mean = sums * (2.0 / (1 << r))

    # Groups whose mean survives pruning get their full 2**r grid filled in.
    active = np.abs(twice_mean) >= PRUNE_EPS
    active_entry = active[inverse]

    parts_keys = []
    parts_amps = []
    if active.any():
        patterns = _spread_patterns(qubits)
        grid_keys = (groups[active][:, None] | patterns[None, :]).ravel()
        grid_amps = np.repeat(twice_mean[active], patterns.size)
        parts_keys.append(grid_keys)
        parts_amps.append(grid_amps)
        # Present entries in active groups contribute -a on top of the grid.
        parts_keys.append(keys[active_entry])
        parts_amps.append(-amps[active_entry])
    if not active_entry.all():
        inactive = ~active_entry
        parts_keys.append(keys[inactive])
        parts_amps.append(twice_mean[inverse[inactive]] - amps[inactive])

    merged_keys, merged_amps = _merge_sum(
        np.concatenate(parts_keys), np.concatenate(parts_amps)
    )
    state.set_entries(*_pruned(merged_keys, merged_amps))
    return state


def apply_gate_sparse(state: SparseState, gate) -> SparseState:
    """Apply one gate in place; one batch write against the backing store."""
    kind = gate.kind
    if kind == "diffusion":
        return diffusion_direct(state, gate.qubits)

    keys, amps = state.entries()
    if kind == "h":
        keys, amps = _apply_h(keys, amps, gate.q)
    elif kind == "x":
        keys, amps = _apply_permutation(keys, amps, keys ^ _bit(gate.q))
    elif kind == "cx":
        control = _bit(gate.c)
        flips = np.where((keys & control) != 0, _bit(gate.t), np.uint64(0))
        keys, amps = _apply_permutation(keys, amps, keys ^ flips)
    elif kind == "ccx":
        both = _bit(gate.c1) | _bit(gate.c2)
        flips = np.where((keys & both) == both, _bit(gate.t), np.uint64(0))
        keys, amps = _apply_permutation(keys, amps, keys ^ flips)
    elif kind == "swap":
        bit_a, bit_b = _bit(gate.a), _bit(gate.b)
        differ = (((keys >> np.uint64(gate.a)) ^ (keys >> np.uint64(gate.b))) & _ONE) != 0
        flips = np.where(differ, bit_a | bit_b, np.uint64(0))
        keys, amps = _apply_permutation(keys, amps, keys ^ flips)
    elif kind == "mcx":
        all_controls = _mask(gate.controls)
        flips = np.where((keys & all_controls) == all_controls, _bit(gate.t), np.uint64(0))
        keys, amps = _apply_permutation(keys, amps, keys ^ flips)
    elif kind == "zero_oracle":
        zero_mask = _mask(gate.qubits)
        amps = np.where((keys & zero_mask) == 0, -amps, amps)
    elif kind == "reset":
        keys, amps = _apply_reset(keys, amps, gate.q)
    else:
        raise ParameterError(f"unknown gate kind {kind!r}")
    state.set_entries(keys, amps)
    return state


def state_drop(state: SparseState, limit: int) -> tuple[SparseState, float]:
    """Keep the ``limit`` largest-|amplitude| entries and renormalize.

    Ties keep the smaller basis index. Returns the state and the removed
    probability mass measured before renormalization.
    """
    if limit < 1:
        raise ParameterError(f"drop limit must be >= 1, got {limit}")
    keys, amps = state.entries()
    if keys.size <= limit:
        return state, 0.0
    magnitudes = np.abs(amps)
    # Last lexsort key is primary: descending magnitude, then ascending key.
    order = np.lexsort((keys, -magnitudes))
    kept = np.sort(order[:limit])
    dropped_mass = float(np.sum(magnitudes[order[limit:]] ** 2))
    total_mass = float(np.sum(magnitudes**2))
    survivors = amps[kept]
    survivor_norm = float(np.linalg.norm(survivors))
    if survivor_norm <= 0.0:
        raise StateError("drop removed all probability mass")
    state.set_entries(keys[kept], survivors / survivor_norm)
    return state, dropped_mass / total_mass


@dataclass
class RunReport:
    """Result of a sparse run."""

    final_state: SparseState
    dropped_mass: float
    peak_support: int
    gate_count: int


def run_sparse(
    circuit: Circuit,
    backend: BackendName = "array",
    drop: DropConfig | None = None,
    store_directory: str | None = None,
) -> RunReport:
    """Execute a circuit from |0...0> on a sparse backend.

    With dropping enabled the support is capped after every H and
    Diffusion. dropped_mass compounds across drops as 1 - prod(1 - rho_i)
    where rho_i is the fraction removed by drop i, so it estimates the
    total probability the surviving state no longer represents.
    """
    if drop is None:
        drop = DropConfig()
    state = new_zero_state(circuit.n_qubits, backend, store_directory)
    peak = state.count()
    dropped_total = 0.0
    kept_fraction = 1.0
    for gate in circuit.gates:
        apply_gate_sparse(state, gate)
        support = state.count()
        if support > peak:
            peak = support
        if drop.enabled and gate.kind in ("h", "diffusion"):
            state, removed = state_drop(state, drop.limit)
            if removed > 0.0:
                dropped_total += removed * kept_fraction
                kept_fraction *= 1.0 - removed
    prune(state, PRUNE_EPS)
    renormalize(state)
    return RunReport(
        final_state=state,
        dropped_mass=dropped_total,
        peak_support=peak,
        gate_count=circuit.gate_count,
    )
