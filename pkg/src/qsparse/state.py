"""Sparse and dense state representations and state-level operations.

A sparse state maps basis indices (uint64, qubit i at bit i) to complex
amplitudes and stores only entries with non-negligible magnitude. A dense
state is the full 2**n amplitude vector. Operations that make sense for
both accept either kind.
"""

from __future__ import annotations

from typing import Iterator, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .config import DEFAULT_DROP_LIMIT, MAX_QUBITS, NORM_TOL, PRUNE_EPS, dense_cap
from .errors import CapacityError, ParameterError, StateError
from .stores import ArrayStore, SqliteStore, Store

BackendName = Literal["array", "store"]


class DropConfig(BaseModel):
    """Bounded-support approximation: keep at most ``limit`` entries."""

    model_config = ConfigDict(frozen=True)

    enabled: bool = False
    limit: int = Field(default=DEFAULT_DROP_LIMIT, ge=1)


class SparseState:
    """Basis-index -> amplitude map over a pluggable store."""

    def __init__(self, n_qubits: int, store: Store) -> None:
        self.n_qubits = n_qubits
        self._store = store

    @property
    def backend(self) -> str:
        return self._store.label

    def entries(self) -> tuple[np.ndarray, np.ndarray]:
        """(keys, amps) sorted by key. Treat as read-only."""
        return self._store.load()

    def set_entries(self, keys: np.ndarray, amps: np.ndarray) -> None:
        self._store.replace(keys, amps)

    def scale(self, factor: float) -> None:
        self._store.scale(factor)

    def count(self) -> int:
        return self._store.count()

    def copy(self, store_directory: str | None = None) -> "SparseState":
        keys, amps = self.entries()
        fresh = _make_store(self.backend, store_directory)
        fresh.replace(keys.copy(), amps.copy())
        return SparseState(self.n_qubits, fresh)

    def close(self) -> None:
        self._store.close()

    def __enter__(self) -> "SparseState":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()


class DenseState:
    """Full 2**n amplitude vector."""

    def __init__(self, n_qubits: int, amplitudes: np.ndarray) -> None:
        if amplitudes.shape != (1 << n_qubits,):
            raise ParameterError(
                f"amplitude vector has shape {amplitudes.shape}, "
                f"expected ({1 << n_qubits},)"
            )
        self.n_qubits = n_qubits
        self.amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)


def _make_store(backend: str, store_directory: str | None = None) -> Store:
    if backend == "array":
        return ArrayStore()
    if backend == "store":
        return SqliteStore(store_directory)
    raise ParameterError(f"unknown sparse backend {backend!r}")


def new_zero_state(
    n_qubits: int,
    backend: BackendName = "array",
    store_directory: str | None = None,
) -> SparseState:
    """|0...0> as a single-entry sparse state."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ParameterError(f"n_qubits must lie in [1, {MAX_QUBITS}], got {n_qubits}")
    store = _make_store(backend, store_directory)
    store.replace(
        np.zeros(1, dtype=np.uint64), np.ones(1, dtype=np.complex128)
    )
    return SparseState(n_qubits, store)


def new_zero_dense(n_qubits: int, cap: int | None = None) -> DenseState:
    """|0...0> as a full vector; refuses sizes above the dense cap."""
    limit = dense_cap(cap)
    if n_qubits > limit:
        raise CapacityError(
            f"{n_qubits} qubits exceed the dense capacity of {limit} "
            f"(2**{limit} amplitudes); use a sparse backend or raise the cap"
        )
    if n_qubits < 1:
        raise ParameterError(f"n_qubits must be >= 1, got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return DenseState(n_qubits, amps)


AnyState = SparseState | DenseState


def nonzero_count(state: AnyState) -> int:
    """Number of stored entries (sparse) or entries above PRUNE_EPS (dense)."""
    if isinstance(state, SparseState):
        return state.count()
    return int(np.count_nonzero(np.abs(state.amplitudes) > PRUNE_EPS))


def l2_norm(state: AnyState) -> float:
    if isinstance(state, SparseState):
        _, amps = state.entries()
        return float(np.linalg.norm(amps))
    return float(np.linalg.norm(state.amplitudes))


def renormalize(state: AnyState) -> AnyState:
    """Scale to unit norm; a zero-norm state has no direction to keep."""
    norm = l2_norm(state)
    if norm <= 0.0:
        raise StateError("cannot renormalize a zero-norm state")
    if isinstance(state, SparseState):
        state.scale(1.0 / norm)
    else:
        state.amplitudes /= norm
    return state


def prune(state: SparseState, eps: float = PRUNE_EPS) -> SparseState:
    """Remove entries with |amplitude| < eps."""
    if eps < 0:
        raise ParameterError(f"eps must be >= 0, got {eps}")
    keys, amps = state.entries()
    keep = np.abs(amps) >= eps
    if not keep.all():
        state.set_entries(keys[keep], amps[keep])
    return state


def to_dense(state: SparseState, cap: int | None = None) -> DenseState:
    limit = dense_cap(cap)
    if state.n_qubits > limit:
        raise CapacityError(
            f"{state.n_qubits} qubits exceed the dense capacity of {limit}"
        )
    keys, amps = state.entries()
    vec = np.zeros(1 << state.n_qubits, dtype=np.complex128)
    vec[keys.astype(np.int64)] = amps
    return DenseState(state.n_qubits, vec)


def from_dense(
    state: DenseState,
    eps: float = PRUNE_EPS,
    backend: BackendName = "array",
    store_directory: str | None = None,
) -> SparseState:
    """Sparse view keeping entries with |amplitude| >= eps."""
    (positions,) = np.nonzero(np.abs(state.amplitudes) >= eps)
    fresh = _make_store(backend, store_directory)
    fresh.replace(
        positions.astype(np.uint64), state.amplitudes[positions].copy()
    )
    return SparseState(state.n_qubits, fresh)


def _entry_view(state: AnyState) -> tuple[np.ndarray, np.ndarray]:
    """(keys, amps) of all stored/nonzero entries, sorted by key."""
    if isinstance(state, SparseState):
        return state.entries()
    (positions,) = np.nonzero(state.amplitudes)
    return positions.astype(np.uint64), state.amplitudes[positions]


def overlap(a: AnyState, b: AnyState) -> complex:
    """Inner product <a|b>; entries absent on either side contribute zero."""
    if a.n_qubits != b.n_qubits:
        raise ParameterError(
            f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )
    if isinstance(a, DenseState) and isinstance(b, DenseState):
        return complex(np.vdot(a.amplitudes, b.amplitudes))
    ka, va = _entry_view(a)
    kb, vb = _entry_view(b)
    if ka.size == 0 or kb.size == 0:
        return 0j
    pos = np.searchsorted(ka, kb)
    pos_clipped = np.minimum(pos, ka.size - 1)
    hit = ka[pos_clipped] == kb
    hit &= pos < ka.size
    return complex(np.sum(np.conj(va[pos_clipped[hit]]) * vb[hit]))


def max_entrywise_diff(a: AnyState, b: AnyState) -> float:
    """max_i |a_i - b_i| over the union of supports."""
    if a.n_qubits != b.n_qubits:
        raise ParameterError(
            f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )
    if isinstance(a, DenseState) and isinstance(b, DenseState):
        return float(np.max(np.abs(a.amplitudes - b.amplitudes), initial=0.0))
    ka, va = _entry_view(a)
    kb, vb = _entry_view(b)
    union = np.union1d(ka, kb)
    ua = np.zeros(union.size, dtype=np.complex128)
    ub = np.zeros(union.size, dtype=np.complex128)
    ua[np.searchsorted(union, ka)] = va
    ub[np.searchsorted(union, kb)] = vb
    return float(np.max(np.abs(ua - ub), initial=0.0))


def sample_measurement(state: AnyState, rng_seed: int) -> int:
    """Draw one basis index from |amplitude|^2; requires a normalized state."""
    norm = l2_norm(state)
    if abs(norm - 1.0) > NORM_TOL:
        raise StateError(
            f"state norm {norm!r} is not within {NORM_TOL} of 1; "
            "renormalize before sampling"
        )
    rng = np.random.default_rng(rng_seed)
    keys, amps = _entry_view(state)
    if keys.size == 0:
        raise StateError("cannot sample from an empty state")
    probs = np.abs(amps) ** 2
    probs /= probs.sum()
    choice = int(rng.choice(keys.size, p=probs))
    return int(keys[choice])


def measure_probability(
    state: AnyState, pattern: int, qubits: list[int] | tuple[int, ...]
) -> float:
    """Probability that measuring ``qubits`` yields ``pattern``.

    Bit i of ``pattern`` corresponds to ``qubits[i]``. Remaining qubits
    are traced out.
    """
    if not qubits:
        raise ParameterError("qubits must be non-empty")
    if len(set(qubits)) != len(qubits):
        raise ParameterError("duplicate qubits in measurement")
    for q in qubits:
        if not 0 <= q < state.n_qubits:
            raise ParameterError(
                f"qubit {q} out of range for a {state.n_qubits}-qubit state"
            )
    if not 0 <= pattern < (1 << len(qubits)):
        raise ParameterError(
            f"pattern {pattern} does not fit in {len(qubits)} qubits"
        )
    mask = np.uint64(0)
    want = np.uint64(0)
    for i, q in enumerate(qubits):
        mask |= np.uint64(1) << np.uint64(q)
        if (pattern >> i) & 1:
            want |= np.uint64(1) << np.uint64(q)
    total = 0.0
    for keys, amps in _iter_entry_chunks(state):
        sel = (keys & mask) == want
        if sel.any():
            total += float(np.sum(np.abs(amps[sel]) ** 2))
    return total


_CHUNK = 1 << 20


def _iter_entry_chunks(state: AnyState) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    if isinstance(state, SparseState):
        yield state.entries()
        return
    vec = state.amplitudes
    for start in range(0, vec.size, _CHUNK):
        stop = min(vec.size, start + _CHUNK)
        yield np.arange(start, stop, dtype=np.uint64), vec[start:stop]
