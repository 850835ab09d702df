"""Numeric tolerances, capacity defaults, and their environment overrides."""

from __future__ import annotations

import os

from .errors import ParameterError

# Amplitudes with |a| below this are treated as exact zeros and removed
# from sparse states after every gate.
PRUNE_EPS = 1e-12

# Allowed drift from unit norm before a state counts as unnormalized.
NORM_TOL = 1e-9

# Default cap for the bounded-support drop approximation.
DEFAULT_DROP_LIMIT = 1000

# Largest qubit count the dense simulator will allocate by default:
# 2**26 complex128 amplitudes is a 1 GiB vector.
DEFAULT_DENSE_CAP = 26

# Basis indices are stored as unsigned 64-bit integers, one bit per qubit.
MAX_QUBITS = 64

ENV_DENSE_CAP = "QSPARSE_DENSE_CAP"
ENV_STORE_DIR = "QSPARSE_STORE_DIR"


def dense_cap(override: int | None = None) -> int:
    """Resolve the dense-qubit cap: explicit override, else env, else default."""
    if override is not None:
        cap = override
    else:
        raw = os.environ.get(ENV_DENSE_CAP)
        if raw is None:
            return DEFAULT_DENSE_CAP
        try:
            cap = int(raw)
        except ValueError:
            raise ParameterError(
                f"{ENV_DENSE_CAP} must be an integer, got {raw!r}"
            ) from None
    if not 1 <= cap <= MAX_QUBITS:
        raise ParameterError(f"dense cap must lie in [1, {MAX_QUBITS}], got {cap}")
    return cap


def store_dir(override: str | None = None) -> str | None:
    """Directory for on-disk state files; None means the system temp dir."""
    if override is not None:
        return override
    return os.environ.get(ENV_STORE_DIR)
