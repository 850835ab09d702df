"""Storage backends for sparse states.

Both backends hold the same logical content: basis indices (uint64) paired
with complex amplitudes, sorted by index. ``ArrayStore`` keeps them as two
numpy arrays in memory; ``SqliteStore`` keeps them in a single-table
embedded database in a temp file, reading and writing the whole table in
one batch per gate. Results are identical; only storage differs.
"""

from __future__ import annotations

import os
import sqlite3
import tempfile
import weakref

import numpy as np

from .config import store_dir as _default_store_dir


def _empty_pair() -> tuple[np.ndarray, np.ndarray]:
    return np.empty(0, dtype=np.uint64), np.empty(0, dtype=np.complex128)


class ArrayStore:
    """In-memory contiguous (index, amplitude) arrays."""

    label = "array"

    def __init__(self) -> None:
        self._keys, self._amps = _empty_pair()

    def load(self) -> tuple[np.ndarray, np.ndarray]:
        """Current entries sorted by index. Callers must not mutate them."""
        return self._keys, self._amps

    def replace(self, keys: np.ndarray, amps: np.ndarray) -> None:
        self._keys = np.ascontiguousarray(keys, dtype=np.uint64)
        self._amps = np.ascontiguousarray(amps, dtype=np.complex128)

    def scale(self, factor: float) -> None:
        self._amps = self._amps * factor

    def count(self) -> int:
        return int(self._keys.size)

    def close(self) -> None:
        self._keys, self._amps = _empty_pair()


def _cleanup(conn: sqlite3.Connection, path: str) -> None:
    try:
        conn.close()
    finally:
        try:
            os.unlink(path)
        except OSError:
            pass


class SqliteStore:
    """On-disk entries in one sqlite table, rewritten in a batch per gate.

    Basis indices are uint64 but sqlite INTEGER is signed 64-bit, so keys
    are stored as their two's-complement reinterpretation and viewed back
    as unsigned (and re-sorted) on load. The temp file honors the
    configured store directory and is removed on close or garbage
    collection.
    """

    label = "store"

    def __init__(self, directory: str | None = None) -> None:
        directory = directory if directory is not None else _default_store_dir()
        fd, path = tempfile.mkstemp(prefix="qsparse-", suffix=".sqlite", dir=directory)
        os.close(fd)
        self._path = path
        self._conn = sqlite3.connect(path)
        self._conn.execute("PRAGMA journal_mode=MEMORY")
        self._conn.execute("PRAGMA synchronous=OFF")
        self._conn.execute(
            "CREATE TABLE amplitudes (idx INTEGER PRIMARY KEY, re REAL, im REAL)"
        )
        self._conn.commit()
        self._finalizer = weakref.finalize(self, _cleanup, self._conn, path)

    @property
    def path(self) -> str:
        return self._path

    def load(self) -> tuple[np.ndarray, np.ndarray]:
        rows = self._conn.execute(
            "SELECT idx, re, im FROM amplitudes ORDER BY idx"
        ).fetchall()
        if not rows:
            return _empty_pair()
        count = len(rows)
        keys = np.fromiter((r[0] for r in rows), dtype=np.int64, count=count)
        keys = keys.view(np.uint64)
        res = np.fromiter((r[1] for r in rows), dtype=np.float64, count=count)
        ims = np.fromiter((r[2] for r in rows), dtype=np.float64, count=count)
        amps = res + 1j * ims
        # sqlite ordered by the signed value; restore unsigned order, which
        # only differs when bit 63 is in use.
        order = np.argsort(keys, kind="stable")
        if not np.array_equal(order, np.arange(count)):
            keys = keys[order]
            amps = amps[order]
        return keys, amps

    def replace(self, keys: np.ndarray, amps: np.ndarray) -> None:
        keys = np.ascontiguousarray(keys, dtype=np.uint64)
        amps = np.ascontiguousarray(amps, dtype=np.complex128)
        signed = keys.view(np.int64)
        rows = zip(signed.tolist(), amps.real.tolist(), amps.imag.tolist())
        with self._conn:
            self._conn.execute("DELETE FROM amplitudes")
            self._conn.executemany("INSERT INTO amplitudes VALUES (?, ?, ?)", rows)

    def scale(self, factor: float) -> None:
        with self._conn:
            self._conn.execute(
                "UPDATE amplitudes SET re = re * :f, im = im * :f", {"f": factor}
            )

    def count(self) -> int:
        (count,) = self._conn.execute("SELECT COUNT(*) FROM amplitudes").fetchone()
        return int(count)

    def close(self) -> None:
        self._finalizer()


Store = ArrayStore | SqliteStore
