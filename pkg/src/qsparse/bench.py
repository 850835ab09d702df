"""Benchmark grids, the drop-accuracy study, and result rendering.

A grid sweeps circuit sizes against backends and records wall times with
capacity and time cutoffs. The drop study compares drop-limited runs
against exact references and records infidelity. Both produce the same
row shape, rendered to CSV or JSON with a fixed column order.
"""

from __future__ import annotations

import csv
import io
import json
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Literal, Sequence

from pydantic import BaseModel, ConfigDict, Field

from .circuits import (
    Circuit,
    addition_circuit,
    grover_circuit,
    optimal_grover_iterations,
    superposition_circuit,
)
from .config import dense_cap
from .dense import run_dense
from .errors import CapacityError, ParameterError
from .runner import BACKENDS, ExecutionResult, execute
from .sparse import run_sparse
from .state import DropConfig, overlap

BenchmarkName = Literal["superposition", "addition", "grover"]

CSV_COLUMNS = (
    "benchmark",
    "total_qubits",
    "nondet_qubits",
    "backend",
    "wall_time_s",
    "status",
    "error_metric",
    "dropped_mass",
    "repeats",
    "seed",
)

STATUS_OK = "ok"
STATUS_CAPACITY = "capacity_cutoff"
STATUS_TIME = "time_cutoff"


class BenchPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    benchmark: BenchmarkName
    total_qubits: int = Field(ge=1)
    nondet_qubits: int = Field(ge=0)
    backend: str
    wall_time_s: float = Field(ge=0.0)
    status: Literal["ok", "capacity_cutoff", "time_cutoff"]
    error_metric: float | None = None
    dropped_mass: float | None = None
    repeats: int = Field(ge=1)
    seed: int

    def row(self) -> tuple:
        return tuple(getattr(self, column) for column in CSV_COLUMNS)


def _sort_key(point: BenchPoint) -> tuple:
    return (point.benchmark, point.total_qubits, point.nondet_qubits, point.backend)


def _circuit_for(benchmark: str, n: int, r: int) -> Circuit:
    if benchmark == "superposition":
        return superposition_circuit(n, r)
    if benchmark == "addition":
        return addition_circuit(_width_to_k(n), r)
    if benchmark == "grover":
        return grover_circuit(r, optimal_grover_iterations(r))
    raise ParameterError(f"unknown benchmark {benchmark!r}")


def _width_to_k(n: int) -> int:
    k, rem = divmod(n - 5, 3)
    if rem != 0 or k < 1:
        raise ParameterError(
            f"adder benchmarks need n = 3k + 5 for k >= 1, got n={n}"
        )
    return k


def default_grid_sizes(benchmark: str, n_max: int) -> list[int]:
    """Circuit widths a grid sweeps up to n_max, respecting shape constraints."""
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    if benchmark == "superposition":
        return list(range(2, n_max + 1))
    if benchmark in ("addition", "grover"):
        return [3 * k + 5 for k in range(1, (n_max - 5) // 3 + 1)]
    raise ParameterError(f"unknown benchmark {benchmark!r}")


def _nondet_values(benchmark: str, n: int, r_values: Sequence[int] | None) -> list[int]:
    if benchmark == "superposition":
        full = range(0, n + 1)
    elif benchmark == "addition":
        full = range(0, 2 * _width_to_k(n) + 1)
    else:  # grover: the search width is fixed by the total width
        return [_width_to_k(n)]
    if r_values is None:
        return list(full)
    chosen = [r for r in r_values if r in full]
    if not chosen:
        raise ParameterError(
            f"no requested nondet counts fit benchmark {benchmark!r} at n={n}"
        )
    return chosen


def _timed_run(
    circuit: Circuit,
    backend: str,
    drop: DropConfig | None,
    cap: int | None,
    repeats: int,
    cutoff_s: float,
    store_directory: str | None,
) -> tuple[float, str, ExecutionResult | None]:
    """Median wall time over repeats, stopping early once a run blows the cutoff."""
    times: list[float] = []
    last: ExecutionResult | None = None
    for _ in range(repeats):
        start = time.perf_counter()
        try:
            result = execute(
                circuit, backend, drop=drop, cap=cap, store_directory=store_directory
            )
        except CapacityError:
            return 0.0, STATUS_CAPACITY, None
        elapsed = time.perf_counter() - start
        if last is not None:
            last.close()
        last = result
        times.append(elapsed)
        if elapsed > cutoff_s:
            break
    wall = float(statistics.median(times))
    status = STATUS_TIME if wall > cutoff_s else STATUS_OK
    return wall, status, last


def run_grid(
    benchmark: BenchmarkName,
    n_values: Sequence[int],
    backends: Sequence[str] | None = None,
    r_values: Sequence[int] | None = None,
    drop: DropConfig | None = None,
    repeats: int = 3,
    time_cutoff_s: float = 60.0,
    seed: int = 0,
    serial: bool = True,
    cap: int | None = None,
    store_directory: str | None = None,
) -> list[BenchPoint]:
    """Sweep (width, nondet count) cells across backends.

    Within each (backend, nondet) lane, widths run in ascending order and
    a cell that exceeds the time cutoff marks the lane: larger widths are
    reported as time_cutoff without running. Capacity failures are
    per-cell rows, since they cost nothing to detect. With serial=False
    the independent lanes run on a thread pool; timings are then subject
    to interference, so keep serial=True when times matter.
    """
    if not n_values:
        raise ParameterError("n_values must be non-empty")
    if repeats < 1:
        raise ParameterError(f"repeats must be >= 1, got {repeats}")
    if time_cutoff_s <= 0:
        raise ParameterError(f"time_cutoff_s must be > 0, got {time_cutoff_s}")
    chosen_backends = list(backends) if backends is not None else list(BACKENDS)
    for backend in chosen_backends:
        if backend not in BACKENDS:
            raise ParameterError(
                f"unknown backend {backend!r}; expected one of {', '.join(BACKENDS)}"
            )
    widths = sorted(set(n_values))

    circuits: dict[tuple[int, int], Circuit] = {}
    for n in widths:
        for r in _nondet_values(benchmark, n, r_values):
            circuits[(n, r)] = _circuit_for(benchmark, n, r)

    lanes: dict[tuple[str, int], list[tuple[int, int]]] = {}
    for (n, r) in sorted(circuits):
        for backend in chosen_backends:
            lanes.setdefault((backend, r), []).append((n, r))

    def run_lane(lane_key: tuple[str, int]) -> list[BenchPoint]:
        backend, _ = lane_key
        rows: list[BenchPoint] = []
        lane_cut = False
        for (n, r) in lanes[lane_key]:
            if lane_cut:
                rows.append(
                    _point(benchmark, n, r, backend, 0.0, STATUS_TIME, repeats, seed)
                )
                continue
            wall, status, result = _timed_run(
                circuits[(n, r)],
                backend,
                drop,
                cap,
                repeats,
                time_cutoff_s,
                store_directory,
            )
            dropped = None
            if result is not None:
                dropped = result.dropped_mass
                result.close()
            if status == STATUS_TIME:
                lane_cut = True
            rows.append(
                _point(
                    benchmark, n, r, backend, wall, status, repeats, seed,
                    dropped_mass=dropped,
                )
            )
        return rows

    lane_keys = sorted(lanes)
    points: list[BenchPoint] = []
    if serial or len(lane_keys) <= 1:
        for lane_key in lane_keys:
            points.extend(run_lane(lane_key))
    else:
        workers = min(len(lane_keys), os.cpu_count() or 1, 8)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for rows in pool.map(run_lane, lane_keys):
                points.extend(rows)
    points.sort(key=_sort_key)
    return points


def _point(
    benchmark: str,
    n: int,
    r: int,
    backend: str,
    wall: float,
    status: str,
    repeats: int,
    seed: int,
    error_metric: float | None = None,
    dropped_mass: float | None = None,
) -> BenchPoint:
    return BenchPoint(
        benchmark=benchmark,
        total_qubits=n,
        nondet_qubits=r,
        backend=backend,
        wall_time_s=wall,
        status=status,
        error_metric=error_metric,
        dropped_mass=dropped_mass,
        repeats=repeats,
        seed=seed,
    )


def infidelity(reference, approx) -> float:
    """1 - |<reference|approx>|^2, clamped into [0, 1]."""
    value = 1.0 - abs(overlap(reference, approx)) ** 2
    return min(1.0, max(0.0, value))


def run_drop_study(
    benchmark: BenchmarkName,
    n: int | None = None,
    r_values: Sequence[int] | None = None,
    limit: int = 1000,
    repeats: int = 3,
    seed: int = 0,
    cap: int | None = None,
    store_directory: str | None = None,
) -> list[BenchPoint]:
    """Exact vs drop-limited accuracy sweep on the store backend.

    For superposition and addition the total width ``n`` is fixed and the
    nondet count sweeps; for the search benchmark the search width sweeps
    and the total width follows it. Each sweep value yields two rows: an
    exact run (backend "store", error 0 by definition) and a drop-limited
    run (backend "store-drop") whose error_metric is the infidelity
    against an exact reference: the dense simulator when the width fits
    the dense cap, otherwise the exact sparse state itself.
    """
    if repeats < 1:
        raise ParameterError(f"repeats must be >= 1, got {repeats}")
    if benchmark in ("superposition", "addition"):
        if n is None:
            raise ParameterError(f"{benchmark} drop study needs a fixed n")
        sweep = [(n, r) for r in _nondet_values(benchmark, n, r_values)]
    elif benchmark == "grover":
        if r_values is None:
            if n is None:
                raise ParameterError(
                    "grover drop study needs r_values or an n bound"
                )
            r_values = list(range(1, _width_to_k(n) + 1))
        sweep = [(3 * r + 5, r) for r in sorted(set(r_values))]
        for _, r in sweep:
            if r < 1:
                raise ParameterError(f"search width must be >= 1, got {r}")
    else:
        raise ParameterError(f"unknown benchmark {benchmark!r}")

    drop = DropConfig(enabled=True, limit=limit)
    cap_limit = dense_cap(cap)
    points: list[BenchPoint] = []
    for width, r in sweep:
        circuit = _circuit_for(benchmark, width, r)

        exact_times: list[float] = []
        exact_report = None
        for _ in range(repeats):
            if exact_report is not None:
                exact_report.final_state.close()
            start = time.perf_counter()
            exact_report = run_sparse(circuit, "store", None, store_directory)
            exact_times.append(time.perf_counter() - start)

        drop_times: list[float] = []
        drop_report = None
        for _ in range(repeats):
            if drop_report is not None:
                drop_report.final_state.close()
            start = time.perf_counter()
            drop_report = run_sparse(circuit, "store", drop, store_directory)
            drop_times.append(time.perf_counter() - start)

        assert exact_report is not None and drop_report is not None
        if width <= cap_limit:
            reference = run_dense(circuit, cap)
        else:
            reference = exact_report.final_state
        error = infidelity(reference, drop_report.final_state)

        points.append(
            _point(
                benchmark, width, r, "store",
                float(statistics.median(exact_times)), STATUS_OK, repeats, seed,
                error_metric=0.0, dropped_mass=exact_report.dropped_mass,
            )
        )
        points.append(
            _point(
                benchmark, width, r, "store-drop",
                float(statistics.median(drop_times)), STATUS_OK, repeats, seed,
                error_metric=error, dropped_mass=drop_report.dropped_mass,
            )
        )
        exact_report.final_state.close()
        drop_report.final_state.close()
    points.sort(key=_sort_key)
    return points


def render_results(points: Sequence[BenchPoint], fmt: str = "csv") -> str:
    """Render rows deterministically; same data, CSV or JSON."""
    ordered = sorted(points, key=_sort_key)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for point in ordered:
            writer.writerow("" if v is None else _plain(v) for v in point.row())
        return buffer.getvalue()
    if fmt == "json":
        payload = [
            {column: value for column, value in zip(CSV_COLUMNS, point.row())}
            for point in ordered
        ]
        return json.dumps(payload, indent=2) + "\n"
    raise ParameterError(f"unknown format {fmt!r}; expected csv or json")


def _plain(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_results(
    points: Sequence[BenchPoint], fmt: str, path: str | os.PathLike[str]
) -> str:
    """Write rendered results to a file and return the text."""
    text = render_results(points, fmt)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return text


def summarize(points: Sequence[BenchPoint]) -> dict[str, int]:
    counts = {"cells": len(points), STATUS_OK: 0, STATUS_CAPACITY: 0, STATUS_TIME: 0}
    for point in points:
        counts[point.status] += 1
    return counts


def parse_results(text: str) -> list[BenchPoint]:
    """Read back rows from either rendered format."""
    stripped = text.lstrip()
    if stripped.startswith("["):
        return [BenchPoint.model_validate(item) for item in json.loads(text)]
    reader = csv.DictReader(io.StringIO(text))
    points = []
    for row in reader:
        data = {
            key: (None if value == "" else value) for key, value in row.items()
        }
        points.append(BenchPoint.model_validate(data))
    return points
