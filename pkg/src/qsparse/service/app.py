"""FastAPI application: generate, run, and benchmark circuits over HTTP."""

from __future__ import annotations

import time

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__
from ..bench import (
    default_grid_sizes,
    render_results,
    run_drop_study,
    run_grid,
    summarize,
)
from ..circuits import Circuit
from ..errors import QsparseError
from ..runner import execute
from ..state import (
    DenseState,
    DropConfig,
    SparseState,
    l2_norm,
    measure_probability,
    nonzero_count,
    sample_measurement,
)
from .models import (
    BenchRequest,
    BenchResponse,
    BenchSummary,
    GeneratorSpec,
    MeasureResult,
    RunRequest,
    RunResponse,
    StateEntry,
    build_circuit,
    resolve_measure_qubits,
)

app = FastAPI(title="qsparse", version=__version__)

_STATUS_BY_KIND = {
    "parameter": 422,
    "format": 422,
    "capacity": 409,
    "state": 409,
    "io": 500,
}


@app.exception_handler(QsparseError)
async def _domain_error(request: Request, exc: QsparseError) -> JSONResponse:
    return JSONResponse(
        status_code=_STATUS_BY_KIND.get(exc.kind, 500),
        content={"error": {"kind": exc.kind, "message": str(exc)}},
    )


@app.exception_handler(RequestValidationError)
async def _validation_error(
    request: Request, exc: RequestValidationError
) -> JSONResponse:
    parts = []
    for err in exc.errors()[:3]:
        loc = ".".join(str(piece) for piece in err["loc"] if piece != "body")
        parts.append(f"{loc or 'body'}: {err['msg']}")
    return JSONResponse(
        status_code=422,
        content={"error": {"kind": "format", "message": "; ".join(parts)}},
    )


@app.exception_handler(OSError)
async def _io_error(request: Request, exc: OSError) -> JSONResponse:
    return JSONResponse(
        status_code=500,
        content={"error": {"kind": "io", "message": str(exc)}},
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/circuits/generate", response_model=Circuit)
def generate(spec: GeneratorSpec) -> Circuit:
    return build_circuit(spec)


def _bits(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b")


_TOP_CHUNK = 1 << 20


def _top_entries(
    state: SparseState | DenseState, top_n: int, n_qubits: int
) -> list[StateEntry]:
    """Entries with the largest probability; ties prefer smaller indices."""
    if top_n == 0:
        return []
    candidates: list[tuple[np.ndarray, np.ndarray]] = []
    if isinstance(state, SparseState):
        candidates.append(state.entries())
    else:
        vec = state.amplitudes
        for start in range(0, vec.size, _TOP_CHUNK):
            chunk = vec[start : start + _TOP_CHUNK]
            probs = np.abs(chunk) ** 2
            if chunk.size > top_n:
                keep = np.sort(np.argpartition(-probs, top_n - 1)[:top_n])
            else:
                keep = np.arange(chunk.size)
            keys = (keep + start).astype(np.uint64)
            candidates.append((keys, chunk[keep]))
    keys = np.concatenate([k for k, _ in candidates])
    amps = np.concatenate([a for _, a in candidates])
    probs = np.abs(amps) ** 2
    order = np.lexsort((keys, -probs))[:top_n]
    entries = []
    for pos in order:
        index = int(keys[pos])
        amp = complex(amps[pos])
        entries.append(
            StateEntry(
                index=index,
                bits=_bits(index, n_qubits),
                probability=float(probs[pos]),
                amplitude_re=amp.real,
                amplitude_im=amp.imag,
            )
        )
    return entries


@app.post("/run", response_model=RunResponse)
def run(request: RunRequest) -> RunResponse:
    if request.circuit is not None:
        circuit = request.circuit
    else:
        assert request.generate is not None
        circuit = build_circuit(request.generate)
    drop = None
    if request.drop_limit is not None:
        drop = DropConfig(enabled=True, limit=request.drop_limit)
    start = time.perf_counter()
    result = execute(circuit, request.backend, drop=drop, cap=request.dense_cap)
    wall = time.perf_counter() - start
    try:
        state = result.state
        measure = None
        if request.measure is not None:
            qubits = resolve_measure_qubits(request.measure, circuit)
            measure = MeasureResult(
                pattern=request.measure.pattern,
                qubits=qubits,
                probability=measure_probability(
                    state, request.measure.pattern, qubits
                ),
            )
        sample = sample_measurement(state, request.seed)
        return RunResponse(
            backend_requested=result.backend_requested,
            backend_used=result.backend_used,
            n_qubits=circuit.n_qubits,
            gate_count=result.gate_count,
            support=nonzero_count(state),
            norm=l2_norm(state),
            dropped_mass=result.dropped_mass,
            peak_support=result.peak_support,
            top_entries=_top_entries(state, request.top, circuit.n_qubits),
            measure=measure,
            sample_index=sample,
            sample_bits=_bits(sample, circuit.n_qubits),
            wall_time_s=wall,
        )
    finally:
        result.close()


_GRID_DEFAULT_N_MAX = {"superposition": 12, "addition": 17, "grover": 17}
_DROP_DEFAULT_N = {"superposition": 20, "addition": 20, "grover": 17}


def _run_suite(request: BenchRequest):
    if request.suite in ("superposition", "addition", "grover"):
        n_max = request.n_max or _GRID_DEFAULT_N_MAX[request.suite]
        r_values = None
        if request.r_max is not None:
            r_values = list(range(0, request.r_max + 1))
        return run_grid(
            request.suite,
            default_grid_sizes(request.suite, n_max),
            backends=request.backends,
            r_values=r_values,
            repeats=request.repeats,
            time_cutoff_s=request.time_cutoff_s,
            seed=request.seed,
            serial=request.serial,
            cap=request.dense_cap,
        )
    base = request.suite.removeprefix("drop-")
    n = request.n or request.n_max or _DROP_DEFAULT_N[base]
    r_values = None
    if base == "grover":
        r_top = request.r_max if request.r_max is not None else (n - 5) // 3
        r_values = list(range(1, max(1, r_top) + 1))
    elif request.r_max is not None:
        r_values = list(range(0, request.r_max + 1))
    return run_drop_study(
        base,
        n=n,
        r_values=r_values,
        limit=request.drop_limit,
        repeats=request.repeats,
        seed=request.seed,
        cap=request.dense_cap,
    )


@app.post("/bench", response_model=None)
def bench(request: BenchRequest):
    points = _run_suite(request)
    if request.format == "csv":
        return PlainTextResponse(
            render_results(points, "csv"), media_type="text/csv"
        )
    if request.format == "json":
        return PlainTextResponse(
            render_results(points, "json"), media_type="application/json"
        )
    counts = summarize(points)
    return BenchResponse(
        suite=request.suite,
        points=points,
        summary=BenchSummary(
            cells=counts["cells"],
            ok=counts["ok"],
            capacity_cutoff=counts["capacity_cutoff"],
            time_cutoff=counts["time_cutoff"],
        ),
    )
