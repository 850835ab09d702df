"""Command-line client for the simulation service.

Every command talks HTTP: by default to an in-process copy of the
service, or to a remote instance via --server. Simulation never happens
client-side; the CLI formats responses and maps error kinds to exit
codes: 2 bad arguments or formats, 3 capacity, 4 I/O, 1 anything else.
"""

from __future__ import annotations

import json
import sys

import click
import httpx

from .bench import BenchPoint, render_results
from .circuits import parse_circuit, serialize_circuit
from .errors import CircuitFormatError

_EXIT_BY_KIND = {"parameter": 2, "format": 2, "capacity": 3, "io": 4}


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # In-process transport; imported lazily so --help stays snappy. This
    # starlette release warns unless the (unavailable here) httpx2 package
    # backs its test client; the fallback works, so keep it quiet.
    import warnings

    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="Using .httpx. with")
        from starlette.testclient import TestClient

    from .service.app import app

    return TestClient(app, raise_server_exceptions=False)


def _post(client, path: str, payload: dict):
    try:
        response = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        _fail(4, f"cannot reach server: {exc}")
    if response.status_code != 200:
        try:
            error = response.json()["error"]
            kind, message = error["kind"], error["message"]
        except Exception:
            kind, message = "internal", response.text[:300]
        _fail(_EXIT_BY_KIND.get(kind, 1), f"{kind}: {message}")
    return response


def _generator_payload(gen: str, n, r, k, iters) -> dict:
    if gen == "superposition":
        if n is None:
            raise click.UsageError("--gen superposition requires --n")
        return {"generator": "superposition", "n": n, "r": r or 0}
    if gen == "addition":
        if k is None:
            raise click.UsageError("--gen addition requires --k")
        return {"generator": "addition", "k": k, "r": r or 0}
    if gen == "grover":
        if r is None:
            raise click.UsageError("--gen grover requires --r (search qubits)")
        spec = {"generator": "grover", "search_qubits": r}
        if iters is not None:
            spec["iterations"] = iters
        return spec
    raise click.UsageError(f"unknown generator {gen!r}")


def _parse_measure(text: str) -> dict:
    if "@" not in text:
        raise click.UsageError(
            "--measure must look like PATTERN@QUBITS, e.g. 0@search or 3@0,1"
        )
    left, right = text.split("@", 1)
    try:
        pattern = int(left, 0)
    except ValueError:
        raise click.UsageError(f"measure pattern {left!r} is not an integer")
    right = right.strip()
    if not right:
        raise click.UsageError("--measure needs qubits after '@'")
    try:
        qubits: list[int] | str = [int(part) for part in right.split(",")]
    except ValueError:
        qubits = right  # a register name from the circuit metadata
    return {"pattern": pattern, "qubits": qubits}


_GENERATORS = ("superposition", "addition", "grover")
_BACKENDS = ("array", "store", "dense", "mixed")


@click.group()
def main() -> None:
    """Sparse quantum-circuit simulation: run circuits, benchmark backends."""


@main.command("run")
@click.option("--circuit", "circuit_path", type=click.Path(), help="Circuit JSON file.")
@click.option("--gen", type=click.Choice(_GENERATORS), help="Generate a circuit instead.")
@click.option("--n", type=int, help="Total qubits (superposition).")
@click.option("--r", type=int, help="Hadamard/nondet qubits; search qubits for grover.")
@click.option("--k", type=int, help="Adder width (addition).")
@click.option("--iters", type=int, help="Search iterations; optimal when omitted.")
@click.option("--backend", type=click.Choice(_BACKENDS), default="store", show_default=True)
@click.option("--drop-limit", type=int, default=None, help="Cap support after each H/Diffusion.")
@click.option("--seed", type=int, default=0, show_default=True, help="Sampling seed.")
@click.option("--measure", "measure_text", type=str, default=None, metavar="PATTERN@QUBITS")
@click.option("--top", type=int, default=10, show_default=True, help="Entries to print.")
@click.option("--dense-cap", type=int, default=None, help="Override the dense qubit cap.")
@click.option("--server", type=str, default=None, help="Remote service URL.")
def cmd_run(
    circuit_path, gen, n, r, k, iters, backend, drop_limit, seed,
    measure_text, top, dense_cap, server,
) -> None:
    """Run a circuit and print a deterministic state report."""
    if (circuit_path is None) == (gen is None):
        raise click.UsageError("provide exactly one of --circuit or --gen")
    payload: dict = {
        "backend": backend,
        "seed": seed,
        "top": top,
    }
    if drop_limit is not None:
        payload["drop_limit"] = drop_limit
    if dense_cap is not None:
        payload["dense_cap"] = dense_cap
    if circuit_path is not None:
        try:
            with open(circuit_path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            _fail(4, f"cannot read {circuit_path}: {exc}")
        try:
            payload["circuit"] = json.loads(text)
        except json.JSONDecodeError as exc:
            _fail(2, f"{circuit_path} is not valid JSON: {exc}")
    else:
        payload["generate"] = _generator_payload(gen, n, r, k, iters)
    if measure_text is not None:
        payload["measure"] = _parse_measure(measure_text)

    with _client(server) as client:
        data = _post(client, "/run", payload).json()

    click.echo(f"backend: {data['backend_used']} (requested: {data['backend_requested']})")
    click.echo(f"qubits: {data['n_qubits']}")
    click.echo(f"gates: {data['gate_count']}")
    click.echo(f"support: {data['support']}")
    click.echo(f"norm: {data['norm']:.12f}")
    if data["dropped_mass"] is not None:
        click.echo(f"dropped_mass: {data['dropped_mass']!r}")
    if data["peak_support"] is not None:
        click.echo(f"peak_support: {data['peak_support']}")
    entries = data["top_entries"]
    click.echo(f"top entries ({len(entries)}):")
    for entry in entries:
        amp = complex(entry["amplitude_re"], entry["amplitude_im"])
        click.echo(
            f"  |{entry['bits']}> p={entry['probability']:.12f} "
            f"amp={amp.real:+.12f}{amp.imag:+.12f}j"
        )
    if data["measure"] is not None:
        m = data["measure"]
        qubits = ",".join(str(q) for q in m["qubits"])
        click.echo(f"measure: P[{m['pattern']}@{qubits}] = {m['probability']:.12f}")
    click.echo(f"sample: |{data['sample_bits']}> (seed {seed})")


_SUITES = (
    "superposition",
    "addition",
    "grover",
    "drop-superposition",
    "drop-addition",
    "drop-grover",
)


@main.command("bench")
@click.option("--suite", type=click.Choice(_SUITES), required=True)
@click.option("--n-max", type=int, default=None, help="Largest circuit width for grids.")
@click.option("--n", type=int, default=None, help="Fixed width for drop suites.")
@click.option("--r-max", type=int, default=None, help="Cap the nondet sweep.")
@click.option("--backends", type=str, default=None, help="Comma-separated backend subset.")
@click.option("--drop-limit", type=int, default=1000, show_default=True)
@click.option("--repeats", type=int, default=3, show_default=True)
@click.option("--timeout", type=float, default=60.0, show_default=True, help="Per-cell cutoff (s).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--serial/--parallel", default=True, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--format", "fmt", type=click.Choice(("csv", "json")), default="csv", show_default=True)
@click.option("--dense-cap", type=int, default=None)
@click.option("--server", type=str, default=None)
def cmd_bench(
    suite, n_max, n, r_max, backends, drop_limit, repeats, timeout, seed,
    serial, out_path, fmt, dense_cap, server,
) -> None:
    """Run a benchmark suite and write CSV or JSON results."""
    payload: dict = {
        "suite": suite,
        "drop_limit": drop_limit,
        "repeats": repeats,
        "time_cutoff_s": timeout,
        "seed": seed,
        "serial": serial,
        "format": "points",
    }
    if n_max is not None:
        payload["n_max"] = n_max
    if n is not None:
        payload["n"] = n
    if r_max is not None:
        payload["r_max"] = r_max
    if backends is not None:
        payload["backends"] = [part.strip() for part in backends.split(",") if part.strip()]
    if dense_cap is not None:
        payload["dense_cap"] = dense_cap

    with _client(server) as client:
        data = _post(client, "/bench", payload).json()

    points = [BenchPoint.model_validate(item) for item in data["points"]]
    text = render_results(points, fmt)
    try:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        _fail(4, f"cannot write {out_path}: {exc}")
    summary = data["summary"]
    click.echo(
        f"suite={suite} cells={summary['cells']} ok={summary['ok']} "
        f"capacity_cutoff={summary['capacity_cutoff']} "
        f"time_cutoff={summary['time_cutoff']}"
    )
    click.echo(f"wrote {out_path}")


@main.command("export")
@click.option("--gen", type=click.Choice(_GENERATORS), required=True)
@click.option("--n", type=int, help="Total qubits (superposition).")
@click.option("--r", type=int, help="Hadamard/nondet qubits; search qubits for grover.")
@click.option("--k", type=int, help="Adder width (addition).")
@click.option("--iters", type=int, help="Search iterations; optimal when omitted.")
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--server", type=str, default=None)
def cmd_export(gen, n, r, k, iters, out_path, server) -> None:
    """Generate a circuit and write its JSON document."""
    payload = _generator_payload(gen, n, r, k, iters)
    with _client(server) as client:
        response = _post(client, "/circuits/generate", payload)
    try:
        circuit = parse_circuit(response.text)
    except CircuitFormatError as exc:
        _fail(1, f"service returned an unreadable circuit: {exc}")
    try:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(serialize_circuit(circuit))
    except OSError as exc:
        _fail(4, f"cannot write {out_path}: {exc}")
    click.echo(f"wrote {out_path} ({circuit.n_qubits} qubits, {circuit.gate_count} gates)")


@main.command("serve")
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def cmd_serve(host: str, port: int) -> None:
    """Serve the HTTP API."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
