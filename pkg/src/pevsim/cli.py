"""Command-line client for the simulator service.

Commands marshal their flags into the service's request models and render
the responses; all computation happens behind the HTTP interface.  By
default requests are routed to the FastAPI app in process, so no server
needs to be running; pass ``--server URL`` to target a live instance.

Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 check or
statistical failure.  The default seed is 0; the PEV_SEED environment
variable overrides it whenever --seed is absent.
"""

from __future__ import annotations

import asyncio
import json
import os
import sys
from typing import Optional

import click
import httpx

DEFAULT_SEED = 0

_ORACLES = ("f1", "f2", "f3", "f4")
_SEMANTICS = ("unitary", "projection")
_MODELS = ("coherent_flip", "incoherent_flip", "phase")


class InProcessClient:
    """Synchronous facade that routes requests to the ASGI app in process."""

    def __init__(self, app) -> None:
        self._transport = httpx.ASGITransport(app=app)

    def post(self, path: str, json=None) -> httpx.Response:
        return asyncio.run(self._request("POST", path, json))

    def get(self, path: str) -> httpx.Response:
        return asyncio.run(self._request("GET", path, None))

    async def _request(self, method: str, path: str, payload) -> httpx.Response:
        async with httpx.AsyncClient(
            transport=self._transport, base_url="http://pevsim.internal"
        ) as client:
            return await client.request(method, path, json=payload)


def _make_client(server: Optional[str]):
    if server:
        return httpx.Client(base_url=server, timeout=120.0)
    from .service.app import create_app

    return InProcessClient(create_app())


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code in (400, 422):
        raise click.UsageError(f"{path}: {response.json().get('detail')}")
    response.raise_for_status()
    return response.json()


def _default_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    return int(os.environ.get("PEV_SEED", DEFAULT_SEED))


def fmt17(x: float) -> str:
    """Render a double with 17 significant digits (lossless round trip)."""
    return format(x, ".17g")


def sweep_rows_to_csv(rows: list[dict]) -> str:
    """Fixed-schema CSV: LF endings, '.' decimals, empty undefined ratio."""
    lines = ["alpha2,prob0,prob1,single_gate_err,ratio"]
    for row in rows:
        ratio = "" if row["ratio"] is None else fmt17(row["ratio"])
        lines.append(
            ",".join(
                (
                    fmt17(row["alpha2"]),
                    fmt17(row["prob0"]),
                    fmt17(row["prob1"]),
                    fmt17(row["single_gate_err"]),
                    ratio,
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_sweep_csv(text: str) -> list[dict]:
    """Inverse of :func:`sweep_rows_to_csv` (used for round-trip checks)."""
    lines = [line for line in text.split("\n") if line]
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        fields = dict(zip(header, line.split(",")))
        rows.append(
            {
                "alpha2": float(fields["alpha2"]),
                "prob0": float(fields["prob0"]),
                "prob1": float(fields["prob1"]),
                "single_gate_err": float(fields["single_gate_err"]),
                "ratio": float(fields["ratio"]) if fields["ratio"] else None,
            }
        )
    return rows


def _matrix_lines(rho_re: list[list[float]], rho_im: list[list[float]]) -> list[str]:
    out = []
    for re_row, im_row in zip(rho_re, rho_im):
        out.append("  " + "  ".join(f"{re:+.6f}{im:+.6f}j" for re, im in zip(re_row, im_row)))
    return out


@click.group()
@click.option("--server", default=None, metavar="URL", help="Talk to a running service instead of in-process.")
@click.pass_context
def main(ctx: click.Context, server: Optional[str]) -> None:
    """Projection-evolution simulator for the Deutsch circuit."""
    ctx.obj = _make_client(server)


@main.command()
@click.option("--f", "oracle", required=True, type=click.Choice(_ORACLES), help="Oracle function.")
@click.option("--dump-steps", is_flag=True, help="Emit every per-step density matrix.")
@click.option("--format", "fmt", type=click.Choice(("pretty", "json")), default="pretty")
@click.pass_obj
def run(client: httpx.Client, oracle: str, dump_steps: bool, fmt: str) -> None:
    """Run the algorithm for one oracle and report the classification."""
    body = _post(client, "/run", {"oracle": oracle, "dump_steps": dump_steps})
    if fmt == "json":
        click.echo(json.dumps(body, indent=2))
        return
    click.echo(f"# oracle={oracle}")
    if dump_steps:
        for step in body["steps"]:
            click.echo(f"tau={step['tau']}")
            for line in _matrix_lines(step["rho_re"], step["rho_im"]):
                click.echo(line)
    click.echo(f"outcome={body['outcome']} classification={body['classification']}")


@main.command()
@click.option("--from", "alpha2_from", type=float, required=True, help="Grid start (alpha^2).")
@click.option("--to", "alpha2_to", type=float, required=True, help="Grid end (alpha^2).")
@click.option("--steps", type=click.IntRange(min=2), required=True, help="Grid points.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(("csv", "json", "pretty")), default="csv")
@click.pass_obj
def sweep(
    client: httpx.Client,
    alpha2_from: float,
    alpha2_to: float,
    steps: int,
    output: Optional[str],
    fmt: str,
) -> None:
    """Tabulate the error-probability curves over a grid of alpha^2."""
    body = _post(
        client,
        "/sweep",
        {"alpha2_from": alpha2_from, "alpha2_to": alpha2_to, "steps": steps},
    )
    rows = body["rows"]
    if fmt == "csv":
        text = sweep_rows_to_csv(rows)
    elif fmt == "json":
        text = json.dumps(body, indent=2) + "\n"
    else:
        header = f"{'alpha2':>10} {'prob0':>12} {'prob1':>12} {'gate_err':>12} {'ratio':>12}"
        lines = [header]
        for row in rows:
            ratio = "-" if row["ratio"] is None else f"{row['ratio']:.6f}"
            lines.append(
                f"{row['alpha2']:>10.4f} {row['prob0']:>12.6f} {row['prob1']:>12.6f} "
                f"{row['single_gate_err']:>12.6f} {ratio:>12}"
            )
        text = "\n".join(lines) + "\n"
    if output is None:
        click.echo(text, nl=False)
        return
    try:
        with open(output, "w", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        click.echo(f"cannot write {output}: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.option("--f", "oracle", type=click.Choice(_ORACLES), default="f1")
@click.option("--alpha2", type=click.FloatRange(0.0, 1.0), required=True,
              help="Success probability of each noisy Hadamard.")
@click.option("--semantics", type=click.Choice(_SEMANTICS), required=True)
@click.option("--model", type=click.Choice(_MODELS), default="coherent_flip")
@click.option("--phase-angle", type=float, default=0.0, help="Error phase for the phase model.")
@click.option("--trials", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=int, default=None, help="Defaults to PEV_SEED or 0.")
@click.option("--format", "fmt", type=click.Choice(("pretty", "json")), default="pretty")
@click.pass_obj
def mc(
    client: httpx.Client,
    oracle: str,
    alpha2: float,
    semantics: str,
    model: str,
    phase_angle: float,
    trials: int,
    seed: Optional[int],
    fmt: str,
) -> None:
    """Monte-Carlo sampling of the noisy circuit, checked against the exact law."""
    body = _post(
        client,
        "/mc",
        {
            "oracle": oracle,
            "alpha2": alpha2,
            "semantics": semantics,
            "model": model,
            "phase_angle": phase_angle,
            "trials": trials,
            "seed": _default_seed(seed),
        },
    )
    if fmt == "json":
        click.echo(json.dumps(body, indent=2))
    else:
        click.echo(
            f"# oracle={body['oracle']} alpha2={fmt17(alpha2)} semantics={body['semantics']}"
            f" model={body['model']} trials={body['trials']} seed={body['seed']}"
        )
        click.echo(
            f"empirical freq(0)={fmt17(body['empirical']['0'])} freq(1)={fmt17(body['empirical']['1'])}"
        )
        click.echo(f"exact prob(0)={fmt17(body['exact']['0'])} prob(1)={fmt17(body['exact']['1'])}")
        verdict = "pass" if body["within_four_sigma"] else "FAIL"
        click.echo(f"std_error={fmt17(body['std_error'])} four_sigma_check={verdict}")
    if not body["within_four_sigma"]:
        sys.exit(3)


@main.command()
@click.option("--only", default=None, help="Run only checks whose name contains this substring.")
@click.pass_obj
def verify(client: httpx.Client, only: Optional[str]) -> None:
    """Run the reproduction/invariant suite; nonzero exit on any failure."""
    body = _post(client, "/verify", {"only": only})
    for check in body["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        line = f"{status} {check['name']} (max deviation {check['max_deviation']:.3e})"
        if check["detail"]:
            line += f" - {check['detail']}"
        click.echo(line)
    total = len(body["checks"])
    failed = sum(1 for check in body["checks"] if not check["passed"])
    click.echo(f"{total} checks: {total - failed} passed, {failed} failed")
    if failed:
        sys.exit(3)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--seed", type=int, default=None, help="Defaults to PEV_SEED or 0.")
@click.option("--format", "fmt", type=click.Choice(("pretty", "json")), default="pretty")
@click.pass_obj
def circuit(client: httpx.Client, path: str, seed: Optional[int], fmt: str) -> None:
    """Parse a circuit-description file and execute it."""
    try:
        with open(path, "r") as handle:
            text = handle.read()
    except OSError as exc:
        click.echo(f"cannot read {path}: {exc}", err=True)
        sys.exit(1)
    body = _post(client, "/circuit", {"text": text, "seed": _default_seed(seed)})
    if fmt == "json":
        click.echo(json.dumps(body, indent=2))
        return
    click.echo(f"# file={path} steps={len(body['steps'])}")
    if body.get("distribution") is not None:
        dist = body["distribution"]
        click.echo(f"distribution prob(0)={fmt17(dist['0'])} prob(1)={fmt17(dist['1'])}")
    if body.get("outcome") is not None:
        click.echo(f"outcome={body['outcome']}")
    else:
        click.echo("no measurement in circuit")


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host: str, port: int) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
