"""Command-line client for the experiment service.

All commands go through the HTTP API: by default the bundled app is mounted
in process (no socket needed); pass --server to target a running instance.
"""

from __future__ import annotations

import csv
import io
import warnings
from contextlib import contextmanager
from typing import Optional

import click

DEFAULT_M_GRID = "5,15,30,40"
DEFAULT_N_GRID = "40,100,200,400"
DEFAULT_EFFECT_GRID = "0.01,0.05,0.15,0.25"
TABLES_M_GRID = (5, 15, 20, 30, 40)

CSV_COLUMNS = (
    "m",
    "n",
    "effect_size",
    "alpha",
    "reps",
    "seed",
    "calibration",
    "p_dfdp_le_bound",
    "p_se",
    "dfdr_hat",
    "dfdr_se",
    "mean_rejections",
    "mean_alpha_hat",
    "threshold_bound_rate",
)

CALIBRATION_BY_FLAG = {"normal": "normal", "t": "student_t"}


def _int_grid(name: str, minimum: int):
    def callback(ctx, param, value):
        try:
            items = [int(part) for part in str(value).split(",") if part.strip()]
        except ValueError:
            raise click.BadParameter(f"{name} must be a comma-separated list of integers")
        if not items or any(v < minimum for v in items):
            raise click.BadParameter(f"{name} values must be integers >= {minimum}")
        return items

    return callback


def _float_grid(name: str, minimum: float):
    def callback(ctx, param, value):
        try:
            items = [float(part) for part in str(value).split(",") if part.strip()]
        except ValueError:
            raise click.BadParameter(f"{name} must be a comma-separated list of numbers")
        if not items or any(v < minimum for v in items):
            raise click.BadParameter(f"{name} values must be >= {minimum}")
        return items

    return callback


def _probability(ctx, param, value):
    if not 0.0 < value < 1.0:
        raise click.BadParameter(f"{param.name} must lie strictly between 0 and 1")
    return value


def _at_least(minimum: int):
    def callback(ctx, param, value):
        if value < minimum:
            raise click.BadParameter(f"{param.name} must be >= {minimum}")
        return value

    return callback


def _seed_value(ctx, param, value):
    if not 0 <= value < 2**64:
        raise click.BadParameter("seed must be a 64-bit unsigned integer")
    return value


@contextmanager
def _client(server: Optional[str]):
    if server:
        import httpx

        with httpx.Client(base_url=server, timeout=None) as client:
            yield client
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # starlette/httpx version-shim noise
            from starlette.testclient import TestClient

        from .service.app import app

        with TestClient(app) as client:
            yield client


def _post_experiments(client, configs: list[dict], workers: int) -> list[dict]:
    response = client.post("/v1/experiments", json={"configs": configs, "workers": workers})
    if response.status_code != 200:
        raise click.ClickException(f"service returned {response.status_code}: {response.text}")
    return response.json()["cells"]


def _format_value(value) -> str:
    # full precision for floats: repr round-trips binary64 exactly
    return repr(value) if isinstance(value, float) else str(value)


def _to_csv(cells: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cell in cells:
        writer.writerow([_format_value(cell[column]) for column in CSV_COLUMNS])
    return buffer.getvalue()


def _ordered_unique(values) -> list:
    seen = []
    for value in values:
        if value not in seen:
            seen.append(value)
    return seen


def _to_markdown(cells: list[dict]) -> str:
    by_key = {(c["effect_size"], c["m"], c["n"]): c for c in cells}
    effects = _ordered_unique(c["effect_size"] for c in cells)
    m_values = _ordered_unique(c["m"] for c in cells)
    n_values = _ordered_unique(c["n"] for c in cells)
    bound = cells[0]["alpha"] / 2.0
    lines = []
    for title, key in (
        (f"Estimated P(dFDP <= {bound:g})", "p_dfdp_le_bound"),
        ("Estimated dFDR", "dfdr_hat"),
    ):
        lines.append(f"## {title}")
        for effect in effects:
            lines.append("")
            lines.append(f"### effect size = {effect:g}")
            lines.append("")
            lines.append("| m \\ n | " + " | ".join(str(n) for n in n_values) + " |")
            lines.append("|---" * (len(n_values) + 1) + "|")
            for m in m_values:
                row = [str(m)]
                for n in n_values:
                    cell = by_key.get((effect, m, n))
                    row.append(f"{cell[key]:.2f}" if cell is not None else "")
                lines.append("| " + " | ".join(row) + " |")
        lines.append("")
    return "\n".join(lines)


def _write_output(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise click.ClickException(f"cannot write {out}: {exc}")


def _config_grid(m_values, n_values, effects, alpha, reps, seed, calibration, error_df) -> list[dict]:
    return [
        {
            "m": m,
            "n": n,
            "effect_size": effect,
            "alpha": alpha,
            "reps": reps,
            "seed": seed,
            "calibration": calibration,
            "error_df": error_df,
        }
        for m in m_values
        for n in n_values
        for effect in effects
    ]


@click.group()
def main():
    """Directional false-discovery-rate testing for all-pairs mean comparisons."""


@main.command()
@click.option("--m", "m_values", default=DEFAULT_M_GRID, show_default=True,
              callback=_int_grid("--m", 2), help="Comma-separated group counts.")
@click.option("--n", "n_values", default=DEFAULT_N_GRID, show_default=True,
              callback=_int_grid("--n", 2), help="Comma-separated per-group sample sizes.")
@click.option("--effect-size", "effects", default=DEFAULT_EFFECT_GRID, show_default=True,
              callback=_float_grid("--effect-size", 0.0),
              help="Comma-separated standard deviations of the true-mean distribution.")
@click.option("--alpha", default=0.2, show_default=True, callback=_probability,
              help="Nominal level of the step-up procedure.")
@click.option("--reps", default=500, show_default=True, callback=_at_least(1),
              help="Replications per cell.")
@click.option("--seed", default=0, show_default=True, callback=_seed_value,
              help="Root seed; replication streams derive from (seed, index).")
@click.option("--calibration", type=click.Choice(["normal", "t"]), default="normal",
              show_default=True, help="Reference distribution for p-values.")
@click.option("--error-df", default=6, show_default=True, callback=_at_least(3),
              help="Degrees of freedom of the Student-t error terms.")
@click.option("--format", "fmt", type=click.Choice(["csv", "markdown"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write output here instead of stdout.")
@click.option("--workers", default=1, show_default=True, callback=_at_least(1),
              help="Parallel workers; results are identical for any value.")
@click.option("--server", default=None, help="Base URL of a running service; default runs in process.")
def run(m_values, n_values, effects, alpha, reps, seed, calibration, error_df, fmt, out,
        workers, server):
    """Run an experiment grid and emit one aggregate row per cell."""
    configs = _config_grid(m_values, n_values, effects, alpha, reps, seed,
                           CALIBRATION_BY_FLAG[calibration], error_df)
    with _client(server) as client:
        cells = _post_experiments(client, configs, workers)
    _write_output(_to_csv(cells) if fmt == "csv" else _to_markdown(cells), out)


@main.command()
@click.option("--seed", default=0, show_default=True, callback=_seed_value)
@click.option("--reps", default=500, show_default=True, callback=_at_least(1))
@click.option("--workers", default=1, show_default=True, callback=_at_least(1))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--server", default=None, help="Base URL of a running service; default runs in process.")
def tables(seed, reps, workers, out, server):
    """Emit both benchmark summary tables as markdown.

    Runs the default study grid at level 0.2 with normal calibration, over
    group counts 5, 15, 20, 30, 40, per-group sizes 40-400, and effect sizes
    0.01-0.25; prints P(dFDP <= 0.1) and estimated dFDR pivoted by (m, n).
    """
    configs = _config_grid(
        TABLES_M_GRID,
        [int(v) for v in DEFAULT_N_GRID.split(",")],
        [float(v) for v in DEFAULT_EFFECT_GRID.split(",")],
        0.2, reps, seed, "normal", 6,
    )
    with _client(server) as client:
        cells = _post_experiments(client, configs, workers)
    _write_output(_to_markdown(cells), out)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Start the HTTP service."""
    import uvicorn

    uvicorn.run("pairfdr.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
