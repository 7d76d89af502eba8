"""`svdlab` command line: decompose, bench, eigenfaces, perclos.

Exit codes: 0 success, 2 bad input, 3 the backend failed to converge,
4 the decomposition finished but missed the residual gate.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import bench as bench_mod
from . import eigenface as faces
from .backends import BACKENDS
from .divide_conquer import dc_svd, scheme_from_id
from .errors import NoConvergence, SchemeFailure
from .golub_kahan import gk_svd
from .hestenes import HestenesConfig, hestenes_svd
from .jacobi import JacobiConfig, jacobi_svd
from .matrix import SymmetricMatrix, read_matrix_text, write_matrix_text
from .tridiag_qr import QrConfig, tridiag_qr_svd

EXIT_INPUT = 2
EXIT_CONVERGENCE = 3
EXIT_RESIDUAL = 4

SCHEME_NAMES = ("hybrid", "middle", "left", "right", "fixed")


class _Fail(click.ClickException):
    """ClickException with a chosen process exit code."""

    def __init__(self, message, code):
        super().__init__(message)
        self.exit_code = code


def _decompose(alg, a, tol, cutoff, scheme):
    if alg == "jacobi":
        return jacobi_svd(a, JacobiConfig(tol=tol))
    if alg == "hestenes":
        return hestenes_svd(a, HestenesConfig(tol=tol))
    if alg == "gk":
        return gk_svd(a, tol=tol)
    if alg == "qr":
        return tridiag_qr_svd(a, QrConfig(tol=tol))
    return dc_svd(a, cutoff=cutoff, scheme=scheme_from_id(scheme))


@click.group()
def main():
    """Symmetric-matrix SVD toolbox."""


@main.command()
@click.option("--alg", type=click.Choice(sorted(BACKENDS)), required=True)
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Matrix in the text format (n, then n rows).")
@click.option("--out", "out_prefix", required=True,
              help="Prefix for the .U.txt/.S.txt/.V.txt outputs.")
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--cutoff", type=int, default=25, show_default=True,
              help="dc only: leaf size handed to the QR solver.")
@click.option("--scheme", type=click.Choice(SCHEME_NAMES), default="hybrid",
              show_default=True, help="dc only: secular root-finding scheme.")
def decompose(alg, input_path, out_prefix, tol, cutoff, scheme):
    """Factor A = U diag(S) V^T and write the three matrices."""
    try:
        a = SymmetricMatrix(read_matrix_text(input_path))
    except (ValueError, OSError) as exc:
        raise _Fail(str(exc), EXIT_INPUT)
    try:
        result = _decompose(alg, a, tol, cutoff, scheme)
    except (NoConvergence, SchemeFailure) as exc:
        raise _Fail(f"{alg} did not converge: {exc}", EXIT_CONVERGENCE)
    except ValueError as exc:
        raise _Fail(str(exc), EXIT_INPUT)
    res = result.residual(a)
    if res > bench_mod.RESIDUAL_GATE:
        raise _Fail(f"residual {res:.3e} exceeds {bench_mod.RESIDUAL_GATE:.0e}",
                    EXIT_RESIDUAL)
    write_matrix_text(f"{out_prefix}.U.txt", result.u)
    write_matrix_text(f"{out_prefix}.S.txt", np.diag(result.sigma))
    write_matrix_text(f"{out_prefix}.V.txt", result.v)
    click.echo(f"wrote {out_prefix}.U.txt, {out_prefix}.S.txt, {out_prefix}.V.txt "
               f"(residual {res:.3e})")


@main.command()
@click.option("--algs", default="qr,dc", show_default=True,
              help="Comma-separated backend names.")
@click.option("--sizes", default="50,100,200,500,1000", show_default=True)
@click.option("--reps", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--kind", type=click.Choice(bench_mod.KINDS),
              default="random-symmetric", show_default=True)
@click.option("--format", "fmt", type=click.Choice(("csv", "table")),
              default="table", show_default=True)
def bench(algs, sizes, reps, seed, kind, fmt):
    """Time the backends on generated matrices (single-threaded)."""
    try:
        spec = bench_mod.BenchSpec(
            algorithms=tuple(s.strip() for s in algs.split(",") if s.strip()),
            sizes=tuple(int(s) for s in sizes.split(",") if s.strip()),
            kind=kind,
            reps=reps,
            seed=seed,
        )
    except ValueError as exc:
        raise _Fail(str(exc), EXIT_INPUT)
    result = bench_mod.run_benchmark(
        spec, progress=lambda msg: click.echo(f"running {msg}", err=True)
    )
    click.echo(bench_mod.to_csv(result) if fmt == "csv" else bench_mod.to_table(result),
               nl=False)


@main.group()
def eigenfaces():
    """Train and apply eigenface models."""


def _gather_training_dir(dirpath):
    root = Path(dirpath)
    images, labels = [], []
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        for pgm in sorted(sub.glob("*.pgm")):
            images.append(faces.read_pgm(pgm))
            labels.append(sub.name)
    if not images:
        raise ValueError(f"no class-subdirectory PGM files under {root}")
    return images, labels


@eigenfaces.command()
@click.option("--dir", "dirpath", type=click.Path(exists=True, file_okay=False),
              required=True, help="Directory of class subdirectories of PGM files.")
@click.option("--k", type=int, default=None,
              help="Component count (default: 95% energy).")
@click.option("--alg", type=click.Choice(sorted(BACKENDS)), default="dc",
              show_default=True)
@click.option("--out", "out_path", required=True)
def train(dirpath, k, alg, out_path):
    """Fit a model from labeled PGM directories and save it."""
    try:
        images, labels = _gather_training_dir(dirpath)
        model = faces.train(images, k=k, backend=alg, labels=labels)
    except (NoConvergence, SchemeFailure) as exc:
        raise _Fail(f"training decomposition failed: {exc}", EXIT_CONVERGENCE)
    except (ValueError, OSError) as exc:
        raise _Fail(str(exc), EXIT_INPUT)
    faces.save_model(model, out_path)
    click.echo(f"trained on {model.training_count} images, kept {model.k} "
               f"eigenfaces -> {out_path}")


@eigenfaces.command()
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--image", "image_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--json", "as_json", is_flag=True, default=False)
def classify(model_path, image_path, as_json):
    """Label one PGM image against a trained model."""
    try:
        model = faces.load_model(model_path)
        image = faces.read_pgm(image_path)
        result = faces.classify(model, image)
    except (ValueError, OSError) as exc:
        raise _Fail(str(exc), EXIT_INPUT)
    if as_json:
        click.echo(json.dumps({
            "label": result.label,
            "omega_distance": result.coefficient_distance,
            "reconstruction_error": result.reconstruction_error,
        }))
    else:
        click.echo(f"label: {result.label}")
        click.echo(f"omega distance: {result.coefficient_distance:.6g}")
        click.echo(f"reconstruction error: {result.reconstruction_error:.6g}")


@main.command()
@click.option("--labels", "labels_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="CSV with columns timestamp_s,label.")
@click.option("--window", type=float, default=180.0, show_default=True,
              help="Window length in seconds.")
def perclos(labels_path, window):
    """Report the closed-eye percentage per tumbling window."""
    try:
        series = read_label_csv(labels_path, window)
        rows = faces.perclos_windows(series)
    except (ValueError, OSError) as exc:
        raise _Fail(str(exc), EXIT_INPUT)
    for start, end, pct in rows:
        click.echo(f"{start:.3f},{end:.3f},{pct:.6g}")


def read_label_csv(path, window_seconds=180.0) -> faces.FrameLabelSeries:
    """Parse `timestamp_s,label` rows (header optional) into a series."""
    timestamps, labels = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected timestamp_s,label")
            if lineno == 1 and parts[0].lower() in ("timestamp_s", "timestamp"):
                continue
            try:
                timestamps.append(float(parts[0]))
            except ValueError:
                raise ValueError(f"line {lineno}: bad timestamp {parts[0]!r}") from None
            labels.append(parts[1].lower())
    try:
        return faces.FrameLabelSeries(
            timestamps=np.array(timestamps, dtype=np.float64),
            labels=tuple(labels),
            window_seconds=window_seconds,
        )
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


if __name__ == "__main__":
    sys.exit(main())
