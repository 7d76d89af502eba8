"""Single-threaded benchmark harness for the symmetric SVD backends.

Timings are wall-clock medians over repeated runs with BLAS thread pools
pinned to one thread. Correctness is checked outside the timed region: a rep
whose relative reconstruction residual exceeds the gate is excluded from the
statistics and recorded as a failure in the result.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from .backends import BACKENDS, get_backend
from .matrix import SymmetricMatrix

KINDS = ("random-symmetric", "random-spd", "graded", "identity")

RESIDUAL_GATE = 1e-8


def generate_symmetric(n: int, kind: str, seed: int) -> SymmetricMatrix:
    """Deterministic test matrix of the named kind.

    graded: diagonal decades from 1 down to 1e-12 plus off-diagonal noise
    scaled relative to sqrt(d_i d_j), so rows keep their magnitude profile.
    """
    rng = np.random.default_rng(seed)
    if kind == "random-symmetric":
        g = rng.uniform(-1.0, 1.0, (n, n))
        a = 0.5 * (g + g.T)
    elif kind == "random-spd":
        g = rng.uniform(-1.0, 1.0, (n, n))
        a = g @ g.T / n + 1e-3 * np.eye(n)
        a = 0.5 * (a + a.T)
    elif kind == "graded":
        d = np.logspace(0, -12, n)
        scale = 0.1 * np.sqrt(np.outer(d, d))
        noise = rng.standard_normal((n, n))
        a = np.diag(d) + scale * 0.5 * (noise + noise.T)
        a = 0.5 * (a + a.T)
    elif kind == "identity":
        a = np.eye(n)
    else:
        raise ValueError(f"unknown matrix kind {kind!r} (known: {', '.join(KINDS)})")
    return SymmetricMatrix(a)


@dataclass(frozen=True)
class BenchSpec:
    algorithms: tuple
    sizes: tuple
    kind: str = "random-symmetric"
    reps: int = 5
    seed: int = 20240901

    def __post_init__(self):
        for alg in self.algorithms:
            if alg not in BACKENDS:
                raise ValueError(f"unknown backend {alg!r}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown matrix kind {self.kind!r}")
        if not self.sizes or any(n < 2 for n in self.sizes):
            raise ValueError("sizes must be at least 2")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")


@dataclass
class BenchCell:
    alg: str
    n: int
    rep_median_s: float
    rep_min_s: float
    rep_max_s: float
    residual: float
    orth_defect: float
    failures: list = field(default_factory=list)


@dataclass
class BenchResult:
    spec: BenchSpec
    cells: list = field(default_factory=list)

    def cell(self, alg: str, n: int) -> BenchCell:
        for c in self.cells:
            if c.alg == alg and c.n == n:
                return c
        raise KeyError(f"no cell for {alg} at n={n}")


def _time_one(fn, a: SymmetricMatrix):
    t0 = time.perf_counter()
    result = fn(a)
    elapsed = time.perf_counter() - t0
    return elapsed, result


def run_benchmark(spec: BenchSpec, progress=None) -> BenchResult:
    out = BenchResult(spec=spec)
    with threadpool_limits(limits=1):
        for n in spec.sizes:
            a = generate_symmetric(n, spec.kind, spec.seed)
            for alg in spec.algorithms:
                fn = get_backend(alg)
                if progress is not None:
                    progress(f"{alg} n={n}")
                times = []
                residual = orth = float("nan")
                failures = []
                try:
                    _time_one(fn, a)  # warmup, untimed statistics-wise
                except Exception as exc:
                    failures.append(f"warmup: {exc}")
                for rep in range(spec.reps):
                    try:
                        elapsed, result = _time_one(fn, a)
                    except Exception as exc:
                        failures.append(f"rep {rep}: {exc}")
                        continue
                    res = result.residual(a)
                    if res > RESIDUAL_GATE:
                        failures.append(f"rep {rep}: residual {res:.3e} over gate")
                        continue
                    times.append(elapsed)
                    residual = res
                    orth = result.orth_defect()
                if times:
                    cell = BenchCell(
                        alg=alg,
                        n=n,
                        rep_median_s=float(np.median(times)),
                        rep_min_s=min(times),
                        rep_max_s=max(times),
                        residual=residual,
                        orth_defect=orth,
                        failures=failures,
                    )
                else:
                    cell = BenchCell(alg, n, float("nan"), float("nan"), float("nan"),
                                     float("nan"), float("nan"), failures)
                out.cells.append(cell)
    return out


CSV_HEADER = "alg,n,rep_median_s,rep_min_s,rep_max_s,residual,orth_defect"


def to_csv(result: BenchResult) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for c in result.cells:
        buf.write(
            f"{c.alg},{c.n},{c.rep_median_s:.9g},{c.rep_min_s:.9g},"
            f"{c.rep_max_s:.9g},{c.residual:.3e},{c.orth_defect:.3e}\n"
        )
    return buf.getvalue()


def to_table(result: BenchResult) -> str:
    rows = [("alg", "n", "median (s)", "min (s)", "max (s)", "residual", "orth defect")]
    for c in result.cells:
        rows.append((
            c.alg, str(c.n), f"{c.rep_median_s:.9g}", f"{c.rep_min_s:.9g}",
            f"{c.rep_max_s:.9g}", f"{c.residual:.3e}", f"{c.orth_defect:.3e}",
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)))
    failed = [(c, f) for c in result.cells for f in c.failures]
    for c, f in failed:
        lines.append(f"! {c.alg} n={c.n}: {f}")
    return "\n".join(lines) + "\n"
