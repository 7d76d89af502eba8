"""Golub-Kahan SVD: Householder bidiagonalization followed by an unshifted
Givens chase on the bidiagonal.

Each chase step pairs a right rotation that annihilates a superdiagonal entry
with a left rotation that removes the subdiagonal bulge it created. The
fill-in one slot beyond the superdiagonal cancels exactly against the next
right rotation (the two tangents coincide algebraically), so the iteration is
carried on the two bidiagonal bands alone. Converged superdiagonal entries
split the matrix and the sweep is restricted to the trailing unreduced block,
which keeps slowly-converging pairs cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence
from .matrix import SvdResult, SymmetricMatrix, householder_vector


@dataclass(frozen=True)
class BidiagonalMatrix:
    diag: np.ndarray
    superdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=np.float64)
        e = np.asarray(self.superdiag, dtype=np.float64)
        if d.ndim != 1 or d.size < 1 or e.ndim != 1 or e.size != d.size - 1:
            raise DimensionMismatch(
                f"need diag of length n and superdiag of length n - 1, "
                f"got {d.size} and {e.size}"
            )
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "superdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        b = np.diag(self.diag)
        if self.superdiag.size:
            idx = np.arange(self.superdiag.size)
            b[idx, idx + 1] = self.superdiag
        return b


def givens_rotation(f: float, g: float):
    """(c, s, r) with [[c, s], [-s, c]] (f, g)^T = (r, 0)^T.

    f == 0 short-circuits to a swap; otherwise the tangent is built from the
    smaller-over-larger ratio.
    """
    if f == 0.0:
        return 0.0, 1.0, g
    if abs(f) > abs(g):
        t = g / f
        tt = np.sqrt(1.0 + t * t)
        c = 1.0 / tt
        return c, t * c, tt * f
    t = f / g
    tt = np.sqrt(1.0 + t * t)
    s = 1.0 / tt
    return t * s, s, tt * g


def bidiagonalize(a: SymmetricMatrix):
    """Reduce to upper bidiagonal form: u1^T a v1 = b with u1, v1 orthogonal.

    Reflectors whose target entries are already zero are skipped, so a
    diagonal input passes through untouched with identity transforms.
    """
    b = a.entries.copy()
    n = b.shape[0]
    u1 = np.eye(n)
    v1 = np.eye(n)
    for k in range(n - 1):
        x = b[k:, k]
        if np.any(x[1:] != 0.0):
            u, sig = householder_vector(x)
            beta = 2.0 / float(u @ u)
            b[k:, k:] -= np.outer(u, beta * (u @ b[k:, k:]))
            b[k, k] = sig
            b[k + 1:, k] = 0.0
            u1[:, k:] -= np.outer(u1[:, k:] @ u, beta * u)
        if k <= n - 3:
            x = b[k, k + 1:]
            if np.any(x[1:] != 0.0):
                u, sig = householder_vector(x)
                beta = 2.0 / float(u @ u)
                b[k:, k + 1:] -= np.outer((b[k:, k + 1:] @ u) * beta, u)
                b[k, k + 1] = sig
                b[k, k + 2:] = 0.0
                v1[:, k + 1:] -= np.outer(v1[:, k + 1:] @ u, beta * u)
    return u1, BidiagonalMatrix(np.diagonal(b).copy(), np.diagonal(b, 1).copy()), v1


def _chase_block(d, e, u2, v2, lo, hi):
    """One unshifted sweep on rows/columns lo..hi (all e[lo:hi] nonzero)."""
    fill = 0.0
    for i in range(lo, hi):
        c, s, r = givens_rotation(d[i], e[i])
        if i > lo:
            e[i - 1] = c * e[i - 1] + s * fill
        d[i] = r
        z = s * d[i + 1]
        d[i + 1] = c * d[i + 1]
        vi = v2[:, i].copy()
        vn = v2[:, i + 1]
        v2[:, i] = c * vi + s * vn
        v2[:, i + 1] = -s * vi + c * vn
        c2, s2, r2 = givens_rotation(d[i], z)
        d[i] = r2
        e[i] = s2 * d[i + 1]
        d[i + 1] = c2 * d[i + 1]
        if i < hi - 1:
            fill = s2 * e[i + 1]
            e[i + 1] = c2 * e[i + 1]
        ui = u2[:, i].copy()
        un = u2[:, i + 1]
        u2[:, i] = c2 * ui + s2 * un
        u2[:, i + 1] = -s2 * ui + c2 * un


def gk_svd(
    a: SymmetricMatrix,
    tol: float = 1e-12,
    max_iter: int | None = None,
    sweep_totals=None,
) -> SvdResult:
    """Full SVD via bidiagonalization plus the unshifted chase.

    `max_iter` bounds the total number of block sweeps (default 30 n^2; the
    unshifted iteration converges only linearly, so the budget is generous).
    `sweep_totals`, when a list is passed, collects the superdiagonal
    l1-norm after every sweep.
    """
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    n = a.n
    if max_iter is None:
        max_iter = 30 * n * n
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    u1, b, v1 = bidiagonalize(a)
    d = b.diag.copy()
    e = b.superdiag.copy()
    u2 = np.eye(n, order="F")
    v2 = np.eye(n, order="F")
    sweeps = 0
    if n > 1:
        small = np.abs(e) <= tol * (np.abs(d[:-1]) + np.abs(d[1:]))
        e[small] = 0.0
    hi = n - 1
    while True:
        while hi > 0 and e[hi - 1] == 0.0:
            hi -= 1
        if hi == 0:
            break
        lo = hi - 1
        while lo > 0 and e[lo - 1] != 0.0:
            lo -= 1
        if sweeps >= max_iter:
            raise NoConvergence(
                f"superdiagonal not negligible after {sweeps} block sweeps",
                detail=sweeps,
            )
        sweeps += 1
        _chase_block(d, e, u2, v2, lo, hi)
        # only the active block changed; re-threshold just that segment
        seg = e[lo:hi]
        seg[np.abs(seg) <= tol * (np.abs(d[lo:hi]) + np.abs(d[lo + 1:hi + 1]))] = 0.0
        if sweep_totals is not None:
            sweep_totals.append(float(np.abs(e).sum()))
    u = u1 @ u2
    v = v1 @ v2
    # the chase applies O(n^2) block sweeps' worth of rotations, so the raw
    # accumulators drift to ~20 n eps orthogonality; one Newton-Schulz step
    # squares that defect away while moving the factors by only half of it
    scaled_eye = 1.5 * np.eye(n)
    u = u @ (scaled_eye - 0.5 * (u.T @ u))
    v = v @ (scaled_eye - 0.5 * (v.T @ v))
    neg = d < 0.0
    v[:, neg] *= -1.0
    sigma = np.abs(d)
    order = np.argsort(-sigma, kind="stable")
    return SvdResult(u=u[:, order], sigma=sigma[order], v=v[:, order])
