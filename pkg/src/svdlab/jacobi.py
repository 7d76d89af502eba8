"""Two-sided Jacobi SVD for symmetric matrices.

Cyclic-by-row plane rotations drive the off-diagonal mass to zero; the
rotation angle for a pair (j, k) is the classical tangent choice that
annihilates the (j, k) entry exactly. Because the iteration is a similarity,
the diagonal converges to the eigenvalues and the SVD follows from the usual
sign/sort conversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence
from .matrix import EPS, EigResult, SvdResult, SymmetricMatrix, svd_from_eig


@dataclass(frozen=True)
class JacobiConfig:
    tol: float = 1e-12
    max_sweeps: int = 30

    def __post_init__(self):
        if not (self.tol > 0.0):
            raise ValueError("tol must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")


def _off_norm(w: np.ndarray) -> float:
    od = w.copy()
    np.fill_diagonal(od, 0.0)
    return float(np.linalg.norm(od))


def rotation_for_pair(ajj: float, akk: float, ajk: float):
    """Cosine/sine zeroing the off-diagonal entry of [[ajj, ajk], [ajk, akk]].

    The smaller-magnitude tangent root is used; a perfectly balanced pair
    (equal diagonal) rotates by 45 degrees.
    """
    xi = (akk - ajj) / (2.0 * ajk)
    if xi == 0.0:
        t = 1.0
    else:
        t = math.copysign(1.0, xi) / (abs(xi) + math.sqrt(1.0 + xi * xi))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, c * t


def _diagonalize(a: SymmetricMatrix, cfg: JacobiConfig, sweep_offnorms=None):
    w = a.entries.copy()
    n = w.shape[0]
    q = np.eye(n, order="F")
    fro = float(np.linalg.norm(w))
    if fro == 0.0:
        return q, np.diagonal(w).copy()
    for _ in range(cfg.max_sweeps):
        off = _off_norm(w)
        if sweep_offnorms is not None:
            sweep_offnorms.append(off)
        if off <= cfg.tol * fro:
            return q, np.diagonal(w).copy()
        for j in range(n - 1):
            for k in range(j + 1, n):
                ajk = w[j, k]
                if abs(ajk) <= EPS * math.sqrt(abs(w[j, j] * w[k, k])):
                    continue
                c, s = rotation_for_pair(w[j, j], w[k, k], ajk)
                rj = w[j, :].copy()
                rk = w[k, :]
                w[j, :] = c * rj - s * rk
                w[k, :] = s * rj + c * rk
                cj = w[:, j].copy()
                ck = w[:, k]
                w[:, j] = c * cj - s * ck
                w[:, k] = s * cj + c * ck
                qj = q[:, j].copy()
                qk = q[:, k]
                q[:, j] = c * qj - s * qk
                q[:, k] = s * qj + c * qk
    off = _off_norm(w)
    if off <= cfg.tol * fro:
        if sweep_offnorms is not None:
            sweep_offnorms.append(off)
        return q, np.diagonal(w).copy()
    raise NoConvergence(
        f"off-diagonal norm {off:.3e} still above {cfg.tol:g} * {fro:.3e} "
        f"after {cfg.max_sweeps} sweeps",
        detail=cfg.max_sweeps,
    )


def jacobi_eig(a: SymmetricMatrix, cfg: JacobiConfig | None = None) -> EigResult:
    """Eigendecomposition by cyclic Jacobi; eigenvalues in diagonal order
    (unsorted)."""
    q, lam = _diagonalize(a, cfg or JacobiConfig())
    return EigResult(x=q, lam=lam)


def jacobi_svd(a: SymmetricMatrix, cfg: JacobiConfig | None = None) -> SvdResult:
    return svd_from_eig(jacobi_eig(a, cfg))
