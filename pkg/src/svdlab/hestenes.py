"""One-sided Hestenes SVD.

Plane rotations are applied on the right only, chosen to orthogonalize column
pairs of the working matrix. At convergence the columns are mutually
orthogonal: their norms are the singular values, the accumulated rotations
form V, and U comes from normalizing the columns (with a Gram-Schmidt fill-in
for numerically null columns).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence
from .matrix import EPS, SvdResult, SymmetricMatrix


@dataclass(frozen=True)
class HestenesConfig:
    tol: float = 1e-12
    max_sweeps: int = 30

    def __post_init__(self):
        if not (self.tol > 0.0):
            raise ValueError("tol must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")


def _orthogonalize_pass(w, v, tol):
    """One cyclic sweep; returns True if any rotation was applied."""
    n = w.shape[1]
    rotated = False
    for p in range(n - 1):
        for q in range(p + 1, n):
            cp = w[:, p]
            cq = w[:, q]
            alpha = float(cp @ cp)
            beta = float(cq @ cq)
            gamma = float(cp @ cq)
            if abs(gamma) <= tol * math.sqrt(alpha * beta):
                continue
            rotated = True
            zeta = (beta - alpha) / (2.0 * gamma)
            # zeta == 0 means equal norms; rotate 45 degrees rather than skip,
            # otherwise the pair can never be orthogonalized
            if zeta == 0.0:
                t = 1.0
            else:
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = c * t
            new_p = c * cp - s * cq
            w[:, q] = s * cp + c * cq
            w[:, p] = new_p
            vp = v[:, p].copy()
            vq = v[:, q]
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
    return rotated


def _complete_basis(u, filled, n):
    """Fill the unassigned columns of u with unit vectors orthogonal to the
    assigned ones, taken from the standard basis (re-orthogonalized twice).

    At least one standard basis vector keeps a residual of 1/sqrt(n) against
    any orthonormal set of fewer than n columns, so the acceptance threshold
    sits safely below that.
    """
    have = list(filled)
    todo = [i for i in range(n) if i not in set(filled)]
    basis = 0
    accept = 0.5 / math.sqrt(n)
    for i in todo:
        while True:
            if basis >= n:
                raise NoConvergence("could not complete an orthonormal basis")
            r = np.zeros(n)
            r[basis] = 1.0
            basis += 1
            for _ in range(2):
                for j in have:
                    r -= (u[:, j] @ r) * u[:, j]
            nr = float(np.linalg.norm(r))
            if nr > accept:
                u[:, i] = r / nr
                have.append(i)
                break


def hestenes_svd(a: SymmetricMatrix, cfg: HestenesConfig | None = None) -> SvdResult:
    cfg = cfg or HestenesConfig()
    n = a.n
    w = np.array(a.entries, order="F")
    v = np.eye(n, order="F")
    # sweep below cfg.tol when 16 n eps is tighter, so U (= W with columns
    # normalized) meets the same orthogonality bound the rotation factors do
    tol = min(cfg.tol, 16.0 * n * EPS)
    converged = False
    for _ in range(cfg.max_sweeps):
        if not _orthogonalize_pass(w, v, tol):
            converged = True
            break
    if not converged:
        raise NoConvergence(
            f"no rotation-free sweep within {cfg.max_sweeps} sweeps",
            detail=cfg.max_sweeps,
        )
    sigma = np.sqrt(np.einsum("ij,ij->j", w, w))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    w = w[:, order]
    v = v[:, order]
    smax = sigma[0] if n else 0.0
    u = np.empty((n, n), order="F")
    cut = n * EPS * smax
    filled = [i for i in range(n) if sigma[i] > cut]
    for i in filled:
        u[:, i] = w[:, i] / sigma[i]
    _complete_basis(u, filled, n)
    return SvdResult(u=u, sigma=sigma, v=v)
