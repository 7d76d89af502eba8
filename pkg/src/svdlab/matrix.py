"""Core matrix types, elementary orthogonal transforms, and the shared
eigendecomposition-to-SVD conversion.

Every solver in this package works on `SymmetricMatrix` and reports either an
`EigResult` or an `SvdResult`; the helpers here are the only place the
sign/sorting conventions live.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, ZeroVector

EPS = float(np.finfo(np.float64).eps)

# Relative symmetry slack accepted at construction; anything worse is treated
# as an ingestion bug rather than silently averaged away.
SYMMETRY_RTOL = 1e-12


def orth_tol(n: int) -> float:
    """Orthogonality defect allowed for an accumulated n x n transform."""
    return 64.0 * n * EPS


def _as_square(entries) -> np.ndarray:
    a = np.array(entries, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


class SymmetricMatrix:
    """Dense real symmetric matrix; symmetry is validated at construction."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        a = _as_square(entries)
        scale = float(np.abs(a).max())
        gap = float(np.abs(a - a.T).max())
        if gap > SYMMETRY_RTOL * scale:
            raise ValueError(
                f"input is not symmetric: max |a - a.T| = {gap:.3e} "
                f"exceeds {SYMMETRY_RTOL:g} * max |a|"
            )
        # mirror the lower triangle so downstream code sees exact symmetry
        a = np.triu(a) + np.triu(a, 1).T
        a.flags.writeable = False
        self.entries = a

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries))

    def __array__(self, dtype=None, copy=None):
        if dtype is None or np.dtype(dtype) == self.entries.dtype:
            return self.entries if not copy else self.entries.copy()
        return self.entries.astype(dtype)

    def __repr__(self):
        return f"SymmetricMatrix(n={self.n})"


class TridiagonalMatrix:
    """Symmetric tridiagonal matrix stored as diagonal + subdiagonal."""

    __slots__ = ("diag", "sub")

    def __init__(self, diag, sub):
        d = np.asarray(diag, dtype=np.float64)
        e = np.asarray(sub, dtype=np.float64)
        if d.ndim != 1 or e.ndim != 1 or d.size < 1 or e.size != d.size - 1:
            raise DimensionMismatch(
                f"need diag of length n >= 1 and sub of length n - 1, "
                f"got {d.size} and {e.size}"
            )
        if not (np.isfinite(d).all() and np.isfinite(e).all()):
            raise ValueError("tridiagonal entries must be finite")
        self.diag = d.copy()
        self.sub = e.copy()

    @property
    def n(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        if self.sub.size:
            idx = np.arange(self.sub.size)
            a[idx + 1, idx] = self.sub
            a[idx, idx + 1] = self.sub
        return a

    def __repr__(self):
        return f"TridiagonalMatrix(n={self.n})"


@dataclass(frozen=True)
class EigResult:
    """Eigendecomposition a = x diag(lam) x^T with orthonormal columns."""

    x: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        lam = np.asarray(self.lam, dtype=np.float64)
        if x.ndim != 2 or x.shape[0] != x.shape[1] or lam.ndim != 1 or lam.size != x.shape[0]:
            raise DimensionMismatch(
                f"eigenvector matrix {x.shape} and eigenvalue vector {lam.shape} disagree"
            )
        if not (np.isfinite(x).all() and np.isfinite(lam).all()):
            raise ValueError("eigendecomposition entries must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return self.lam.size

    def orth_defect(self) -> float:
        n = self.n
        return float(np.abs(self.x.T @ self.x - np.eye(n)).max())

    def reconstruction(self) -> np.ndarray:
        return (self.x * self.lam) @ self.x.T

    def residual(self, a) -> float:
        a = np.asarray(a, dtype=np.float64)
        denom = float(np.linalg.norm(a))
        if denom == 0.0:
            return float(np.linalg.norm(self.reconstruction()))
        return float(np.linalg.norm(a - self.reconstruction()) / denom)


@dataclass(frozen=True)
class SvdResult:
    """SVD a = u diag(sigma) v^T with sigma sorted descending and nonnegative."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.float64)
        s = np.asarray(self.sigma, dtype=np.float64)
        v = np.asarray(self.v, dtype=np.float64)
        if (
            u.ndim != 2
            or u.shape != v.shape
            or u.shape[0] != u.shape[1]
            or s.ndim != 1
            or s.size != u.shape[0]
        ):
            raise DimensionMismatch(
                f"inconsistent SVD shapes u={u.shape}, sigma={s.shape}, v={v.shape}"
            )
        if not (np.isfinite(u).all() and np.isfinite(s).all() and np.isfinite(v).all()):
            raise ValueError("SVD entries must be finite")
        if s.size and (s.min() < 0.0 or np.any(np.diff(s) > 0.0)):
            raise ValueError("singular values must be nonnegative and non-increasing")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.sigma.size

    def orth_defect(self) -> float:
        n = self.n
        eye = np.eye(n)
        du = np.abs(self.u.T @ self.u - eye).max()
        dv = np.abs(self.v.T @ self.v - eye).max()
        return float(max(du, dv))

    def reconstruction(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.v.T

    def residual(self, a) -> float:
        a = np.asarray(a, dtype=np.float64)
        denom = float(np.linalg.norm(a))
        if denom == 0.0:
            return float(np.linalg.norm(self.reconstruction()))
        return float(np.linalg.norm(a - self.reconstruction()) / denom)


@dataclass(frozen=True)
class Permutation:
    """Reordering map: applying it yields out[i] = x[map[i]]."""

    map: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.map, dtype=np.intp)
        if m.ndim != 1 or m.size < 1:
            raise DimensionMismatch("permutation map must be a nonempty vector")
        seen = np.zeros(m.size, dtype=bool)
        if m.min() < 0 or m.max() >= m.size:
            raise ValueError("permutation entries out of range")
        seen[m] = True
        if not seen.all():
            raise ValueError("permutation map is not a bijection")
        object.__setattr__(self, "map", m)

    @property
    def n(self) -> int:
        return self.map.size

    def inverse(self) -> "Permutation":
        inv = np.empty(self.n, dtype=np.intp)
        inv[self.map] = np.arange(self.n, dtype=np.intp)
        return Permutation(inv)


def sorting_permutation(values) -> Permutation:
    """Stable permutation that sorts `values` ascending."""
    v = np.asarray(values, dtype=np.float64)
    return Permutation(np.argsort(v, kind="stable"))


def apply_permutation(perm: Permutation, d, u):
    """Reorder the paired vectors (d, u) by `perm`; ties keep input order
    because the permutation itself is built with a stable sort."""
    d = np.asarray(d, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if d.shape != u.shape or d.ndim != 1:
        raise LengthMismatch(f"paired vectors disagree: {d.shape} vs {u.shape}")
    if d.size != perm.n:
        raise LengthMismatch(f"permutation of size {perm.n} applied to vectors of size {d.size}")
    return d[perm.map], u[perm.map]


def givens(a: float, b: float):
    """Rotation pair (c, s) with G = [[c, s], [-s, c]] and G^T (a, b)^T = (r, 0)^T.

    The tangent is formed from the smaller-over-larger ratio so that no
    intermediate square overflows.
    """
    if b == 0.0:
        return 1.0, 0.0
    if abs(b) > abs(a):
        tau = -a / b
        s = 1.0 / math.sqrt(1.0 + tau * tau)
        c = s * tau
    else:
        tau = -b / a
        c = 1.0 / math.sqrt(1.0 + tau * tau)
        s = c * tau
    return c, s


def householder_vector(x):
    """Reflector direction u for x, plus the transformed leading entry.

    With beta = 2 / (u^T u) and H = I - beta u u^T, H x is zero below the
    first entry and the returned scalar equals that first entry; its
    magnitude is ||x||_2. Entries are scaled by max |x_i| before squaring so
    extreme inputs neither overflow nor underflow. The zero vector has no
    reflector and raises ZeroVector.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise DimensionMismatch("reflector input must be a nonempty vector")
    m = float(np.abs(x).max())
    if m == 0.0:
        raise ZeroVector("cannot build a reflector for the zero vector")
    u = x / m
    sig = math.sqrt(float(u @ u))
    if u[0] < 0.0:
        sig = -sig
    u[0] += sig
    return u, -m * sig


def svd_from_eig(e: EigResult) -> SvdResult:
    """Convert a symmetric eigendecomposition into an SVD.

    sigma_i = |lam_i| sorted descending (stable on ties), u_i is the
    eigenvector, and v_i = sign(lam_i) u_i with sign(0) taken as +1.
    """
    order = np.argsort(-np.abs(e.lam), kind="stable")
    lam = e.lam[order]
    u = e.x[:, order]
    signs = np.where(lam < 0.0, -1.0, 1.0)
    return SvdResult(u=u, sigma=np.abs(lam), v=u * signs)


def write_matrix_text(path, a) -> None:
    """Write a dense square matrix: first line n, then n whitespace-separated rows."""
    a = _as_square(a)
    n = a.shape[0]
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{n}\n")
        for row in a:
            fh.write(" ".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def read_matrix_text(path) -> np.ndarray:
    """Parse the text format written by `write_matrix_text`.

    Scientific notation is accepted; anything malformed (wrong counts,
    non-numeric fields) raises ValueError with the offending line.
    """
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh.readlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("matrix file is empty")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from None
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    if len(lines) - 1 != n:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    out = np.empty((n, n), dtype=np.float64)
    for i, ln in enumerate(lines[1:]):
        fields = ln.split()
        if len(fields) != n:
            raise ValueError(f"row {i + 1} has {len(fields)} entries, expected {n}")
        try:
            out[i] = [float(f) for f in fields]
        except ValueError:
            raise ValueError(f"row {i + 1} contains a non-numeric field: {ln!r}") from None
    if not np.isfinite(out).all():
        raise ValueError("matrix file contains non-finite values")
    return out
