"""Reference implementations used only to check the real code.

Everything here is deliberately slow and independent of the library: the
determinant comes from hand-rolled pivoted elimination, eigenvalues from sign
changes of the characteristic polynomial, and secular sums from exact
rational arithmetic.
"""

from fractions import Fraction

import numpy as np


def det(a) -> float:
    """Determinant by Gaussian elimination with partial pivoting."""
    m = np.array(a, dtype=np.float64)
    n = m.shape[0]
    sign = 1.0
    out = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(m[k:, k])))
        if m[p, k] == 0.0:
            return 0.0
        if p != k:
            m[[k, p]] = m[[p, k]]
            sign = -sign
        out *= m[k, k]
        if k + 1 < n:
            m[k + 1:, k:] -= np.outer(m[k + 1:, k] / m[k, k], m[k, k:])
    return sign * out


def _charpoly(a, x: float) -> float:
    return det(a - x * np.eye(a.shape[0]))


def charpoly_eigenvalues(a) -> np.ndarray:
    """Eigenvalues of a small symmetric matrix, ascending, found by bisecting
    sign changes of det(a - x I) between Gershgorin bounds.

    The sampling grid is refined until n separate brackets appear, so the
    caller must keep the spectrum simple; seeded random matrices are fine,
    engineered near-multiple eigenvalues are not.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy()
    radius = np.abs(a).sum(axis=1) - np.abs(a.diagonal())
    lo = float((a.diagonal() - radius).min()) - 1e-3
    hi = float((a.diagonal() + radius).max()) + 1e-3
    m = 8
    while True:
        xs = np.linspace(lo, hi, m * n + 1)
        vals = np.array([_charpoly(a, x) for x in xs])
        if not np.any(vals == 0.0):
            flips = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
            if flips.size == n:
                brackets = [(xs[i], xs[i + 1]) for i in flips]
                break
        m *= 2
        if m > 1 << 14:
            raise AssertionError("oracle grid could not separate the spectrum")
    roots = []
    for blo, bhi in brackets:
        flo = _charpoly(a, blo)
        for _ in range(200):
            mid = 0.5 * (blo + bhi)
            if mid == blo or mid == bhi:
                break
            fmid = _charpoly(a, mid)
            if fmid == 0.0:
                blo = bhi = mid
                break
            if (fmid < 0.0) == (flo < 0.0):
                blo, flo = mid, fmid
            else:
                bhi = mid
        roots.append(0.5 * (blo + bhi))
    return np.array(roots)


def secular_exact(d, u, rho: float, lam: float):
    """(f, f') of the rank-one characteristic function at lam, computed in
    exact rational arithmetic and rounded once at the end."""
    f = Fraction(1)
    fp = Fraction(0)
    rho_q = Fraction(rho)
    lam_q = Fraction(lam)
    for di, ui in zip(d, u):
        gap = Fraction(float(di)) - lam_q
        if gap == 0:
            raise ZeroDivisionError("lam hits a pole")
        term = rho_q * Fraction(float(ui)) ** 2 / gap
        f += term
        fp += term / gap
    return float(f), float(fp)


def secular_scale(d, u, rho: float, lam: float) -> float:
    """Magnitude sum matching the library's convergence scale."""
    d = np.asarray(d, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    return float(1.0 + np.abs(rho * u * u / (d - lam)).sum())


def rank_one_dense(d, u, rho: float) -> np.ndarray:
    d = np.asarray(d, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    return np.diag(d) + rho * np.outer(u, u)
