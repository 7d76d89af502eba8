"""Divide-and-conquer eigensolver for symmetric tridiagonal matrices.

The matrix is torn at the midpoint into two half-size blocks plus a rank-one
coupling. After solving the halves recursively, the merge sorts the combined
spectrum, deflates negligible or clustered contributions, solves the secular
equation on the surviving poles, rebuilds the rank-one weights from the
computed roots (which is what keeps the eigenvectors orthogonal), and
assembles the eigenvector matrix with one matrix product per merge.

Five interchangeable root-finding schemes are provided; the two one-sided
ones are strict about their monotone progression and raise SchemeFailure
rather than silently bisecting.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    InterlacingViolation,
    NoConvergence,
    PoleEvaluation,
    SchemeFailure,
    ZeroCoupling,
)
from .matrix import EPS, EigResult, SvdResult, SymmetricMatrix, TridiagonalMatrix, svd_from_eig
from .tridiag_qr import QrConfig, symmetric_qr_eig, tridiagonalize


class SolverScheme(enum.Enum):
    APPROACH_LEFT = "left"
    APPROACH_RIGHT = "right"
    MIDDLE_WAY = "middle"
    FIXED_WEIGHT = "fixed"
    HYBRID = "hybrid"


def scheme_from_id(name: str) -> SolverScheme:
    for s in SolverScheme:
        if s.value == name:
            return s
    raise ValueError(f"unknown solver scheme {name!r}")


@dataclass(frozen=True)
class SecularProblem:
    """Rank-one update d + rho u u^T of a diagonal matrix diag(d).

    `d` must be ascending (ties allowed until deflation removes them); `u`
    may contain zeros for the same reason. `rho` must be nonzero.
    """

    d: np.ndarray
    u: np.ndarray
    rho: float

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.float64)
        u = np.asarray(self.u, dtype=np.float64)
        rho = float(self.rho)
        if d.ndim != 1 or d.size < 1 or d.shape != u.shape:
            raise ValueError(f"need matching pole/weight vectors, got {d.shape} and {u.shape}")
        if not (np.isfinite(d).all() and np.isfinite(u).all() and math.isfinite(rho)):
            raise ValueError("secular problem entries must be finite")
        if np.any(np.diff(d) < 0.0):
            raise ValueError("poles must be ascending")
        if rho == 0.0:
            raise ValueError("rho must be nonzero")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "rho", rho)

    @property
    def n(self) -> int:
        return self.d.size

    def dense(self) -> np.ndarray:
        return np.diag(self.d) + self.rho * np.outer(self.u, self.u)


@dataclass(frozen=True)
class Deflation:
    """Outcome of the deflation pass.

    `deflated_pairs` holds (eigenvalue, eigenvector) in the problem's own
    coordinate basis; `rotations` are the (kept, gone, c, s) plane rotations
    that merged near-equal poles, in application order.
    """

    kept_indices: np.ndarray
    deflated_indices: np.ndarray
    deflated_pairs: tuple
    rotations: tuple
    tol: float


class SecularSolution(NamedTuple):
    lam: np.ndarray
    pole_index: np.ndarray
    offset: np.ndarray
    iterations: np.ndarray


def split_rank_one(t: TridiagonalMatrix, m: int):
    """Tear t at row m into (t1, t2, rho, coupling vector).

    t equals blockdiag(t1', t2') + rho v v^T where t1', t2' are t1, t2 with
    the torn subdiagonal entry added back on their touching diagonal corners.
    """
    n = t.n
    if not 1 <= m < n:
        raise ValueError(f"split point {m} outside 1..{n - 1}")
    rho = float(t.sub[m - 1])
    if rho == 0.0:
        raise ZeroCoupling(f"subdiagonal entry {m - 1} is zero; split the blocks directly")
    d1 = t.diag[:m].copy()
    d1[-1] -= rho
    d2 = t.diag[m:].copy()
    d2[0] -= rho
    v = np.zeros(n)
    v[m - 1] = 1.0
    v[m] = 1.0
    return (
        TridiagonalMatrix(d1, t.sub[: m - 1]),
        TridiagonalMatrix(d2, t.sub[m:]),
        rho,
        v,
    )


def build_merge_weights(q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    """Rank-one weight vector for the merge: last row of q1 over first row of
    q2 (norm-squared 2 when both factors are orthogonal)."""
    return np.concatenate([q1[-1, :], q2[0, :]])


def deflate(problem: SecularProblem, tol: float | None = None):
    """Split a merge problem into a strictly-separated reduced problem plus
    directly-known eigenpairs.

    Three rules apply, all scaled by `tol` (default 8 n eps): a negligible
    whole update, negligible individual weights, and near-equal pole pairs
    (merged by a plane rotation that zeroes one weight and perturbs the pair
    diagonal by at most the gap).
    """
    n = problem.n
    if tol is None:
        tol = 8.0 * n * EPS
    d = problem.d.tolist()
    u = problem.u.tolist()
    rho = problem.rho
    dscale = max(abs(problem.d[0]), abs(problem.d[-1]))
    unorm2 = float(problem.u @ problem.u)
    deflated = [False] * n
    rotations = []

    if abs(rho) * unorm2 <= tol * dscale:
        deflated = [True] * n
    else:
        # dropping component i perturbs the matrix by ~|rho u_i| ||u||, so the
        # weight test must be linear in |u_i| or accuracy degrades to sqrt(tol)
        wtol = tol * (dscale + abs(rho) * unorm2)
        coupling = abs(rho) * math.sqrt(unorm2)
        for i in range(n):
            if coupling * abs(u[i]) <= wtol:
                deflated[i] = True
        ptol = tol * dscale
        prev = -1
        for i in range(n):
            if deflated[i]:
                continue
            if prev >= 0 and d[i] - d[prev] <= ptol:
                r = math.hypot(u[prev], u[i])
                c = u[prev] / r
                s = u[i] / r
                u[prev] = r
                u[i] = 0.0
                dp, di = d[prev], d[i]
                cc, ss = c * c, s * s
                d[prev] = cc * dp + ss * di
                d[i] = ss * dp + cc * di
                rotations.append((prev, i, c, s))
                deflated[i] = True
            else:
                prev = i

    kept = np.array([i for i in range(n) if not deflated[i]], dtype=np.intp)
    gone = np.array([i for i in range(n) if deflated[i]], dtype=np.intp)
    pairs = []
    for i in gone:
        vec = np.zeros(n)
        vec[i] = 1.0
        # the basis picks up the rotations left to right, so the coordinate
        # vector picks them up right to left, each applied forward
        for p, q, c, s in reversed(rotations):
            wp, wq = vec[p], vec[q]
            vec[p] = c * wp - s * wq
            vec[q] = s * wp + c * wq
        pairs.append((d[i], vec))
    d_arr = np.asarray(d)
    u_arr = np.asarray(u)
    if kept.size:
        reduced = SecularProblem(d_arr[kept], u_arr[kept], rho)
    else:
        reduced = None
    return reduced, Deflation(
        kept_indices=kept,
        deflated_indices=gone,
        deflated_pairs=tuple(pairs),
        rotations=tuple(rotations),
        tol=tol,
    )


def secular_eval(problem: SecularProblem, lam: float):
    """Value and derivative of f(x) = 1 + rho sum u_k^2 / (d_k - x).

    Raises PoleEvaluation if `lam` coincides exactly with a pole.
    """
    delta = problem.d - lam
    if np.any(delta == 0.0):
        raise PoleEvaluation(f"lambda = {lam!r} hits a pole exactly")
    terms = problem.rho * problem.u**2 / delta
    return float(1.0 + terms.sum()), float((terms / delta).sum())


class _Eval(NamedTuple):
    f: float
    psi: float
    phi: float
    psi1: float
    phi1: float
    fscale: float
    delta: np.ndarray


def _eval_shifted(base, wsq, tau, split) -> _Eval:
    """Partitioned secular sums at lam = pole + tau, with cancellation-free
    pole distances delta_k = base_k - tau."""
    delta = base - tau
    terms = wsq / delta
    t2 = terms / delta
    lo = split + 1
    psi = float(terms[:lo].sum())
    phi = float(terms[lo:].sum())
    psi1 = float(t2[:lo].sum())
    phi1 = float(t2[lo:].sum())
    f = 1.0 + psi + phi
    fscale = 1.0 + float(np.abs(terms).sum())
    return _Eval(f, psi, phi, psi1, phi1, fscale, delta)


def _stable_quadratic(c, a, b):
    """Root of c x^2 - a x + b = 0 on the branch that stays closest to the
    current iterate; returns None when degenerate."""
    if c == 0.0:
        if a == 0.0:
            return None
        return b / a
    disc = a * a - 4.0 * b * c
    if disc < 0.0:
        disc = 0.0
    sq = math.sqrt(disc)
    if a <= 0.0:
        eta = (a - sq) / (2.0 * c)
    else:
        denom = a + sq
        if denom == 0.0:
            return None
        eta = 2.0 * b / denom
    if not math.isfinite(eta):
        return None
    return eta


def _two_pole_proposal(ev: _Eval, tau, dlo, dhi, frozen, scheme, wsq_s, s_is_lower):
    """Candidate step for the middle-way and fixed-weight schemes.

    Both fit c3 + c1/(pole_lo - x) + c2/(pole_hi - x) matching f and f' at
    the current iterate; fixed-weight additionally pins the nearer pole's
    coefficient to its true weight.
    """
    d1 = ev.delta[dlo]
    d2 = ev.delta[dhi]
    if not frozen:
        c1 = ev.psi1 * d1 * d1
        cpsi = ev.psi - ev.psi1 * d1
        c2 = ev.phi1 * d2 * d2
        cphi = ev.phi - ev.phi1 * d2
        c3 = 1.0 + cpsi + cphi
    elif s_is_lower:
        c1 = wsq_s
        rest = ev.psi + ev.phi - c1 / d1
        rest1 = ev.psi1 + ev.phi1 - c1 / (d1 * d1)
        c2 = rest1 * d2 * d2
        c3 = 1.0 + rest - rest1 * d2
    else:
        c2 = wsq_s
        rest = ev.psi + ev.phi - c2 / d2
        rest1 = ev.psi1 + ev.phi1 - c2 / (d2 * d2)
        c1 = rest1 * d1 * d1
        c3 = 1.0 + rest - rest1 * d1
    a = c3 * (d1 + d2) + c1 + c2
    b = d1 * d2 * ev.f
    eta = _stable_quadratic(c3, a, b)
    if eta is None:
        return None
    return tau + eta


def _hybrid_proposal(base, wsq, ev: _Eval, tau, s, j, last, blo, bhi):
    """Candidate step for the hybrid scheme: a three-pole model (nearest pole
    pinned at its true weight, each neighbour carrying its tail's osculatory
    fit) solved by a safeguarded Newton iteration inside the current bracket."""
    n = base.size
    poles = [0.0]
    weights = [wsq[s]]
    const = 1.0
    if last:
        # split = n - 2 here, so the nearest-pole term sits in phi, and the
        # whole of psi is the lower tail
        low = ev.psi
        low1 = ev.psi1
        hi_sum = ev.phi - wsq[s] / ev.delta[s]
        hi_der = ev.phi1 - wsq[s] / ev.delta[s] ** 2
        low_pole = base[s - 1] if s >= 1 else None
        hi_pole = None
    elif s == j:
        low = ev.psi - wsq[s] / ev.delta[s]
        low1 = ev.psi1 - wsq[s] / ev.delta[s] ** 2
        hi_sum = ev.phi
        hi_der = ev.phi1
        low_pole = base[j - 1] if j >= 1 else None
        hi_pole = base[j + 1]
    else:
        low = ev.psi
        low1 = ev.psi1
        hi_sum = ev.phi - wsq[s] / ev.delta[s]
        hi_der = ev.phi1 - wsq[s] / ev.delta[s] ** 2
        low_pole = base[j]
        hi_pole = base[j + 2] if j + 2 < n else None
    if low_pole is not None and low1 > 0.0:
        dlo = low_pole - tau
        poles.append(low_pole)
        weights.append(low1 * dlo * dlo)
        const += low - low1 * dlo
    else:
        const += low
    if hi_pole is not None and hi_der > 0.0:
        dhi = hi_pole - tau
        poles.append(hi_pole)
        weights.append(hi_der * dhi * dhi)
        const += hi_sum - hi_der * dhi
    else:
        const += hi_sum

    def model(x):
        val = const
        der = 0.0
        for p, w in zip(poles, weights):
            dx = p - x
            if dx == 0.0:
                return None, None
            val += w / dx
            der += w / (dx * dx)
        return val, der

    x = tau
    hval = ev.f
    hder = ev.psi1 + ev.phi1
    if hval > 0.0:
        lo_br, hi_br = blo, tau
    else:
        lo_br, hi_br = tau, bhi
    for _ in range(40):
        if hder > 0.0 and math.isfinite(hval):
            xn = x - hval / hder
        else:
            xn = 0.5 * (lo_br + hi_br)
        if not lo_br < xn < hi_br:
            xn = 0.5 * (lo_br + hi_br)
        if xn == x or xn == lo_br or xn == hi_br:
            break
        hval, hder = model(xn)
        if hval is None:
            return None
        x = xn
        scale = abs(const)
        for p, w in zip(poles, weights):
            scale += abs(w / (p - x))
        if abs(hval) <= 8.0 * EPS * (1.0 + scale):
            break
        if hval > 0.0:
            hi_br = xn
        else:
            lo_br = xn
    return x


def _solve_root_bracketed(base, wsq, j, s, last, scheme, tau, ev, blo, bhi, rtol, max_iter, niter):
    """Shared safeguarded driver for middle-way, fixed-weight and hybrid.

    The residual test is the only accuracy stop; the width test fires at the
    resolution limit of the offset itself, since an absolute width cutoff
    would park roots with tiny weights far from their pole in relative terms
    and poison the corrected weights downstream.
    """
    n = base.size
    split = n - 2 if last else j
    stall = 0
    while True:
        if abs(ev.f) <= rtol * ev.fscale or (bhi - blo) <= 2.0 * EPS * (abs(blo) + abs(bhi)):
            return tau, niter
        if niter >= max_iter:
            raise NoConvergence(f"secular root {j} not converged", detail=j)
        width = bhi - blo
        if scheme is SolverScheme.HYBRID:
            cand = _hybrid_proposal(base, wsq, ev, tau, s, j, last, blo, bhi)
        elif last:
            # the trailing interval anchors on the last two poles; the upper
            # fit then carries the true trailing weight exactly
            cand = _two_pole_proposal(ev, tau, n - 2, n - 1, False, scheme, wsq[s], False)
        else:
            frozen = scheme is SolverScheme.FIXED_WEIGHT
            cand = _two_pole_proposal(ev, tau, j, j + 1, frozen, scheme, wsq[s], s == j)
        if stall >= 3:
            cand = None
            stall = 0
        if cand is None or not (blo < cand < bhi) or cand == tau:
            cand = 0.5 * (blo + bhi)
            if cand == blo or cand == bhi or cand == tau:
                return tau, niter
        ev = _eval_shifted(base, wsq, cand, split)
        niter += 1
        if ev.f < 0.0:
            blo = cand
        elif ev.f > 0.0:
            bhi = cand
        else:
            return cand, niter
        tau = cand
        stall = stall + 1 if bhi - blo > 0.9 * width else 0


def _solve_root_one_sided(d, wsq, j, last, left, rtol, max_iter, trace=None):
    """ApproachLeft / ApproachRight: one-pole osculatory steps anchored on the
    pole opposite the approach side, which makes every step provably monotone
    while the iterate stays on its side of the root. Crossing the root is the
    scheme's own failure mode and raises SchemeFailure. Returns (offset, pole
    index, evaluation count); the trailing root has no interval above it, so
    both schemes descend from the upper bound there. `trace`, when a list,
    collects the accepted iterates of the monotone phase."""
    n = d.size
    if last:
        s = n - 1
        split = n - 2
        base = d - d[s]
        ub = float(wsq.sum())
        tau = ub
        ev = _eval_shifted(base, wsq, tau, split)
        niter = 1
        if ev.f <= 0.0:
            # the root is within roundoff of its upper bound
            return ub * (1.0 - 2.0**-52), s, niter
        from_below = False
        anchor = 0.0
    else:
        split = j
        gap = d[j + 1] - d[j]
        mid = 0.5 * gap
        ev = _eval_shifted(d - d[j], wsq, mid, split)
        niter = 1
        if abs(ev.f) <= rtol * ev.fscale:
            return mid, j, niter
        # shift against the pole the root is nearer to, so the stored offset
        # and every later divided difference stay cancellation-free
        s = j if ev.f > 0.0 else j + 1
        base = d - d[s]
        tau = mid if s == j else mid - gap
        ev = _eval_shifted(base, wsq, tau, split)
        niter += 1
        from_below = left
        if left:
            anchor = base[j + 1]
            lo_pole = base[j]
            while ev.f >= 0.0:
                if abs(ev.f) <= rtol * ev.fscale:
                    return tau, s, niter
                if niter >= max_iter:
                    raise NoConvergence(f"secular root {j} not converged", detail=j)
                tau = lo_pole + 0.5 * (tau - lo_pole)
                if tau == lo_pole:
                    raise SchemeFailure("left approach collapsed onto its pole")
                ev = _eval_shifted(base, wsq, tau, split)
                niter += 1
        else:
            anchor = base[j]
            hi_pole = base[j + 1]
            while ev.f <= 0.0:
                if abs(ev.f) <= rtol * ev.fscale:
                    return tau, s, niter
                if niter >= max_iter:
                    raise NoConvergence(f"secular root {j} not converged", detail=j)
                tau = hi_pole + 0.5 * (tau - hi_pole)
                if tau == hi_pole:
                    raise SchemeFailure("right approach collapsed onto its pole")
                ev = _eval_shifted(base, wsq, tau, split)
                niter += 1
    if trace is not None:
        trace.append(tau)
    while True:
        if abs(ev.f) <= rtol * ev.fscale:
            return tau, s, niter
        if niter >= max_iter:
            raise NoConvergence(f"secular root {j} not converged", detail=j)
        fp = ev.psi1 + ev.phi1
        dist = anchor - tau
        denom = ev.f - fp * dist
        # from below, denom = f - f'(anchor - tau) < 0 whenever f < 0; from
        # above the mirrored sign holds, so a flip means the iterate crossed.
        # The model root anchor + f'dist^2/denom is applied as an increment
        # from tau, which keeps tiny final steps free of cancellation
        if from_below:
            if denom >= 0.0:
                raise SchemeFailure("left approach lost its model sign")
            cand = tau + dist * (ev.f / denom)
            if cand == tau:
                return tau, s, niter
            if not tau < cand < anchor:
                raise SchemeFailure("left approach failed to increase within its interval")
        else:
            if denom <= 0.0:
                raise SchemeFailure("right approach lost its model sign")
            cand = tau + dist * (ev.f / denom)
            if cand == tau:
                return tau, s, niter
            if not anchor < cand < tau:
                raise SchemeFailure("right approach failed to decrease within its interval")
        ev = _eval_shifted(base, wsq, cand, split)
        niter += 1
        if from_below and ev.f > 0.0 and abs(ev.f) > rtol * ev.fscale:
            raise SchemeFailure("left approach overshot its root")
        if not from_below and ev.f < 0.0 and abs(ev.f) > rtol * ev.fscale:
            raise SchemeFailure("right approach overshot its root")
        tau = cand
        if trace is not None:
            trace.append(tau)


def _solve_canonical(d, wsq, scheme, rtol, max_iter):
    """All roots of 1 + sum wsq_k / (d_k - x) with positive weights."""
    n = d.size
    lam = np.empty(n)
    pole = np.empty(n, dtype=np.intp)
    offset = np.empty(n)
    iters = np.empty(n, dtype=np.intp)
    for j in range(n):
        last = j == n - 1
        if n == 1:
            lam[0] = d[0] + wsq[0]
            pole[0] = 0
            offset[0] = wsq[0]
            iters[0] = 0
            break
        if last:
            s = n - 1
            base = d - d[s]
            if scheme in (SolverScheme.APPROACH_LEFT, SolverScheme.APPROACH_RIGHT):
                tau, s, it = _solve_root_one_sided(
                    d, wsq, j, True, scheme is SolverScheme.APPROACH_LEFT,
                    rtol, max_iter,
                )
            else:
                ub = float(wsq.sum())
                ev = _eval_shifted(base, wsq, ub, n - 2)
                if ev.f <= 0.0:
                    tau, it = ub * (1.0 - 2.0**-52), 1
                else:
                    tau, it = _solve_root_bracketed(
                        base, wsq, j, s, True, scheme, ub, ev, 0.0, ub,
                        rtol, max_iter, 1,
                    )
        else:
            gap = d[j + 1] - d[j]
            if scheme in (SolverScheme.APPROACH_LEFT, SolverScheme.APPROACH_RIGHT):
                tau, s, it = _solve_root_one_sided(
                    d, wsq, j, False, scheme is SolverScheme.APPROACH_LEFT,
                    rtol, max_iter,
                )
            else:
                base = d - d[j]
                mid = 0.5 * gap
                ev = _eval_shifted(base, wsq, mid, j)
                it = 1
                if ev.f > 0.0:
                    s = j
                    tau, it = _solve_root_bracketed(
                        base, wsq, j, s, False, scheme, mid, ev, 0.0, mid,
                        rtol, max_iter, it,
                    )
                else:
                    s = j + 1
                    base = d - d[j + 1]
                    tau0 = base[j] + mid  # midpoint expressed against the right pole
                    ev = _eval_shifted(base, wsq, tau0, j)
                    it += 1
                    tau, it = _solve_root_bracketed(
                        base, wsq, j, s, False, scheme, tau0, ev, tau0, 0.0,
                        rtol, max_iter, it,
                    )
        lam[j] = d[s] + tau
        pole[j] = s
        offset[j] = tau
        iters[j] = it
    return SecularSolution(lam=lam, pole_index=pole, offset=offset, iterations=iters)


def _validate_reduced(problem: SecularProblem):
    if np.any(np.diff(problem.d) <= 0.0):
        raise ValueError("secular solve needs strictly separated poles; deflate first")
    if np.any(problem.u == 0.0):
        raise ValueError("secular solve needs nonzero weights; deflate first")


def solve_secular(
    problem: SecularProblem,
    scheme: SolverScheme = SolverScheme.HYBRID,
    rtol: float | None = None,
    max_iter: int = 100,
) -> SecularSolution:
    """Roots of the secular function for a strictly-separated problem, in
    ascending order, with their shifted-pole representation and per-root
    evaluation counts."""
    _validate_reduced(problem)
    n = problem.n
    if rtol is None:
        rtol = 4.0 * n * EPS
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if problem.rho > 0.0:
        return _solve_canonical(problem.d, problem.rho * problem.u**2, scheme, rtol, max_iter)
    # mirror to the canonical orientation: x -> -x reverses poles and turns
    # rho positive; approach sides swap with the direction of the axis
    mirror_scheme = {
        SolverScheme.APPROACH_LEFT: SolverScheme.APPROACH_RIGHT,
        SolverScheme.APPROACH_RIGHT: SolverScheme.APPROACH_LEFT,
    }.get(scheme, scheme)
    md = -problem.d[::-1]
    mw = (-problem.rho) * problem.u[::-1] ** 2
    sol = _solve_canonical(md, mw, mirror_scheme, rtol, max_iter)
    n1 = n - 1
    return SecularSolution(
        lam=-sol.lam[::-1],
        pole_index=n1 - sol.pole_index[::-1],
        offset=-sol.offset[::-1],
        iterations=sol.iterations[::-1].copy(),
    )


def secular_roots(
    problem: SecularProblem,
    scheme: SolverScheme = SolverScheme.HYBRID,
    rtol: float | None = None,
    max_iter: int = 100,
) -> np.ndarray:
    return solve_secular(problem, scheme, rtol, max_iter).lam


def _corrected_from_delta(d, delta, rho, sign_source=None):
    n = d.size
    dd = d[:, None] - d[None, :]
    np.fill_diagonal(dd, 1.0)
    ratios = delta / dd
    np.fill_diagonal(ratios, 1.0)
    radicand = (-np.diagonal(delta) / rho) * ratios.prod(axis=1)
    scale = max(float(np.abs(radicand).max()), np.finfo(np.float64).tiny)
    if np.any(radicand < -n * EPS * scale):
        raise InterlacingViolation(
            "a corrected weight came out imaginary; the roots do not interlace"
        )
    mags = np.sqrt(np.clip(radicand, 0.0, None))
    if sign_source is None:
        return mags
    return mags * np.where(np.asarray(sign_source) < 0.0, -1.0, 1.0)


def corrected_weights(d, lambdas, rho, u=None):
    """Weights that make `lambdas` the exact eigenvalues of the rank-one
    update diag(d) + rho w w^T (product form of the pole/root ratios).

    Signs are copied from `u` when it is given, else taken positive. Raises
    InterlacingViolation when a radicand is negative beyond roundoff, which
    means the supplied roots do not interlace the poles.
    """
    d = np.asarray(d, dtype=np.float64)
    lambdas = np.asarray(lambdas, dtype=np.float64)
    if d.shape != lambdas.shape or d.ndim != 1 or d.size < 1:
        raise ValueError("need matching pole and root vectors")
    if np.any(np.diff(d) <= 0.0):
        raise ValueError("poles must be strictly ascending")
    if rho == 0.0:
        raise ValueError("rho must be nonzero")
    delta = d[:, None] - lambdas[None, :]
    return _corrected_from_delta(d, delta, float(rho), sign_source=u)


def _eigvecs_from_delta(uhat, delta):
    x = uhat[:, None] / delta
    x /= np.sqrt((x * x).sum(axis=0))
    return x


def secular_eigenvectors(d, uhat, lambdas):
    """Eigenvector matrix for a rank-one update from its (corrected) weights:
    column j is proportional to uhat_k / (d_k - lambda_j), normalized."""
    d = np.asarray(d, dtype=np.float64)
    uhat = np.asarray(uhat, dtype=np.float64)
    lambdas = np.asarray(lambdas, dtype=np.float64)
    if not d.shape == uhat.shape == lambdas.shape or d.ndim != 1:
        raise ValueError("need matching pole, weight and root vectors")
    delta = d[:, None] - lambdas[None, :]
    if np.any(delta == 0.0):
        raise PoleEvaluation("a root coincides exactly with a pole")
    return _eigvecs_from_delta(uhat, delta)


def _merge(lam1, q1, lam2, q2, rho, scheme, rtol, max_iter):
    n1 = lam1.size
    n = n1 + lam2.size
    dall = np.concatenate([lam1, lam2])
    u = build_merge_weights(q1, q2)
    order = np.argsort(dall, kind="stable")
    problem = SecularProblem(dall[order], u[order], rho)
    reduced, defl = deflate(problem)

    w = np.zeros((n, n), order="F")
    w[:n1, :n1] = q1
    w[n1:, n1:] = q2
    w = np.asfortranarray(w[:, order])
    for p, q, c, s in defl.rotations:
        wp = w[:, p].copy()
        wq = w[:, q]
        w[:, p] = c * wp - s * wq
        w[:, q] = s * wp + c * wq

    gone = defl.deflated_indices
    lam_defl = np.array([v for v, _ in defl.deflated_pairs])
    if reduced is None:
        lam_all = lam_defl
        x_all = w[:, gone] if gone.size else w[:, :0]
    else:
        try:
            sol = solve_secular(reduced, scheme, rtol, max_iter)
        except SchemeFailure:
            sol = solve_secular(reduced, SolverScheme.MIDDLE_WAY, rtol, max_iter)
        delta = (reduced.d[:, None] - reduced.d[sol.pole_index][None, :]) - sol.offset[None, :]
        uhat = _corrected_from_delta(reduced.d, delta, rho, sign_source=reduced.u)
        r = _eigvecs_from_delta(uhat, delta)
        x_kept = w[:, defl.kept_indices] @ r
        lam_all = np.concatenate([sol.lam, lam_defl])
        x_all = np.hstack([x_kept, w[:, gone]]) if gone.size else x_kept
    final = np.argsort(lam_all, kind="stable")
    return lam_all[final], np.asfortranarray(x_all[:, final])


def _dc(d, e, cutoff, cfg, scheme, rtol, max_iter):
    n = d.size
    if n <= cutoff:
        res = symmetric_qr_eig(TridiagonalMatrix(d, e), cfg)
        return res.lam, res.x
    m = n // 2
    t = TridiagonalMatrix(d, e)
    try:
        t1, t2, rho, _ = split_rank_one(t, m)
    except ZeroCoupling:
        lam1, q1 = _dc(d[:m], e[: m - 1], cutoff, cfg, scheme, rtol, max_iter)
        lam2, q2 = _dc(d[m:], e[m:], cutoff, cfg, scheme, rtol, max_iter)
        lam = np.concatenate([lam1, lam2])
        x = np.zeros((n, n), order="F")
        x[:m, :m] = q1
        x[m:, m:] = q2
        order = np.argsort(lam, kind="stable")
        return lam[order], np.asfortranarray(x[:, order])
    lam1, q1 = _dc(t1.diag, t1.sub, cutoff, cfg, scheme, rtol, max_iter)
    lam2, q2 = _dc(t2.diag, t2.sub, cutoff, cfg, scheme, rtol, max_iter)
    return _merge(lam1, q1, lam2, q2, rho, scheme, rtol, max_iter)


def dc_eig(
    t: TridiagonalMatrix,
    cutoff: int = 25,
    cfg: QrConfig | None = None,
    scheme: SolverScheme = SolverScheme.HYBRID,
    rtol: float | None = None,
    max_iter: int = 100,
) -> EigResult:
    """Divide-and-conquer eigendecomposition, eigenvalues ascending.

    Blocks of size `cutoff` or less are closed out by the QR solver, so
    cutoff >= n reproduces symmetric_qr_eig exactly.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    lam, x = _dc(t.diag, t.sub, cutoff, cfg or QrConfig(), scheme, rtol, max_iter)
    return EigResult(x=x, lam=lam)


def dc_svd(
    a: SymmetricMatrix,
    cutoff: int = 25,
    cfg: QrConfig | None = None,
    scheme: SolverScheme = SolverScheme.HYBRID,
) -> SvdResult:
    q, t = tridiagonalize(a)
    inner = dc_eig(t, cutoff, cfg, scheme)
    return svd_from_eig(EigResult(x=q @ inner.x, lam=inner.lam))
