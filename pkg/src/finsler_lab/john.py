"""Maximum-volume inscribed (John) ellipsoids and inclusion certificates.

Polytopes are solved exactly: maximize log det L over lower-triangular L
with positive diagonal and a center Q, subject to

    |L^T a_i| + a_i^T Q <= b_i   for every facet,

with a log-barrier Newton method.  The problem is concave in the Cholesky
factor directly, so no symmetric-square-root parameterization is needed.

Bodies known only through their gauge are handled by a cutting-plane loop
around the polytope solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .bodies import (
    Body,
    DirectionSet,
    EllipsoidBody,
    PolytopeH,
    Translate,
)
from .errors import NoCommonInteriorPoint, NonConvexDetected, NotConverged
from .metric_tensor import MetricTensor

POLY_TOL = 1e-8
CUT_TOL = 1e-6
MAX_NEWTON = 200
MAX_CUTS = 500


@dataclass(frozen=True, eq=False)
class Ellipsoid(EllipsoidBody):
    """Solver output: an ellipsoid body plus convergence diagnostics."""

    iterations: int = 0
    duality_gap: float = 0.0
    cuts: int = 0
    max_violation: float = 0.0

    @property
    def volume(self) -> float:
        return self.exact_volume()

    @property
    def radius(self) -> float:
        """Geometric-mean semi-axis, det(L)^(1/n)."""
        return float(np.exp(np.mean(np.log(np.diag(self.factor)))))

    def scaled(self, s: float) -> "Ellipsoid":
        """s * E, scaled about the origin."""
        return Ellipsoid(s * self.center, s * self.factor, self.iterations, self.duality_gap,
                         self.cuts, self.max_violation)

    def centered(self) -> "Ellipsoid":
        return Ellipsoid(np.zeros(self.dim), self.factor, self.iterations, self.duality_gap,
                         self.cuts, self.max_violation)

    def to_json(self) -> dict:
        return {
            "center": self.center.tolist(),
            "factor": self.factor.tolist(),
            "volume": self.volume,
            "iterations": self.iterations,
            "duality_gap": self.duality_gap,
        }


# ---------------------------------------------------------------------------
# polytope solver


class _BarrierProblem:
    """Log-barrier objective for the polytope problem in z = (tril(L), Q)."""

    def __init__(self, A, b):
        self.A = np.asarray(A, float)
        self.b = np.asarray(b, float)
        m, n = self.A.shape
        self.n = n
        self.rows, self.cols = np.tril_indices(n)
        self.nb = len(self.rows)
        self.diag = np.flatnonzero(self.rows == self.cols)
        # G[i, k, e] maps d(tril L) to d(L^T a_i)_k
        G = np.zeros((m, n, self.nb))
        G[:, self.cols, np.arange(self.nb)] = self.A[:, self.rows]
        self.G = G

    def unpack(self, z):
        L = np.zeros((self.n, self.n))
        L[self.rows, self.cols] = z[: self.nb]
        return L, z[self.nb:]

    def pack(self, L, Q):
        return np.concatenate([L[self.rows, self.cols], Q])

    def slack(self, z):
        L, Q = self.unpack(z)
        w = self.A @ L
        return self.b - self.A @ Q - np.linalg.norm(w, axis=1)

    def feasible(self, z) -> bool:
        return bool(np.all(z[self.diag] > 0) and np.all(self.slack(z) > 0))

    def value(self, z, t):
        return -t * np.sum(np.log(z[self.diag])) - np.sum(np.log(self.slack(z)))

    def derivatives(self, z, t):
        L, Q = self.unpack(z)
        W = self.A @ L  # row i is (L^T a_i)^T
        r = np.linalg.norm(W, axis=1)
        s = self.b - self.A @ Q - r
        u = np.einsum("ike,ik->ie", self.G, W)  # G_i^T w_i
        grad_h = np.hstack([u / r[:, None], self.A])
        nz = len(z)
        grad = np.zeros(nz)
        grad[self.diag] = -t / z[self.diag]
        grad += grad_h.T @ (1.0 / s)
        H = (grad_h.T * (1.0 / s ** 2)) @ grad_h
        GtG = np.einsum("ike,ikf->ief", self.G, self.G)
        Hr = (GtG - np.einsum("ie,if->ief", u, u) / (r ** 2)[:, None, None]) / r[:, None, None]
        H[: self.nb, : self.nb] += np.einsum("i,ief->ef", 1.0 / s, Hr)
        H[self.diag, self.diag] += t / z[self.diag] ** 2
        return grad, H


def _newton_direction(grad, H):
    try:
        c = np.linalg.cholesky(H)
        y = np.linalg.solve(c, -grad)
        return np.linalg.solve(c.T, y)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(H, -grad, rcond=None)[0]


def _initial_point(prob: _BarrierProblem, P: PolytopeH, warm: Optional[EllipsoidBody]):
    if warm is not None:
        Q = warm.center
        base = prob.b - prob.A @ Q
        if np.all(base > 0):
            r = np.linalg.norm(prob.A @ warm.factor, axis=1)
            s = 0.9 * min(1.0, float(np.min(base / r)))
            z = prob.pack(s * warm.factor, Q)
            if prob.feasible(z):
                return z
    Q = P.interior_point
    base = prob.b - prob.A @ Q
    eps = 0.5 * float(np.min(base / np.linalg.norm(prob.A, axis=1)))
    return prob.pack(eps * np.eye(prob.n), Q)


def _solve_polytope(P: PolytopeH, tol: float = POLY_TOL, warm: Optional[EllipsoidBody] = None,
                    max_newton: int = MAX_NEWTON, mu: float = 20.0) -> Ellipsoid:
    prob = _BarrierProblem(P.A, P.b)
    m = P.A.shape[0]
    z = _initial_point(prob, P, warm)
    t = 1.0
    total = 0
    while True:
        prev = np.inf
        # an off-center point costs about lam2 / (2 t) in log det, so late
        # stages may stop early instead of fighting roundoff in t * f
        target = max(1e-11, min(0.25, 1e-3 * tol * t))
        for it in range(max_newton):
            grad, H = prob.derivatives(z, t)
            dz = _newton_direction(grad, H)
            lam2 = float(-grad @ dz)
            # stop at the target, or once the decrement is down to roundoff
            if lam2 / 2.0 <= target or (lam2 < 1e-3 and lam2 >= prev):
                break
            prev = lam2
            step = 1.0
            while not prob.feasible(z + step * dz):
                step *= 0.5
                if step < 1e-20:
                    break
            if lam2 >= 1e-6:
                # Armijo only outside the quadratic region; inside it the
                # objective differences drown in roundoff at large t
                f0 = prob.value(z, t)
                while step > 1e-20 and prob.value(z + step * dz, t) > f0 - 0.25 * step * lam2:
                    step *= 0.5
            if step <= 1e-20:
                break
            z = z + step * dz
            total += 1
        else:
            raise NotConverged(f"centering did not converge within {max_newton} Newton steps")
        gap = m / t
        if gap <= tol:
            break
        t *= mu
    L, Q = prob.unpack(z)
    return Ellipsoid(Q, L, iterations=total, duality_gap=gap)


# ---------------------------------------------------------------------------
# cutting-plane solver for gauge-only bodies


def _gauge_gradient(body: Body, y: np.ndarray) -> np.ndarray:
    """Central finite-difference gradients of the gauge at rows of y."""
    n = body.dim
    h = 1e-6 * np.linalg.norm(y, axis=1)
    E = np.eye(n)
    plus = y[:, None, :] + h[:, None, None] * E
    minus = y[:, None, :] - h[:, None, None] * E
    return (body.gauge(plus) - body.gauge(minus)) / (2.0 * h[:, None])


def _sphere_ascent(f, starts: np.ndarray, seed: int = 0, iters: int = 200) -> tuple[np.ndarray, np.ndarray]:
    """Batched pattern-search ascent of f over the unit sphere from several starts."""
    rng = np.random.default_rng(seed)
    u = starts / np.linalg.norm(starts, axis=1, keepdims=True)
    S, n = u.shape
    vals = f(u)
    step = np.full(S, 0.05)
    K = 4 * n
    for _ in range(iters):
        P = rng.standard_normal((S, K, n))
        cand = u[:, None, :] + step[:, None, None] * P
        cand /= np.linalg.norm(cand, axis=2, keepdims=True)
        cv = f(cand)
        k = np.argmax(cv, axis=1)
        best = cv[np.arange(S), k]
        better = best > vals
        u = np.where(better[:, None], cand[np.arange(S), k], u)
        vals = np.where(better, best, vals)
        step = np.where(better, step * 1.5, step * 0.5)
        if np.all(step < 1e-8):
            break
    return vals, u


def _spread_starts(vals: np.ndarray, pts: np.ndarray, count: int) -> np.ndarray:
    """Indices of the best-valued points, greedily kept mutually apart."""
    order = np.argsort(-vals, kind="stable")
    chosen = []
    min_sep = 0.5 / math.sqrt(count)
    for i in order:
        if all(np.linalg.norm(pts[i] - pts[j]) > min_sep for j in chosen):
            chosen.append(i)
            if len(chosen) == count:
                break
    return np.array(chosen)


def _max_gauge_on_boundary(body: Body, E: EllipsoidBody, seed: int = 0):
    """Points of the ellipsoid boundary with locally maximal gauge."""
    n = body.dim
    dense = DirectionSet(512 if n == 2 else 256 * n * n, seed, n).points

    def f(u):
        return body.gauge(E.center + u @ E.factor.T)

    vals = f(dense)
    starts = dense[_spread_starts(vals, dense, 8 * n)]
    best, u = _sphere_ascent(f, starts, seed)
    return best, E.center + u @ E.factor.T


def _initial_cuts(body: Body, seed: int = 0) -> np.ndarray:
    n = body.dim
    dirs = np.vstack([np.eye(n), -np.eye(n), DirectionSet(8 * n, seed, n).points])
    y = dirs / body.gauge(dirs)[:, None]
    return _gauge_gradient(body, y)


def _cutting_plane(body: Body, tol: float, seed: int = 0, max_cuts: int = MAX_CUTS) -> Ellipsoid:
    n = body.dim
    probe = DirectionSet(64 * n * n, seed + 1, n).points
    boundary = probe / body.gauge(probe)[:, None]
    rows = _initial_cuts(body, seed)
    _check_cuts(rows, boundary, None, tol)
    P = PolytopeH(rows, np.ones(len(rows)))
    E = None
    total = 0
    cuts = 0
    while True:
        E = _solve_polytope(P, tol=min(POLY_TOL, 1e-2 * tol), warm=E)
        total += E.iterations
        vals, pts = _max_gauge_on_boundary(body, E, seed)
        worst = float(vals.max())
        if worst <= 1.0 + tol:
            return Ellipsoid(E.center, E.factor, iterations=total, duality_gap=E.duality_gap,
                             cuts=cuts, max_violation=worst - 1.0)
        viol = vals > 1.0 + tol
        y = pts[viol] / vals[viol, None]
        new = _gauge_gradient(body, y)
        _check_cuts(new, boundary, E.center, tol)
        cuts += len(new)
        if cuts > max_cuts:
            raise NotConverged(f"no convergence within {max_cuts} cuts (violation {worst - 1:.2e})")
        P = PolytopeH(np.vstack([P.A, new]), np.ones(len(P.A) + len(new)), check_bounded=False)


def _check_cuts(rows, boundary, center, tol):
    """Supporting halfspaces of a convex body never exclude body points."""
    if center is not None and np.any(rows @ center > 1.0 + tol):
        raise NonConvexDetected("a supporting cut excludes the current John point")
    excess = float(np.max(boundary @ rows.T)) - 1.0
    if excess > max(1e-4, 10 * tol):
        raise NonConvexDetected(f"a supporting cut excludes boundary points by {excess:.2e}")


# ---------------------------------------------------------------------------
# public operations


def max_inscribed_ellipsoid(body: Body, tol: Optional[float] = None, seed: int = 0) -> Ellipsoid:
    """John ellipsoid of a bounded convex body.

    ``tol`` is the relative duality gap for polytopes (default 1e-8) and the
    admissible gauge excess on the ellipsoid boundary for the cutting-plane
    path (default 1e-6).
    """
    ell = body.as_ellipsoid()
    if ell is not None:
        return Ellipsoid(ell.center, ell.factor)
    poly = body.as_polytope()
    if poly is not None:
        return _solve_polytope(poly, tol=max(tol or POLY_TOL, 1e-14))
    return _cutting_plane(body, max(tol or CUT_TOL, 1e-10), seed)


def centered_john(body: Body, tol: Optional[float] = None) -> tuple[Ellipsoid, np.ndarray]:
    """(J0, Q): the John ellipsoid moved to the origin, and the John point."""
    E = max_inscribed_ellipsoid(body, tol)
    return E.centered(), E.center.copy()


def john_metric(body: Body, tol: Optional[float] = None) -> MetricTensor:
    """Quadratic form whose unit ball is the centered John ellipsoid."""
    J0, _ = centered_john(body, tol)
    Linv = np.linalg.inv(J0.factor)
    return MetricTensor(Linv.T @ Linv)


def pball_john_radius(p: float, n: int) -> float:
    """John radius of the unit l_p ball: min(1, n^(1/2 - 1/p))."""
    if p < 1 or n < 2:
        raise ValueError("need p >= 1 and n >= 2")
    return min(1.0, n ** (0.5 - 1.0 / p))


@dataclass(frozen=True)
class InclusionCertificate:
    factor: float
    max_violation: float
    mode: str  # "exact-facet" | "vertex" | "radial-sample"
    tolerance: float = 1e-6

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    def to_json(self) -> dict:
        return {"factor": self.factor, "mode": self.mode, "max_violation": self.max_violation,
                "pass": self.passed}


def check_inclusion(inner: Body, outer: Body, factor: float, dirs: DirectionSet,
                    tolerance: float = 1e-6) -> InclusionCertificate:
    """Certify inner within factor * outer (scaling about the origin).

    The violation is max over inner of gauge_outer(x) / factor - 1, so it is
    non-positive exactly when the inclusion holds.
    """
    if not outer.origin_interior:
        raise NoCommonInteriorPoint("outer body must contain the origin in its interior")
    s = float(factor)
    ell = inner.as_ellipsoid()
    outer_poly = outer.as_polytope()
    if ell is not None and outer_poly is not None:
        A, b = outer_poly.A, outer_poly.b
        reach = A @ ell.center + np.linalg.norm(A @ ell.factor, axis=1)
        return InclusionCertificate(s, float(np.max(reach / (s * b))) - 1.0, "exact-facet", tolerance)
    inner_poly = inner.as_polytope()
    if inner_poly is not None:
        V = inner_poly.vertices
        return InclusionCertificate(s, float(np.max(outer.gauge(V))) / s - 1.0, "vertex", tolerance)
    if not inner.origin_interior:
        raise NoCommonInteriorPoint("radial comparison needs the origin interior to both bodies")

    def excess(u):
        return outer.gauge(u) / (s * inner.gauge(u))

    X = dirs.points
    vals = excess(X)
    starts = X[_spread_starts(vals, X, min(4 * inner.dim, len(X)))]
    best, _ = _sphere_ascent(excess, starts)
    worst = max(float(vals.max()), float(best.max()))
    return InclusionCertificate(s, worst - 1.0, "radial-sample", tolerance)


def shifted(body: Body, Q) -> Body:
    """body - Q, as a body; polytopes and ellipsoids keep their exact form."""
    return Translate(body, -np.asarray(Q, float))
