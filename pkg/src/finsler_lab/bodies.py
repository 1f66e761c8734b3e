"""Bounded convex bodies with the origin in their interior.

Every body is described through its gauge (Minkowski functional)

    gauge(xi) = inf{t > 0 : xi / t in body},

plus a ray-exit oracle, a support-function upper bound (used for bounding
boxes) and, where available, an exact polytope or ellipsoid form.  Bodies
are immutable once constructed and validated.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy import optimize
from scipy.linalg import solve_triangular
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError
from scipy.special import gammaln

from .errors import (
    DegenerateDirection,
    InvalidBody,
    MethodUnsupported,
    NotInterior,
    RejectionStall,
    SampleBudgetTooSmall,
)

MAX_DIM = 8
INTERIOR_EPS = 1e-12
BLOCK_SIZE = 1 << 14


def unit_ball_volume(n: int) -> float:
    """omega_n = pi^(n/2) / Gamma(n/2 + 1)."""
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1.0))


def _frozen(a, ndim: int, name: str) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise InvalidBody(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidBody(f"{name} contains non-finite entries")
    arr.flags.writeable = False
    return arr


def _check_dim(n: int) -> None:
    if not 2 <= n <= MAX_DIM:
        raise InvalidBody(f"dimension {n} outside supported range 2..{MAX_DIM}")


@dataclass(frozen=True)
class DirectionSet:
    """Deterministic set of unit vectors on S^(n-1).

    In the plane the points are equally spaced angles with a seeded phase;
    in higher dimension they are seeded normalized Gaussians.
    """

    count: int
    seed: int
    dim: int

    @cached_property
    def points(self) -> np.ndarray:
        rng = np.random.default_rng([abs(int(self.seed)), self.dim, self.count])
        if self.dim == 2:
            phase = rng.uniform(0.0, 1.0)
            theta = 2.0 * np.pi * (np.arange(self.count) + phase) / self.count
            pts = np.column_stack([np.cos(theta), np.sin(theta)])
        else:
            pts = rng.standard_normal((self.count, self.dim))
            pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        pts.flags.writeable = False
        return pts

    def __len__(self) -> int:
        return self.count


def default_directions(n: int, seed: int = 0) -> DirectionSet:
    return DirectionSet(1 << 10 if n == 2 else 1 << 12, seed, n)


class Body:
    """Common interface of all convex bodies."""

    dim: int

    # -- primitives subclasses override ---------------------------------
    def gauge(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        norm = np.linalg.norm(xi, axis=-1)
        safe = np.where(norm[..., None] > 0, xi, 1.0)
        t = self._ray_exit(np.zeros(self.dim), safe)
        return np.where(norm > 0, 1.0 / t, 0.0)

    def contains(self, x) -> np.ndarray:
        """Open-body membership, vectorized over leading axes."""
        return self.gauge(x) < 1.0

    def _ray_exit(self, base: np.ndarray, d: np.ndarray) -> np.ndarray:
        return _bisect_ray_exit(self, base, d)

    def support_bound(self, d) -> np.ndarray:
        """Upper bound for sup{d.x : x in body}; exact for most classes."""
        raise NotImplementedError

    def exact_volume(self) -> Optional[float]:
        poly = self.as_polytope()
        if poly is not None:
            return poly.exact_volume()
        ell = self.as_ellipsoid()
        if ell is not None:
            return ell.exact_volume()
        return None

    def as_polytope(self) -> Optional["PolytopeH"]:
        return None

    def as_ellipsoid(self) -> Optional["EllipsoidBody"]:
        return None

    @property
    def structurally_symmetric(self) -> Optional[bool]:
        """True/False when known by construction, None when unknown."""
        return None

    @property
    def origin_interior(self) -> bool:
        return True

    # -- derived ---------------------------------------------------------
    def ray_exit(self, base, d) -> np.ndarray:
        """Largest t with base + t*d in the closed body (broadcasts)."""
        base = np.asarray(base, dtype=float)
        d = np.asarray(d, dtype=float)
        if np.any(np.linalg.norm(d, axis=-1) == 0.0):
            raise DegenerateDirection("ray direction must be nonzero")
        if np.any(~self.contains(base)):
            raise NotInterior("ray base point is not interior to the body")
        return self._ray_exit(base, d)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        eye = np.eye(self.dim)
        hi = np.asarray(self.support_bound(eye), dtype=float)
        lo = -np.asarray(self.support_bound(-eye), dtype=float)
        return lo, hi


def _bisect_ray_exit(body: Body, base: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Ray exit from the gauge oracle alone.

    Brackets the root of phi(t) = gauge(base + t d) - 1, then runs the
    Illinois variant of regula falsi (bisection as a fallback) on the entries
    that have not yet converged to 1e-15 relative width.
    """
    base, d = np.broadcast_arrays(np.asarray(base, float), np.asarray(d, float))
    shape = base.shape[:-1]
    B = base.reshape(-1, base.shape[-1])
    D = d.reshape(-1, d.shape[-1])
    g_d = body.gauge(D)
    g_mb = body.gauge(-B)
    if np.any(g_d <= 0.0) or not np.all(np.isfinite(g_d)):
        raise InvalidBody("body is unbounded along a tested direction")

    def phi(t, idx):
        return body.gauge(B[idx] + t[:, None] * D[idx]) - 1.0

    every = np.arange(len(B))
    lo = np.zeros(len(B))
    flo = body.gauge(B) - 1.0
    # gauge(base + s d) >= s gauge(d) - gauge(-base) for subadditive gauges
    hi = 2.0 * (1.0 + g_mb) / g_d
    fhi = phi(hi, every)
    for _ in range(60):
        bad = fhi <= 0.0
        if not np.any(bad):
            break
        hi[bad] *= 2.0
        fhi[bad] = phi(hi[bad], every[bad])
    side = np.zeros(len(B))
    active = every[hi - lo > 1e-15 * hi]
    for it in range(300):
        if active.size == 0:
            break
        a, b, fa, fb = lo[active], hi[active], flo[active], fhi[active]
        t = b - fb * (b - a) / (fb - fa)
        # every fourth step bisects, which bounds the worst case
        off = ~((t > a) & (t < b)) | (it % 4 == 3)
        t = np.where(off, 0.5 * (a + b), t)
        ft = phi(t, active)
        up = ft > 0.0
        hit = ft == 0.0
        s = side[active]
        hi[active] = np.where(up, t, b)
        fhi[active] = np.where(up, ft, np.where(s == -1.0, 0.5 * fb, fb))
        lo[active] = np.where(up, a, t)
        flo[active] = np.where(up, np.where(s == 1.0, 0.5 * fa, fa), ft)
        side[active] = np.where(up, 1.0, -1.0)
        lo[active[hit]] = hi[active[hit]] = t[hit]
        active = active[hi[active] - lo[active] > 1e-15 * hi[active]]
    return (0.5 * (lo + hi)).reshape(shape)


# ---------------------------------------------------------------------------
# concrete bodies


@dataclass(frozen=True, eq=False)
class PolytopeH(Body):
    """{x : A x <= b}.

    Gauge-type operations need b > 0 (origin interior); moments, sampling
    and the John solver only need a bounded full-dimensional polytope.
    """

    A: np.ndarray
    b: np.ndarray
    check_bounded: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        A = _frozen(self.A, 2, "A")
        b = _frozen(self.b, 1, "b")
        if A.shape[0] != b.shape[0]:
            raise InvalidBody("A and b have inconsistent row counts")
        _check_dim(A.shape[1])
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        if not self.check_bounded:
            return
        n = A.shape[1]
        for j in range(n):
            for sgn in (1.0, -1.0):
                c = np.zeros(n)
                c[j] = -sgn
                res = optimize.linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
                if res.status == 2:
                    raise InvalidBody("polytope is empty")
                if res.status == 3:
                    raise InvalidBody("polytope is unbounded")
        self.interior_point  # raises on empty interior

    @cached_property
    def origin_interior(self) -> bool:
        return bool(np.all(self.b > INTERIOR_EPS * max(1.0, float(np.max(np.abs(self.b))))))

    @cached_property
    def interior_point(self) -> np.ndarray:
        """The origin when interior, otherwise the Chebyshev center."""
        if self.origin_interior:
            return np.zeros(self.dim)
        n = self.dim
        norms = np.linalg.norm(self.A, axis=1)
        c = np.zeros(n + 1)
        c[-1] = -1.0
        res = optimize.linprog(c, A_ub=np.hstack([self.A, norms[:, None]]), b_ub=self.b,
                               bounds=[(None, None)] * n + [(0, None)], method="highs")
        if res.status != 0 or res.x[-1] <= 1e-12 * max(1.0, float(np.max(np.abs(res.x[:n])))):
            raise InvalidBody("polytope has empty interior")
        return res.x[:n]

    def _require_origin(self):
        if not self.origin_interior:
            raise InvalidBody("origin is not interior: some b_i <= 0")

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    def gauge(self, xi):
        self._require_origin()
        xi = np.asarray(xi, dtype=float)
        vals = (xi @ self.A.T) / self.b
        return np.maximum(0.0, vals.max(axis=-1))

    def contains(self, x):
        return np.all(np.asarray(x, float) @ self.A.T < self.b, axis=-1)

    def _ray_exit(self, base, d):
        slack = self.b - np.asarray(base, float) @ self.A.T
        rate = np.asarray(d, float) @ self.A.T
        slack, rate = np.broadcast_arrays(slack, rate)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(rate > 0, slack / np.where(rate > 0, rate, 1.0), np.inf)
        return t.min(axis=-1)

    @cached_property
    def vertices(self) -> np.ndarray:
        hs = np.hstack([self.A, -self.b[:, None]])
        try:
            pts = HalfspaceIntersection(hs, self.interior_point).intersections
        except QhullError as exc:  # pragma: no cover - guarded by validation
            raise InvalidBody(f"vertex enumeration failed: {exc}") from exc
        scale = max(1.0, float(np.max(np.abs(pts))))
        _, idx = np.unique(np.round(pts / scale, 10), axis=0, return_index=True)
        return pts[np.sort(idx)]

    def support_bound(self, d):
        return np.max(np.asarray(d, float) @ self.vertices.T, axis=-1)

    def as_polytope(self):
        return self

    def exact_volume(self):
        return polytope_moments(self.vertices)[0]

    def pruned(self) -> "PolytopeH":
        """Drop rows that are not facet-defining (inactive at every vertex)."""
        act = (self.vertices @ self.A.T) >= self.b * (1.0 - 1e-9)
        keep = act.sum(axis=0) >= self.dim
        if np.all(keep):
            return self
        return PolytopeH(self.A[keep], self.b[keep], check_bounded=False)


@dataclass(frozen=True, eq=False)
class PolytopeV(Body):
    """Convex hull of a vertex list; the origin must be interior."""

    vertices: np.ndarray
    h: PolytopeH = field(init=False, repr=False)

    def __post_init__(self):
        V = _frozen(self.vertices, 2, "vertices")
        _check_dim(V.shape[1])
        try:
            hull = ConvexHull(V)
        except QhullError as exc:
            raise InvalidBody(f"degenerate vertex set: {exc}") from exc
        A = hull.equations[:, :-1]
        b = -hull.equations[:, -1]
        b = np.where(np.abs(b) <= INTERIOR_EPS * max(1.0, float(np.max(np.abs(V)))), 0.0, b)
        # merge duplicate facet planes produced by qhull triangulation
        _, idx = np.unique(np.round(np.hstack([A, b[:, None]]), 12), axis=0, return_index=True)
        idx = np.sort(idx)
        hv = V[hull.vertices]
        hv.flags.writeable = False
        object.__setattr__(self, "vertices", hv)
        object.__setattr__(self, "h", PolytopeH(A[idx], b[idx], check_bounded=False))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def gauge(self, xi):
        return self.h.gauge(xi)

    def contains(self, x):
        return self.h.contains(x)

    def _ray_exit(self, base, d):
        return self.h._ray_exit(base, d)

    def support_bound(self, d):
        return np.max(np.asarray(d, float) @ self.vertices.T, axis=-1)

    @property
    def origin_interior(self) -> bool:
        return self.h.origin_interior

    def as_polytope(self):
        return self.h

    def exact_volume(self):
        return polytope_moments(self.vertices)[0]


def _sphere_exit(base: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Positive root of |base + t d|^2 = 1 for |base| < 1, in stable form."""
    a = np.einsum("...i,...i->...", d, d)
    bh = np.einsum("...i,...i->...", base, d)
    c = np.einsum("...i,...i->...", base, base) - 1.0
    disc = np.sqrt(np.maximum(bh * bh - a * c, 0.0))
    # c < 0: the roots have opposite signs
    return np.where(bh > 0, -c / (bh + disc), (disc - bh) / a)


@dataclass(frozen=True, eq=False)
class PBall(Body):
    """{x : sum |x_i|^p < 1}.  p < 1 is accepted but flagged non-convex."""

    p: float
    n: int

    def __post_init__(self):
        if not (self.p > 0 and math.isfinite(self.p)):
            raise InvalidBody("PBall exponent must be a positive finite real")
        _check_dim(int(self.n))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "n", int(self.n))

    @property
    def dim(self) -> int:
        return self.n

    @property
    def convex(self) -> bool:
        return self.p >= 1.0

    @property
    def structurally_symmetric(self):
        return True

    def gauge(self, xi):
        xi = np.abs(np.asarray(xi, dtype=float))
        m = xi.max(axis=-1)
        safe = np.where(m > 0, m, 1.0)
        return m * np.sum((xi / safe[..., None]) ** self.p, axis=-1) ** (1.0 / self.p)

    def contains(self, x):
        return np.sum(np.abs(np.asarray(x, float)) ** self.p, axis=-1) < 1.0

    def _ray_exit(self, base, d):
        base = np.asarray(base, float)
        if not np.any(base):
            return 1.0 / self.gauge(d)
        if self.p == 2.0:
            return _sphere_exit(base, np.asarray(d, float))
        return _bisect_ray_exit(self, base, d)

    def support_bound(self, d):
        d = np.abs(np.asarray(d, float))
        if self.p <= 1.0:
            return d.max(axis=-1)
        q = self.p / (self.p - 1.0)
        return PBall(q, self.n).gauge(d) if q < 1e6 else d.max(axis=-1)

    def as_polytope(self):
        if self.p != 1.0:
            return None
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=self.n)))
        return PolytopeH(signs, np.ones(len(signs)), check_bounded=False)

    def as_ellipsoid(self):
        if self.p != 2.0:
            return None
        return EllipsoidBody(np.zeros(self.n), np.eye(self.n))

    def exact_volume(self):
        if self.p <= 0:
            return None
        logv = self.n * (math.log(2.0) + math.lgamma(1.0 + 1.0 / self.p)) - math.lgamma(1.0 + self.n / self.p)
        return math.exp(logv)

    def second_moment_diag(self) -> float:
        """E[x_1^2] under the uniform law on the ball (Dirichlet integrals)."""
        p, n = self.p, self.n
        return math.exp(gammaln(3.0 / p) + gammaln(1.0 + n / p) - gammaln(1.0 / p)
                        - gammaln(1.0 + (n + 2.0) / p))


@dataclass(frozen=True, eq=False)
class EllipsoidBody(Body):
    """{center + L z : |z| <= 1}, L lower triangular with positive diagonal."""

    center: np.ndarray
    factor: np.ndarray

    def __post_init__(self):
        c = _frozen(self.center, 1, "center")
        L = _frozen(self.factor, 2, "factor")
        if L.shape != (c.size, c.size):
            raise InvalidBody("factor must be n x n matching center")
        _check_dim(c.size)
        if np.any(np.triu(L, 1) != 0.0) or np.any(np.diag(L) <= 0.0):
            raise InvalidBody("factor must be lower triangular with positive diagonal")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "factor", L)

    @cached_property
    def origin_interior(self) -> bool:
        return bool(np.linalg.norm(self._whiten(-self.center)) < 1.0)

    @classmethod
    def from_shape(cls, center, shape) -> "EllipsoidBody":
        shape = np.asarray(shape, float)
        try:
            L = np.linalg.cholesky(0.5 * (shape + shape.T))
        except np.linalg.LinAlgError as exc:
            raise InvalidBody("shape matrix is not positive definite") from exc
        return cls(np.asarray(center, float), L)

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def shape(self) -> np.ndarray:
        return self.factor @ self.factor.T

    @property
    def structurally_symmetric(self):
        return not np.any(self.center)

    def _whiten(self, x):
        x = np.asarray(x, float)
        flat = x.reshape(-1, self.dim).T
        return solve_triangular(self.factor, flat, lower=True).T.reshape(x.shape)

    def gauge(self, xi):
        if not self.origin_interior:
            raise InvalidBody("origin is not interior to the ellipsoid")
        if not np.any(self.center):
            return np.linalg.norm(self._whiten(xi), axis=-1)
        return super().gauge(xi)

    def contains(self, x):
        return np.linalg.norm(self._whiten(np.asarray(x, float) - self.center), axis=-1) < 1.0

    def _ray_exit(self, base, d):
        z0 = self._whiten(np.asarray(base, float) - self.center)
        w = self._whiten(d)
        ww = np.sum(w * w, axis=-1)
        zw = np.sum(z0 * w, axis=-1)
        zz = np.sum(z0 * z0, axis=-1)
        disc = np.sqrt(np.maximum(zw * zw - ww * (zz - 1.0), 0.0))
        # stable root of ww s^2 + 2 zw s + (zz - 1) = 0
        return np.where(zw <= 0, (disc - zw) / ww, (1.0 - zz) / (zw + disc))

    def support_bound(self, d):
        d = np.asarray(d, float)
        return d @ self.center + np.linalg.norm(d @ self.factor, axis=-1)

    def as_ellipsoid(self):
        return self

    def exact_volume(self):
        return unit_ball_volume(self.dim) * float(np.prod(np.diag(self.factor)))


@dataclass(frozen=True, eq=False)
class Translate(Body):
    """inner + offset."""

    inner: Body
    offset: np.ndarray

    def __post_init__(self):
        o = _frozen(self.offset, 1, "offset")
        if o.size != self.inner.dim:
            raise InvalidBody("offset dimension mismatch")
        object.__setattr__(self, "offset", o)
        if not bool(self.inner.contains(-o)):
            raise InvalidBody("translation pushes the origin outside the body")

    @property
    def dim(self) -> int:
        return self.inner.dim

    def gauge(self, xi):
        xi = np.asarray(xi, dtype=float)
        norm = np.linalg.norm(xi, axis=-1)
        safe = np.where(norm[..., None] > 0, xi, 1.0)
        t = self.inner._ray_exit(-self.offset, safe)
        return np.where(norm > 0, 1.0 / t, 0.0)

    def contains(self, x):
        return self.inner.contains(np.asarray(x, float) - self.offset)

    def _ray_exit(self, base, d):
        return self.inner._ray_exit(np.asarray(base, float) - self.offset, d)

    def support_bound(self, d):
        d = np.asarray(d, float)
        return self.inner.support_bound(d) + d @ self.offset

    def as_polytope(self):
        P = self.inner.as_polytope()
        if P is None:
            return None
        return PolytopeH(P.A, P.b + P.A @ self.offset, check_bounded=False)

    def as_ellipsoid(self):
        E = self.inner.as_ellipsoid()
        if E is None:
            return None
        return EllipsoidBody(E.center + self.offset, E.factor)

    def exact_volume(self):
        return self.inner.exact_volume()


@dataclass(frozen=True, eq=False)
class LinearImage(Body):
    """map @ inner, for an invertible map."""

    inner: Body
    map: np.ndarray
    _inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        M = _frozen(self.map, 2, "map")
        if M.shape != (self.inner.dim, self.inner.dim):
            raise InvalidBody("map must be n x n")
        if np.linalg.cond(M) > 1e12:
            raise InvalidBody("map is singular or numerically singular")
        inv = np.linalg.inv(M)
        inv.flags.writeable = False
        object.__setattr__(self, "map", M)
        object.__setattr__(self, "_inv", inv)

    @property
    def dim(self) -> int:
        return self.inner.dim

    @property
    def structurally_symmetric(self):
        return True if self.inner.structurally_symmetric else None

    @property
    def origin_interior(self) -> bool:
        return self.inner.origin_interior

    def gauge(self, xi):
        return self.inner.gauge(np.asarray(xi, float) @ self._inv.T)

    def contains(self, x):
        return self.inner.contains(np.asarray(x, float) @ self._inv.T)

    def _ray_exit(self, base, d):
        return self.inner._ray_exit(np.asarray(base, float) @ self._inv.T,
                                    np.asarray(d, float) @ self._inv.T)

    def support_bound(self, d):
        return self.inner.support_bound(np.asarray(d, float) @ self.map)

    def as_polytope(self):
        P = self.inner.as_polytope()
        if P is None:
            return None
        return PolytopeH(P.A @ self._inv, P.b, check_bounded=False)

    def as_ellipsoid(self):
        E = self.inner.as_ellipsoid()
        if E is None:
            return None
        return EllipsoidBody.from_shape(self.map @ E.center, self.map @ E.shape @ self.map.T)

    def exact_volume(self):
        v = self.inner.exact_volume()
        return None if v is None else abs(float(np.linalg.det(self.map))) * v


@dataclass(frozen=True, eq=False)
class Symmetrized(Body):
    """Unit ball of xi -> (gauge(xi) + gauge(-xi)) / 2."""

    inner: Body

    def __post_init__(self):
        if not self.inner.origin_interior:
            raise InvalidBody("symmetrization needs the origin interior to the inner body")

    @property
    def dim(self) -> int:
        return self.inner.dim

    @property
    def structurally_symmetric(self):
        return True

    def gauge(self, xi):
        xi = np.asarray(xi, float)
        return 0.5 * (self.inner.gauge(xi) + self.inner.gauge(-xi))

    def support_bound(self, d):
        # F' >= F/2 and F' >= F(-.)/2, hence the body sits in 2K and -2K
        d = np.asarray(d, float)
        return 2.0 * np.minimum(self.inner.support_bound(d), self.inner.support_bound(-d))

    @cached_property
    def _poly(self) -> Optional[PolytopeH]:
        P = self.inner.as_polytope()
        if P is None:
            return None
        R = P.A / P.b[:, None]
        i, j = np.where(~np.eye(len(R), dtype=bool))
        rows = 0.5 * (R[i] - R[j])
        _, idx = np.unique(np.round(rows, 12), axis=0, return_index=True)
        rows = rows[np.sort(idx)]
        return PolytopeH(rows, np.ones(len(rows)), check_bounded=False).pruned()

    def as_polytope(self):
        return self._poly

    def as_ellipsoid(self):
        E = self.inner.as_ellipsoid()
        if E is not None and not np.any(E.center):
            return E
        return None


# ---------------------------------------------------------------------------
# exact moments of polytopes


def polytope_moments(vertices) -> tuple[float, np.ndarray, np.ndarray]:
    """Volume, first moment and second moment integrals of conv(vertices).

    Fan triangulation from the vertex mean; each simplex contributes
    vol/((n+1)(n+2)) * (sum v v^T + s s^T), s = sum of its vertices.
    """
    V = np.asarray(vertices, float)
    n = V.shape[1]
    hull = ConvexHull(V)
    apex = V[hull.vertices].mean(axis=0)
    simp = np.concatenate([np.broadcast_to(apex, (len(hull.simplices), 1, n)),
                           V[hull.simplices]], axis=1)  # (k, n+1, n)
    edges = simp[:, 1:, :] - simp[:, :1, :]
    vols = np.abs(np.linalg.det(edges)) / math.factorial(n)
    s = simp.sum(axis=1)
    first = (vols[:, None] * s / (n + 1)).sum(axis=0)
    outer = np.einsum("kij,kil->kjl", simp, simp) + np.einsum("kj,kl->kjl", s, s)
    second = np.einsum("k,kjl->jl", vols, outer) / ((n + 1) * (n + 2))
    return float(vols.sum()), first, 0.5 * (second + second.T)


# ---------------------------------------------------------------------------
# module-level operations


def gauge(body: Body, xi) -> np.ndarray:
    return body.gauge(xi)


def boundary_hit(body: Body, base, direction) -> np.ndarray:
    """t > 0 such that base + t*direction lies on the boundary of body."""
    return body.ray_exit(base, direction)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng([abs(int(seed)), int(block)])


def _box_candidates(body: Body, seed: int, block: int, size: int = BLOCK_SIZE):
    lo, hi = body.bounding_box()
    u = _block_rng(seed, block).uniform(size=(size, body.dim))
    return lo + u * (hi - lo)


def sample_uniform(body: Body, count: int, seed: int = 0) -> np.ndarray:
    """Uniform points in body by blockwise-seeded rejection from its bounding box."""
    if count < 1:
        raise ValueError("count must be >= 1")
    chunks, got, trials, block = [], 0, 0, 0
    while got < count:
        cand = _box_candidates(body, seed, block)
        keep = cand[body.contains(cand)]
        chunks.append(keep)
        got += len(keep)
        trials += len(cand)
        block += 1
        if trials >= 1_000_000 and got < 1e-4 * trials:
            raise RejectionStall(f"acceptance rate {got / trials:.2e} below 1e-4")
    return np.concatenate(chunks)[:count]


def volume(body: Body, method: str = "exact", samples: int = 200_000, seed: int = 0) -> tuple[float, float]:
    """(volume, standard error); stderr is 0 on the exact path."""
    if method == "exact":
        v = body.exact_volume()
        if v is None:
            raise MethodUnsupported(f"no exact volume for {type(body).__name__}")
        return float(v), 0.0
    if method != "montecarlo":
        raise MethodUnsupported(f"unknown method {method!r}")
    if samples < 1000:
        raise SampleBudgetTooSmall("Monte-Carlo volume needs at least 1000 samples")
    lo, hi = body.bounding_box()
    box = float(np.prod(hi - lo))
    hits = 0
    for block, start in enumerate(range(0, samples, BLOCK_SIZE)):
        size = min(BLOCK_SIZE, samples - start)
        hits += int(np.count_nonzero(body.contains(_box_candidates(body, seed, block, size))))
    frac = hits / samples
    return box * frac, box * math.sqrt(frac * (1.0 - frac) / samples)


def polish_on_sphere(f, start, maxiter: int = 400) -> tuple[float, np.ndarray]:
    """Locally maximize a degree-0 homogeneous function from a start direction."""
    res = optimize.minimize(lambda v: -float(f(v / np.linalg.norm(v))), np.asarray(start, float),
                            method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": maxiter})
    v = res.x / np.linalg.norm(res.x)
    return float(f(v)), v


def quasireversibility_constant(body: Body, dirs: DirectionSet, refine: bool = True) -> float:
    """max over directions of F(-xi)/F(xi) (and its reciprocal); 1 for symmetric bodies.

    Exact for polytopes: on each facet F(-xi) is convex, so the maximum is at a vertex.
    """
    poly = body.as_polytope() if body.origin_interior else None
    if poly is not None:
        V = poly.vertices
        return max(1.0, float(np.max(body.gauge(-V) / body.gauge(V))))
    X = dirs.points
    gp, gm = body.gauge(X), body.gauge(-X)
    ratio = np.maximum(gm / gp, gp / gm)
    k = int(np.argmax(ratio))
    c = float(ratio[k])
    if refine and c > 1.0 + 1e-12:
        sign = 1.0 if gm[k] >= gp[k] else -1.0

        def f(v):
            return float(body.gauge(-sign * v) / body.gauge(sign * v))

        c = max(c, polish_on_sphere(f, X[k])[0])
    return max(c, 1.0)


def is_symmetric(body: Body, dirs: Optional[DirectionSet] = None, tol: float = 1e-9) -> bool:
    known = body.structurally_symmetric
    if known is not None:
        return known
    dirs = dirs or default_directions(body.dim)
    return quasireversibility_constant(body, dirs, refine=False) <= 1.0 + tol
