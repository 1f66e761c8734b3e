"""Funk, reverse-Funk, Hilbert and Zermelo geometry on a convex domain.

A Zermelo field attaches to each point x of a domain U the unit ball
Omega - u(x), where Omega is a fixed target body and u a drift.  With
u(x) = x and Omega = U this is the Funk metric: the unit ball at x is the
domain itself seen from x.  Distances of the Funk family reduce to ratios of
boundary hits along the chord through the two points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bodies import Body, EllipsoidBody, LinearImage, PBall
from .errors import (
    DomainNotUnitBall,
    DriftOutsideTarget,
    InvalidBody,
    NotConverged,
    PathExitsDomain,
    PointOnBoundary,
)

BOUNDARY_EPS = 1e-9
GL_ORDER = 16
LENGTH_RTOL = 1e-6
MAX_DEPTH = 40


# ---------------------------------------------------------------------------
# interior checks


def _reference_point(body: Body) -> np.ndarray:
    if body.origin_interior:
        return np.zeros(body.dim)
    for obj in (body, getattr(body, "h", None), body.as_polytope()):
        c = getattr(obj, "interior_point", None)
        if c is not None:
            return np.asarray(c, float)
    raise InvalidBody("no interior reference point available for this body")


def relative_gauge(body: Body, x) -> np.ndarray:
    """Gauge of x about an interior reference point; < 1 exactly on the interior."""
    x = np.asarray(x, float)
    c = _reference_point(body)
    d = x - c
    nz = np.linalg.norm(d, axis=-1) > 0
    safe = np.where(nz[..., None], d, 1.0)
    return np.where(nz, 1.0 / body._ray_exit(np.broadcast_to(c, safe.shape), safe), 0.0)


def _require_interior(body: Body, x, exc=PointOnBoundary) -> None:
    rho = relative_gauge(body, x)
    if np.any(rho >= 1.0 - BOUNDARY_EPS) or not np.all(np.isfinite(rho)):
        raise exc("point lies on or outside the domain boundary (margin 1e-9)")


def _funk_gauge(body: Body, x, xi) -> np.ndarray:
    """1 / (distance to the boundary from x along xi), i.e. the Funk norm."""
    x, xi = np.broadcast_arrays(np.asarray(x, float), np.asarray(xi, float))
    nz = np.linalg.norm(xi, axis=-1) > 0
    safe = np.where(nz[..., None], xi, 1.0)
    return np.where(nz, 1.0 / body._ray_exit(x, safe), 0.0)


# ---------------------------------------------------------------------------
# drifts


class Drift:
    """Named drift family u(x), vectorized over leading axes."""

    name = "drift"

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"type": self.name}


class Identity(Drift):
    name = "identity"

    def __call__(self, x):
        return np.asarray(x, float)


class Negation(Drift):
    name = "negation"

    def __call__(self, x):
        return -np.asarray(x, float)


@dataclass(frozen=True, eq=False)
class Constant(Drift):
    value: np.ndarray
    name = "constant"

    def __call__(self, x):
        x = np.asarray(x, float)
        return np.broadcast_to(np.asarray(self.value, float), x.shape).copy()

    def to_json(self):
        return {"type": self.name, "value": np.asarray(self.value, float).tolist()}


def smoothstep5(s) -> np.ndarray:
    """C^2 quintic ramp from 0 to 1 on [0, 1]."""
    s = np.clip(s, 0.0, 1.0)
    # evaluate the short side so both ends are exact in floating point
    a = np.minimum(s, 1.0 - s)
    low = a * a * a * (a * (6.0 * a - 15.0) + 10.0)
    return np.clip(np.where(s <= 0.5, low, 1.0 - low), 0.0, 1.0)


def counterexample_profile(r, k_max: int = 3) -> np.ndarray:
    """phi(r) in [-1, 1]: +1 on Funk shells, -1 on reverse-Funk shells.

    In t = -log(1 - r) the profile has period 4 for k = 0..k_max: +1 on
    [4k, 4k+1], a smoothstep down on [4k+1, 4k+2], -1 on [4k+2, 4k+3] and a
    smoothstep back up on [4k+3, 4k+4].  Beyond t = 4(k_max+1) it stays +1.
    """
    r = np.asarray(r, float)
    t = -np.log1p(-np.clip(r, 0.0, 1.0 - 1e-300))
    k = np.floor(t / 4.0)
    s = t - 4.0 * k
    down = 1.0 - 2.0 * smoothstep5(s - 1.0)
    up = -1.0 + 2.0 * smoothstep5(s - 3.0)
    phi = np.where(s < 2.0, down, up)
    return np.where(k > k_max, 1.0, phi)


def counterexample_drift(x, k_max: int = 3) -> np.ndarray:
    """u(x) = phi(|x|) x; |u(x)| <= |x| so the unit ball is mapped into itself."""
    x = np.asarray(x, float)
    r = np.linalg.norm(x, axis=-1)
    return counterexample_profile(r, k_max)[..., None] * x


@dataclass(frozen=True, eq=False)
class CounterexampleRadial(Drift):
    k_max: int = 3
    name = "counterexample"

    def __call__(self, x):
        return counterexample_drift(x, self.k_max)

    def to_json(self):
        return {"type": self.name, "k_max": self.k_max}


@dataclass(frozen=True, eq=False)
class RadialProfile(Drift):
    """u(x) = phi(|x|) x with phi linearly interpolated from a table."""

    radii: np.ndarray
    values: np.ndarray
    name = "radial_profile"

    def __post_init__(self):
        r = np.asarray(self.radii, float)
        v = np.asarray(self.values, float)
        if r.ndim != 1 or r.shape != v.shape or np.any(np.diff(r) <= 0):
            raise ValueError("radii must be strictly increasing and match values")
        if np.any(np.abs(v) > 1.0):
            raise ValueError("profile values must lie in [-1, 1]")
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "values", v)

    def __call__(self, x):
        x = np.asarray(x, float)
        r = np.linalg.norm(x, axis=-1)
        return np.interp(r, self.radii, self.values)[..., None] * x

    def to_json(self):
        return {"type": self.name, "radii": self.radii.tolist(), "values": self.values.tolist()}


# ---------------------------------------------------------------------------
# fields


class _Reflected(Body):
    """-inner, used as the effective target of the reverse Funk metric."""

    def __init__(self, inner: Body):
        self.inner = inner
        self.dim = inner.dim

    def gauge(self, xi):
        return self.inner.gauge(-np.asarray(xi, float))

    def contains(self, x):
        return self.inner.contains(-np.asarray(x, float))

    def _ray_exit(self, base, d):
        return self.inner._ray_exit(-np.asarray(base, float), -np.asarray(d, float))

    def support_bound(self, d):
        return self.inner.support_bound(-np.asarray(d, float))

    @property
    def origin_interior(self):
        return self.inner.origin_interior


@dataclass(frozen=True, eq=False)
class ZermeloField:
    """Finsler field with unit ball target - drift(x) at x in domain.

    For the Negation drift the effective target is -target, so the unit ball
    at x is x - target: the reverse of the Funk metric of the same domain.
    For a symmetric target this is the usual recentering at u(x) = -x.
    """

    domain: Body
    target: Body
    drift: Drift

    def __post_init__(self):
        if self.domain.dim != self.target.dim:
            raise ValueError("domain and target dimensions differ")
        if isinstance(self.drift, (Identity, Negation)) and self.domain is not self.target:
            raise ValueError("Funk and reverse-Funk fields need target == domain")

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def effective_target(self) -> Body:
        if isinstance(self.drift, Negation):
            return _Reflected(self.target)
        return self.target

    def norm(self, x, xi) -> np.ndarray:
        _require_interior(self.domain, x)
        u = self.drift(x)
        target = self.effective_target
        if not np.all(target.contains(u)):
            raise DriftOutsideTarget("drift value u(x) is not interior to the target")
        return _funk_gauge(target, u, xi)

    def to_json(self) -> dict:
        return {"drift": self.drift.to_json()}


def funk_field(domain: Body) -> ZermeloField:
    return ZermeloField(domain, domain, Identity())


def reverse_funk_field(domain: Body) -> ZermeloField:
    return ZermeloField(domain, domain, Negation())


def counterexample_field(n: int = 2, k_max: int = 3) -> ZermeloField:
    ball = PBall(2.0, n)
    return ZermeloField(ball, ball, CounterexampleRadial(k_max))


@dataclass(frozen=True, eq=False)
class HilbertField:
    """The Hilbert metric of a domain, the symmetrized Funk metric."""

    domain: Body

    @property
    def dim(self) -> int:
        return self.domain.dim

    def norm(self, x, xi) -> np.ndarray:
        return hilbert_norm(self.domain, x, xi)


def finsler_norm(field, x, xi) -> np.ndarray:
    return field.norm(x, xi)


# ---------------------------------------------------------------------------
# distances


def _chord_log(domain: Body, p, q) -> np.ndarray:
    """log(|a-p| / |a-q|), a the boundary point beyond q on the ray from p."""
    p, q = np.broadcast_arrays(np.asarray(p, float), np.asarray(q, float))
    _require_interior(domain, p)
    _require_interior(domain, q)
    d = q - p
    nz = np.linalg.norm(d, axis=-1) > 0
    safe = np.where(nz[..., None], d, 1.0)
    t = domain._ray_exit(q, safe)  # a = q + t (q - p)
    return np.where(nz, np.log1p(1.0 / t), 0.0)


def funk_distance(domain: Body, p, q) -> np.ndarray:
    return _chord_log(domain, p, q)


def rfunk_distance(domain: Body, p, q) -> np.ndarray:
    return _chord_log(domain, q, p)


def hilbert_distance(domain: Body, p, q) -> np.ndarray:
    return 0.5 * (_chord_log(domain, p, q) + _chord_log(domain, q, p))


def funk_norm(domain: Body, x, xi) -> np.ndarray:
    _require_interior(domain, x)
    return _funk_gauge(domain, x, xi)


def hilbert_norm(domain: Body, x, xi) -> np.ndarray:
    _require_interior(domain, x)
    xi = np.asarray(xi, float)
    return 0.5 * (_funk_gauge(domain, x, xi) + _funk_gauge(domain, x, -xi))


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True, eq=False)
class Polyline:
    points: np.ndarray
    order: int = GL_ORDER

    def __post_init__(self):
        P = np.array(self.points, dtype=float)
        if P.ndim != 2 or len(P) < 2:
            raise ValueError("a polyline needs at least two points")
        if np.any(np.linalg.norm(np.diff(P, axis=0), axis=1) == 0):
            raise ValueError("consecutive polyline points must be distinct")
        if self.order < 1:
            raise ValueError("quadrature order must be positive")
        P.flags.writeable = False
        object.__setattr__(self, "points", P)

    @classmethod
    def segment(cls, a, b, order: int = GL_ORDER) -> "Polyline":
        return cls(np.array([a, b], dtype=float), order)

    def to_json(self) -> dict:
        return {"points": self.points.tolist(), "order": self.order}

    @classmethod
    def from_json(cls, obj: dict) -> "Polyline":
        return cls(np.asarray(obj["points"], float), int(obj.get("order", GL_ORDER)))


def _segment_length(field, a, b, nodes, weights, rtol) -> float:
    d = b - a

    def quad(lo, hi):
        s = lo + (hi - lo) * nodes
        return (hi - lo) * float(weights @ field.norm(a + s[:, None] * d, np.broadcast_to(d, (len(s), len(d)))))

    total = 0.0
    stack = [(0.0, 1.0, quad(0.0, 1.0), 0)]
    while stack:
        lo, hi, whole, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = quad(lo, mid), quad(mid, hi)
        halves = left + right
        if abs(halves - whole) <= rtol * abs(halves) * (hi - lo) or abs(halves - whole) < 1e-300:
            total += halves
        elif depth >= MAX_DEPTH:
            raise NotConverged("adaptive quadrature did not converge on a path segment")
        else:
            stack.append((mid, hi, right, depth + 1))
            stack.append((lo, mid, left, depth + 1))
    return total


def path_length(field, path: Polyline, rtol: float = LENGTH_RTOL) -> float:
    """Length of a polyline under a Finsler field, by adaptive Gauss-Legendre quadrature."""
    P = path.points
    if P.shape[1] != field.dim:
        raise ValueError("path dimension does not match the field")
    try:
        _require_interior(field.domain, P, PathExitsDomain)
    except InvalidBody as exc:
        raise PathExitsDomain(str(exc)) from exc
    nodes, weights = np.polynomial.legendre.leggauss(path.order)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    # the domain is convex, so segments between interior vertices stay interior
    return float(sum(_segment_length(field, P[i], P[i + 1], nodes, weights, rtol)
                     for i in range(len(P) - 1)))


# ---------------------------------------------------------------------------
# Funk balls of the unit ball


def _is_unit_ball(body: Body) -> bool:
    if isinstance(body, PBall):
        return body.p == 2.0
    if isinstance(body, EllipsoidBody):
        return bool(np.allclose(body.center, 0.0) and np.allclose(body.shape, np.eye(body.dim)))
    if isinstance(body, LinearImage):
        M = body.map
        return _is_unit_ball(body.inner) and bool(np.allclose(M @ M.T, np.eye(body.dim)))
    return False


def funk_ball_radius(t: float, domain: Optional[Body] = None) -> float:
    """Euclidean radius of the Funk ball of radius t about 0 in the unit ball: 1 - e^(-t)."""
    if domain is not None and not _is_unit_ball(domain):
        raise DomainNotUnitBall("Funk ball radii are closed-form only for the Euclidean unit ball")
    if t < 0:
        raise ValueError("radius must be nonnegative")
    return float(-math.expm1(-t))


def radial_path(r0: float, r1: float, direction: Sequence[float], pieces: int = 1) -> Polyline:
    """Straight radial path from radius r0 to r1 along a direction."""
    e = np.asarray(direction, float)
    e = e / np.linalg.norm(e)
    radii = np.linspace(r0, r1, pieces + 1)
    return Polyline(radii[:, None] * e)
