"""Second moments of convex bodies and the Binet-Legendre metric.

For a body B in R^n the dual scalar product on linear forms is

    g*(theta, phi) = (n + 2) / vol(B) * integral_B theta(eta) phi(eta) d eta,

i.e. the matrix (n + 2) * M with M the second moment of the uniform measure
on B about the origin.  The Binet-Legendre metric is its inverse.  Covectors
are row tuples in the same basis as vectors, so no transpose is hidden.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .bodies import (
    Body,
    LinearImage,
    PBall,
    Translate,
    is_symmetric,
    polytope_moments,
    sample_uniform,
    unit_ball_volume,
)
from .errors import MethodUnsupported, NotInterior, SampleBudgetTooSmall, SingularDual
from .metric_tensor import MetricTensor

SINGULAR_RTOL = 1e-12
SQRT_RTOL = 1e-14
DENSITY_SLACK = 1e-9
MIN_MC_SAMPLES = 1000


@dataclass(frozen=True, eq=False)
class Moments:
    """Mean and second moment (about the origin) of the uniform measure on a body.

    On the Monte-Carlo path ``cov`` holds the estimated covariance of
    vec(second) (n^2 x n^2) and ``stderr`` its diagonal square root.
    """

    mean: np.ndarray
    second: np.ndarray
    provenance: str = "exact"
    stderr: Optional[np.ndarray] = None
    cov: Optional[np.ndarray] = None
    samples: Optional[int] = None
    seed: Optional[int] = None

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def centered(self) -> np.ndarray:
        return self.second - np.outer(self.mean, self.mean)


def _exact_moments(body: Body) -> Optional[tuple[np.ndarray, np.ndarray]]:
    # compositions first so that e.g. a translated p-ball stays exact
    if isinstance(body, Translate):
        inner = _exact_moments(body.inner)
        if inner is None:
            return None
        m, M = inner
        o = body.offset
        return m + o, M + np.outer(m, o) + np.outer(o, m) + np.outer(o, o)
    if isinstance(body, LinearImage):
        inner = _exact_moments(body.inner)
        if inner is None:
            return None
        m, M = inner
        A = body.map
        return A @ m, A @ M @ A.T
    E = body.as_ellipsoid()
    if E is not None:
        c = E.center
        return c.copy(), np.outer(c, c) + E.shape / (E.dim + 2)
    P = body.as_polytope()
    if P is not None:
        vol, first, second = polytope_moments(P.vertices)
        return first / vol, second / vol
    if isinstance(body, PBall):
        return np.zeros(body.dim), body.second_moment_diag() * np.eye(body.dim)
    return None


def _montecarlo_moments(body: Body, samples: int, seed: int) -> Moments:
    if samples < MIN_MC_SAMPLES:
        raise SampleBudgetTooSmall(f"Monte-Carlo moments need at least {MIN_MC_SAMPLES} samples")
    X = sample_uniform(body, samples, seed)
    n = X.shape[1]
    outer = (X[:, :, None] * X[:, None, :]).reshape(samples, n * n)
    second = outer.mean(axis=0).reshape(n, n)
    cov = np.cov(outer, rowvar=False).reshape(n * n, n * n) / samples
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None)).reshape(n, n)
    return Moments(X.mean(axis=0), 0.5 * (second + second.T), "montecarlo", se, cov, samples, seed)


def moments(body: Body, method: str = "auto", samples: int = 200_000, seed: int = 0) -> Moments:
    """Mean and second moment of body; ``method`` is auto, exact or montecarlo."""
    if method not in ("auto", "exact", "montecarlo"):
        raise MethodUnsupported(f"unknown method {method!r}")
    if method != "montecarlo":
        exact = _exact_moments(body)
        if exact is not None:
            m, M = exact
            return Moments(m, 0.5 * (M + M.T))
        if method == "exact":
            raise MethodUnsupported(f"no exact moments for {type(body).__name__}")
    return _montecarlo_moments(body, samples, seed)


def second_moment(body: Body, method: str = "auto", samples: int = 200_000, seed: int = 0):
    """(M, stderr) with M_ij = mean of eta_i eta_j over the body; stderr is None when exact."""
    mom = moments(body, method, samples, seed)
    return mom.second, mom.stderr


def _as_moments(body_or_moments, method, samples, seed) -> Moments:
    if isinstance(body_or_moments, Moments):
        return body_or_moments
    return moments(body_or_moments, method, samples, seed)


def bl_dual_metric(body, method: str = "auto", samples: int = 200_000, seed: int = 0) -> MetricTensor:
    """The dual scalar product (n+2) M on covectors."""
    mom = _as_moments(body, method, samples, seed)
    k = mom.dim + 2
    if mom.provenance == "montecarlo":
        return MetricTensor(k * mom.second, "montecarlo", k * mom.stderr, mom.samples, mom.seed)
    return MetricTensor(k * mom.second)


def _spd_inverse(G: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(G)
    if w[0] < SINGULAR_RTOL * w[-1]:
        raise SingularDual(f"dual metric is numerically singular (eigenvalues {w[0]:.3e}, {w[-1]:.3e})")
    inv = cho_solve(cho_factor(G, lower=True), np.eye(len(G)))
    return 0.5 * (inv + inv.T)


def bl_metric(body, method: str = "auto", samples: int = 200_000, seed: int = 0) -> MetricTensor:
    """Binet-Legendre metric, the inverse of :func:`bl_dual_metric`.

    Monte-Carlo standard errors are propagated by the delta method,
    d(G^-1) = -G^-1 dG G^-1, using the full covariance of the moment estimate.
    """
    mom = _as_moments(body, method, samples, seed)
    n = mom.dim
    k = n + 2
    g = _spd_inverse(k * mom.second)
    if mom.provenance != "montecarlo":
        return MetricTensor(g)
    J = -k * np.kron(g, g)
    cov = J @ mom.cov @ J.T
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None)).reshape(n, n)
    return MetricTensor(g, "montecarlo", se, mom.samples, mom.seed)


class ZermeloBL(NamedTuple):
    """Closed-form BL metric of a recentered body in normalized coordinates x' = T(x - beta)."""

    metric: np.ndarray
    T: np.ndarray
    beta: np.ndarray

    def pulled_back(self) -> np.ndarray:
        """The metric in the original coordinates, T^T g' T."""
        return self.T.T @ self.metric @ self.T


def normalization(mom: Moments) -> tuple[np.ndarray, np.ndarray]:
    """(T, beta) with T = ((n+2) C)^(-1/2), C the centered second moment."""
    C = (mom.dim + 2) * mom.centered
    w, V = np.linalg.eigh(0.5 * (C + C.T))
    if w[0] < SQRT_RTOL * w[-1] or w[0] <= 0:
        raise SingularDual("centered second moment is numerically singular")
    T = (V / np.sqrt(w)) @ V.T
    return 0.5 * (T + T.T), mom.mean.copy()


def closed_form_metric(u_prime) -> np.ndarray:
    """g' = I - gamma u' u'^T / (1 + gamma |u'|^2), gamma = n + 2, vectorized over leading axes."""
    u = np.asarray(u_prime, float)
    n = u.shape[-1]
    gamma = n + 2
    denom = 1.0 + gamma * np.einsum("...i,...i->...", u, u)
    rank1 = u[..., :, None] * u[..., None, :]
    return np.eye(n) - gamma * rank1 / denom[..., None, None]


def zermelo_bl_closed_form(omega: Body, u_value, method: str = "auto", samples: int = 200_000,
                           seed: int = 0) -> ZermeloBL:
    """BL metric of the unit ball omega - u, in coordinates where omega is normalized."""
    u = np.asarray(u_value, float)
    if not bool(omega.contains(u)):
        raise NotInterior("drift value must lie in the interior of omega")
    mom = _as_moments(omega, method, samples, seed)
    T, beta = normalization(mom)
    return ZermeloBL(closed_form_metric(T @ (u - beta)), T, beta)


@dataclass(frozen=True)
class DensityReport:
    """Lebesgue-relative Busemann, John and BL densities of a Finsler unit ball."""

    n: int
    busemann_density: float
    john_density: float
    bl_density: float
    symmetric: bool
    ellipsoid: bool

    @property
    def john_ratio(self) -> float:
        return self.john_density / self.busemann_density

    @property
    def bl_ratio(self) -> float:
        return self.bl_density / self.busemann_density

    @property
    def john_upper(self) -> float:
        n = self.n
        return float(n ** (n / 2) if self.symmetric else n ** n)

    @property
    def john_ok(self) -> bool:
        return 1.0 - DENSITY_SLACK <= self.john_ratio <= self.john_upper + DENSITY_SLACK

    @property
    def bl_ok(self) -> bool:
        return self.bl_ratio <= 1.0 + DENSITY_SLACK

    @property
    def equality_ok(self) -> bool:
        """For ellipsoids centered at the origin the BL and Busemann densities agree."""
        return (not self.ellipsoid) or abs(self.bl_ratio - 1.0) <= DENSITY_SLACK

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "busemann_density": self.busemann_density,
            "john_density": self.john_density,
            "bl_density": self.bl_density,
            "john_ratio": self.john_ratio,
            "john_upper": self.john_upper,
            "bl_ratio": self.bl_ratio,
            "symmetric": self.symmetric,
            "john_ok": self.john_ok,
            "bl_ok": self.bl_ok,
        }


def busemann_densities(body: Body, tol: Optional[float] = None, method: str = "auto",
                       samples: int = 200_000, seed: int = 0) -> DensityReport:
    from .bodies import volume
    from .john import max_inscribed_ellipsoid

    if not body.origin_interior:
        raise NotInterior("the Finsler unit ball must contain the origin in its interior")
    n = body.dim
    vol_method = "exact" if method != "montecarlo" and body.exact_volume() is not None else "montecarlo"
    vol, _ = volume(body, vol_method, samples, seed)
    J = max_inscribed_ellipsoid(body, tol=tol, seed=seed)
    g = bl_metric(body, method, samples, seed)
    E = body.as_ellipsoid()
    centered_ellipsoid = E is not None and bool(np.allclose(E.center, 0.0, atol=1e-12))
    return DensityReport(
        n=n,
        busemann_density=unit_ball_volume(n) / vol,
        john_density=float(1.0 / abs(np.prod(np.diag(J.factor)))),
        bl_density=float(math.sqrt(np.linalg.det(g.matrix))),
        symmetric=is_symmetric(body),
        ellipsoid=centered_ellipsoid,
    )
