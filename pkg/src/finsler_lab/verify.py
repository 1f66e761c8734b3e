"""Bounds harness: measured constants against the theoretical ones.

Each suite returns a :class:`SuiteReport`, a list of rows

    suite, check_id, body_id, n, measured, bound, bound_source, pass

in a fixed order (by body index, never by completion time), plus metadata.
Pass thresholds carry a 1e-6 slack on closed-form constants.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .bodies import (
    Body,
    DirectionSet,
    EllipsoidBody,
    PBall,
    PolytopeH,
    PolytopeV,
    Symmetrized,
    Translate,
    default_directions,
    is_symmetric,
    polish_on_sphere,
    quasireversibility_constant,
    sample_uniform,
)
from .binet_legendre import (
    bl_metric,
    busemann_densities,
    closed_form_metric,
    moments,
    normalization,
    zermelo_bl_closed_form,
)
from .domain_geometry import counterexample_drift, counterexample_field, funk_ball_radius, path_length, radial_path
from .john import pball_john_radius, check_inclusion, max_inscribed_ellipsoid, shifted

SLACK = 1e-6
THREADS_ENV = "FINSLER_LAB_THREADS"
CSV_COLUMNS = ("suite", "check_id", "body_id", "n", "measured", "bound", "bound_source", "pass")
SUITES = ("john-bounds", "bl-bounds", "density", "zermelo-closed-form", "pball-radius",
          "nonsmooth-scan", "counterexample")
PBALL_P = (1.0, 1.2, 1.5, 2.0, 3.0, 6.0)


# ---------------------------------------------------------------------------
# constants and rows


def theoretical_constants(n: int, c: float = 1.0) -> dict:
    """Bilipschitz constants between sqrt(g_BL) and F in dimension n."""
    return {
        "C1_basic": 2.0 * n ** (1 + n / 2),
        "C1_improved": math.sqrt(2 * n * (n + 1)) * n ** (n / 2),
        "C2": n ** (-n / 2),
        "C3": n ** ((n + 1) / 2),
        "C2_c": n ** (-n / 2) * (2.0 / (1.0 + c)) ** (1 + n / 2),
        "C3_c": n ** ((n + 1) / 2) * ((1.0 + c) / 2.0) ** (1 + n / 2),
    }


@dataclass(frozen=True)
class Row:
    suite: str
    check_id: str
    body_id: str
    n: int
    measured: float
    bound: float
    bound_source: str
    passed: bool

    def as_list(self) -> list:
        return [self.suite, self.check_id, self.body_id, self.n, repr(float(self.measured)),
                repr(float(self.bound)), self.bound_source, "true" if self.passed else "false"]


def upper(suite, check, body_id, n, measured, bound, source, slack=SLACK) -> Row:
    return Row(suite, check, body_id, n, float(measured), float(bound), source,
               bool(measured <= bound + slack))


def lower(suite, check, body_id, n, measured, bound, source, slack=SLACK) -> Row:
    return Row(suite, check, body_id, n, float(measured), float(bound), source,
               bool(measured >= bound - slack))


@dataclass
class SuiteReport:
    suite: str
    n: int
    seed: int
    samples: int
    tol: Optional[float]
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r.passed]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# finsler_lab {__version__} suite={self.suite} n={self.n} seed={self.seed} "
                  f"samples={self.samples} tol={self.tol}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.as_list())
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "tool": "finsler_lab",
            "version": __version__,
            "suite": self.suite,
            "n": self.n,
            "seed": self.seed,
            "samples": self.samples,
            "tol": self.tol,
            "rows": len(self.rows),
            "failures": len(self.failures),
            "pass": self.passed,
            "bound_sources": sorted({r.bound_source for r in self.rows}),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        out = self.summary()
        out["checks"] = [dict(zip(CSV_COLUMNS, r.as_list())) for r in self.rows]
        return json.dumps(out, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# parallel map with deterministic order


def worker_count() -> int:
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def ordered_map(fn: Callable, items: Sequence) -> list:
    """fn over items, results in input order whatever the worker count."""
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# body corpora


def random_polytope(n: int, seed: int, index: int = 0, symmetric: bool = False) -> PolytopeV:
    """Hull of 3n..10n seeded uniform sphere points.

    Symmetric bodies take the points together with their negatives.  General
    bodies are shifted by 0.3..0.8 of the inradius about the origin in a random
    direction, which breaks symmetry but keeps the origin interior.
    """
    rng = np.random.default_rng([abs(int(seed)), n, index, int(symmetric)])
    while True:
        k = int(rng.integers(3 * n, 10 * n + 1))
        X = rng.standard_normal((k, n))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        if symmetric:
            X = np.vstack([X, -X])
        P = PolytopeV(X)
        if not P.origin_interior:
            continue
        if symmetric:
            return P
        h = P.h
        inradius = float(np.min(h.b / np.linalg.norm(h.A, axis=1)))
        if inradius < 1e-3:
            continue
        d = rng.standard_normal(n)
        d *= rng.uniform(0.3, 0.8) * inradius / np.linalg.norm(d)
        return PolytopeV(P.vertices + d)


def corpus_size(n: int) -> int:
    return 100 if n == 2 else 50


def polytope_corpus(n: int, seed: int = 0, symmetric: bool = False,
                    count: Optional[int] = None) -> list[tuple[str, Body]]:
    count = corpus_size(n) if count is None else count
    tag = "sym" if symmetric else "gen"
    return [(f"poly-{tag}-{i:03d}", random_polytope(n, seed, i, symmetric)) for i in range(count)]


def funk_ball(n: int, radius: float = 0.5) -> Translate:
    """Unit ball of the Funk metric of the Euclidean ball at radius*e1 (c = (1+r)/(1-r))."""
    e = np.zeros(n)
    e[0] = radius
    return Translate(PBall(2.0, n), -e)


def extra_bodies(n: int, seed: int = 0) -> list[tuple[str, Body]]:
    rng = np.random.default_rng([abs(int(seed)), n, 7])
    A = rng.standard_normal((n, n)) + n * np.eye(n)
    cube = PolytopeH(np.vstack([np.eye(n), -np.eye(n)]), np.ones(2 * n))
    shift = np.zeros(n)
    shift[-1] = 0.3
    return [
        ("cube", cube),
        ("euclidean-ball", PBall(2.0, n)),
        ("ellipsoid", EllipsoidBody.from_shape(np.zeros(n), A @ A.T / n ** 2)),
        ("pball-1.5", PBall(1.5, n)),
        ("pball-4", PBall(4.0, n)),
        ("pball-1.5-shifted", Translate(PBall(1.5, n), shift)),
        ("funk-ball-0.5", funk_ball(n, 0.5)),
    ]


# ---------------------------------------------------------------------------
# ratio scan


@dataclass(frozen=True)
class BoundsReport:
    n: int
    body_id: str
    min_ratio: float
    max_ratio: float
    c: float
    symmetric: bool
    constants: dict
    provenance: str = "exact"

    @property
    def within_c_interval(self) -> bool:
        k = self.constants
        return self.min_ratio >= k["C2_c"] - SLACK and self.max_ratio <= k["C3_c"] + SLACK

    @property
    def below_c1(self) -> bool:
        return self.max_ratio <= self.constants["C1_improved"] + SLACK

    @property
    def within_symmetric_interval(self) -> bool:
        k = self.constants
        return self.min_ratio >= k["C2"] - SLACK and self.max_ratio <= k["C3"] + SLACK

    @property
    def passed(self) -> bool:
        ok = self.within_c_interval and self.below_c1
        return ok and (self.within_symmetric_interval or not self.symmetric)

    def to_json(self) -> dict:
        return {"n": self.n, "body_id": self.body_id, "min_ratio": self.min_ratio,
                "max_ratio": self.max_ratio, "c": self.c, "symmetric": self.symmetric,
                "constants": dict(self.constants), "provenance": self.provenance, "pass": self.passed}


def _extremes(f, X: np.ndarray, refine: bool) -> tuple[float, float]:
    vals = f(X)
    lo, hi = float(vals.min()), float(vals.max())
    if refine:
        hi = max(hi, polish_on_sphere(f, X[int(np.argmax(vals))])[0])
        lo = min(lo, 1.0 / polish_on_sphere(lambda v: 1.0 / f(v), X[int(np.argmin(vals))])[0])
    return lo, hi


def ratio_scan(body: Body, dirs: Optional[DirectionSet] = None, body_id: str = "",
               refine: bool = True, method: str = "auto", samples: int = 200_000,
               seed: int = 0) -> BoundsReport:
    """Extremes of sqrt(g_BL(xi, xi)) / F(xi) over directions, with the constants."""
    n = body.dim
    dirs = dirs or default_directions(n, seed)
    g = bl_metric(body, method, samples, seed)

    def ratio(X):
        return g.norm(X) / body.gauge(X)

    lo, hi = _extremes(ratio, dirs.points, refine)
    c = quasireversibility_constant(body, dirs, refine)
    sym = is_symmetric(body, dirs)
    return BoundsReport(n, body_id, lo, hi, c, sym, theoretical_constants(n, c), g.provenance)


def symmetrize_and_bound(body: Body, dirs: Optional[DirectionSet] = None, body_id: str = "",
                         method: str = "auto", samples: int = 200_000, seed: int = 0) -> dict:
    """Directional and BL sandwiches between a body and its symmetrization.

    F' = (F + F(-.))/2 satisfies 2/(1+c) F' <= F <= (1+c)/2 F', and the BL
    metrics are compared through the generalized eigenvalues of (g, g')
    against the nesting bound ((1+c)/2)^(2n).
    """
    n = body.dim
    dirs = dirs or default_directions(n, seed)
    sym = Symmetrized(body)
    c = quasireversibility_constant(body, dirs)
    lam = 0.5 * (1.0 + c)

    def ratio(X):
        return body.gauge(X) / sym.gauge(X)

    lo, hi = _extremes(ratio, dirs.points, True)
    g = bl_metric(body, method, samples, seed)
    gs = bl_metric(sym, method, samples, seed)
    from scipy.linalg import eigh

    w = eigh(g.matrix, gs.matrix, eigvals_only=True)
    # Monte-Carlo metrics get a 4-sigma allowance on the eigenvalue comparison
    rel = 0.0
    for m in (g, gs):
        if m.stderr is not None:
            rel += 4.0 * float(np.max(m.stderr / np.abs(np.diag(m.matrix)).min()))
    return {
        "body_id": body_id, "n": n, "c": c,
        "directional_min": lo, "directional_lower_bound": 1.0 / lam,
        "directional_max": hi, "directional_upper_bound": lam,
        "bl_eig_min": float(w[0]), "bl_lower_bound": lam ** (-2 * n),
        "bl_eig_max": float(w[-1]), "bl_upper_bound": lam ** (2 * n),
        # the sharper exponent n is reported but not guaranteed: seeded
        # polytopes with c near 5 violate its lower end
        "bl_lower_bound_exp_n": lam ** (-n), "bl_upper_bound_exp_n": lam ** n,
        "exp_n_holds": bool(lam ** (-n) - SLACK - rel <= w[0] and w[-1] <= lam ** n + SLACK + rel),
        "bl_allowance": rel,
        "provenance": "montecarlo" if rel > 0 else "exact",
    }


# ---------------------------------------------------------------------------
# suites


def _john_rows(item, n: int, dirs: DirectionSet, tol: Optional[float]) -> list[Row]:
    body_id, body = item
    S = "john-bounds"
    J = max_inscribed_ellipsoid(body, tol)
    J0 = J.centered()
    rows = []

    def cert(check, inner, outer, factor, source):
        c = check_inclusion(inner, outer, factor, dirs)
        rows.append(Row(S, check, body_id, n, factor * (1.0 + c.max_violation), factor, source, c.passed))

    cert("john-inside", J, body, 1.0, "john-ellipsoid-inscribed")
    sym = is_symmetric(body, dirs)
    # directional John metric sandwich: F / sqrt(g_John)
    X = dirs.points
    r = body.gauge(X) / J0.gauge(X)
    if sym:
        cert("sym-sqrt-n", body, J, math.sqrt(n), "john-symmetric-sqrt-n")
        rows.append(lower(S, "john-metric-lower-sym", body_id, n, r.min(), 1 / math.sqrt(n),
                          "john-metric-reversible"))
        rows.append(upper(S, "john-metric-upper-sym", body_id, n, r.max(), 1.0, "john-metric-reversible"))
    else:
        cert("john-point-n", shifted(body, J.center), J0, float(n), "john-point-n")
        cert("centered-2n", body, J0, 2.0 * n, "john-centered-2n")
        cert("centered-improved", body, J0, math.sqrt(2 * n * (n + 1)), "john-centered-sqrt-2n(n+1)")
    rows.append(lower(S, "john-metric-lower", body_id, n, r.min(), 1 / (2 * n), "john-metric-2n"))
    rows.append(lower(S, "john-metric-lower-improved", body_id, n, r.min(), 1 / math.sqrt(2 * n * (n + 1)),
                      "john-metric-sqrt-2n(n+1)"))
    return rows


def john_bounds_suite(bodies: Sequence[tuple[str, Body]], dirs: Optional[DirectionSet] = None,
                      tol: Optional[float] = None) -> list[Row]:
    if not bodies:
        return []
    n = bodies[0][1].dim
    dirs = dirs or default_directions(n)
    return [r for rows in ordered_map(lambda it: _john_rows(it, n, dirs, tol), bodies) for r in rows]


def _density_rows(item, tol, method, samples, seed) -> list[Row]:
    body_id, body = item
    S = "density"
    rep = busemann_densities(body, tol, method, samples, seed)
    n = rep.n
    rows = [
        lower(S, "john-over-busemann-lower", body_id, n, rep.john_ratio, 1.0, "busemann-john-lower", 1e-9),
        upper(S, "john-over-busemann-upper", body_id, n, rep.john_ratio, rep.john_upper,
              "busemann-john-symmetric" if rep.symmetric else "busemann-john-n^n"),
        upper(S, "bl-over-busemann", body_id, n, rep.bl_ratio, 1.0, "bl-below-busemann", 1e-9),
    ]
    if rep.ellipsoid:
        rows.append(Row(S, "bl-equality-ellipsoid", body_id, n, rep.bl_ratio, 1.0, "bl-busemann-riemannian",
                        abs(rep.bl_ratio - 1.0) <= 1e-9))
    else:
        rows.append(Row(S, "bl-strict-non-ellipsoid", body_id, n, rep.bl_ratio, 1.0, "bl-below-busemann",
                        rep.bl_ratio < 1.0 - 1e-9))
    return rows


def density_suite(bodies: Sequence[tuple[str, Body]], tol: Optional[float] = None, method: str = "auto",
                  samples: int = 200_000, seed: int = 0) -> list[Row]:
    return [r for rows in ordered_map(lambda it: _density_rows(it, tol, method, samples, seed), bodies)
            for r in rows]


def _bl_rows(item, dirs, method, samples, seed) -> list[Row]:
    body_id, body = item
    S = "bl-bounds"
    rep = ratio_scan(body, dirs, body_id, method=method, samples=samples, seed=seed)
    k, n = rep.constants, rep.n
    rows = [
        upper(S, "ratio-max-C1-improved", body_id, n, rep.max_ratio, k["C1_improved"], "bilipschitz-C1-improved"),
        upper(S, "ratio-max-C1-basic", body_id, n, rep.max_ratio, k["C1_basic"], "bilipschitz-C1-basic"),
        lower(S, "ratio-min-quasireversible", body_id, n, rep.min_ratio, k["C2_c"], "quasireversible-interval"),
        upper(S, "ratio-max-quasireversible", body_id, n, rep.max_ratio, k["C3_c"], "quasireversible-interval"),
    ]
    if rep.symmetric:
        rows.append(lower(S, "ratio-min-symmetric", body_id, n, rep.min_ratio, k["C2"], "reversible-interval"))
        rows.append(upper(S, "ratio-max-symmetric", body_id, n, rep.max_ratio, k["C3"], "reversible-interval"))
    else:
        s = symmetrize_and_bound(body, dirs, body_id, method, samples, seed)
        rows += [
            lower(S, "symmetrization-lower", body_id, n, s["directional_min"], s["directional_lower_bound"],
                  "symmetrization-sandwich"),
            upper(S, "symmetrization-upper", body_id, n, s["directional_max"], s["directional_upper_bound"],
                  "symmetrization-sandwich"),
            lower(S, "bl-sandwich-lower", body_id, n, s["bl_eig_min"], s["bl_lower_bound"],
                  "bl-nesting-lambda^2n", SLACK + s["bl_allowance"]),
            upper(S, "bl-sandwich-upper", body_id, n, s["bl_eig_max"], s["bl_upper_bound"],
                  "bl-nesting-lambda^2n", SLACK + s["bl_allowance"]),
        ]
    return rows


def bl_bounds_suite(bodies, dirs=None, method="auto", samples=200_000, seed=0) -> list[Row]:
    if not bodies:
        return []
    dirs = dirs or default_directions(bodies[0][1].dim, seed)
    return [r for rows in ordered_map(lambda it: _bl_rows(it, dirs, method, samples, seed), bodies)
            for r in rows]


def zermelo_closed_form_suite(n: int, seed: int = 0, count: int = 20) -> list[Row]:
    """Direct BL of omega - u pulled to normalized coordinates vs the closed form."""
    S = "zermelo-closed-form"
    cube = PolytopeH(np.vstack([np.eye(n), -np.eye(n)]), np.ones(2 * n))
    omegas = [("ball", PBall(2.0, n)), ("cube", cube), ("poly-gen-000", random_polytope(n, seed, 0))]
    rows = []
    for body_id, omega in omegas:
        mom = moments(omega)
        T, beta = normalization(mom)
        Tinv = np.linalg.inv(T)
        worst = 0.0
        for u in sample_uniform(omega, count, seed):
            direct = bl_metric(Translate(omega, -u)).matrix
            pulled = Tinv.T @ direct @ Tinv
            worst = max(worst, float(np.max(np.abs(pulled - closed_form_metric(T @ (u - beta))))))
        rows.append(Row(S, "closed-vs-direct", body_id, n, worst, 1e-8, "zermelo-bl-closed-form", worst <= 1e-8))
        if body_id == "ball":
            # T = I on the ball, so |u'| < 1 and the floor is 1/(1+gamma)
            eig_min = min(float(np.linalg.eigvalsh(closed_form_metric(T @ (u - beta)))[0])
                          for u in sample_uniform(omega, count, seed))
            rows.append(lower(S, "eigenvalue-floor", body_id, n, eig_min, 1.0 / (n + 3),
                              "zermelo-bl-eigen-floor", 1e-9))
    u = np.zeros(n)
    u[0] = 0.5
    expected = np.eye(n)
    expected[0, 0] = 1.0 - (n + 2) * 0.25 / (1.0 + (n + 2) * 0.25)
    err = float(np.max(np.abs(zermelo_bl_closed_form(PBall(2.0, n), u).metric - expected)))
    rows.append(Row(S, "ball-half-e1", "ball", n, err, 1e-8, "zermelo-bl-closed-form", err <= 1e-8))
    return rows


def pball_radius_suite(n: int = 2, ps: Sequence[float] = PBALL_P, tol: Optional[float] = None,
                       seed: int = 0) -> list[Row]:
    S = "pball-radius"
    rows = []
    for p in ps:
        r = max_inscribed_ellipsoid(PBall(p, n), tol, seed).radius
        rf = pball_john_radius(p, n)
        rows.append(Row(S, f"radius-p{p:g}", f"pball-{p:g}", n, r, rf, "pball-radius-formula", abs(r - rf) <= 1e-3))
    return rows


def nonsmooth_scan(n: int, x1_grid: Sequence[float], tol: float = 1e-6, seed: int = 0) -> list[dict]:
    """John radius of the unit p(x1)-ball, p = 1 + e^x1, with backward slopes in p and x1."""
    out = []
    prev = None
    for x1 in x1_grid:
        p = 1.0 + math.exp(x1)
        r = max_inscribed_ellipsoid(PBall(p, n), tol, seed).radius
        row = {"x1": float(x1), "p": p, "r_solved": r, "r_formula": pball_john_radius(p, n),
               "slope_p": None, "slope_x1": None}
        if prev is not None:
            row["slope_p"] = (r - prev["r_solved"]) / (p - prev["p"])
            row["slope_x1"] = (r - prev["r_solved"]) / (x1 - prev["x1"])
        out.append(row)
        prev = row
    return out


def kink_slopes(n: int = 2, step: float = 0.02, tol: float = 1e-6, seed: int = 0) -> tuple[float, float, list]:
    """Left and right finite-difference slopes dr/dp at p = 2 (x1 = 0)."""
    grid = [math.log(1.0 - step), 0.0, math.log(1.0 + step)]
    table = nonsmooth_scan(n, grid, tol, seed)
    return table[1]["slope_p"], table[2]["slope_p"], table


def nonsmooth_suite(n: int = 2, step: float = 0.02, tol: float = 1e-6, seed: int = 0) -> list[Row]:
    S = "nonsmooth-scan"
    grid = [math.log(p - 1.0) for p in np.arange(2.0 - 5 * step, 2.0 + 5.5 * step, step)]
    rows = []
    for t in nonsmooth_scan(n, grid, tol, seed):
        rows.append(Row(S, f"radius-x1={t['x1']:.6f}", f"pball-{t['p']:.4f}", n, t["r_solved"], t["r_formula"],
                        "pball-radius-formula", abs(t["r_solved"] - t["r_formula"]) <= 1e-4))
    left, right, _ = kink_slopes(n, step, tol, seed)
    expected = math.log(n) / 4.0
    rows.append(Row(S, "slope-left", "kink-p2", n, left, expected, "pball-radius-kink", abs(left - expected) <= 0.02))
    rows.append(Row(S, "slope-right", "kink-p2", n, right, 0.0, "pball-radius-kink", abs(right) <= 0.02))
    return rows


def counterexample_suite(n: int = 2, k_max: int = 3, seed: int = 0, points: int = 4000) -> list[Row]:
    S = "counterexample"
    field_ = counterexample_field(n, k_max)
    rows = []
    rng = np.random.default_rng([abs(int(seed)), n, 11])
    for k in (0, 1):
        e = rng.standard_normal(n)
        out = path_length(field_, radial_path(funk_ball_radius(4 * k), funk_ball_radius(4 * k + 1), e))
        rows.append(Row(S, f"funk-shell-k{k}", "unit-ball", n, out, 1.0, "counterexample-shell-cost",
                        abs(out - 1.0) <= 0.05))
        inward = path_length(field_, radial_path(funk_ball_radius(4 * k + 3), funk_ball_radius(4 * k + 2), e))
        rows.append(Row(S, f"reverse-shell-k{k}", "unit-ball", n, inward, 1.0, "counterexample-shell-cost",
                        abs(inward - 1.0) <= 0.05))
    # closed-form BL metric of the field, sampled through all shells
    t = rng.uniform(0.0, 4.0 * (k_max + 1) + 2.0, points)
    X = rng.standard_normal((points, n))
    X *= (-np.expm1(-t) / np.linalg.norm(X, axis=1))[:, None]
    U = counterexample_drift(X, k_max)
    mom = moments(PBall(2.0, n))
    T, beta = normalization(mom)
    w = np.linalg.eigvalsh(closed_form_metric((U - beta) @ T.T))
    gamma = n + 2
    rows.append(lower(S, "bl-eigen-floor", "unit-ball", n, w[:, 0].min(), 1.0 / (1.0 + gamma),
                      "bl-eigen-floor", 1e-9))
    rows.append(upper(S, "bl-eigen-ceiling", "unit-ball", n, w[:, -1].max(), 1.0, "bl-eigen-floor", 1e-9))
    return rows


def body_corpus(n: int, seed: int = 0, count: Optional[int] = None) -> list[tuple[str, Body]]:
    return (polytope_corpus(n, seed, True, count) + polytope_corpus(n, seed, False, count)
            + extra_bodies(n, seed))


def run_suite(suite: str, n: int = 2, seed: int = 0, samples: int = 200_000, tol: Optional[float] = None,
              count: Optional[int] = None) -> SuiteReport:
    """Run a named suite deterministically; rows ordered by body index."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    rep = SuiteReport(suite, n, seed, samples, tol)
    if suite == "john-bounds":
        rep.rows = john_bounds_suite(body_corpus(n, seed, count), tol=tol)
    elif suite == "bl-bounds":
        rep.rows = bl_bounds_suite(body_corpus(n, seed, count), samples=samples, seed=seed)
    elif suite == "density":
        rep.rows = density_suite(body_corpus(n, seed, count), tol=tol, samples=samples, seed=seed)
    elif suite == "zermelo-closed-form":
        rep.rows = zermelo_closed_form_suite(n, seed)
        rep.notes.append("gamma = n + 2")
    elif suite == "pball-radius":
        rep.rows = pball_radius_suite(n, tol=tol, seed=seed)
    elif suite == "nonsmooth-scan":
        rep.rows = nonsmooth_suite(n, tol=tol or 1e-6, seed=seed)
        rep.notes.append("p(x) = 1 + exp(x1) reaches p = 2 at x1 = 0; the scan is keyed on the p = 2 locus")
    elif suite == "counterexample":
        rep.rows = counterexample_suite(n, seed=seed)
    return rep
