import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from finsler_lab.binet_legendre import zermelo_bl_closed_form
from finsler_lab.bodies import PBall, PolytopeV, Translate, sample_uniform
from finsler_lab.domain_geometry import (
    Constant,
    HilbertField,
    Polyline,
    RadialProfile,
    ZermeloField,
    counterexample_drift,
    counterexample_field,
    counterexample_profile,
    finsler_norm,
    funk_ball_radius,
    funk_distance,
    funk_field,
    funk_norm,
    hilbert_distance,
    hilbert_norm,
    path_length,
    radial_path,
    reverse_funk_field,
    rfunk_distance,
)
from finsler_lab.errors import DomainNotUnitBall, DriftOutsideTarget, PathExitsDomain, PointOnBoundary
from finsler_lab.verify import random_polytope

from conftest import cube

DISK = PBall(2.0, 2)
SQUARE = cube(2)
POLY = random_polytope(2, 11, 3)
POLY_C = POLY.vertices.mean(axis=0)
DOMAINS = [DISK, SQUARE, POLY]


def interior_points(body, count, seed):
    # shrink towards an interior point so nothing sits on the boundary
    X = sample_uniform(body, count, seed)
    c = X.mean(axis=0)
    return c + 0.98 * (X - c)


def test_norm_examples():
    x, xi = [0.5, 0.0], [1.0, 0.0]
    assert finsler_norm(funk_field(DISK), x, xi) == pytest.approx(2.0, rel=1e-12)
    assert finsler_norm(reverse_funk_field(DISK), x, xi) == pytest.approx(2 / 3, rel=1e-12)
    assert funk_norm(DISK, x, xi) == pytest.approx(2.0, rel=1e-12)
    assert hilbert_norm(DISK, x, xi) == pytest.approx(4 / 3, rel=1e-12)
    assert HilbertField(DISK).norm(x, xi) == pytest.approx(4 / 3, rel=1e-12)


@given(st.floats(0, 2 * math.pi))
def test_hilbert_norm_center_and_reversibility(theta):
    xi = np.array([math.cos(theta), math.sin(theta)])
    assert hilbert_norm(DISK, [0.0, 0.0], xi) == pytest.approx(1.0, rel=1e-12)
    x = [0.3, -0.4]
    assert hilbert_norm(POLY, POLY_C, xi) == hilbert_norm(POLY, POLY_C, -xi)
    assert hilbert_norm(DISK, x, xi) == hilbert_norm(DISK, x, -xi)


def test_constant_drift_is_translation_invariant():
    c = np.array([0.2, -0.1])
    field = ZermeloField(SQUARE, DISK, Constant(c))
    X = interior_points(SQUARE, 50, 0)
    xi = np.array([0.3, 0.7])
    vals = field.norm(X, np.broadcast_to(xi, X.shape))
    np.testing.assert_allclose(vals, Translate(DISK, -c).gauge(xi), rtol=1e-12)
    length = path_length(field, Polyline.segment([-0.5, -0.5], [0.1, 0.9]))
    s = np.array([0.6, 1.4])
    assert length == pytest.approx(float(Translate(DISK, -c).gauge(s)), rel=1e-9)


def test_drift_outside_target():
    field = ZermeloField(SQUARE, DISK, Constant([0.9, 0.9]))
    with pytest.raises(DriftOutsideTarget):
        field.norm([0.0, 0.0], [1.0, 0.0])


def test_distance_examples():
    o, x = [0.0, 0.0], [0.5, 0.0]
    assert funk_distance(DISK, o, x) == pytest.approx(math.log(2), abs=1e-12)
    assert funk_distance(DISK, x, o) == pytest.approx(math.log(1.5), abs=1e-12)
    assert funk_distance(POLY, POLY_C, POLY_C) == 0.0
    assert rfunk_distance(DISK, o, x) == pytest.approx(math.log(1.5), abs=1e-12)
    assert rfunk_distance(DISK, x, o) == pytest.approx(math.log(2), abs=1e-12)
    assert hilbert_distance(DISK, o, x) == pytest.approx(0.5 * math.log(3), abs=1e-12)
    assert hilbert_distance(DISK, o, x) == pytest.approx(math.atanh(0.5), abs=1e-12)
    assert hilbert_distance(SQUARE, o, x) == pytest.approx(0.5 * math.log(3), abs=1e-12)


def test_boundary_points_rejected():
    with pytest.raises(PointOnBoundary):
        funk_distance(DISK, [0.0, 0.0], [1.0, 0.0])
    with pytest.raises(PointOnBoundary):
        hilbert_distance(SQUARE, [1.0, 0.2], [0.0, 0.0])
    with pytest.raises(PointOnBoundary):
        funk_norm(DISK, [1.0 - 1e-12, 0.0], [1.0, 0.0])


@pytest.mark.parametrize("domain", DOMAINS, ids=["disk", "square", "polytope"])
def test_reversal_and_hilbert_symmetry(domain):
    P = interior_points(domain, 1000, 1)
    Q = interior_points(domain, 1000, 2)
    assert np.all(rfunk_distance(domain, P, Q) == funk_distance(domain, Q, P))
    assert np.all(hilbert_distance(domain, P, Q) == hilbert_distance(domain, Q, P))


@pytest.mark.parametrize("domain", DOMAINS, ids=["disk", "square", "polytope"])
def test_triangle_inequality(domain):
    P, Q, R = (interior_points(domain, 1000, s) for s in (3, 4, 5))
    lhs = funk_distance(domain, P, R)
    rhs = funk_distance(domain, P, Q) + funk_distance(domain, Q, R)
    assert np.all(lhs <= rhs + 1e-9)
    h = hilbert_distance(domain, P, R)
    assert np.all(h <= hilbert_distance(domain, P, Q) + hilbert_distance(domain, Q, R) + 1e-9)


@given(st.lists(st.floats(-1, 1), min_size=6, max_size=6), st.integers(0, 1000))
def test_hilbert_affine_invariance(entries, seed):
    A = np.array(entries[:4]).reshape(2, 2) + 2 * np.eye(2)
    b = np.array(entries[4:])
    image = PolytopeV(POLY.vertices @ A.T + b)
    P = interior_points(POLY, 20, seed)
    Q = interior_points(POLY, 20, seed + 1)
    lhs = hilbert_distance(image, P @ A.T + b, Q @ A.T + b)
    np.testing.assert_allclose(lhs, hilbert_distance(POLY, P, Q), atol=1e-9)


def test_straight_segments_are_geodesic():
    rng = np.random.default_rng(7)
    field = funk_field(POLY)
    P = interior_points(POLY, 100, 8)
    Q = interior_points(POLY, 100, 9)
    for p, q in zip(P, Q):
        straight = path_length(field, Polyline.segment(p, q))
        assert straight == pytest.approx(float(funk_distance(POLY, p, q)), abs=1e-6)
        mids = interior_points(POLY, 20, int(rng.integers(1 << 30)))
        for m in mids:
            if min(np.linalg.norm(m - p), np.linalg.norm(m - q)) < 1e-9:
                continue
            assert straight <= path_length(field, Polyline([p, m, q])) + 1e-6


@given(st.floats(1e-3, 0.99), st.floats(0, 2 * math.pi))
def test_funk_asymmetry_witness(r, theta):
    x = r * np.array([math.cos(theta), math.sin(theta)])
    assert funk_distance(DISK, [0.0, 0.0], x) - funk_distance(DISK, x, [0.0, 0.0]) > 0


def test_path_length_examples():
    seg = Polyline.segment([0.0, 0.0], [0.5, 0.0])
    assert path_length(funk_field(DISK), seg) == pytest.approx(math.log(2), abs=1e-6)
    assert path_length(reverse_funk_field(DISK), seg) == pytest.approx(math.log(1.5), abs=1e-6)
    with pytest.raises(PathExitsDomain):
        path_length(funk_field(DISK), Polyline.segment([0.0, 0.0], [1.5, 0.0]))


def test_polyline_validation_and_json():
    with pytest.raises(ValueError):
        Polyline([[0.0, 0.0]])
    with pytest.raises(ValueError):
        Polyline([[0.0, 0.0], [0.0, 0.0]])
    p = Polyline([[0.0, 0.0], [0.1, 0.2], [0.3, 0.0]], order=8)
    q = Polyline.from_json(p.to_json())
    assert np.array_equal(p.points, q.points) and q.order == 8


def test_funk_ball_radius():
    assert funk_ball_radius(0.0) == 0.0
    assert funk_ball_radius(math.log(2)) == pytest.approx(0.5, abs=1e-15)
    assert funk_ball_radius(50.0) == pytest.approx(1.0)
    assert funk_ball_radius(1.0, DISK) == pytest.approx(1 - math.exp(-1))
    with pytest.raises(DomainNotUnitBall):
        funk_ball_radius(1.0, SQUARE)
    for t in (0.1, 1.0, 3.0):
        r = funk_ball_radius(t)
        assert funk_distance(DISK, [0.0, 0.0], [r, 0.0]) == pytest.approx(t, rel=1e-10)


def test_counterexample_bands():
    def band(a, b):
        return np.linspace(1 - math.exp(-a), 1 - math.exp(-b), 25)

    for k in range(4):
        assert np.all(counterexample_profile(band(4 * k, 4 * k + 1)) == 1.0)
        assert np.all(counterexample_profile(band(4 * k + 2, 4 * k + 3)) == -1.0)
    x = np.array([0.3, 0.0])
    np.testing.assert_array_equal(counterexample_drift(x), x)
    x = np.array([0.0, 1 - math.exp(-2.5)])
    np.testing.assert_allclose(counterexample_drift(x), -x)
    np.testing.assert_array_equal(counterexample_drift([0.0, 0.0]), [0.0, 0.0])


def test_counterexample_profile_is_c2_and_contracting():
    assert np.all(np.abs(counterexample_profile(-np.expm1(-np.linspace(0, 30, 10_001)))) <= 1.0)
    # past t ~ 10 recovering t from r loses too many digits for finite differences
    t = np.linspace(0, 10, 10_001)
    phi = counterexample_profile(-np.expm1(-t))
    h = t[1] - t[0]
    d2 = np.diff(phi, 2) / h ** 2
    # a jump in phi'' would show up as an O(1) step; smooth parts move by about h * phi'''
    assert np.max(np.abs(np.diff(d2))) < 0.2
    X = sample_uniform(DISK, 2000, 0)
    assert np.all(np.linalg.norm(counterexample_drift(X), axis=1) <= np.linalg.norm(X, axis=1) + 1e-15)


@pytest.mark.parametrize("k", [0, 1])
def test_counterexample_shell_costs(k):
    field = counterexample_field()
    e = [1.0, 0.0]
    r = lambda t: funk_ball_radius(t)
    forward = path_length(field, radial_path(r(4 * k), r(4 * k + 1), e, 4)) if k else \
        path_length(field, radial_path(0.0, r(1), e, 4))
    assert forward == pytest.approx(1.0, rel=0.05)
    inward = path_length(field, radial_path(r(4 * k + 3), r(4 * k + 2), e, 4))
    assert inward == pytest.approx(1.0, rel=0.05)


def test_counterexample_bl_metric_is_bounded():
    gamma = 4
    X = sample_uniform(DISK, 400, 3) * 0.999
    U = counterexample_drift(X)
    for u in U:
        w = np.linalg.eigvalsh(zermelo_bl_closed_form(DISK, u).metric)
        assert w[0] >= 1 / (1 + gamma) - 1e-9 and w[-1] <= 1 + 1e-9


def test_radial_profile_drift():
    prof = RadialProfile([0.0, 0.5, 1.0], [1.0, 0.0, -1.0])
    np.testing.assert_allclose(prof([0.25, 0.0]), [0.125, 0.0])
    field = ZermeloField(DISK, DISK, prof)
    assert field.norm([0.25, 0.0], [1.0, 0.0]) > 0
    with pytest.raises(ValueError):
        RadialProfile([0.0, 0.5], [1.0, 2.0])
    with pytest.raises(ValueError):
        RadialProfile([0.5, 0.0], [1.0, 1.0])
    assert prof.to_json()["type"] == "radial_profile"


def test_funk_fields_need_matching_domain():
    with pytest.raises(ValueError):
        ZermeloField(SQUARE, DISK, funk_field(DISK).drift)
