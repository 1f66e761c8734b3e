import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from finsler_lab.bodies import EllipsoidBody, LinearImage, PBall, PolytopeV, Translate, default_directions
from finsler_lab.errors import NonConvexDetected
from finsler_lab.john import (
    pball_john_radius,
    centered_john,
    check_inclusion,
    john_metric,
    max_inscribed_ellipsoid,
    shifted,
)
from finsler_lab.verify import random_polytope

from conftest import cube

cp = pytest.importorskip("cvxpy")


def cvxpy_john(P):
    """Reference MVIE via a conic solver: max log det B, |B a_i| + a_i.d <= b_i."""
    n = P.dim
    B = cp.Variable((n, n), PSD=True)
    d = cp.Variable(n)
    cons = [cp.norm(B @ a) + a @ d <= b for a, b in zip(P.A, P.b)]
    cp.Problem(cp.Maximize(cp.log_det(B)), cons).solve(solver="CLARABEL")
    return B.value @ B.value, d.value


def test_square_gives_unit_disk(square):
    E = max_inscribed_ellipsoid(square)
    np.testing.assert_allclose(E.shape, np.eye(2), atol=1e-7)
    np.testing.assert_allclose(E.center, 0.0, atol=1e-9)


def test_cross_polytope_radius():
    E = max_inscribed_ellipsoid(PBall(1.0, 2), tol=1e-12)
    assert E.radius == pytest.approx(1 / math.sqrt(2), abs=1e-10)


def test_triangle_steiner_inellipse(triangle):
    # Steiner inellipse: centered at the centroid, area pi/(3 sqrt 3) times the triangle's
    E = max_inscribed_ellipsoid(triangle)
    np.testing.assert_allclose(E.center, [1 / 3, 1 / 3], atol=1e-8)
    assert E.volume == pytest.approx(math.pi / (3 * math.sqrt(3)) * 0.5, rel=1e-7)
    # it touches the edge midpoints
    for m in ([0.5, 0.0], [0.0, 0.5], [0.5, 0.5]):
        assert E.centered().gauge(np.asarray(m) - E.center) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("n,index", [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)])
def test_polytope_solver_matches_conic_reference(n, index):
    P = random_polytope(n, 11, index).h
    E = max_inscribed_ellipsoid(P)
    S, d = cvxpy_john(P)
    # the log det objective is flat at the optimum, so compare it tightly
    # and the minimizer itself at the square root of that accuracy
    assert np.linalg.slogdet(E.shape)[1] >= np.linalg.slogdet(S)[1] - 1e-7
    assert np.max(np.linalg.norm(P.A @ E.factor, axis=1) + P.A @ E.center - P.b) <= 1e-9
    np.testing.assert_allclose(E.shape, S, atol=5e-5)
    np.testing.assert_allclose(E.center, d, atol=5e-5)


@pytest.mark.parametrize("p", [1.2, 1.5, 1.98, 2.02, 3.0, 6.0])
@pytest.mark.parametrize("n", [2, 3])
def test_pball_radius_cutting_plane(p, n):
    E = max_inscribed_ellipsoid(PBall(p, n))
    assert E.radius == pytest.approx(pball_john_radius(p, n), abs=1e-5)
    # the John ellipsoid of a p-ball is a centered Euclidean ball; its axes
    # are pinned only to about sqrt(tol) by a near-optimal volume
    np.testing.assert_allclose(np.sqrt(np.linalg.eigvalsh(E.shape)), E.radius, atol=1e-3)
    np.testing.assert_allclose(E.center, 0.0, atol=1e-5)


def test_cutting_plane_against_polytope_path():
    # a polytope seen only through its gauge must give the same answer
    P = random_polytope(2, 3, 5)

    class GaugeOnly(Translate):
        def as_polytope(self):
            return None

    G = GaugeOnly(P, np.zeros(2))
    E1, E2 = max_inscribed_ellipsoid(P), max_inscribed_ellipsoid(G, tol=1e-9)
    np.testing.assert_allclose(E2.shape, E1.shape, atol=1e-5)
    np.testing.assert_allclose(E2.center, E1.center, atol=1e-5)


@given(st.lists(st.floats(-2, 2), min_size=4, max_size=4), st.lists(st.floats(-0.3, 0.3), min_size=2, max_size=2))
def test_affine_equivariance(entries, offset):
    A = np.array(entries).reshape(2, 2) + 3 * np.eye(2)
    P = random_polytope(2, 0, 7)
    E = max_inscribed_ellipsoid(P)
    F = max_inscribed_ellipsoid(Translate(LinearImage(P, A), offset))
    np.testing.assert_allclose(F.center, A @ E.center + offset, atol=1e-6)
    np.testing.assert_allclose(F.shape, A @ E.shape @ A.T, atol=1e-6 * np.abs(A).max() ** 2)


def test_ellipsoid_shortcut_and_metric():
    E = EllipsoidBody.from_shape([0.1, 0.0], [[2.0, 0.3], [0.3, 1.0]])
    J = max_inscribed_ellipsoid(E)
    np.testing.assert_allclose(J.shape, E.shape)
    J0, Q = centered_john(E)
    np.testing.assert_allclose(Q, [0.1, 0.0])
    np.testing.assert_allclose(john_metric(E).matrix, np.linalg.inv(E.shape), atol=1e-12)


def test_inclusion_certificates(square):
    dirs = default_directions(2)
    E = max_inscribed_ellipsoid(square)
    assert check_inclusion(E, square, 1.0, dirs).passed
    assert check_inclusion(square, E, math.sqrt(2), dirs).passed
    assert not check_inclusion(square, E, 1.3, dirs).passed
    ball = PBall(1.5, 2)
    J = max_inscribed_ellipsoid(ball)
    cert = check_inclusion(J, ball, 1.0, dirs)
    assert cert.mode == "radial-sample" and cert.passed


def test_general_inclusion_chain():
    dirs = default_directions(2)
    P = random_polytope(2, 4, 1)
    E = max_inscribed_ellipsoid(P)
    J0 = E.centered()
    n = 2
    assert check_inclusion(shifted(P, E.center), J0, n, dirs).passed
    assert check_inclusion(P, J0, 2 * n, dirs).passed
    assert check_inclusion(P, J0, math.sqrt(2 * n * (n + 1)), dirs).passed


def test_tight_tolerance_converges():
    E = max_inscribed_ellipsoid(PBall(1.98, 3), tol=1e-9)
    assert E.radius == pytest.approx(pball_john_radius(1.98, 3), abs=1e-8)


def test_nonconvex_pball_detected():
    with pytest.raises(NonConvexDetected):
        max_inscribed_ellipsoid(PBall(0.5, 2))


def test_pball_john_radius_values():
    assert pball_john_radius(1.2, 2) == pytest.approx(0.7937, abs=1e-4)
    assert pball_john_radius(1.5, 2) == pytest.approx(0.8909, abs=1e-4)
    assert pball_john_radius(3.0, 2) == 1.0
