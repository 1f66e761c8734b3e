import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import eigh

from finsler_lab.binet_legendre import (
    bl_dual_metric,
    bl_metric,
    busemann_densities,
    closed_form_metric,
    moments,
    normalization,
    second_moment,
    zermelo_bl_closed_form,
)
from finsler_lab.bodies import (
    EllipsoidBody,
    LinearImage,
    PBall,
    PolytopeV,
    Symmetrized,
    Translate,
    sample_uniform,
)
from finsler_lab.errors import MethodUnsupported, NotInterior, SingularDual
from finsler_lab.verify import random_polytope

from conftest import cube

seeds = st.integers(0, 10_000)


def within(est, exact, stderr, k=4.0):
    return np.all(np.abs(est - exact) <= k * stderr + 1e-15)


def test_second_moment_examples(disk, square, triangle):
    np.testing.assert_allclose(second_moment(disk)[0], 0.25 * np.eye(2), atol=1e-15)
    np.testing.assert_allclose(second_moment(square)[0], np.eye(2) / 3, atol=1e-15)
    np.testing.assert_allclose(second_moment(triangle)[0], [[1 / 6, 1 / 12], [1 / 12, 1 / 6]], atol=1e-15)
    assert second_moment(disk)[1] is None


def test_dual_and_primal_examples(disk, square, triangle):
    np.testing.assert_allclose(bl_dual_metric(disk).matrix, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(bl_dual_metric(square).matrix, 4 / 3 * np.eye(2), atol=1e-14)
    np.testing.assert_allclose(bl_dual_metric(triangle).matrix, [[2 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-14)
    np.testing.assert_allclose(bl_metric(disk).matrix, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(bl_metric(square).matrix, 0.75 * np.eye(2), atol=1e-14)
    np.testing.assert_allclose(bl_metric(triangle).matrix, [[2, -1], [-1, 2]], atol=1e-9)
    assert bl_metric(triangle).condition_number == pytest.approx(3.0)


@pytest.mark.parametrize("body", [PBall(2.0, 2), PBall(1.5, 3), cube(3), Translate(PBall(3.0, 2), [0.2, 0.1]),
                                  PolytopeV([[0, 0], [1, 0], [0, 1]])])
def test_montecarlo_agrees_with_exact(body):
    exact = moments(body, "exact")
    mc = moments(body, "montecarlo", 100_000, seed=1)
    assert within(mc.second, exact.second, mc.stderr)
    g_exact = bl_metric(body, "exact").matrix
    g_mc = bl_metric(body, "montecarlo", 100_000, seed=1)
    assert g_mc.provenance == "montecarlo"
    assert within(g_mc.matrix, g_exact, g_mc.stderr)


def test_montecarlo_stderr_is_calibrated(disk):
    # z-scores over independent seeds should look standard normal
    z = []
    for seed in range(40):
        g = bl_metric(disk, "montecarlo", 20_000, seed)
        z.append(((g.matrix - np.eye(2)) / g.stderr).ravel()[[0, 1, 3]])
    z = np.array(z)
    assert abs(z.mean()) < 0.5
    assert 0.7 < z.std() < 1.4


def test_method_errors(disk):
    with pytest.raises(MethodUnsupported):
        second_moment(Symmetrized(Translate(PBall(1.5, 2), [0.1, 0.0])), "exact")
    with pytest.raises(MethodUnsupported):
        second_moment(disk, "quadrature")


def test_singular_dual_for_flat_body():
    flat = LinearImage(cube(2), np.diag([1.0, 1e-7]))
    with pytest.raises(SingularDual):
        bl_metric(flat)


@given(st.lists(st.floats(-0.5, 0.5), min_size=4, max_size=4), seeds)
def test_ball_fixed_point(entries, seed):
    # any origin-centered ellipsoid is its own BL unit ball
    A = np.array(entries).reshape(2, 2) + np.eye(2)
    E = EllipsoidBody.from_shape([0.0, 0.0], A @ A.T)
    np.testing.assert_allclose(bl_metric(E).matrix, np.linalg.inv(E.shape), rtol=1e-10, atol=1e-12)


def test_ball_fixed_point_montecarlo():
    E = EllipsoidBody.from_shape([0.0, 0.0, 0.0], [[2.0, 0.3, 0.0], [0.3, 1.0, 0.2], [0.0, 0.2, 0.5]])
    g = bl_metric(E, "montecarlo", 200_000, seed=4)
    assert within(g.matrix, np.linalg.inv(E.shape), g.stderr)


@given(st.lists(st.floats(-1, 1), min_size=4, max_size=4), st.integers(0, 20))
def test_affine_equivariance(entries, index):
    A = np.array(entries).reshape(2, 2) + 2 * np.eye(2)
    B = random_polytope(2, 5, index)
    Ainv = np.linalg.inv(A)
    lhs = bl_metric(LinearImage(B, A)).matrix
    rhs = Ainv.T @ bl_metric(B).matrix @ Ainv
    np.testing.assert_allclose(lhs, rhs, atol=1e-8 * np.abs(rhs).max())


@given(st.floats(0.2, 5.0), st.integers(0, 20))
def test_homogeneity(lam, index):
    B = random_polytope(3, 2, index)
    scaled = LinearImage(B, np.eye(3) / lam)
    np.testing.assert_allclose(bl_metric(scaled).matrix, lam ** 2 * bl_metric(B).matrix,
                               rtol=1e-10, atol=1e-12)


def _nesting_lambda(P1, P2):
    # max of F2/F1 and F1/F2 over directions is attained at vertices
    return max(float(np.max(P1.gauge(P2.vertices))), float(np.max(P2.gauge(P1.vertices))))


@given(st.integers(0, 50), st.integers(0, 50), st.sampled_from([2, 3]))
def test_sandwich_property(i, j, n):
    P1 = random_polytope(n, 1, i)
    P2 = random_polytope(n, 2, j, symmetric=True)
    lam = _nesting_lambda(P1, P2)
    w = eigh(bl_metric(P2).matrix, bl_metric(P1).matrix, eigvals_only=True)
    assert lam ** (-2 * n) - 1e-12 <= w[0] and w[-1] <= lam ** (2 * n) + 1e-12


def test_closed_form_disk_examples(disk):
    z = zermelo_bl_closed_form(disk, [0.0, 0.0])
    np.testing.assert_allclose(z.metric, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(z.T, np.eye(2), atol=1e-14)
    z = zermelo_bl_closed_form(disk, [0.5, 0.0])
    np.testing.assert_allclose(z.metric, np.diag([0.5, 1.0]), atol=1e-12)
    with pytest.raises(NotInterior):
        zermelo_bl_closed_form(disk, [1.0, 0.0])


def test_closed_form_pulls_back_to_direct_metric(funk_ball, disk):
    z = zermelo_bl_closed_form(disk, [0.5, 0.0])
    np.testing.assert_allclose(z.pulled_back(), bl_metric(funk_ball).matrix, atol=1e-12)


@pytest.mark.parametrize("omega", [PBall(2.0, 2), cube(2), random_polytope(2, 8, 0), random_polytope(3, 8, 1)])
@given(seed=seeds)
def test_closed_form_vs_direct(omega, seed):
    u = sample_uniform(omega, 1, seed)[0]
    z = zermelo_bl_closed_form(omega, u)
    Tinv = np.linalg.inv(z.T)
    direct = Tinv.T @ bl_metric(Translate(omega, -u)).matrix @ Tinv
    np.testing.assert_allclose(direct, z.metric, atol=1e-8)


@given(st.lists(st.floats(-1, 1), min_size=2, max_size=2))
def test_closed_form_eigenvalue_floor(v):
    u = 0.99 * np.array(v) / max(1.0, np.linalg.norm(v))
    w = np.linalg.eigvalsh(zermelo_bl_closed_form(PBall(2.0, 2), u).metric)
    gamma = 4
    assert w[0] == pytest.approx(1 / (1 + gamma * u @ u), rel=1e-10)
    assert w[0] >= 1 / (1 + gamma) - 1e-12 and w[-1] <= 1 + 1e-12


def test_funk_universality():
    # BL of the Funk ball at x, seen in normalized coordinates, depends only on x'
    omegas = [PBall(2.0, 2), random_polytope(2, 3, 2), cube(2)]
    rng = np.random.default_rng(0)
    for _ in range(10):
        xp = rng.uniform(-0.2, 0.2, 2)
        fields = []
        for om in omegas:
            T, beta = normalization(moments(om))
            x = beta + np.linalg.solve(T, xp)
            Tinv = np.linalg.inv(T)
            fields.append(Tinv.T @ bl_metric(Translate(om, -x)).matrix @ Tinv)
        for f in fields[1:]:
            np.testing.assert_allclose(f, fields[0], atol=1e-10)
        np.testing.assert_allclose(fields[0], closed_form_metric(xp), atol=1e-10)


def test_density_examples(disk, square):
    rep = busemann_densities(square)
    assert rep.busemann_density == pytest.approx(math.pi / 4)
    assert rep.john_density == pytest.approx(1.0, abs=1e-7)
    assert rep.john_ratio == pytest.approx(4 / math.pi, abs=1e-7)
    assert rep.bl_density == pytest.approx(0.75)
    assert rep.john_upper == 2.0 and rep.john_ok and rep.bl_ok
    rep = busemann_densities(disk)
    for v in (rep.busemann_density, rep.john_density, rep.bl_density):
        assert v == pytest.approx(1.0)
    assert rep.equality_ok


def test_density_report_rejects_off_origin(triangle):
    with pytest.raises(NotInterior):
        busemann_densities(triangle)


def test_metric_tensor_json(disk):
    g = bl_metric(disk, "montecarlo", 5000, seed=3)
    d = g.to_json()
    assert d["provenance"] == "montecarlo" and d["samples"] == 5000 and d["seed"] == 3
    assert set(bl_metric(disk).to_json()) == {"matrix", "provenance"}
