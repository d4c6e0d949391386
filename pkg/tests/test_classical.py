"""Classical map, ensembles, and Lyapunov exponent tests."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kickedtops import (
    ClassicalPoint,
    CoherentParams,
    average_lyapunov,
    ensemble_variance_series,
    finite_time_lyapunov,
    lambda_sum,
    map_step,
    poincare_section,
    sample_ensemble,
)
from kickedtops.classical import map_jacobian, map_points


def test_sphere_conserved_over_many_steps():
    # unit norm is preserved to 1e-10 over 10^4 iterations
    rng = np.random.default_rng(5)
    xyz = rng.normal(size=(32, 3))
    xyz /= np.linalg.norm(xyz, axis=1, keepdims=True)
    for _ in range(10_000):
        xyz = map_points(xyz, 3.0)
    assert np.max(np.abs(np.linalg.norm(xyz, axis=1) - 1.0)) < 1e-10


@given(
    theta=st.floats(0.05, np.pi - 0.05),
    phi=st.floats(-np.pi, np.pi),
    k=st.floats(0.0, 12.0),
)
@settings(deadline=None, max_examples=100)
def test_map_stays_on_sphere(theta, phi, k):
    p = map_step(ClassicalPoint.from_angles(theta, phi), k)
    assert abs(p.x**2 + p.y**2 + p.z**2 - 1.0) < 1e-12


def test_map_explicit_form():
    k = 3.0
    p = ClassicalPoint.from_angles(0.89, 0.63)
    q = map_step(p, k)
    c, s = np.cos(k * p.x), np.sin(k * p.x)
    assert abs(q.x - (p.z * c + p.y * s)) < 1e-12
    assert abs(q.y - (-p.z * s + p.y * c)) < 1e-12
    assert abs(q.z - (-p.x)) < 1e-12


def test_jacobian_matches_finite_differences():
    k = 3.0
    xyz = ClassicalPoint.from_angles(0.89, 0.63).as_array()
    jac = map_jacobian(xyz, k)

    def raw(v):
        x, y, z = v
        c, s = np.cos(k * x), np.sin(k * x)
        return np.array([z * c + y * s, -z * s + y * c, -x])

    h = 1e-6
    fd = np.empty((3, 3))
    for col in range(3):
        dx = np.zeros(3)
        dx[col] = h
        fd[:, col] = (raw(xyz + dx) - raw(xyz - dx)) / (2.0 * h)
    assert np.max(np.abs(jac - fd)) < 1e-5


def test_zero_kick_lyapunov_is_zero():
    lam = finite_time_lyapunov(ClassicalPoint.from_angles(0.89, 0.63), 0.0, 200)
    assert abs(lam) < 1e-12


def test_lyapunov_matches_two_trajectory_oracle():
    # compare the tangent-map exponent against direct separation growth
    k = 3.0
    p0 = ClassicalPoint.from_angles(0.89, 0.63)
    lam = finite_time_lyapunov(p0, k, 2000)

    rng = np.random.default_rng(11)
    ref = p0.as_array()
    delta = rng.normal(size=3)
    delta -= (delta @ ref) * ref
    d0 = 1e-9
    pert = ref + d0 * delta / np.linalg.norm(delta)
    pert /= np.linalg.norm(pert)
    growth = 0.0
    sep = pert - ref
    for _ in range(2000):
        ref = map_points(ref[None, :], k)[0]
        pert = map_points(pert[None, :], k)[0]
        sep = pert - ref
        norm = np.linalg.norm(sep)
        growth += np.log(norm / d0)
        pert = ref + sep * (d0 / norm)
    oracle = growth / 2000
    assert abs(lam - oracle) < 0.05 * max(lam, oracle)


def test_chaotic_exceeds_regular_lyapunov():
    chaotic = finite_time_lyapunov(ClassicalPoint.from_angles(0.89, 0.63), 3.0, 500)
    regular = finite_time_lyapunov(ClassicalPoint.from_angles(2.3, 0.63), 3.0, 500)
    assert chaotic > 0.25
    assert regular < 0.1


def test_sample_ensemble_deterministic_and_centered():
    origin = CoherentParams(0.89, 0.63)
    a = sample_ensemble(origin, 0.1, 400, 7)
    b = sample_ensemble(origin, 0.1, 400, 7)
    assert np.array_equal(a.points, b.points)
    assert np.max(np.abs(np.linalg.norm(a.points, axis=1) - 1.0)) < 1e-12
    center = ClassicalPoint.from_angles(0.89, 0.63).as_array()
    assert np.max(np.abs(np.mean(a.points, axis=0) - center)) < 0.03


def test_sample_ensemble_rejects_pole_origin():
    with pytest.raises(ValueError):
        sample_ensemble(CoherentParams(0.05, 0.0), 0.1, 10, 0)


def test_ensemble_variance_saturates_for_chaos():
    ens = sample_ensemble(CoherentParams(0.89, 0.63), 80.0**-0.5, 400, 3)
    series = ensemble_variance_series(ens, 3.0, 100)
    late = np.mean(series.values[20:])
    assert 0.25 < late < 0.4


def test_lambda_sum_is_symmetric_sum():
    o1, o2 = CoherentParams(0.89, 0.63), CoherentParams(1.481, -1.4)
    total = lambda_sum(o1, o2, 3.0, 3.0, 0.1, n=50, horizon=80, seed=9)
    lam1 = average_lyapunov(o1, 3.0, 0.1, 50, 80, 9)
    lam2 = average_lyapunov(o2, 3.0, 0.1, 50, 80, 10)
    assert abs(total - (lam1 + lam2)) < 1e-12


def test_poincare_section_shapes_and_range():
    orbits = poincare_section(3.0, [ClassicalPoint.from_angles(0.89, 0.63)], 50)
    assert len(orbits) == 1
    pts = orbits[0]
    assert pts.shape == (51, 2)
    assert np.all(pts[:, 0] >= 0.0) and np.all(pts[:, 0] <= np.pi)
    assert np.all(pts[:, 1] >= -np.pi) and np.all(pts[:, 1] <= np.pi)
