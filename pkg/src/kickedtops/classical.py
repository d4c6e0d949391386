"""Classical kicked-top map on the unit sphere.

Ensemble dynamics, finite-time Lyapunov exponents via the tangent map,
and Poincare sections.  RNG is numpy's seedable default_rng (PCG64);
every sampled ensemble records its seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from .series import VarianceSeries
from .spin import CoherentParams, wrap_angles

SPHERE_TOL = 1e-12


@dataclass(frozen=True)
class ClassicalPoint:
    """Point (x, y, z) = (J_x, J_y, J_z)/j on the unit sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        r = self.x**2 + self.y**2 + self.z**2
        if abs(r - 1.0) > 1e-9:
            raise ValueError(f"point is off the unit sphere, |r|^2 = {r}")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "ClassicalPoint":
        st = np.sin(theta)
        return cls(st * np.cos(phi), st * np.sin(phi), np.cos(theta))

    def to_angles(self) -> tuple[float, float]:
        return wrap_angles(float(np.arccos(np.clip(self.z, -1, 1))), float(np.arctan2(self.y, self.x)))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class ClassicalEnsemble:
    """Sampled phase-space distribution; points is an (n, 3) array."""

    points: np.ndarray
    seed: int
    origin: CoherentParams
    sigma: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("points must be an (n, 3) array")
        r = np.linalg.norm(pts, axis=1)
        if np.max(np.abs(r - 1.0)) > 1e-9:
            raise ValueError("ensemble points must lie on the unit sphere")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)


def map_points(xyz: np.ndarray, k: float) -> np.ndarray:
    """One kick of the classical map, vectorized over rows of (n, 3)."""
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    c, s = np.cos(k * x), np.sin(k * x)
    out = np.empty_like(xyz)
    out[..., 0] = z * c + y * s
    out[..., 1] = -z * s + y * c
    out[..., 2] = -x
    # renormalize to cancel rounding drift
    out /= np.linalg.norm(out, axis=-1, keepdims=True)
    return out


def map_step(p: ClassicalPoint, k: float) -> ClassicalPoint:
    nxt = map_points(p.as_array()[None, :], k)[0]
    return ClassicalPoint(*nxt)


def map_jacobian(xyz: np.ndarray, k: float) -> np.ndarray:
    """Analytic 3x3 Jacobian of the kick map at a point."""
    x, y, z = xyz
    c, s = np.cos(k * x), np.sin(k * x)
    return np.array(
        [
            [-z * k * s + y * k * c, s, c],
            [-z * k * c - y * k * s, c, -s],
            [-1.0, 0.0, 0.0],
        ]
    )


def sample_ensemble(origin: CoherentParams, sigma: float, n: int, seed: int) -> ClassicalEnsemble:
    """Gaussian cloud in (theta, phi) chart coordinates around ``origin``.

    Matches the quantum coherent state when sigma = 1/sqrt(j).  Origins
    too close to a pole make the chart coordinates meaningless and are
    rejected.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    if min(origin.theta, pi - origin.theta) < 2 * sigma:
        raise ValueError(f"origin theta={origin.theta} is within 2 sigma of a pole")
    rng = np.random.default_rng(seed)
    theta = origin.theta + sigma * rng.standard_normal(n)
    phi = origin.phi + sigma * rng.standard_normal(n)
    st = np.sin(theta)
    pts = np.column_stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])
    return ClassicalEnsemble(pts, int(seed), origin, float(sigma))


def ensemble_variance_series(ens: ClassicalEnsemble, k: float, horizon: int) -> VarianceSeries:
    """sigma_cl^2(t) = <z^2> - <z>^2 over the ensemble, t = 0..horizon."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    pts = np.array(ens.points)
    values = np.empty(horizon + 1)
    for t in range(horizon + 1):
        z = pts[:, 2]
        values[t] = float(np.mean(z**2) - np.mean(z) ** 2)
        if t < horizon:
            pts = map_points(pts, k)
    return VarianceSeries(np.arange(horizon + 1), values)


def _initial_tangent(xyz: np.ndarray) -> np.ndarray:
    """Deterministic unit tangent vector at a point on the sphere."""
    ref = np.array([0.0, 0.0, 1.0]) if abs(xyz[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(ref, xyz)
    return u / np.linalg.norm(u)


def finite_time_lyapunov(p: ClassicalPoint, k: float, horizon: int) -> float:
    """Per-kick tangent-vector growth rate over ``horizon`` kicks.

    Tangent dynamics uses the analytic Jacobian, with the radial
    component projected out after each step (the sphere's zero exponent
    must not contaminate the estimate) and per-step renormalization.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    xyz = p.as_array()
    u = _initial_tangent(xyz)
    total = 0.0
    for _ in range(horizon):
        u = map_jacobian(xyz, k) @ u
        xyz = map_points(xyz[None, :], k)[0]
        u -= (u @ xyz) * xyz
        growth = np.linalg.norm(u)
        total += np.log(growth)
        u /= growth
    return total / horizon


def average_lyapunov(origin: CoherentParams, k: float, sigma: float, n: int, horizon: int, seed: int) -> float:
    """Phase-space average of the finite-time exponent over a Gaussian cloud."""
    ens = sample_ensemble(origin, sigma, n, seed)
    return float(np.mean([finite_time_lyapunov(ClassicalPoint(*p), k, horizon) for p in ens.points]))


def lambda_sum(
    origin1: CoherentParams,
    origin2: CoherentParams,
    k1: float,
    k2: float,
    sigma: float,
    n: int = 100,
    horizon: int = 100,
    seed: int = 0,
) -> float:
    """Sum of the two tops' phase-space averaged finite-time exponents."""
    l1 = average_lyapunov(origin1, k1, sigma, n, horizon, seed)
    l2 = average_lyapunov(origin2, k2, sigma, n, horizon, seed + 1)
    return l1 + l2


def poincare_section(k: float, init_grid, horizon: int) -> list[np.ndarray]:
    """Orbit points in (theta, phi) for each initial condition.

    ``init_grid`` holds ClassicalPoint or CoherentParams entries; each
    orbit is returned as an (horizon+1, 2) array of wrapped angles.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    orbits = []
    for init in init_grid:
        p = init if isinstance(init, ClassicalPoint) else ClassicalPoint.from_angles(init.theta, init.phi)
        xyz = p.as_array()
        pts = np.empty((horizon + 1, 2))
        for t in range(horizon + 1):
            pts[t] = ClassicalPoint(*xyz).to_angles()
            if t < horizon:
                xyz = map_points(xyz[None, :], k)[0]
        orbits.append(pts)
    return orbits
