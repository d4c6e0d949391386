"""Angular-momentum algebra for a single spin j.

Operator matrices, rotation matrices about the y axis, spin coherent
states and Husimi distributions.  All matrices and state vectors use the
|j m> basis with m ordered descending, j, j-1, ..., -j; that ordering is
fixed repo-wide (see ``m_values``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import cos, lgamma, log, pi, sin

import numpy as np

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
NORM_TOL = 1e-12


def m_values(j: float) -> np.ndarray:
    """m eigenvalues in the repo-wide descending order j, j-1, ..., -j."""
    dim = round(2 * j) + 1
    return j - np.arange(dim)


@dataclass(frozen=True)
class SpinBasis:
    """The |j m> basis of a single spin with magnitude j."""

    j: float

    def __post_init__(self):
        twoj = round(2 * self.j)
        if self.j <= 0 or abs(2 * self.j - twoj) > 1e-12:
            raise ValueError(f"j must be a positive integer or half-integer, got {self.j}")

    @property
    def dim(self) -> int:
        return round(2 * self.j) + 1

    @property
    def m(self) -> np.ndarray:
        return m_values(self.j)


@dataclass(frozen=True)
class SpinState:
    """Normalized amplitude vector over |j m>, m descending."""

    basis: SpinBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise ValueError(f"amplitude vector has shape {amps.shape}, expected ({self.basis.dim},)")
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > 1e-6:
            raise ValueError(f"state norm {nrm} too far from 1")
        if abs(nrm - 1.0) > NORM_TOL:
            amps = amps / nrm
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex matrix in the |j m> basis, tagged by its structure."""

    basis: SpinBasis
    entries: np.ndarray
    kind: str = "general"

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        dim = self.basis.dim
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match dim {dim}")
        if self.kind == "hermitian":
            err = np.max(np.abs(mat - mat.conj().T))
            if err > HERMITIAN_TOL:
                raise ValueError(f"hermitian tag violated, max|A - A^+| = {err}")
        elif self.kind == "unitary":
            err = np.max(np.abs(mat.conj().T @ mat - np.eye(dim)))
            if err > UNITARY_TOL:
                raise ValueError(f"unitary tag violated, max|A^+A - I| = {err}")
        elif self.kind != "general":
            raise ValueError(f"unknown kind {self.kind!r}")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)


@dataclass(frozen=True)
class CoherentParams:
    """Direction (theta, phi) on the sphere, theta in [0, pi], phi in [-pi, pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= pi:
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not -pi <= self.phi < pi:
            raise ValueError(f"phi={self.phi} outside [-pi, pi)")


def wrap_angles(theta: float, phi: float) -> tuple[float, float]:
    """Canonicalize arbitrary spherical angles into ([0,pi], [-pi,pi))."""
    theta = theta % (2 * pi)
    if theta > pi:
        theta = 2 * pi - theta
        phi = phi + pi
    phi = (phi + pi) % (2 * pi) - pi
    return theta, phi


def build_angular_momentum(basis: SpinBasis, axis: str) -> OperatorMatrix:
    """J_x, J_y or J_z for spin j; they satisfy [J_x, J_y] = i J_z."""
    j = basis.j
    m = basis.m
    if axis == "z":
        mat = np.diag(m.astype(complex))
    elif axis in ("x", "y"):
        # J+ |j m> = sqrt(j(j+1) - m(m+1)) |j m+1>; m descending puts
        # the raising amplitudes on the first superdiagonal.
        raise_amp = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
        jp = np.diag(raise_amp.astype(complex), k=1)
        jm = jp.T.conj()
        mat = (jp + jm) / 2 if axis == "x" else (jp - jm) / 2j
    else:
        raise ValueError(f"axis must be x, y or z, got {axis!r}")
    return OperatorMatrix(basis, mat, kind="hermitian")


def _jacobi_poly(n: int, a: int, b: int, x: float) -> float:
    """P_n^(a,b)(x) by the standard three-term recurrence (stable in n)."""
    if n == 0:
        return 1.0
    p0 = 1.0
    p1 = 0.5 * (a - b + (a + b + 2) * x)
    for k in range(2, n + 1):
        c1 = 2 * k * (k + a + b) * (2 * k + a + b - 2)
        c2 = (2 * k + a + b - 1) * (a * a - b * b)
        c3 = (2 * k + a + b - 2) * (2 * k + a + b - 1) * (2 * k + a + b)
        c4 = 2 * (k + a - 1) * (k + b - 1) * (2 * k + a + b)
        p0, p1 = p1, ((c2 + c3 * x) * p1 - c4 * p0) / c1
    return p1


@lru_cache(maxsize=64)
def _wigner_d_array(twoj: int, beta: float) -> np.ndarray:
    j = twoj / 2
    dim = twoj + 1
    mv = m_values(j)
    half = 0.5 * beta
    c, s = cos(half), sin(half)
    x = cos(beta)
    d = np.zeros((dim, dim))
    for i, mp in enumerate(mv):
        for col, m in enumerate(mv):
            mu = round(abs(mp - m))
            nu = round(abs(mp + m))
            deg = round(j - (mu + nu) / 2)
            if (s == 0.0 and mu > 0) or (c == 0.0 and nu > 0):
                continue
            # sign convention matching <j m'| exp(-i beta J_y) |j m>
            xi = 1.0 if m >= mp else (-1.0) ** mu
            logpre = 0.5 * (
                lgamma(deg + 1) + lgamma(deg + mu + nu + 1)
                - lgamma(deg + mu + 1) - lgamma(deg + nu + 1)
            )
            mag = abs(s) ** mu * abs(c) ** nu
            sgn = (1.0 if s >= 0 or mu % 2 == 0 else -1.0) * (1.0 if c >= 0 or nu % 2 == 0 else -1.0)
            d[i, col] = xi * sgn * np.exp(logpre) * mag * _jacobi_poly(deg, mu, nu, x)
    d.flags.writeable = False
    return d


def wigner_d(basis: SpinBasis, beta: float) -> OperatorMatrix:
    """Rotation matrix <j m'| exp(-i beta J_y) |j m>; real orthogonal.

    Evaluated through the Jacobi-polynomial form with a log-space
    prefactor: the recurrence is numerically stable at large j, where the
    alternating factorial sum loses all precision.
    """
    if not np.isfinite(beta):
        raise ValueError("beta must be finite")
    mat = _wigner_d_array(round(2 * basis.j), float(beta))
    return OperatorMatrix(basis, mat, kind="unitary")


def _log_binom_sqrt(j: float) -> np.ndarray:
    """0.5 * ln binom(2j, j-m) for the descending m grid."""
    twoj = round(2 * j)
    jm = np.arange(twoj + 1)  # j - m, in descending-m order this is 0..2j
    lg = np.vectorize(lambda n: lgamma(n + 1))
    return 0.5 * (lgamma(twoj + 1) - lg(jm) - lg(twoj - jm))


def _coherent_amplitudes(j: float, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Coherent-state amplitudes, one row per (theta, phi) point.

    <j m|theta phi> = sqrt(binom(2j, j-m)) cos^(j+m)(theta/2)
                      sin^(j-m)(theta/2) e^(i phi (j-m)),
    accumulated in log space so both poles are exact.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    twoj = round(2 * j)
    jm = np.arange(twoj + 1)[None, :]  # j - m
    jp = twoj - jm                     # j + m
    half = theta[:, None] / 2
    c, s = np.cos(half), np.sin(half)
    logb = _log_binom_sqrt(j)[None, :]
    with np.errstate(divide="ignore"):
        logc = np.where(jp > 0, jp * np.log(np.where(c > 0, c, 1.0)), 0.0)
        logs = np.where(jm > 0, jm * np.log(np.where(s > 0, s, 1.0)), 0.0)
    mag = np.exp(logb + logc + logs)
    mag = np.where((c <= 0) & (jp > 0), 0.0, mag)
    mag = np.where((s <= 0) & (jm > 0), 0.0, mag)
    return mag * np.exp(1j * phi[:, None] * jm)


def coherent_state(basis: SpinBasis, params: CoherentParams) -> SpinState:
    """Spin coherent state |theta, phi>, normalized to 1."""
    amps = _coherent_amplitudes(basis.j, params.theta, params.phi)[0]
    amps = amps / np.linalg.norm(amps)
    return SpinState(basis, amps)


def husimi(state: SpinState, grid) -> np.ndarray:
    """Q(theta, phi) = |<theta, phi|Psi>|^2 at each grid point.

    ``grid`` is a sequence of CoherentParams (or (theta, phi) pairs);
    returns a real array of the same length, values in [0, 1].
    """
    pts = list(grid)
    if not pts:
        raise ValueError("husimi grid must be nonempty")
    theta = np.array([p.theta if isinstance(p, CoherentParams) else p[0] for p in pts])
    phi = np.array([p.phi if isinstance(p, CoherentParams) else p[1] for p in pts])
    amps = _coherent_amplitudes(state.basis.j, theta, phi)
    overlap = amps.conj() @ state.amplitudes
    return np.abs(overlap) ** 2
