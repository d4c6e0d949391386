"""Coupled kicked tops: exact evolution and entanglement entropies.

The joint state is kept as a dim x dim amplitude matrix M with entry
(m1, m2) on |j m1> x |j m2>.  One kick is two dense matrix products plus
an entrywise coupling phase; the dim^2 x dim^2 joint Floquet matrix is
never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quantum import TopParams, build_floquet
from .series import EntropySeries
from .spin import CoherentParams, OperatorMatrix, SpinBasis, SpinState, coherent_state

EIG_CLAMP = 1e-12


@dataclass(frozen=True)
class CoupledParams:
    """Shared j, per-top kick strengths, and coupling strength eps."""

    j: float
    k1: float
    k2: float
    eps: float

    def __post_init__(self):
        TopParams(self.j, self.k1)
        TopParams(self.j, self.k2)
        if self.eps < 0:
            raise ValueError(f"coupling strength must be >= 0, got {self.eps}")

    @property
    def basis(self) -> SpinBasis:
        return SpinBasis(self.j)


@dataclass(frozen=True)
class CoupledState:
    """Amplitude matrix of the two-top state, Frobenius norm 1."""

    basis: SpinBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        dim = self.basis.dim
        if amps.shape != (dim, dim):
            raise ValueError(f"amplitude matrix has shape {amps.shape}, expected ({dim}, {dim})")
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > 1e-6:
            raise ValueError(f"state norm {nrm} too far from 1")
        if abs(nrm - 1.0) > 1e-12:
            amps = amps / nrm
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def product(cls, state1: SpinState, state2: SpinState) -> "CoupledState":
        return cls(state1.basis, np.outer(state1.amplitudes, state2.amplitudes))


@dataclass(frozen=True)
class ReducedDensity:
    """Reduced density matrix of one top: Hermitian, unit trace, PSD."""

    basis: SpinBasis
    entries: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        dim = self.basis.dim
        if mat.shape != (dim, dim):
            raise ValueError(f"density matrix shape {mat.shape}, expected ({dim}, {dim})")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-10:
            raise ValueError("reduced density matrix is not Hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > 1e-8:
            raise ValueError(f"trace {tr} too far from 1")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)


def coupling_phases(basis: SpinBasis, eps: float) -> np.ndarray:
    """Entrywise phase exp(-i eps m1 m2 / j) of the coupling kick."""
    m = basis.m
    return np.exp(-1j * eps * np.outer(m, m) / basis.j)


def coupled_step(
    psi: CoupledState, u1: OperatorMatrix, u2: OperatorMatrix, eps: float
) -> CoupledState:
    """One joint kick: M <- phases * (U1 M U2^T)."""
    if u1.basis.dim != psi.basis.dim or u2.basis.dim != psi.basis.dim:
        raise ValueError("operator and state dimensions do not match")
    amps = u1.entries @ psi.amplitudes @ u2.entries.T
    amps = coupling_phases(psi.basis, eps) * amps
    return CoupledState(psi.basis, amps)


class CoupledEvolver:
    """Caches U1, U2 and the coupling phase matrix for repeated kicks."""

    def __init__(self, params: CoupledParams):
        self.params = params
        self.u1 = build_floquet(TopParams(params.j, params.k1)).entries
        self.u2t = build_floquet(TopParams(params.j, params.k2)).entries.T
        self.phases = coupling_phases(params.basis, params.eps)

    def step(self, amps: np.ndarray) -> np.ndarray:
        return self.phases * (self.u1 @ amps @ self.u2t)


def reduced_density(psi: CoupledState) -> ReducedDensity:
    """rho1 = Tr_2 |psi><psi| = M M^+ in the amplitude-matrix picture."""
    m = psi.amplitudes
    rho = m @ m.conj().T
    rho = (rho + rho.conj().T) / 2
    return ReducedDensity(psi.basis, rho)


def linear_entropy(rho: ReducedDensity) -> float:
    """S_lin = 1 - Tr(rho^2); no eigensolver, Tr(rho^2) = |rho|_F^2."""
    return float(1.0 - np.linalg.norm(rho.entries) ** 2)


def von_neumann_entropy(rho: ReducedDensity) -> float:
    """S_vN = -sum lambda ln lambda over clamped eigenvalues (nats)."""
    lam = np.linalg.eigvalsh(rho.entries)
    if np.min(lam) < -1e-8:
        raise ValueError(f"reduced density has eigenvalue {np.min(lam)} < 0")
    lam = np.clip(lam, 0.0, 1.0)
    lam = lam[lam > EIG_CLAMP]
    return float(-np.sum(lam * np.log(lam)))


def entropies_from_amplitudes(m: np.ndarray) -> tuple[float, float]:
    """(S_lin, S_vN) from the singular values of the amplitude matrix.

    The Schmidt coefficients sigma_i^2 are the eigenvalues of M M^+;
    SVD of M is better conditioned than eigendecomposing the product.
    """
    s = np.linalg.svd(m, compute_uv=False)
    lam = s**2
    s_lin = float(1.0 - np.sum(lam**2))
    lam = lam[lam > EIG_CLAMP]
    s_vn = float(-np.sum(lam * np.log(lam)))
    return s_lin, s_vn


def entropy_series(
    params: CoupledParams, init1: CoherentParams, init2: CoherentParams, horizon: int
) -> EntropySeries:
    """Both subsystem entropies at every kick t = 0..horizon."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    basis = params.basis
    evolver = CoupledEvolver(params)
    amps = np.outer(
        coherent_state(basis, init1).amplitudes, coherent_state(basis, init2).amplitudes
    )
    s_lin = np.empty(horizon + 1)
    s_vn = np.empty(horizon + 1)
    for t in range(horizon + 1):
        s_lin[t], s_vn[t] = entropies_from_amplitudes(amps)
        if t < horizon:
            amps = evolver.step(amps)
    return EntropySeries(np.arange(horizon + 1), s_lin, s_vn)
