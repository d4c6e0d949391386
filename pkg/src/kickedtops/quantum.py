"""Single quantum kicked top: Floquet operator, evolution, z moments."""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from .series import VarianceSeries
from .spin import CoherentParams, OperatorMatrix, SpinBasis, SpinState, coherent_state, wigner_d


@dataclass(frozen=True)
class TopParams:
    """Spin magnitude j and kick strength k of one top."""

    j: float
    k: float

    def __post_init__(self):
        SpinBasis(self.j)  # validates j
        if self.k < 0:
            raise ValueError(f"kick strength must be >= 0, got {self.k}")

    @property
    def basis(self) -> SpinBasis:
        return SpinBasis(self.j)


def kick_phases(basis: SpinBasis, k: float) -> np.ndarray:
    """Diagonal of exp(-i k J_z^2 / (2j)) on the descending-m grid."""
    return np.exp(-1j * k * basis.m**2 / (2 * basis.j))


def build_floquet(params: TopParams) -> OperatorMatrix:
    """One-kick unitary exp(-i k J_z^2/(2j)) exp(-i pi J_y/2).

    The pi/2 rotation about y acts first, then the torsion kick; in the
    |j m> basis that is U_{m'm} = exp(-i k m'^2/(2j)) d_{m'm}(pi/2).
    The kick phase carries the 1/(2j) factor of the Hamiltonian.
    """
    basis = params.basis
    d = wigner_d(basis, pi / 2).entries
    return OperatorMatrix(basis, kick_phases(basis, params.k)[:, None] * d, kind="unitary")


def evolve(state: SpinState, floquet: OperatorMatrix, steps: int) -> SpinState:
    """Apply the Floquet map ``steps`` times (matrix-vector per step)."""
    if state.basis.dim != floquet.basis.dim:
        raise ValueError("state and operator dimensions do not match")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    amps = state.amplitudes
    for _ in range(steps):
        amps = floquet.entries @ amps
        amps = amps / np.linalg.norm(amps)
    return SpinState(state.basis, amps)


def z_moments(state: SpinState) -> tuple[float, float]:
    """(<z>, <z^2>) with z = J_z/j, from the m-populations."""
    z = state.basis.m / state.basis.j
    prob = np.abs(state.amplitudes) ** 2
    return float(z @ prob), float((z**2) @ prob)


def variance_series(params: TopParams, initial: CoherentParams, horizon: int) -> VarianceSeries:
    """sigma_qu^2(t) of z for t = 0..horizon, starting from a coherent state."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    floquet = build_floquet(params)
    state = coherent_state(params.basis, initial)
    values = np.empty(horizon + 1)
    for t in range(horizon + 1):
        zbar, z2 = z_moments(state)
        values[t] = z2 - zbar**2
        if t < horizon:
            state = evolve(state, floquet, 1)
    return VarianceSeries(np.arange(horizon + 1), values)
