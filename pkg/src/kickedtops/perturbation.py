"""Perturbative linear entropy and phenomenological rate models.

The second-order formula sums an interaction-picture correlation
function of the two uncoupled tops; the phenomenological models replace
that correlation by an exponentially decaying (optionally oscillating)
ansatz, giving closed-form production rates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .quantum import TopParams, build_floquet
from .spin import CoherentParams, coherent_state

SIGMA_SAT_SQ = 1.0 / 3.0   # variance of z under the uniform sphere measure
D_0 = SIGMA_SAT_SQ**2

IMAG_TOL = 1e-10


class RateOutOfDomainError(ValueError):
    """Gamma/Gamma0 <= 1 has no finite decay-rate preimage."""


@dataclass(frozen=True)
class CorrelationMatrix:
    """Interaction-picture correlations C(l, m) for 1 <= l, m <= horizon.

    entries[l-1, m-1] holds C(l, m); conjugate-symmetric with real
    nonnegative diagonal.
    """

    entries: np.ndarray
    label: str = "1"

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("correlation matrix must be square")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-8:
            raise ValueError("correlation matrix is not conjugate symmetric")
        diag = np.diag(mat)
        if np.max(np.abs(diag.imag)) > 1e-10 or np.min(diag.real) < -1e-10:
            raise ValueError("diagonal must be real and nonnegative")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)

    @property
    def horizon(self) -> int:
        return self.entries.shape[0]

    def at(self, l: int, m: int) -> complex:
        return complex(self.entries[l - 1, m - 1])


def correlation_matrix(params: TopParams, init: CoherentParams, horizon: int, label: str = "1") -> CorrelationMatrix:
    """C(l, m) = <z(l) z(m)> - <z(l)><z(m)> for the free top, z = J_z/j.

    Uses C(l, m) = <psi(l)| z U^(l-m) z |psi(m)> for l >= m with
    |psi(t)> = U^t |psi(0)>: all states are stored once, and each column
    m propagates z|psi(m)> forward, O(horizon^2) matrix-vector products.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    basis = params.basis
    u = build_floquet(params).entries
    z = basis.m / basis.j
    psi = np.empty((horizon + 1, basis.dim), dtype=complex)
    psi[0] = coherent_state(basis, init).amplitudes
    for t in range(horizon):
        psi[t + 1] = u @ psi[t]
    zbar = (np.abs(psi) ** 2) @ z
    c = np.zeros((horizon, horizon), dtype=complex)
    for m in range(1, horizon + 1):
        vec = z * psi[m]
        c[m - 1, m - 1] = np.vdot(psi[m], z * vec) - zbar[m] ** 2
        for l in range(m + 1, horizon + 1):
            vec = u @ vec
            c[l - 1, m - 1] = np.vdot(psi[l], z * vec) - zbar[l] * zbar[m]
            c[m - 1, l - 1] = np.conj(c[l - 1, m - 1])
    return CorrelationMatrix(c, label=label)


def product_correlation(c1: CorrelationMatrix, c2: CorrelationMatrix) -> CorrelationMatrix:
    """D(l, m) = C1(l, m) C2(l, m), entrywise."""
    if c1.horizon != c2.horizon:
        raise ValueError("correlation horizons do not match")
    return CorrelationMatrix(c1.entries * c2.entries, label="D")


def s_lin_pt(d: CorrelationMatrix, eps: float, j: float, t: int) -> float:
    """Second-order perturbative linear entropy S0 * sum_{l,m<=t} D(l,m)."""
    if not 1 <= t <= d.horizon:
        raise ValueError(f"t={t} outside [1, {d.horizon}]")
    total = complex(np.sum(d.entries[:t, :t]))
    if abs(total.imag) > IMAG_TOL * max(abs(total.real), 1.0):
        raise ValueError(f"double sum has imaginary residue {total.imag}")
    return 2.0 * eps**2 * j**2 * total.real


def s_lin_pt_series(d: CorrelationMatrix, eps: float, j: float) -> np.ndarray:
    """S_lin^PT(t) for t = 0..horizon (index t), by incremental row sums."""
    horizon = d.horizon
    out = np.zeros(horizon + 1)
    running = 0.0
    for t in range(1, horizon + 1):
        row = d.entries[t - 1, : t - 1]
        increment = d.entries[t - 1, t - 1].real + 2.0 * np.sum(row.real)
        running += increment
        out[t] = 2.0 * eps**2 * j**2 * running
    return out


@dataclass(frozen=True)
class PhenoParams:
    """Inputs of the exponential-decay rate models.

    gamma: correlation decay rate per kick; omega: oscillation frequency
    (radians per kick); sigma1_sq/sigma2_sq: subsystem z-fluctuations.
    """

    gamma: float
    eps: float
    j: float
    omega: float = 0.0
    sigma1_sq: float = SIGMA_SAT_SQ
    sigma2_sq: float = SIGMA_SAT_SQ

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        for name in ("sigma1_sq", "sigma2_sq"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    @property
    def s0(self) -> float:
        return 2.0 * self.eps**2 * self.j**2

    @property
    def gamma0(self) -> float:
        return self.s0 * D_0


def pheno_entropy(p: PhenoParams, t: int) -> float:
    """Closed form of S0 D0 sum_{l,m<=t} e^(-gamma|l-m|).

    Equals S0 D0 [coth(gamma/2) t - (1 - e^(-gamma t))/(cosh gamma - 1)];
    the cosh gamma - 1 denominator is required for exact agreement with
    the double sum (cosh g - 1 = 2 sinh^2(g/2)).
    """
    g = p.gamma
    coth = 1.0 / np.tanh(g / 2.0)
    transient = (1.0 - np.exp(-g * t)) / (np.cosh(g) - 1.0)
    return p.s0 * D_0 * (coth * t - transient)


def production_rate(times, values, window: tuple[int, int] = (20, 100)) -> float:
    """OLS slope of S(t) over the inclusive time window."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    lo, hi = window
    mask = (times >= lo) & (times <= hi)
    if np.sum(mask) < 3:
        raise ValueError("fit window contains fewer than 3 points")
    t, s = times[mask], values[mask]
    slope = np.polyfit(t, s, 1)[0]
    return float(slope)


def gamma_eff(rate: float, rate0: float) -> float:
    """Invert rate = rate0 coth(gamma/2): gamma = ln((r+1)/(r-1))."""
    r = rate / rate0
    if r <= 1.0:
        raise RateOutOfDomainError(f"Gamma/Gamma0 = {r} <= 1 has no decay-rate solution")
    return float(np.log((r + 1.0) / (r - 1.0)))


def improved_rate(p: PhenoParams) -> float:
    """Oscillation-corrected rate for weakly chaotic tops.

    Gamma = (s1/ssat)^2 (s2/ssat)^2 / (1 + (sin(w/2)/sinh(g/2))^2)
            * Gamma0 coth(g/2); reduces to Gamma0 coth(g/2) at w=0 with
    saturated fluctuations.
    """
    g, w = p.gamma, p.omega
    amp = (p.sigma1_sq / SIGMA_SAT_SQ) * (p.sigma2_sq / SIGMA_SAT_SQ)
    osc = 1.0 + (np.sin(w / 2.0) / np.sinh(g / 2.0)) ** 2
    return float(amp / osc * p.gamma0 / np.tanh(g / 2.0))


def flow_rate(p: PhenoParams, t: float) -> float:
    """Continuous-time analogue: Gamma(t) = (2 S0 D0/gamma)(1 - e^(-gamma t))."""
    g = p.gamma
    return float(2.0 * p.s0 * D_0 / g * (1.0 - np.exp(-g * t)))


class OmegaEstimate(NamedTuple):
    omega: float
    degenerate: bool


def estimate_omega(d: CorrelationMatrix, pad: int = 4) -> OmegaEstimate:
    """Dominant oscillation frequency of D from its lag spectrum.

    Averages d(tau) = D(t, t-tau) over t in [horizon/2, horizon] to
    suppress transients, zero-pads the FFT by ``pad`` for peak
    resolution, and reports the peak |frequency| in [0, pi].  A flat
    spectrum returns omega = 0 with the degenerate flag set.
    """
    horizon = d.horizon
    if horizon < 16:
        raise ValueError("horizon must be >= 16 for a usable spectrum")
    t_lo = horizon // 2
    tau_max = t_lo - 1
    lags = np.zeros(tau_max + 1, dtype=complex)
    for tau in range(tau_max + 1):
        ts = np.arange(t_lo, horizon + 1)
        lags[tau] = np.mean(d.entries[ts - 1, ts - tau - 1])
    spectrum = np.abs(np.fft.fft(lags, n=pad * len(lags)))
    freqs = 2.0 * np.pi * np.fft.fftfreq(pad * len(lags))
    if np.max(spectrum) <= 0 or (np.max(spectrum) - np.min(spectrum)) <= 1e-12 * np.max(spectrum):
        return OmegaEstimate(0.0, True)
    peak = int(np.argmax(spectrum))
    return OmegaEstimate(float(abs(freqs[peak])), False)


def sigma_sq_estimate(c: CorrelationMatrix, window: tuple[int, int] = (20, 100)) -> float:
    """Time-averaged equal-time fluctuation C(l, l) over the fit window."""
    lo, hi = window
    hi = min(hi, c.horizon)
    if hi < lo:
        raise ValueError("window is outside the correlation horizon")
    return float(np.mean(np.diag(c.entries)[lo - 1 : hi].real))
