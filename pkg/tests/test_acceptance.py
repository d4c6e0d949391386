"""Acceptance suite: one test per top-level behavioral criterion.

Each test prints a single "criterion N: PASS/FAIL" line with its measured
numbers before asserting, so a plain log shows the full scoreboard.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from kickedtops import (
    D_0,
    SIGMA_SAT_SQ,
    CoherentParams,
    CoupledParams,
    CoupledState,
    PhenoParams,
    RateOutOfDomainError,
    SpinBasis,
    TopParams,
    build_floquet,
    coherent_state,
    correlation_matrix,
    coupled_step,
    entropy_series,
    estimate_omega,
    gamma_eff,
    improved_rate,
    lambda_sum,
    pheno_entropy,
    product_correlation,
    production_rate,
    s_lin_pt_series,
    sample_ensemble,
    sigma_sq_estimate,
    variance_series,
)
from kickedtops.classical import map_jacobian, map_points
from kickedtops.coupled import CoupledEvolver, entropies_from_amplitudes
from kickedtops.experiments import CHAOTIC_SEA_SET
from kickedtops.spin import wigner_d

J = 80.0
EPS_PT = 1e-4
INIT = CoherentParams(0.89, 0.63)
FIT_WINDOW = (20, 100)
WORKERS = 4


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")


def _gamma0(eps: float) -> float:
    return 2.0 * eps**2 * J**2 * D_0


# ---------------------------------------------------------------------------
# shared sweeps (module-scoped: computed once)


@pytest.fixture(scope="module")
def eps_sweep():
    """Final-time entropies of the symmetric coupled tops vs coupling."""
    eps_values = np.geomspace(1e-5, 3e-4, 8)

    def point(eps):
        series = entropy_series(CoupledParams(J, 3.0, 3.0, eps), INIT, INIT, 128)
        return series.s_lin[-1], series.s_vn[-1]

    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        results = list(pool.map(point, eps_values))
    s_lin, s_vn = np.array(results).T
    return eps_values, s_lin, s_vn


@pytest.fixture(scope="module")
def k_sweep():
    """Rates and Lyapunov sums over the chaotic-sea initial set vs k."""
    k_values = (3.0, 3.5, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0)

    def point(item):
        idx, (k, ic) = item
        init = CoherentParams(*ic)
        series = entropy_series(CoupledParams(J, k, k, EPS_PT), init, init, 100)
        rate = production_rate(series.times, series.s_lin, FIT_WINDOW)
        lam = lambda_sum(init, init, k, k, J**-0.5, n=100, horizon=100, seed=2 * idx)
        return k, rate / _gamma0(EPS_PT), lam

    items = list(enumerate((k, ic) for k in k_values for ic in CHAOTIC_SEA_SET))
    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        rows = list(pool.map(point, items))
    table = {k: [] for k in k_values}
    for k, ratio, lam in rows:
        table[k].append((ratio, lam))
    return {k: np.array(v) for k, v in table.items()}


@pytest.fixture(scope="module")
def weak_scan():
    """Theta2 scan across the torus at k = 3 in the perturbative regime."""
    k = 3.0
    theta2_grid = np.arange(1.95, 2.525, 0.05)
    c1 = correlation_matrix(TopParams(J, k), INIT, 100)
    lam1 = lambda_sum(INIT, INIT, k, k, J**-0.5, n=200, horizon=300, seed=3) / 2.0

    def point(item):
        idx, theta2 = item
        init2 = CoherentParams(float(theta2), 0.63)
        series = entropy_series(CoupledParams(J, k, k, EPS_PT), INIT, init2, 100)
        ratio = production_rate(series.times, series.s_lin, FIT_WINDOW) / _gamma0(EPS_PT)
        lam = lam1 + lambda_sum(init2, init2, k, k, J**-0.5, n=200, horizon=300, seed=11 + 2 * idx) / 2.0
        c2 = correlation_matrix(TopParams(J, k), init2, 100)
        omega = estimate_omega(product_correlation(c1, c2)).omega
        s2 = sigma_sq_estimate(c2, FIT_WINDOW)
        return ratio, lam, omega, s2

    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        rows = np.array(list(pool.map(point, list(enumerate(theta2_grid)))))
    return rows  # columns: Gamma/Gamma0, lambda_sum, omega, sigma2_sq


# ---------------------------------------------------------------------------
# criteria


def test_criterion_1_linear_entropy_scales_as_eps_squared(eps_sweep):
    eps_values, s_lin, _ = eps_sweep
    slope = np.polyfit(np.log(eps_values), np.log(s_lin), 1)[0]
    ok = abs(slope - 2.0) <= 0.1
    _report(1, ok, f"S_lin log-log slope {slope:.3f}, want 2.0 +/- 0.1")
    assert ok


def test_criterion_2_von_neumann_anomalous_scaling(eps_sweep):
    eps_values, _, s_vn = eps_sweep
    slope = np.polyfit(np.log(eps_values), np.log(s_vn), 1)[0]
    ok = abs(slope - 1.8) <= 0.15
    _report(2, ok, f"S_vN log-log slope {slope:.3f}, want 1.8 +/- 0.15")
    assert ok


def test_criterion_3_perturbation_theory_tracks_exact_entropy():
    k = 3.0
    series = entropy_series(CoupledParams(J, k, k, EPS_PT), INIT, INIT, 100)
    c = correlation_matrix(TopParams(J, k), INIT, 100)
    d = product_correlation(c, correlation_matrix(TopParams(J, k), INIT, 100, label="2"))
    pt = s_lin_pt_series(d, EPS_PT, J)
    lo, hi = FIT_WINDOW
    window = slice(lo, hi + 1)
    dev = np.max(np.abs(pt[window] - series.s_lin[window])) / np.max(series.s_lin[window])
    ok = dev <= 0.10
    _report(3, ok, f"max relative deviation {dev:.4f} over t in [20, 100], want <= 0.10")
    assert ok


def test_criterion_4_rate_saturation_with_increasing_kick(k_sweep):
    medians = {k: float(np.median(v[:, 0])) for k, v in k_sweep.items()}
    spreads = {
        k: float(np.percentile(v[:, 0], 75) - np.percentile(v[:, 0], 25))
        for k, v in k_sweep.items()
    }
    integer_k = [k for k in sorted(medians) if k == int(k)]
    in_band = all(1.0 <= medians[k] <= 1.5 for k in integer_k if k >= 7.0)
    # decreasing trend, allowing upticks within the per-initial-condition
    # scatter at the two k values involved
    monotone = all(
        medians[b] <= medians[a] + max(spreads[a], spreads[b])
        for a, b in zip(integer_k, integer_k[1:])
    )
    ok = in_band and monotone
    detail = ", ".join(f"k={k:g}: {medians[k]:.3f}" for k in integer_k)
    _report(4, ok, f"median Gamma/Gamma0 {detail}; band[k>=7]={in_band}, monotone={monotone}")
    assert ok


def test_criterion_5_effective_decay_rate_matches_lyapunov_sum(k_sweep):
    deviations = {}
    for k in (3.5, 4.0, 5.0, 6.0, 7.0, 8.0):
        rows = k_sweep[k]
        geffs = []
        for ratio, _ in rows:
            try:
                geffs.append(gamma_eff(ratio, 1.0))
            except RateOutOfDomainError:
                geffs.append(np.inf)
        med_g = float(np.median(geffs))
        med_l = float(np.median(rows[:, 1]))
        deviations[k] = abs(med_g - med_l) / med_l
    ok = all(dev <= 0.5 for dev in deviations.values())
    detail = ", ".join(f"k={k:g}: {dev:.2f}" for k, dev in deviations.items())
    _report(5, ok, f"|gamma_eff - lambda_sum|/lambda_sum medians {detail}, want all <= 0.5")
    assert ok


def test_criterion_6_weak_chaos_rate_is_linear_in_lyapunov_sum(weak_scan):
    ratios, lams = weak_scan[:, 0], weak_scan[:, 1]
    slope, intercept = np.polyfit(lams, ratios, 1)
    ok = 1.5 <= slope <= 3.0 and intercept < 0.0
    _report(6, ok, f"slope {slope:.3f} (want [1.5, 3.0]), intercept {intercept:.3f} (want < 0)")
    assert ok


def test_criterion_7_oscillation_corrected_model_improves_fit(weak_scan):
    base_err, improved_err = [], []
    for ratio, lam, omega, s2 in weak_scan:
        plain = 1.0 / np.tanh(lam / 2.0)
        p = PhenoParams(
            gamma=lam, eps=EPS_PT, j=J, omega=omega,
            sigma1_sq=SIGMA_SAT_SQ, sigma2_sq=min(s2, 1.0),
        )
        corrected = improved_rate(p) / p.gamma0
        base_err.append(abs(ratio - plain))
        improved_err.append(abs(ratio - corrected))
    mae_base = float(np.mean(base_err))
    mae_improved = float(np.mean(improved_err))
    ok = mae_improved <= 0.7 * mae_base
    _report(
        7,
        ok,
        f"MAE {mae_base:.4f} -> {mae_improved:.4f} "
        f"({100 * (1 - mae_improved / mae_base):.0f}% reduction, want >= 30%)",
    )
    assert ok


def test_criterion_8_property_suite():
    checks = {}

    u = build_floquet(TopParams(J, 3.0)).entries
    checks["floquet unitary"] = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= 1e-10
    d = wigner_d(SpinBasis(J), np.pi / 2).entries
    checks["d-matrix unitary"] = np.max(np.abs(d @ d.T - np.eye(d.shape[0]))) <= 1e-10

    xyz = sample_ensemble(INIT, 0.1, 16, 0).points
    for _ in range(10_000):
        xyz = map_points(xyz, 3.0)
    checks["sphere conserved"] = np.max(np.abs(np.linalg.norm(xyz, axis=1) - 1.0)) <= 1e-10

    ev = CoupledEvolver(CoupledParams(10.0, 3.0, 3.0, 0.3))
    basis = SpinBasis(10.0)
    amps = CoupledState.product(
        coherent_state(basis, INIT), coherent_state(basis, CoherentParams(1.3, -0.8))
    ).amplitudes
    for _ in range(12):
        amps = ev.step(amps)
    rho = amps @ amps.conj().T
    checks["rho trace"] = abs(np.trace(rho).real - 1.0) <= 1e-10
    checks["rho psd"] = np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) >= -1e-12
    s1 = entropies_from_amplitudes(amps)
    s2 = entropies_from_amplitudes(amps.T)
    checks["entropy symmetric"] = max(abs(s1[0] - s2[0]), abs(s1[1] - s2[1])) <= 1e-10

    c1 = correlation_matrix(TopParams(15.0, 3.0), INIT, 25)
    c2 = correlation_matrix(TopParams(15.0, 3.0), CoherentParams(1.481, -1.4), 25)
    dmat = product_correlation(c1, c2)
    checks["C conj symmetric"] = np.max(np.abs(c1.entries - c1.entries.conj().T)) <= 1e-12
    checks["D conj symmetric"] = np.max(np.abs(dmat.entries - dmat.entries.conj().T)) <= 1e-12
    total = np.sum(dmat.entries)
    checks["sum D real"] = abs(total.imag) <= 1e-10 * abs(total.real)

    rng = np.random.default_rng(1)
    closed_ok = True
    for _ in range(5):
        g, t = float(rng.uniform(0.1, 2.0)), int(rng.integers(5, 120))
        p = PhenoParams(gamma=g, eps=1e-4, j=J)
        l = np.arange(1, t + 1)
        brute = p.s0 * D_0 * np.sum(np.exp(-g * np.abs(l[:, None] - l[None, :])))
        closed_ok &= abs(pheno_entropy(p, t) - brute) <= 1e-10 * brute
    checks["closed form = double sum"] = closed_ok

    jsmall, k1, k2, epsc = 1.5, 2.0, 3.0, 0.3
    u1 = build_floquet(TopParams(jsmall, k1))
    u2 = build_floquet(TopParams(jsmall, k2))
    bsmall = SpinBasis(jsmall)
    m = bsmall.m
    dense = np.diag(np.exp(-1j * epsc * np.outer(m, m).ravel() / jsmall)) @ np.kron(
        u1.entries, u2.entries
    )
    psi = CoupledState.product(
        coherent_state(bsmall, CoherentParams(0.9, 0.4)),
        coherent_state(bsmall, CoherentParams(1.3, -0.8)),
    )
    vec = psi.amplitudes.ravel()
    for _ in range(5):
        vec = dense @ vec
        psi = coupled_step(psi, u1, u2, epsc)
    checks["kron step = dense oracle"] = np.max(np.abs(psi.amplitudes.ravel() - vec)) <= 1e-12

    gammas = np.linspace(0.1, 10.0, 25)
    checks["gamma_eff inverse"] = all(
        abs(gamma_eff(1.0 / np.tanh(g / 2.0), 1.0) - g) <= 1e-12 * max(g, 1.0)
        for g in gammas
    )

    series = entropy_series(CoupledParams(20.0, 3.0, 3.0, 0.0), INIT, INIT, 30)
    checks["zero coupling zero entropy"] = (
        max(np.max(np.abs(series.s_lin)), np.max(np.abs(series.s_vn))) <= 1e-10
    )

    point = np.array([0.53, -0.62, 0.58])
    point /= np.linalg.norm(point)
    jac = map_jacobian(point, 3.0)
    h = 1e-6
    fd = np.empty((3, 3))
    for col in range(3):
        dx = np.zeros(3)
        dx[col] = h
        xp, yp, zp = point + dx
        xm, ym, zm = point - dx
        cp, sp = np.cos(3.0 * xp), np.sin(3.0 * xp)
        cm, sm = np.cos(3.0 * xm), np.sin(3.0 * xm)
        fp = np.array([zp * cp + yp * sp, -zp * sp + yp * cp, -xp])
        fm = np.array([zm * cm + ym * sm, -zm * sm + ym * cm, -xm])
        fd[:, col] = (fp - fm) / (2.0 * h)
    checks["analytic jacobian = fd"] = np.max(np.abs(jac - fd)) <= 1e-5

    failed = [name for name, ok in checks.items() if not ok]
    ok = not failed
    _report(8, ok, f"{len(checks)} properties, failed: {failed or 'none'}")
    assert ok


def test_criterion_9_variance_saturation():
    lo, hi = FIT_WINDOW
    qu = variance_series(TopParams(J, 3.0), INIT, hi)
    qu_avg = float(np.mean(qu.values[lo : hi + 1]))
    ens = sample_ensemble(INIT, J**-0.5, 1000, 3)
    from kickedtops import ensemble_variance_series

    cl = ensemble_variance_series(ens, 3.0, hi)
    cl_avg = float(np.mean(cl.values[lo : hi + 1]))
    ok = 0.28 <= qu_avg <= 0.38 and 0.28 <= cl_avg <= 0.38
    _report(9, ok, f"time-averaged sigma^2 quantum {qu_avg:.4f}, classical {cl_avg:.4f}, want [0.28, 0.38]")
    assert ok
