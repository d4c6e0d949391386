"""Render functions: CSV tables in, image file plus plotted data series out.

Rendering never recomputes physics; each function is a pure transform from
the documented CSV schemas to a figure. Every renderer returns the exact
data series it drew, keyed by series name, so tests can compare numbers
instead of pixels.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipes import FigureRecipe, RecipeError, read_table

DEFAULT_DPI = 150


def _paths(recipe: FigureRecipe, role: str, base: Path) -> list[Path]:
    value = recipe.inputs.get(role)
    if value is None:
        raise RecipeError(f"{recipe.figure}: missing input role {role!r}")
    items = value if isinstance(value, list) else [value]
    return [base / item for item in items]


def _save(fig, recipe: FigureRecipe, base: Path) -> Path:
    out = base / recipe.output
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=int(recipe.options.get("dpi", DEFAULT_DPI)))
    plt.close(fig)
    return out


def render_fig1(recipe: FigureRecipe, base: Path) -> dict:
    """Phase-space quasiprobability heatmap."""
    table = read_table(_paths(recipe, "husimi", base)[0], "husimi")
    theta = np.array(table["theta"])
    phi = np.array(table["phi"])
    q = np.array(table["Q"])
    n_theta = len(np.unique(theta))
    n_phi = len(q) // n_theta
    fig, ax = plt.subplots(figsize=(6, 4))
    grid = q.reshape(n_theta, n_phi)
    ax.pcolormesh(
        phi.reshape(n_theta, n_phi),
        theta.reshape(n_theta, n_phi),
        grid,
        shading="auto",
    )
    ax.set_xlabel(r"$\phi$")
    ax.set_ylabel(r"$\theta$")
    ax.set_title("Husimi distribution")
    _save(fig, recipe, base)
    return {"Q": q.tolist()}


def render_fig2(recipe: FigureRecipe, base: Path) -> dict:
    """Classical Poincare section."""
    table = read_table(_paths(recipe, "poincare", base)[0], "poincare")
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(table["phi"], table["theta"], s=0.5, c=table["orbit_id"], cmap="tab20")
    ax.set_xlabel(r"$\phi$")
    ax.set_ylabel(r"$\theta$")
    ax.set_title("Poincaré section")
    _save(fig, recipe, base)
    return {"theta": table["theta"], "phi": table["phi"]}


def render_fig3(recipe: FigureRecipe, base: Path) -> dict:
    """Overlaid z-variance curves for several kick strengths."""
    labels = recipe.options.get("labels")
    paths = _paths(recipe, "variance", base)
    if labels is None:
        labels = [p.stem for p in paths]
    fig, ax = plt.subplots(figsize=(6, 4))
    series = {}
    for path, label in zip(paths, labels):
        table = read_table(path, "variance")
        ax.plot(table["t"], table["sigma2"], label=str(label))
        series[str(label)] = table["sigma2"]
    ax.axhline(1.0 / 3.0, ls=":", c="gray", lw=1)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\sigma^2$")
    ax.legend()
    _save(fig, recipe, base)
    return series


def render_fig4(recipe: FigureRecipe, base: Path) -> dict:
    """Subsystem entropy growth, linear and von Neumann."""
    table = read_table(_paths(recipe, "entropy", base)[0], "entropy")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(table["t"], table["S_lin"], label="linear entropy")
    ax.plot(table["t"], table["S_vN"], label="von Neumann entropy")
    ax.set_xlabel("t")
    ax.set_ylabel("S")
    ax.legend()
    _save(fig, recipe, base)
    return {"S_lin": table["S_lin"], "S_vN": table["S_vN"]}


def render_fig5(recipe: FigureRecipe, base: Path) -> dict:
    """Final entropy vs coupling on log-log axes with slope guides."""
    table = read_table(_paths(recipe, "sweep_eps", base)[0], "sweep_eps")
    eps = np.array(table["eps"])
    s_lin = np.array(table["S_lin"])
    s_vn = np.array(table["S_vN"])
    # guide lines anchored at the smallest coupling
    guide2 = s_lin[0] * (eps / eps[0]) ** 2.0
    guide18 = s_vn[0] * (eps / eps[0]) ** 1.8
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(eps, s_lin, "o", label="linear entropy")
    ax.loglog(eps, s_vn, "s", label="von Neumann entropy")
    ax.loglog(eps, guide2, "--", label="slope 2 guide")
    ax.loglog(eps, guide18, ":", label="slope 1.8 guide")
    ax.set_xlabel(r"$\epsilon$")
    ax.set_ylabel("S(final)")
    ax.legend()
    _save(fig, recipe, base)
    return {
        "eps": eps.tolist(),
        "S_lin": s_lin.tolist(),
        "S_vN": s_vn.tolist(),
        "slope2_guide": guide2.tolist(),
        "slope18_guide": guide18.tolist(),
    }


def render_fig6(recipe: FigureRecipe, base: Path) -> dict:
    """Entropy growth overlaid for several coupling strengths."""
    labels = recipe.options.get("labels")
    paths = _paths(recipe, "entropy", base)
    if labels is None:
        labels = [p.stem for p in paths]
    fig, ax = plt.subplots(figsize=(6, 4))
    series = {}
    for path, label in zip(paths, labels):
        table = read_table(path, "entropy")
        ax.semilogy(
            table["t"],
            np.maximum(table["S_lin"], 1e-300),
            label=str(label),
        )
        series[str(label)] = table["S_lin"]
    ax.set_xlabel("t")
    ax.set_ylabel("linear entropy")
    ax.legend()
    _save(fig, recipe, base)
    return series


def render_fig7(recipe: FigureRecipe, base: Path) -> dict:
    """Correlation product: equal-time value vs t and mean lag profile."""
    table = read_table(_paths(recipe, "correlation", base)[0], "correlation")
    t = np.array(table["t"])
    tau = np.array(table["tau"])
    re = np.array(table["ReD"])
    diag_t = t[tau == 0]
    diag = re[tau == 0]
    lags = np.unique(tau)
    profile = np.array([np.mean(re[tau == lag]) for lag in lags])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.plot(diag_t, diag)
    ax1.set_xlabel("t")
    ax1.set_ylabel("Re D(t, t)")
    ax2.plot(lags, profile, "o-")
    ax2.set_xlabel(r"$\tau$")
    ax2.set_ylabel(r"mean Re D(t, t$-\tau$)")
    _save(fig, recipe, base)
    return {"diagonal": diag.tolist(), "lag_profile": profile.tolist()}


def render_fig8(recipe: FigureRecipe, base: Path) -> dict:
    """Production rate vs Lyapunov sum with a least-squares line."""
    table = read_table(_paths(recipe, "fit_report", base)[0], "fit_report")
    lam = np.array(table["lambda_sum"])
    ratio = np.array(table["Gamma_over_Gamma0"])
    slope, intercept = np.polyfit(lam, ratio, 1)
    xs = np.linspace(float(lam.min()), float(lam.max()), 50)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(lam, ratio, "o")
    ax.plot(xs, slope * xs + intercept, "--", label=f"fit: {slope:.2f} x {intercept:+.2f}")
    ax.set_xlabel(r"$\lambda_{sum}$")
    ax.set_ylabel(r"$\Gamma/\Gamma_0$")
    ax.legend()
    _save(fig, recipe, base)
    return {
        "lambda_sum": lam.tolist(),
        "Gamma_over_Gamma0": ratio.tolist(),
        "fit": [float(slope), float(intercept)],
    }


def render_fig9(recipe: FigureRecipe, base: Path) -> dict:
    """Weak-chaos scan: fluctuation/rate diagnostics and rate models."""
    table = read_table(_paths(recipe, "fit_report", base)[0], "fit_report")
    theta = np.array(table["theta"])
    lam = np.array(table["lambda_sum"])
    omega = np.array(table["omega"])
    s2 = np.array(table["sigma2_sq_over_sigma_sat_sq"])
    ratio = np.array(table["Gamma_over_Gamma0"])
    plain = 1.0 / np.tanh(lam / 2.0)
    improved = s2 * plain / (1.0 + (np.sin(omega / 2.0) / np.sinh(lam / 2.0)) ** 2)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.plot(theta, s2, "s-", label=r"$(\sigma_2/\sigma_{sat})^2$")
    ax1.plot(theta, lam, "o-", label=r"$\lambda_{sum}$")
    ax1.plot(theta, omega, "^-", label=r"$\omega$")
    ax1.set_xlabel(r"$\theta_2$")
    ax1.legend()
    ax2.plot(theta, ratio, "s-", label="measured")
    ax2.plot(theta, plain, "o--", label="decay model")
    ax2.plot(theta, improved, "^:", label="oscillation-corrected model")
    ax2.set_xlabel(r"$\theta_2$")
    ax2.set_ylabel(r"$\Gamma/\Gamma_0$")
    ax2.legend()
    _save(fig, recipe, base)
    return {
        "measured": ratio.tolist(),
        "plain_model": plain.tolist(),
        "improved_model": improved.tolist(),
    }


RENDERERS = {
    "fig1": render_fig1,
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
    "fig6": render_fig6,
    "fig7": render_fig7,
    "fig8": render_fig8,
    "fig9": render_fig9,
}


def render(recipe: FigureRecipe, base: str | Path = ".") -> dict:
    """Render one recipe; input/output paths resolve relative to ``base``.

    Returns the plotted data series keyed by name.
    """
    return RENDERERS[recipe.figure](recipe, Path(base))
