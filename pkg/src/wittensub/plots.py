"""Figure rendering for sweep reports.

Report runs write a log-log eigenvalue-vs-lambda figure next to the
delimited data so a result can be eyeballed without further tooling.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_sweep_figure(records, fit, title: str, path: str) -> None:
    """Log-log scatter of the sweep with the fitted power law overlaid."""
    lams = np.array([r.lam for r in records])
    mus = np.array([r.mu_min for r in records])
    ok = np.array([r.converged for r in records])

    fig, ax = plt.subplots(figsize=(5.5, 4.2))
    pos = mus > 0
    ax.loglog(
        lams[ok & pos], mus[ok & pos], "o", color="tab:blue",
        label="converged",
    )
    if np.any(~ok & pos):
        ax.loglog(
            lams[~ok & pos], mus[~ok & pos], "s", mfc="none",
            color="tab:red", label="unconverged",
        )
    if fit is not None:
        xs = np.geomspace(lams.min(), lams.max(), 64)
        ax.loglog(
            xs,
            np.exp(fit.intercept) * xs**fit.slope,
            "--",
            color="tab:gray",
            label=f"slope {fit.slope:.3f} (r2 {fit.r_squared:.3f})",
        )
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel(r"$\mu_{\min}$")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
