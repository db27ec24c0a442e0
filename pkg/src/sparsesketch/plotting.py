"""Figure rendering for sweep reports.

Draws the error-versus-queries curves: RMS markers per budget, a shaded
10 to 90 percent band over trials, and the dotted bound envelopes, one panel
for the recovery error and one for the full approximation error.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_sweep_figure(report, path):
    """Render a two-panel log-log error plot for one sweep report."""
    aggs = report.aggregates
    if not aggs:
        raise ValueError("report has no aggregates to plot")
    m = [a.m for a in aggs]
    panels = [
        ("recovery error", "rms_recovery_error", "q10_recovery_error",
         "q90_recovery_error", "bound_recovery"),
        ("approximation error", "rms_approx_error", "q10_approx_error",
         "q90_approx_error", "bound_approx"),
    ]
    fig, axes = plt.subplots(ncols=2, figsize=(9, 3.6), sharex=True)
    for ax, (title, rms_key, q10_key, q90_key, bound_key) in zip(axes, panels):
        rms = [getattr(a, rms_key) for a in aggs]
        q10 = [getattr(a, q10_key) for a in aggs]
        q90 = [getattr(a, q90_key) for a in aggs]
        bound = [getattr(a, bound_key) for a in aggs]
        ax.fill_between(m, q10, q90, alpha=0.25, color="tab:blue", linewidth=0)
        ax.plot(m, rms, "o-", color="tab:blue", label="RMS over trials")
        if all(math.isfinite(b) and b > 0 for b in bound):
            ax.plot(m, bound, ":", color="black", label="bound")
        ax.set_xscale("log")
        if any(v > 0 for v in rms):
            ax.set_yscale("log")
        ax.set_xlabel("queries m")
        ax.set_title(title)
        ax.legend(fontsize=8)
    cfg = report.config
    fig.suptitle(f"{cfg.algorithm}: {cfg.matrix} on {cfg.pattern}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
