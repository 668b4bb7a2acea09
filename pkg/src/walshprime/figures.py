"""Matplotlib renderings of a report bundle.

Figures are drawn straight onto Figure objects (no pyplot, no global
backend state) so rendering works headless and leaves no per-process
residue.  Every function returns the list of files it wrote.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .reporting import ReportBundle, RunResult

_DPI = 150


def _new_figure(width: float = 7.0, height: float = 4.5):
    from matplotlib.figure import Figure

    return Figure(figsize=(width, height))


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    return path


def _semilogy_profile(ax, mass: np.ndarray, label: str, marker: str) -> None:
    levels = np.arange(mass.size)
    positive = mass > 0
    ax.semilogy(levels[positive], mass[positive], marker=marker, lw=1.2, ms=4, label=label)


def _render_level_profiles(run: RunResult, path: Path) -> Path:
    fig = _new_figure()
    ax = fig.subplots()
    _semilogy_profile(ax, run.lam_profile.mass, "von Mangoldt table", "o")
    _semilogy_profile(ax, run.smoothed_profile.mass, "smoothed table", "s")
    ax.set_xlabel("level |S|")
    ax.set_ylabel("squared-coefficient mass")
    ax.set_title(f"Spectral mass by level, n={run.n}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def _render_zoo_tails(run: RunResult, path: Path) -> Path:
    fig = _new_figure()
    ax = fig.subplots()
    for label, profile in run.zoo_profiles:
        mass = profile.mass
        total = mass.sum()
        if total <= 0:
            continue
        # T(k) = fraction of spectral mass strictly above level k
        tail = (total - np.cumsum(mass)) / total
        levels = np.arange(mass.size)
        keep = tail > 0
        ax.semilogy(levels[keep], tail[keep], lw=1.2, label=label)
    ax.set_xlabel("level k")
    ax.set_ylabel("mass fraction above level k")
    ax.set_title(f"Zoo spectral tails, n={run.n}")
    ax.legend(fontsize=7)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def _render_ratios(run: RunResult, path: Path) -> Path:
    fig = _new_figure(8.0, 4.5)
    ax = fig.subplots()
    labels = [rep.description for rep in run.correlations]
    ratios = [rep.theorem_ratio for rep in run.correlations]
    ax.bar(range(len(labels)), ratios, color="#4878a8")
    ax.axhline(1.0, color="black", lw=0.8, ls="--")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=7)
    ax.set_ylabel("correlation ratio")
    ax.set_title(f"Prime-mass ratio per zoo member, n={run.n}")
    ax.grid(True, axis="y", alpha=0.3)
    return _save(fig, path)


def _render_trends(bundle: ReportBundle, path: Path) -> Path:
    trends = bundle.trends
    fig = _new_figure(4.0 * len(trends), 3.4)
    axes = fig.subplots(1, len(trends), squeeze=False)[0]
    for ax, trend in zip(axes, trends):
        ns = [n for n, _ in trend.rows]
        vals = [v for _, v in trend.rows]
        if all(v > 0 for v in vals) and max(vals) / max(min(vals), 1e-300) > 50:
            ax.semilogy(ns, vals, marker="o")
        else:
            ax.plot(ns, vals, marker="o")
        ax.set_xlabel("n")
        ax.set_title(f"{trend.metric} ({trend.flag})", fontsize=9)
        ax.grid(True, alpha=0.3)
    return _save(fig, path)


def render_report_figures(bundle: ReportBundle, fig_dir: Path) -> list[Path]:
    """Render every applicable figure for the bundle into fig_dir."""
    fig_dir = Path(fig_dir)
    written: list[Path] = []
    if not bundle.runs:
        return written
    top = max(bundle.runs, key=lambda run: run.n)
    written.append(_render_level_profiles(top, fig_dir / "level_profiles.png"))
    if top.zoo_profiles:
        written.append(_render_zoo_tails(top, fig_dir / "zoo_tails.png"))
    if top.correlations:
        written.append(_render_ratios(top, fig_dir / "correlation_ratios.png"))
    if bundle.trends:
        written.append(_render_trends(bundle, fig_dir / "trends.png"))
    return written
