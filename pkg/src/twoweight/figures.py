"""Figure rendering for the report path.

Every plot is drawn from the same report dictionaries the CLI writes as
JSON/CSV, so a figure never contains information the delimited output does
not.  All rendering is headless (Agg) and writes PNG files.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = [
    "save_bump_profile",
    "save_battery_ratios",
    "save_checks_panel",
    "save_sweep",
    "save_suite_summary",
    "save_tail_curve",
    "save_function_overlay",
    "report_figures",
    "sweep_figures",
    "suite_figures",
]

_DPI = 130


def _finish(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_bump_profile(bump: dict, path, title: str = "per-cube bump products") -> Optional[Path]:
    """Scatter of the two per-cube term products against cube center,
    point size tracking cube side; needs the per-cube table."""
    table = bump.get("per_cube")
    if not table:
        return None
    centers = [a + side / 2.0 for (a, side), _, _ in table]
    sides = [side for (a, side), _, _ in table]
    t1 = [row[1] for row in table]
    t2 = [row[2] for row in table]
    smin = min(sides)
    sizes = [8 + 40 * math.log2(s / smin + 1) for s in sides]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.scatter(centers, t1, s=sizes, alpha=0.55, label="term 1 products")
    ax.scatter(centers, t2, s=sizes, alpha=0.55, marker="s", label="term 2 products")
    if max(t1 + t2) > 0:
        ax.set_yscale("symlog", linthresh=max(max(t1 + t2) * 1e-6, 1e-12))
    ax.set_xlabel("cube center")
    ax.set_ylabel("term product")
    ax.set_title(f"{title} (K = {bump.get('K', float('nan')):.6g})")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_battery_ratios(estimate: dict, path) -> Optional[Path]:
    """Horizontal bars of the weighted norm ratios across the battery."""
    table = estimate.get("table")
    if not table:
        return None
    names = [t[0] for t in table]
    ratios = [t[1] for t in table]
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(names) + 1.5))
    ax.barh(range(len(names)), ratios)
    ax.set_yticks(range(len(names)), names, fontsize=8)
    ax.axvline(estimate["lower_bound"], ls="--", lw=1, color="k")
    ax.set_xlabel("||Tf|| ratio")
    ax.set_title(f"battery ratios (best = {estimate['lower_bound']:.4g} by {estimate['witness']})")
    return _finish(fig, path)


def save_checks_panel(report: dict, path) -> Path:
    """Traffic-light panel of the hard and informational checks."""
    checks = report["checks"]
    fig, ax = plt.subplots(figsize=(7, 0.4 * len(checks) + 1.2))
    colors = {"pass": "#2a9d48", "fail": "#c23a3a", "informational": "#888888"}
    for i, c in enumerate(reversed(checks)):
        ax.barh(i, 1.0, color=colors[c["status"]], alpha=0.85)
        ax.text(0.02, i, f"{c['name']} [{c['status']}]", va="center", fontsize=8, color="w")
    ax.set_xlim(0, 1)
    ax.set_yticks([])
    ax.set_xticks([])
    name = report["scenario"].get("name", "scenario")
    verdict = "PASS" if report["all_hard_pass"] else "FAIL"
    ax.set_title(f"{name}: hard checks {verdict}")
    return _finish(fig, path)


def save_sweep(sweep: dict, path) -> Path:
    """Convergence of the constants across grid depth."""
    rows = sweep["rows"]
    depths = [r["depth"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    for key, marker in (
        ("K_symbol", "o"),
        ("necessity_first", "s"),
        ("necessity_second", "^"),
        ("C_hat", "d"),
    ):
        ax.plot(depths, [r[key] for r in rows], marker=marker, label=key)
    ax.set_xlabel("grid depth (samples = 2^depth)")
    ax.set_ylabel("constant")
    ax.set_title(f"refinement sweep: {sweep.get('scenario_name', '')}")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_suite_summary(summary: dict, path) -> Path:
    """Per-scenario bump constants and norm lower bounds, pass/fail coloring."""
    scenarios = summary["scenarios"]
    names = [r["scenario"]["name"] for r in scenarios]
    Ks = [r["K_symbol"]["K"] for r in scenarios]
    Cs = [r["info"]["norm_estimate"]["lower_bound"] for r in scenarios]
    ok = [r["all_hard_pass"] for r in scenarios]
    x = range(len(names))
    fig, ax = plt.subplots(figsize=(max(7, 1.4 * len(names)), 4))
    ax.bar([i - 0.2 for i in x], Ks, width=0.4, label="K (symbol-aware)")
    ax.bar([i + 0.2 for i in x], Cs, width=0.4, label="C-hat (battery)")
    for i, good in enumerate(ok):
        ax.text(i, 0, "ok" if good else "FAIL", ha="center", va="bottom", fontsize=8,
                color="#2a9d48" if good else "#c23a3a")
    ax.set_xticks(list(x), names, rotation=20, ha="right", fontsize=8)
    ax.set_yscale("log")
    ax.set_title("suite summary")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_tail_curve(tail_report: dict, path, label: str = "") -> Path:
    """Cumulative tail integral against the cutoff, log-x."""
    pts = tail_report["tail_values"]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.semilogx([t for t, _ in pts], [v for _, v in pts], marker="o")
    ax.set_xlabel("T")
    ax.set_ylabel("integral to T")
    ax.set_title(f"tail integral ({label}) verdict: {tail_report['verdict']}")
    return _finish(fig, path)


def save_function_overlay(curves: Sequence, path, title: str = "") -> Path:
    """Overlay of named sampled functions: ``curves = [(name, x, y), ...]``."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for name, x, y in curves:
        ax.plot(x, y, label=name, lw=1)
    ax.set_xlabel("x")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def report_figures(report: dict, out_dir, stem: str) -> List[Path]:
    """All figures for a single verdict report."""
    out_dir = Path(out_dir)
    paths = []
    p = save_bump_profile(report["K_symbol"], out_dir / f"{stem}_bump_profile.png")
    if p:
        paths.append(p)
    sep = report["info"].get("separated_K")
    if sep and sep.get("per_cube"):
        p = save_bump_profile(
            sep, out_dir / f"{stem}_separated_profile.png", title="separated preset products"
        )
        if p:
            paths.append(p)
    p = save_battery_ratios(report["info"]["norm_estimate"], out_dir / f"{stem}_battery.png")
    if p:
        paths.append(p)
    paths.append(save_checks_panel(report, out_dir / f"{stem}_checks.png"))
    return paths


def sweep_figures(sweep: dict, out_dir, stem: str) -> List[Path]:
    return [save_sweep(sweep, Path(out_dir) / f"{stem}_sweep.png")]


def suite_figures(summary: dict, out_dir, stem: str = "suite") -> List[Path]:
    paths = [save_suite_summary(summary, Path(out_dir) / f"{stem}_summary.png")]
    for rep in summary["scenarios"]:
        name = rep["scenario"]["name"].replace(" ", "_")
        paths.extend(report_figures(rep, out_dir, f"{stem}_{name}"))
    return paths
