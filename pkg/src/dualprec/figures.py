"""Matplotlib figures emitted alongside the delimited reports."""

from __future__ import annotations

from os import PathLike

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .precision import ErrorReport
from .reports import BenchReport

__all__ = ["bench_figure", "analyze_figure", "collapse_figure"]

_VARIANT_COLORS = {
    "emulated64": "#c44e52",
    "native64": "#4c72b0",
    "plain32": "#8c8c8c",
}


def bench_figure(report: BenchReport, path: str | PathLike) -> None:
    """Render time and framerate per dataset, one bar group per variant."""
    variants = []
    for r in report.rows:
        if r.variant not in variants:
            variants.append(r.variant)
    datasets = []
    for r in report.rows:
        label = f"{r.dataset}\n{r.vertices:,}"
        if label not in datasets:
            datasets.append(label)
    fig, (ax_ms, ax_fps) = plt.subplots(1, 2, figsize=(max(8, 1.4 * len(datasets)), 4.5))
    x = np.arange(len(datasets))
    width = 0.8 / max(1, len(variants))
    for vi, variant in enumerate(variants):
        ms = []
        fps = []
        for label in datasets:
            row = next(
                (r for r in report.rows
                 if f"{r.dataset}\n{r.vertices:,}" == label and r.variant == variant),
                None,
            )
            ms.append(row.gpu_render_ms if row and row.supported else np.nan)
            fps.append(row.fps if row and row.supported else np.nan)
        offset = (vi - (len(variants) - 1) / 2) * width
        color = _VARIANT_COLORS.get(variant)
        ax_ms.bar(x + offset, ms, width, label=variant, color=color)
        ax_fps.bar(x + offset, fps, width, label=variant, color=color)
    for ax, title in ((ax_ms, "Rendering time (ms)"), (ax_fps, "Framerate (fps)")):
        ax.set_xticks(x)
        ax.set_xticklabels(datasets, fontsize=7)
        ax.set_title(title)
        ax.legend(fontsize=8)
    ax_ms.set_yscale("log")
    fig.suptitle(f"dualprec bench — {report.device}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def analyze_figure(reports: dict[str, ErrorReport], path: str | PathLike) -> None:
    """Max pixel error per precision path, log scale."""
    names = list(reports)
    values = [max(reports[n].max_pixel_error, 1e-18) for n in names]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(names, values, color=["#c44e52", "#4c72b0"][: len(names)])
    ax.set_yscale("log")
    ax.set_ylabel("max pixel error (px)")
    ax.set_title("Screen-space error vs binary64 reference")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def collapse_figure(
    rows: list[tuple[str, float, float]], path: str | PathLike
) -> None:
    """Collapse ratio against zoom, one line per precision.

    rows: (precision, zoom, ratio) triples.
    """
    fig, ax = plt.subplots(figsize=(5, 4))
    precisions = sorted({r[0] for r in rows})
    for precision in precisions:
        pts = sorted((zoom, ratio) for p, zoom, ratio in rows if p == precision)
        ax.plot(
            [z for z, _ in pts],
            [ratio for _, ratio in pts],
            marker="o",
            label=precision,
        )
    ax.set_xscale("log")
    ax.set_xlabel("zoom (window half-width)")
    ax.set_ylabel("adjacent-sample collapse ratio")
    ax.set_ylim(-0.05, 1.05)
    ax.invert_xaxis()
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
