"""Delimited output and figure rendering.

CSV files use one header line and scientific notation with 17 significant
digits, so every double round-trips bit-for-bit through the files.  Figures
are optional companions rendered with matplotlib's file backend.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence

from .bench import BenchReport
from .conserved import ConservedTriple, DriftSeries
from .core import Point2, Trajectory

__all__ = [
    "fmt", "write_trajectory", "read_trajectory", "write_drift",
    "write_invariants", "write_bench", "render_curve_figure",
    "render_drift_figure",
]


def fmt(x: float) -> str:
    """Scientific notation with 17 significant digits (lossless for doubles)."""
    return f"{x:.16e}"


def write_trajectory(path: Path | str, traj: Trajectory) -> None:
    lines = ["k,x,u"]
    lines += [f"{k},{fmt(p.x)},{fmt(p.u)}" for k, p in enumerate(traj.points)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory(path: Path | str, meta: dict | None = None) -> Trajectory:
    rows = Path(path).read_text().strip().splitlines()
    pts = []
    for line in rows[1:]:
        _, x, u = line.split(",")
        pts.append(Point2(float(x), float(u)))
    return Trajectory(pts, meta or {})


def write_drift(path: Path | str, series: DriftSeries) -> None:
    lines = ["k,dC1,dC2,dC3"]
    for i in range(len(series.dc1)):
        lines.append(f"{series.k0 + i},{fmt(series.dc1[i])},"
                     f"{fmt(series.dc2[i])},{fmt(series.dc3[i])}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_invariants(path: Path | str, triples: Sequence[ConservedTriple],
                     k0: int) -> None:
    lines = ["k,C1,C2,C3"]
    for i, c in enumerate(triples):
        lines.append(f"{k0 + i},{fmt(c.c1)},{fmt(c.c2)},{fmt(c.c3)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_bench(path: Path | str, report: BenchReport) -> None:
    lines = ["scale,steps,err_x,err_u,eoc_x,eoc_u"]
    for r in report.rows:
        lines.append(f"{fmt(r.scale)},{r.steps},{fmt(r.err_x)},{fmt(r.err_u)},"
                     f"{fmt(r.eoc_x)},{fmt(r.eoc_u)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_exact_samples(path: Path | str,
                        samples: Iterable[tuple[float, float, float]]) -> None:
    lines = ["parameter,x,u"]
    lines += [f"{fmt(s)},{fmt(x)},{fmt(u)}" for s, x, u in samples]
    Path(path).write_text("\n".join(lines) + "\n")


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_curve_figure(path: Path | str,
                        curves: Sequence[tuple[str, Sequence[Point2]]],
                        title: str = "") -> None:
    """Plot labelled (x, u) polylines to a file."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    styles = ["-", "--", ":", "-."]
    for i, (label, pts) in enumerate(curves):
        ax.plot([p.x for p in pts], [p.u for p in pts],
                styles[i % len(styles)], label=label, linewidth=1.2)
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_drift_figure(path: Path | str, series: DriftSeries,
                        title: str = "") -> None:
    """Semilog plot of the three conserved-quantity deviations."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ks = list(range(series.k0, series.k0 + len(series.dc1)))
    floor = 1e-18
    for label, d in (("|ΔC1|", series.dc1), ("|ΔC2|", series.dc2),
                     ("|ΔC3|", series.dc3)):
        ax.semilogy(ks, [max(v, floor) for v in d], label=label, linewidth=1.0)
    ax.set_xlabel("k")
    ax.set_ylabel("deviation")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bench_figure(path: Path | str, report: BenchReport,
                        title: str = "") -> None:
    """Log-log error-vs-scale plot with a second-order guide line."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    scales = [r.scale for r in report.rows]
    if not all(math.isnan(r.err_x) for r in report.rows):
        ax.loglog(scales, [r.err_x for r in report.rows], "o-", label="err_x")
    ax.loglog(scales, [r.err_u for r in report.rows], "s-", label="err_u")
    anchor = report.rows[-1]
    guide = [anchor.err_u * (s / anchor.scale) ** 2 for s in scales]
    ax.loglog(scales, guide, "k--", linewidth=0.8, label="order 2")
    ax.set_xlabel("scale")
    ax.set_ylabel("max error")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
