"""Figure rendering for the CLI report paths.

Each function draws onto an explicit Figure with the Agg canvas, so no
global pyplot state is touched and the package stays headless-safe.
Figures are optional companions to the delimited output, enabled with
--figures-dir; consumers that only want data never import this module.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from . import engine
from .counting import CountingReport


def _new_figure(width: float = 6.4, height: float = 4.8) -> Figure:
    fig = Figure(figsize=(width, height), dpi=120)
    FigureCanvasAgg(fig)
    return fig


def save_resonance_figure(zeros: Iterable[engine.ResonanceZero],
                          path: str) -> None:
    """Scatter of resonances in the upper half plane, colored by order."""
    zeros = list(zeros)
    fig = _new_figure()
    ax = fig.add_subplot(111)
    if zeros:
        xs = [z.lambda0.real for z in zeros]
        ys = [z.lambda0.imag for z in zeros]
        nus = [z.channel.nu for z in zeros]
        sc = ax.scatter(xs, ys, c=nus, s=12, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="channel order")
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.set_title("resonances (upper-half-plane coordinates)")
    ax.grid(True, alpha=0.3)
    fig.savefig(path, format="png")


def save_counting_figure(report: CountingReport, path: str) -> None:
    """Log-log counting function with the fitted power law overlaid."""
    fig = _new_figure()
    ax = fig.add_subplot(111)
    rs = [r for r, n in report.samples if n > 0]
    ns = [n for _, n in report.samples if n > 0]
    ax.loglog(rs, ns, "o-", ms=4, label="n(r)")
    if report.fitted_order is not None and rs:
        r0, n0 = rs[-1], ns[-1]
        fit = [n0 * (r / r0) ** report.fitted_order for r in rs]
        ax.loglog(rs, fit, "--",
                  label=f"slope {report.fitted_order:.3f}")
    ax.set_xlabel("r")
    ax.set_ylabel("zero count")
    ax.set_title(f"counting function, d={report.potential.d}, "
                 f"sheet {report.sheet}")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.savefig(path, format="png")


def save_region_figure(pairs: Sequence[tuple[float, complex]],
                       path: str) -> None:
    """Upper eye boundary in the z plane."""
    fig = _new_figure(6.4, 3.6)
    ax = fig.add_subplot(111)
    ax.plot([z.real for _, z in pairs], [z.imag for _, z in pairs], "-")
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title("upper boundary of the eye region")
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    fig.savefig(path, format="png")


def save_rouche_figure(boxes: Sequence[engine.RoucheBox],
                       margins: Sequence[float], path: str) -> None:
    """Margin per enclosure box, with the zero line marked."""
    fig = _new_figure()
    ax = fig.add_subplot(111)
    ks = [box.k for box in boxes]
    ax.plot(ks, margins, "o-", ms=4)
    ax.axhline(0.0, color="r", lw=1.0)
    ax.set_xlabel("box index k")
    ax.set_ylabel("min(|g| - |f - g|) on boundary")
    ax.set_title("dominance margin per enclosure box")
    ax.grid(True, alpha=0.3)
    fig.savefig(path, format="png")
