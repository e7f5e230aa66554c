"""Curve tables for the five comparison figures and bundle generation.

Each bundle is a directory holding one CSV per curve, a standalone
``plot.py`` and, unless disabled, the rendered PNG. Bundles are assembled in
a temporary directory and moved into place only when every curve succeeded.
"""

import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .conditions import InitialCondition
from .csvio import atomic_write_text, write_field_csv
from .plotting import plot_script, render_png
from .solve import solve_field

__all__ = ["Curve", "FigureSpec", "FIGURES", "build_bundle"]


@dataclass(frozen=True)
class Curve:
    file: str
    ic: InitialCondition
    t: float
    regime: str
    label: str
    style: str = "-"
    color: str = None


@dataclass(frozen=True)
class FigureSpec:
    name: str
    title: str
    x_range: tuple
    curves: tuple
    # chosen so that x = 0 is a grid node
    n_points: int = 401


_COLORS = ("k", "C0", "C1", "C3")


def _time_series(ic, times, stem, label):
    return tuple(
        Curve(f"{stem}_t{t:g}.csv", ic, t, "R", f"{label}, t = {t:g}", color=c)
        for t, c in zip(times, _COLORS)
    )


def _fig5():
    ic = InitialCondition.levy()
    curves = [Curve("levy_ic.csv", ic, 0.0, "R", "initial condition", ":", "k")]
    for t, c in zip((0.125, 0.5, 1.5), _COLORS[1:]):
        curves.append(Curve(f"levy_R_t{t:g}.csv", ic, t, "R", f"R, t = {t:g}", "-", c))
        curves.append(Curve(f"levy_NR_t{t:g}.csv", ic, t, "NR", f"NR, t = {t:g}", "--", c))
    return tuple(curves)


FIGURES = {
    "fig1": FigureSpec(
        "fig1",
        "Gaussian profile: R and NR evolution at t = 1",
        # the R curve has exponential tails; +-8 keeps the missing mass below 1e-4
        (-8.0, 8.0),
        (
            Curve("gaussian_ic.csv", InitialCondition.gaussian(), 0.0, "R", "initial condition", ":", "k"),
            Curve("gaussian_NR_t1.csv", InitialCondition.gaussian(), 1.0, "NR", "NR, t = 1", "--", "C0"),
            Curve("gaussian_R_t1.csv", InitialCondition.gaussian(), 1.0, "R", "R, t = 1", "-", "C3"),
        ),
    ),
    "fig2": FigureSpec(
        "fig2",
        "Hermite-Gauss profile r = 2, relativistic evolution",
        (-6.0, 8.0),
        _time_series(InitialCondition.hermite(2), (0.0, 0.5, 1.0, 1.5), "hermite2_R", "R"),
        421,
    ),
    "fig3": FigureSpec(
        "fig3",
        "Cauchy profile, relativistic evolution",
        (-15.0, 15.0),
        _time_series(InitialCondition.cauchy(), (0.0, 2.0, 4.0, 6.0), "cauchy_R", "R"),
    ),
    "fig4": FigureSpec(
        "fig4",
        "Profile (1+x^2)^(-1/2), relativistic evolution",
        (-15.0, 15.0),
        _time_series(InitialCondition.invsqrt(), (0.0, 2.0, 4.0, 6.0), "invsqrt_R", "R"),
    ),
    "fig5": FigureSpec("fig5", "Levy-Smirnov profile: R (solid) and NR (dashed)", (-6.0, 8.0), _fig5(), 421),
}


def build_bundle(name, out_dir, cfg=None, png=True, n_points=None):
    """Write the bundle for figure ``name`` to ``out_dir/name`` and return its path."""
    spec = FIGURES[name]
    n = n_points or spec.n_points
    xs = np.linspace(spec.x_range[0], spec.x_range[1], n)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    final = out_dir / name
    work = Path(tempfile.mkdtemp(prefix=f".{name}.", dir=out_dir))
    try:
        table = []
        for c in spec.curves:
            fld = solve_field(c.ic, xs, c.t, c.regime, "closed", cfg)
            write_field_csv(
                work / c.file,
                fld,
                {"figure": name, "x_range": f"{spec.x_range[0]:g}:{spec.x_range[1]:g}:{n}"},
            )
            table.append({"file": c.file, "label": c.label, "style": c.style, "color": c.color})
        atomic_write_text(work / "plot.py", plot_script(name, table, spec.title))
        if png:
            render_png(table, spec.title, work, work / f"{name}.png")
        if final.exists():
            shutil.rmtree(final)
        work.rename(final)
    except BaseException:
        shutil.rmtree(work, ignore_errors=True)
        raise
    return final
