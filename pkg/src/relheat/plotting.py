"""Matplotlib rendering of figure bundles.

The same curve table drives both the in-process PNG and the standalone
``plot.py`` written next to the CSV files, so the script can regenerate the
figure from the bundle alone.
"""

import json

__all__ = ["read_curve_csv", "render_png", "plot_script"]


def read_curve_csv(path):
    """Read an ``x,psi`` CSV, skipping ``#`` metadata lines."""
    import numpy as np

    xs, ps = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or line.startswith("x,"):
                continue
            a, b = line.split(",")
            xs.append(float(a))
            ps.append(float(b))
    return np.array(xs), np.array(ps)


def _draw(ax, curves, load):
    for c in curves:
        x, y = load(c["file"])
        ax.plot(x, y, c.get("style", "-"), color=c.get("color"), lw=1.4, label=c["label"])
    ax.set_xlabel("x")
    ax.set_ylabel(r"$\psi(x,t)$")
    ax.legend(frameon=False, fontsize=8)
    ax.grid(alpha=0.3, lw=0.5)


def render_png(curves, title, bundle_dir, png_path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4), dpi=120)
    _draw(ax, curves, lambda f: read_curve_csv(bundle_dir / f))
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(png_path)
    plt.close(fig)


_SCRIPT = '''"""Regenerate {name}.png from the CSV files in this directory."""

import json
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

HERE = pathlib.Path(__file__).resolve().parent
CURVES = json.loads({curves!r})
TITLE = {title!r}


def load(name):
    rows = [
        line.split(",")
        for line in (HERE / name).read_text(encoding="utf-8").splitlines()
        if line and not line.startswith("#") and not line.startswith("x,")
    ]
    data = np.array(rows, dtype=float)
    return data[:, 0], data[:, 1]


fig, ax = plt.subplots(figsize=(6, 4), dpi=120)
for c in CURVES:
    x, y = load(c["file"])
    ax.plot(x, y, c.get("style", "-"), color=c.get("color"), lw=1.4, label=c["label"])
ax.set_xlabel("x")
ax.set_ylabel(r"$\\psi(x,t)$")
ax.set_title(TITLE, fontsize=10)
ax.legend(frameon=False, fontsize=8)
ax.grid(alpha=0.3, lw=0.5)
fig.tight_layout()
fig.savefig(HERE / "{name}.png")
'''


def plot_script(name, curves, title):
    """Source of a standalone script that plots ``curves`` from their CSV files."""
    return _SCRIPT.format(name=name, curves=json.dumps(curves), title=title)
