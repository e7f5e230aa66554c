"""CSV output of sampled fields, written atomically."""

import os
import tempfile
from pathlib import Path

import numpy as np

__all__ = ["atomic_write_text", "format_field_csv", "write_field_csv", "read_field_csv"]


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def format_field_csv(xs, values, metadata):
    """``#`` metadata lines, the ``x,psi`` header and 17-significant-digit rows."""
    lines = [f"# {key}: {value}" for key, value in metadata.items()]
    lines.append("x,psi")
    lines.extend(f"{x:.17g},{v:.17g}" for x, v in zip(np.asarray(xs), np.asarray(values)))
    return "\n".join(lines) + "\n"


def write_field_csv(path, fld, extra=None):
    from . import __version__

    meta = {
        "ic": fld.ic.label,
        "t": f"{fld.t:.17g}",
        "regime": fld.regime,
        "method": fld.method,
    }
    meta.update({k: v for k, v in fld.metadata.items()})
    meta.update(extra or {})
    meta["version"] = f"relheat {__version__}"
    atomic_write_text(path, format_field_csv(fld.xs, fld.values, meta))


def read_field_csv(path):
    """Return ``(xs, psi, metadata)`` from a file written by :func:`write_field_csv`."""
    meta = {}
    xs, ps = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(":")
                meta[key.strip()] = value.strip()
            elif line == "x,psi" or not line:
                continue
            else:
                a, b = line.split(",")
                xs.append(float(a))
                ps.append(float(b))
    return np.array(xs), np.array(ps), meta
