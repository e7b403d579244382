"""Deterministic CSV emission shared by all experiment subcommands.

Output starts with a version comment line, then a header row; floats are
printed with 17 significant digits and a decimal point regardless of locale,
so reruns with identical seeds produce byte-identical bodies.
"""

from __future__ import annotations

import io
import sys

from . import __version__

__all__ = ["version_line", "format_cell", "rows_to_csv", "write_rows"]


def version_line() -> str:
    return f"# needlet-lq v{__version__}"


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def rows_to_csv(fieldnames, rows) -> str:
    """Render rows (dicts keyed by fieldnames) as versioned CSV text."""
    out = io.StringIO()
    out.write(version_line() + "\n")
    out.write(",".join(fieldnames) + "\n")
    for row in rows:
        out.write(",".join(format_cell(row[name]) for name in fieldnames) + "\n")
    return out.getvalue()


def write_rows(path, fieldnames, rows) -> None:
    """Write versioned CSV to a file path, or stdout when path is None/'-'."""
    text = rows_to_csv(fieldnames, rows)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)
