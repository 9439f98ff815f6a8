"""Plain-text configuration files and line-delimited JSON reports.

Configuration files hold one point per line as three decimal numbers
``a re(z) im(z)`` separated by whitespace. Blank lines and lines starting
with ``#`` are ignored. Numbers are written with 17 significant digits so a
written file parses back to identical floats.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import IO, Iterable

from .errors import CoincidentPoints
from .geometry import Configuration, Point


class ConfigFormatError(ValueError):
    pass


def parse_configuration(text: str) -> tuple[Configuration, list[int]]:
    """Parse a configuration; also return the 1-based source line of each point."""
    pts, lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        fields = s.split()
        if len(fields) != 3:
            raise ConfigFormatError(f"line {lineno}: expected 3 numbers, got {len(fields)}")
        try:
            a, re, im = (float(f) for f in fields)
        except ValueError:
            raise ConfigFormatError(f"line {lineno}: not a number in {s!r}") from None
        if not all(math.isfinite(v) for v in (a, re, im)):
            raise ConfigFormatError(f"line {lineno}: coordinates must be finite")
        pts.append(Point(a, complex(re, im)))
        lines.append(lineno)
    try:
        return Configuration(pts), lines
    except CoincidentPoints as e:
        raise ConfigFormatError(
            f"coincident points at lines {lines[e.i]}, {lines[e.j]}"
        ) from None
    except ValueError as e:
        raise ConfigFormatError(str(e)) from None


def read_configuration(path: str | Path) -> tuple[Configuration, list[int]]:
    return parse_configuration(Path(path).read_text())


def format_configuration(c: Configuration, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    for p in c:
        out.append(" ".join(format(v, ".17g") for v in p.as_tuple()))
    return "\n".join(out) + "\n"


def write_configuration(c: Configuration, path: str | Path, comment: str | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_configuration(c, comment))


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def write_records(records: Iterable[dict], fh: IO[str]) -> None:
    """One JSON object per line."""
    for rec in records:
        fh.write(json.dumps(_jsonable(rec), sort_keys=True) + "\n")


def read_records(path: str | Path) -> list[dict]:
    return [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]
