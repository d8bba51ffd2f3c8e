"""Line-oriented model files.

Example::

    # periodic Volterra lattice
    name = volterra(3)
    dim = 3
    coords = x1,x2,x3
    P[1][2] = x1*x2
    Q[1][3] = -x1^2*x3 + x1*x2*x3 - x1*x3^2

Indices are 1-based and must satisfy ``i < j``; absent entries are zero.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .expr import ChartContext, ParseError, parse_expr, to_rational
from .tensor import SkewBivectorField


class ModelFileError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass
class ModelFile:
    dim: int
    coords: Tuple[str, ...]
    P: Dict[Tuple[int, int], str] = field(default_factory=dict)
    Q: Dict[Tuple[int, int], str] = field(default_factory=dict)
    name: Optional[str] = None
    comments: List[str] = field(default_factory=list)

    @property
    def chart(self) -> ChartContext:
        return ChartContext(self.coords)

    def tensors(self) -> Tuple[SkewBivectorField, SkewBivectorField]:
        chart = self.chart
        out = []
        for entries in (self.P, self.Q):
            out.append(SkewBivectorField(chart, {(i - 1, j - 1): chart.parse(e) for (i, j), e in entries.items()}))
        return out[0], out[1]

    def format(self) -> str:
        lines = [f"# {c}" if c else "#" for c in self.comments]
        if self.name:
            lines.append(f"name = {self.name}")
        lines.append(f"dim = {self.dim}")
        lines.append("coords = " + ",".join(self.coords))
        for sym, entries in (("P", self.P), ("Q", self.Q)):
            for (i, j), e in sorted(entries.items()):
                lines.append(f"{sym}[{i}][{j}] = {e}")
        return "\n".join(lines) + "\n"


_ENTRY = re.compile(r"\s*([PQ])\s*\[\s*(\d+)\s*\]\s*\[\s*(\d+)\s*\]\s*=(.*)$")
_HEADER = re.compile(r"\s*(name|dim|coords)\s*=(.*)$")


def parse_model(text: str) -> ModelFile:
    """Parse model-file text; every problem raises ``ModelFileError`` with its position."""
    dim = None
    coords = None
    name = None
    comments: List[str] = []
    raw_entries: List[Tuple[int, str, int, int, str, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comments.append(stripped[1:].strip())
            continue
        m = _HEADER.match(line)
        if m:
            key, value = m.group(1), m.group(2).strip()
            value_col = m.start(2) + len(m.group(2)) - len(m.group(2).lstrip()) + 1
            if key == "dim":
                if not value.isdigit() or int(value) < 1:
                    raise ModelFileError(f"dim must be a positive integer, got {value!r}", lineno, value_col)
                dim = int(value)
            elif key == "coords":
                coords = tuple(c.strip() for c in value.split(","))
                try:
                    ChartContext(coords)
                except ValueError as exc:
                    raise ModelFileError(str(exc), lineno, value_col) from None
            else:
                name = value
            continue
        m = _ENTRY.match(line)
        if m:
            raw_entries.append((lineno, m.group(1), int(m.group(2)), int(m.group(3)), m.group(4), m.start(4)))
            continue
        raise ModelFileError(f"unrecognized line {stripped!r}", lineno)

    if dim is None and coords is None:
        raise ModelFileError("missing 'dim' and 'coords' headers", 1)
    if coords is None:
        coords = tuple(f"x{i + 1}" for i in range(dim))
    if dim is None:
        dim = len(coords)
    if len(coords) != dim:
        raise ModelFileError(f"dim = {dim} but {len(coords)} coordinate names given", 1)
    chart = ChartContext(coords)

    model = ModelFile(dim, coords, name=name, comments=comments)
    for lineno, sym, i, j, expr, offset in raw_entries:
        col = offset + 1
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise ModelFileError(f"index ({i}, {j}) out of range 1..{dim}", lineno)
        if i >= j:
            raise ModelFileError(f"only entries with i < j are allowed, got ({i}, {j})", lineno)
        target = model.P if sym == "P" else model.Q
        if (i, j) in target:
            raise ModelFileError(f"{sym}[{i}][{j}] given twice", lineno)
        body = expr.strip()
        lead = len(expr) - len(expr.lstrip())
        try:
            to_rational(parse_expr(body, chart), chart)
        except ParseError as exc:
            raise ModelFileError(exc.message, lineno, col + lead + exc.position) from None
        except ZeroDivisionError as exc:
            raise ModelFileError(str(exc), lineno, col + lead) from None
        target[(i, j)] = body
    return model


def model_from_tensors(P: SkewBivectorField, Q: SkewBivectorField, name: Optional[str] = None,
                       comments: Optional[List[str]] = None) -> ModelFile:
    chart = P.chart
    return ModelFile(
        dim=chart.dim,
        coords=chart.coordinate_names,
        P={(i + 1, j + 1): chart.format(v) for (i, j), v in P.items()},
        Q={(i + 1, j + 1): chart.format(v) for (i, j), v in Q.items()},
        name=name,
        comments=list(comments or []),
    )
