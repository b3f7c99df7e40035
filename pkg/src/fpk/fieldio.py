"""Field snapshot formats.

CSV: header ``x1,u`` (d=1) or ``x1,x2,u`` (d=2), one row per cell, centers
in ascending lexicographic order.

Binary: little-endian, a 4-int64 header ``d, n, L_num, L_den`` (the box
half-width as the reduced fraction ``L = L_num / L_den``) followed by the
row-major float64 cell values. The boundary mode is not part of the file;
the reader takes it as an argument.
"""

from __future__ import annotations

import io
from fractions import Fraction
from pathlib import Path

import numpy as np

from .grid import Grid, ScalarField
from .ioutil import atomic_write_bytes, atomic_write_text

_HEADER_DTYPE = np.dtype("<i8")
_VALUE_DTYPE = np.dtype("<f8")


def write_field_csv(field: ScalarField, path: str | Path) -> None:
    g = field.grid
    buf = io.StringIO()
    if g.d == 1:
        buf.write("x1,u\n")
        for x, v in zip(g.centers(), field.values):
            buf.write(f"{x!r},{v!r}\n")
    else:
        buf.write("x1,x2,u\n")
        c = g.centers()
        for i in range(g.n):
            for j in range(g.n):
                buf.write(f"{c[i]!r},{c[j]!r},{field.values[i, j]!r}\n")
    atomic_write_text(path, buf.getvalue())


def read_field_csv(path: str | Path, grid: Grid) -> ScalarField:
    raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if raw.shape[0] != grid.size:
        raise ValueError(f"snapshot has {raw.shape[0]} rows, grid has {grid.size} cells")
    return ScalarField(grid, raw[:, -1].reshape(grid.shape))


def write_field_binary(field: ScalarField, path: str | Path) -> None:
    g = field.grid
    frac = Fraction(g.L).limit_denominator(10**12)
    header = np.array([g.d, g.n, frac.numerator, frac.denominator], dtype=_HEADER_DTYPE)
    payload = header.tobytes() + np.ascontiguousarray(field.values, dtype=_VALUE_DTYPE).tobytes()
    atomic_write_bytes(path, payload)


def read_field_binary(path: str | Path, boundary: str = "zero-flux") -> ScalarField:
    raw = Path(path).read_bytes()
    d, n, num, den = (int(v) for v in np.frombuffer(raw[:32], dtype=_HEADER_DTYPE))
    grid = Grid(d=d, L=num / den, n=n, boundary=boundary)
    values = np.frombuffer(raw[32:], dtype=_VALUE_DTYPE).reshape(grid.shape)
    return ScalarField(grid, values.copy())
