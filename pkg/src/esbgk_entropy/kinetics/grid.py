"""Uniform velocity lattices, nodal distributions and their file formats."""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from ..errors import DomainError, NonPositiveDensity

_HEADER = struct.Struct("<qdddd")


@dataclass(frozen=True)
class VelocityGrid:
    """Cell-centred lattice on ``[-L, L]^3`` with ``n`` cells per axis.

    Integrals are midpoint sums weighted by the cell volume.
    """

    n: int
    L: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8:
            raise DomainError(f"n must be an integer >= 8, got {self.n!r}")
        if not self.L > 0:
            raise DomainError(f"L must be positive, got {self.L!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def weight(self) -> float:
        return self.h**3

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.L + self.h * (np.arange(self.n) + 0.5)

    @cached_property
    def v(self) -> np.ndarray:
        """Node coordinates, shape ``(n, n, n, 3)``."""
        vx, vy, vz = np.meshgrid(self.axis, self.axis, self.axis, indexing="ij")
        return np.stack([vx, vy, vz], axis=-1)

    def integrate(self, values) -> float | np.ndarray:
        """Midpoint rule over the three velocity axes (leading axes)."""
        return np.sum(values, axis=(0, 1, 2)) * self.weight


@dataclass
class GridDistribution:
    grid: VelocityGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        n = self.grid.n
        if self.values.shape != (n, n, n):
            raise DomainError(f"values must have shape {(n, n, n)}, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise NonPositiveDensity("distribution has non-finite values")
        if not np.all(self.values > 0):
            raise NonPositiveDensity(
                f"distribution must be strictly positive (min={self.values.min():g})"
            )

    @property
    def f_min(self) -> float:
        return float(self.values.min())

    def log(self) -> np.ndarray:
        return np.log(self.values)

    def __mul__(self, c: float) -> GridDistribution:
        return GridDistribution(self.grid, self.values * c)

    __rmul__ = __mul__


def write_binary(path, f: GridDistribution, nu=0.0, alpha=0.0, beta=0.0) -> None:
    """Header ``<q n, <d L, nu, alpha, beta`` followed by n^3 ``<f8`` values (C order)."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(f.grid.n, f.grid.L, nu, alpha, beta))
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def read_binary(path) -> tuple[GridDistribution, dict]:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError("file too short for grid header")
    n, L, nu, alpha, beta = _HEADER.unpack_from(data)
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    if values.size != n**3:
        raise ValueError(f"expected {n**3} values, found {values.size}")
    f = GridDistribution(VelocityGrid(n, L), values.reshape(n, n, n).astype(float))
    return f, {"nu": nu, "alpha": alpha, "beta": beta}


def write_csv(path, f: GridDistribution) -> None:
    v = f.grid.v.reshape(-1, 3)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f"# n={f.grid.n}", f"L={f.grid.L!r}"])
        w.writerow(["vx", "vy", "vz", "f"])
        for (vx, vy, vz), val in zip(v, f.values.ravel()):
            w.writerow([f"{vx:.17g}", f"{vy:.17g}", f"{vz:.17g}", f"{val:.17g}"])


def read_csv(path) -> GridDistribution:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    n = int(rows[0][0].split("=")[1])
    L = float(rows[0][1].split("=")[1])
    vals = np.array([float(r[3]) for r in rows[2:]])
    return GridDistribution(VelocityGrid(n, L), vals.reshape(n, n, n))
