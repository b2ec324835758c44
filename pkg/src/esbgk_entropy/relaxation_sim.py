"""Space-homogeneous relaxation ``df/dt = A_nu (M_nu(f) - f)`` on a velocity grid."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, PositivityLoss
from .kinetics.functionals import (
    MomentState,
    collision_frequency,
    ellipsoidal_gaussian,
    entropy_production,
    h_functional,
    mixture,
    moments,
    relative_entropy,
)
from .kinetics.grid import GridDistribution, VelocityGrid
from .kinetics.states import grid_for
from .scalar_analysis import PrandtlParam, compute_cnu

EQUILIBRIUM_ATOL = 1e-12

CSV_COLUMNS = (
    ["t", "H", "H_rel", "D"]
    + [f"theta_{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    + ["drift_mass", "drift_mom", "drift_energy"]
)


@dataclass
class SimConfig:
    """Run description.

    ``initial`` is a list of ``(weight, MomentState)``; a single entry is an
    anisotropic Gaussian. ``grid=None`` sizes the lattice from the initial
    components with ``n`` cells per axis. ``dt`` and ``t_end`` default to
    ``0.1 / A_nu`` and ``5 / A_nu``.
    """

    p: PrandtlParam
    initial: list
    grid: VelocityGrid | None = None
    n: int = 32
    t_end: float | None = None
    dt: float | None = None
    record_every: int = 1

    def __post_init__(self):
        if not self.initial:
            raise DomainError("initial must contain at least one component")
        if self.grid is None:
            self.grid = grid_for(self.initial, self.n)
        f0 = self.initial_distribution()
        A = collision_frequency(self.p, moments(f0))
        self.dt = 0.1 / A if self.dt is None else float(self.dt)
        self.t_end = 5.0 / A if self.t_end is None else float(self.t_end)
        if not self.dt > 0 or self.t_end < self.dt:
            raise DomainError("need t_end >= dt > 0")
        if self.dt * A >= 0.5:
            # positivity of the explicit update is only guaranteed below this margin
            raise PositivityLoss(f"dt * A_nu = {self.dt * A:.3g} violates the 0.5 stability margin")
        if int(self.record_every) < 1:
            raise DomainError("record_every must be >= 1")

    def initial_distribution(self) -> GridDistribution:
        return mixture(self.initial, self.grid)

    @classmethod
    def from_dict(cls, d: dict) -> SimConfig:
        p = PrandtlParam(d["nu"], d.get("alpha", 0.0), d.get("beta", 0.0))
        init = d["initial"]
        kind = init.get("type", "anisotropic_gaussian")
        if kind == "anisotropic_gaussian":
            comps = [(1.0, _state_from_dict(init))]
        elif kind == "mixture":
            comps = [(float(c.get("weight", 1.0)), _state_from_dict(c)) for c in init["components"]]
        else:
            raise DomainError(f"unknown initial type {kind!r}")
        g = d.get("grid") or {}
        grid = VelocityGrid(g["n"], g["L"]) if g.get("L") is not None else None
        return cls(
            p=p,
            initial=comps,
            grid=grid,
            n=int(g.get("n", 32)),
            t_end=d.get("t_end"),
            dt=d.get("dt"),
            record_every=int(d.get("record_every", 1)),
        )

    @classmethod
    def from_json(cls, path) -> SimConfig:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _state_from_dict(d: dict) -> MomentState:
    U = d.get("U", [0.0, 0.0, 0.0])
    if "Theta" in d:
        return MomentState(d.get("rho", 1.0), U, d["Theta"])
    return MomentState.diagonal(d.get("rho", 1.0), U, d["theta_diag"])


def _rhs(p, grid, vals):
    f = GridDistribution(grid, vals)
    m = moments(f)
    return collision_frequency(p, m) * (ellipsoidal_gaussian(p, m, grid).values - vals)


def step(p, f: GridDistribution, dt: float) -> GridDistribution:
    """One classical fourth-order Runge-Kutta step.

    Moments and M_nu are recomputed at every stage. Raises
    :class:`PositivityLoss` if any stage or the result has a non-positive node.
    """
    g, y = f.grid, f.values
    try:
        k1 = _rhs(p, g, y)
        k2 = _rhs(p, g, y + 0.5 * dt * k1)
        k3 = _rhs(p, g, y + 0.5 * dt * k2)
        k4 = _rhs(p, g, y + dt * k3)
    except ValueError as exc:
        raise PositivityLoss(f"intermediate stage lost positivity: {exc}") from exc
    out = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(out > 0):
        raise PositivityLoss(f"step produced min value {out.min():g}; reduce dt")
    return GridDistribution(g, out)


def analytic_theta(m0: MomentState, p, t) -> np.ndarray:
    """Stress tensor ``T I + exp(-A (1 - nu) t) (Theta_0 - T I)``; shape ``(len(t), 3, 3)``."""
    if not isinstance(p, PrandtlParam):
        p = PrandtlParam(p)
    rate = collision_frequency(p, m0) * (1.0 - p.nu)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    eq = m0.T * np.eye(3)
    return eq + np.exp(-rate * t)[:, None, None] * (m0.Theta - eq)


@dataclass
class EntropyTimeSeries:
    p: PrandtlParam
    A: float
    times: list = field(default_factory=list)
    H: list = field(default_factory=list)
    H_rel: list = field(default_factory=list)
    D: list = field(default_factory=list)
    Theta_t: list = field(default_factory=list)
    conservation_drift: list = field(default_factory=list)

    @property
    def envelope_rate(self) -> float:
        """Decay rate ``(1 - C_nu) A_nu`` guaranteed for the relative entropy."""
        return (1.0 - compute_cnu(self.p).value) * self.A

    def envelope(self) -> np.ndarray:
        t = np.asarray(self.times)
        return self.H_rel[0] * np.exp(-self.envelope_rate * t)

    def decay_rate(self, floor: float = 1e-10) -> float:
        """Least-squares slope of ``-ln H_rel`` over the later half of the run.

        Points below ``floor * H_rel[0]`` are dropped as quadrature noise.
        Returns NaN for a run that starts at equilibrium.
        """
        t = np.asarray(self.times)
        h = np.asarray(self.H_rel)
        if not h[0] > EQUILIBRIUM_ATOL:
            return math.nan
        keep = (h > floor * h[0]) & (t >= 0.5 * t[-1])
        if keep.sum() < 2:
            keep = h > floor * h[0]
        if keep.sum() < 2:
            return math.inf
        slope = np.polyfit(t[keep], np.log(h[keep]), 1)[0]
        return float(-slope)

    def rows(self):
        for t, H, Hr, D, Th, dr in zip(
            self.times, self.H, self.H_rel, self.D, self.Theta_t, self.conservation_drift
        ):
            yield [t, H, Hr, D, *np.asarray(Th).ravel(), *dr]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for row in self.rows():
                w.writerow([f"{float(v):.17g}" for v in row])


def _drift(f: GridDistribution, ref: tuple, scales: tuple) -> tuple[float, float, float]:
    g, vals = f.grid, f.values
    v = g.v
    mass = float(g.integrate(vals))
    mom = g.integrate(vals[..., None] * v)
    energy = float(g.integrate(vals * np.sum(v * v, axis=-1)))
    return (
        abs(mass - ref[0]) / scales[0],
        float(np.linalg.norm(mom - ref[1])) / scales[1],
        abs(energy - ref[2]) / scales[2],
    )


def run(cfg: SimConfig, progress=None) -> EntropyTimeSeries:
    p = cfg.p
    f = cfg.initial_distribution()
    m0 = moments(f)
    A = collision_frequency(p, m0)
    v = f.grid.v
    ref = (
        float(f.grid.integrate(f.values)),
        f.grid.integrate(f.values[..., None] * v),
        float(f.grid.integrate(f.values * np.sum(v * v, axis=-1))),
    )
    scales = (m0.rho, m0.rho * (float(np.linalg.norm(m0.U)) + math.sqrt(m0.T)), ref[2])
    series = EntropyTimeSeries(p, A)

    def record(t, f):
        m = moments(f)
        M0 = ellipsoidal_gaussian(0.0, m, f.grid)
        series.times.append(t)
        series.H.append(h_functional(f))
        series.H_rel.append(relative_entropy(f, M0))
        series.D.append(entropy_production(p, f))
        series.Theta_t.append(m.Theta)
        series.conservation_drift.append(_drift(f, ref, scales))

    nsteps = int(round(cfg.t_end / cfg.dt))
    record(0.0, f)
    for k in range(1, nsteps + 1):
        f = step(p, f, cfg.dt)
        if k % cfg.record_every == 0 or k == nsteps:
            record(k * cfg.dt, f)
        if progress is not None:
            progress(k, nsteps)
    return series
