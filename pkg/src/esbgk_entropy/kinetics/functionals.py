"""Moments, ellipsoidal Gaussians, entropies and entropy production."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, NonPositiveDensity, SingularTensor
from ..scalar_analysis import PrandtlParam
from .eigen import eigvalsh3, symmetrize
from .grid import GridDistribution, VelocityGrid

SYM_RTOL = 1e-12
DET_MIN = 1e-30


@dataclass(frozen=True)
class MomentState:
    """Density, bulk velocity and stress tensor of a distribution."""

    rho: float
    U: np.ndarray
    Theta: np.ndarray
    eigenvalues: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        U = np.asarray(self.U, dtype=float).reshape(3)
        Th = np.asarray(self.Theta, dtype=float)
        if not self.rho > 0:
            raise NonPositiveDensity(f"rho must be positive, got {self.rho!r}")
        if Th.shape != (3, 3):
            raise DomainError("Theta must be 3x3")
        scale = max(np.abs(Th).max(), np.finfo(float).tiny)
        if np.abs(Th - Th.T).max() > SYM_RTOL * scale:
            raise DomainError("Theta must be symmetric")
        Th = symmetrize(Th)
        ev = eigvalsh3(Th)
        if not ev[-1] > 0:
            raise DomainError(f"Theta must be positive definite, eigenvalues {ev}")
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "Theta", Th)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def T(self) -> float:
        return float(np.trace(self.Theta)) / 3.0

    @classmethod
    def diagonal(cls, rho, U, thetas) -> MomentState:
        return cls(rho, U, np.diag(np.asarray(thetas, dtype=float)))


@dataclass(frozen=True)
class TemperatureTensor:
    matrix: np.ndarray
    eigenvalues: np.ndarray


def _nu_closed(p) -> float:
    # M_1 (nu = 1) is needed for entropy comparisons though it is no PrandtlParam
    nu = p.nu if isinstance(p, PrandtlParam) else float(p)
    if not (-0.5 <= nu <= 1.0):
        raise DomainError(f"nu must lie in [-1/2, 1], got {nu!r}")
    return nu


def temperature_tensor(p, m: MomentState) -> TemperatureTensor:
    nu = _nu_closed(p)
    T = m.T
    mat = (1.0 - nu) * T * np.eye(3) + nu * m.Theta
    return TemperatureTensor(mat, (1.0 - nu) * T + nu * m.eigenvalues)


def _gaussian_log(rho, U, cov, v):
    det = float(np.linalg.det(cov))
    if det < DET_MIN:
        raise SingularTensor(f"covariance determinant {det:g} below {DET_MIN:g}")
    w = v - U
    quad = np.einsum("...i,ij,...j->...", w, np.linalg.inv(cov), w)
    return math.log(rho) - 0.5 * math.log((2 * math.pi) ** 3 * det) - 0.5 * quad


def gaussian_density(rho, U, cov, v) -> np.ndarray:
    """Pointwise ``rho N(U, cov)`` at velocities ``v`` of shape ``(..., 3)``."""
    return np.exp(_gaussian_log(rho, np.asarray(U, float), np.asarray(cov, float), v))


def ellipsoidal_gaussian(p, m: MomentState, grid: VelocityGrid) -> GridDistribution:
    """M_nu sampled on ``grid``: same rho and U as ``m``, covariance T_nu."""
    tt = temperature_tensor(p, m)
    return GridDistribution(grid, gaussian_density(m.rho, m.U, tt.matrix, grid.v))


def moments(f: GridDistribution) -> MomentState:
    g, vals = f.grid, f.values
    rho = float(g.integrate(vals))
    if not (rho > 0 and math.isfinite(rho)):
        raise NonPositiveDensity(f"density integral is {rho!r}")
    v = g.v
    U = g.integrate(vals[..., None] * v) / rho
    w = v - U
    Theta = g.integrate(vals[..., None, None] * w[..., :, None] * w[..., None, :]) / rho
    return MomentState(rho, U, symmetrize(Theta))


def mixture(components, grid: VelocityGrid) -> GridDistribution:
    """Sum of Gaussians ``[(weight, MomentState), ...]`` on ``grid``.

    Each component is ``weight * rho N(U, Theta)``; the log-sum-exp keeps
    far tails from underflowing before they are combined.
    """
    logs = np.stack(
        [math.log(w) + _gaussian_log(m.rho, m.U, m.Theta, grid.v) for w, m in components]
    )
    top = logs.max(axis=0)
    return GridDistribution(grid, np.exp(top) * np.exp(logs - top).sum(axis=0))


def conservation_residual(p, f: GridDistribution) -> tuple[float, np.ndarray, float]:
    """Integrals of ``(M_nu - f)`` against 1, v and |v|^2."""
    diff = ellipsoidal_gaussian(p, moments(f), f.grid).values - f.values
    v = f.grid.v
    mass = float(f.grid.integrate(diff))
    mom = f.grid.integrate(diff[..., None] * v)
    energy = float(f.grid.integrate(diff * np.sum(v * v, axis=-1)))
    return mass, mom, energy


def conservation_scales(m: MomentState) -> tuple[float, float, float]:
    """Normalisers for :func:`conservation_residual` (mass, momentum, energy)."""
    return m.rho, m.rho * float(np.linalg.norm(m.U)) + m.rho * math.sqrt(m.T), 3.0 * m.rho * m.T


def h_functional(f: GridDistribution) -> float:
    return float(f.grid.integrate(f.values * np.log(f.values)))


def relative_entropy(f: GridDistribution, g: GridDistribution) -> float:
    return float(f.grid.integrate(f.values * (np.log(f.values) - np.log(g.values))))


def h_gaussian_closed(p, m: MomentState) -> float:
    """Exact entropy of M_nu: ``rho (ln rho - ln det(2 pi T_nu) / 2) - 3 rho / 2``."""
    tt = temperature_tensor(p, m)
    logdet = float(np.sum(np.log(2 * math.pi * tt.eigenvalues)))
    return m.rho * (math.log(m.rho) - 0.5 * logdet) - 1.5 * m.rho


def _log_gap(nu: float, thetas) -> float:
    # ln(prod((1-nu) Tbar + nu theta_i) / Tbar^3) without cancellation
    th = np.asarray(thetas, dtype=float)
    d = th / th.mean() - 1.0
    e2 = -0.5 * float(np.sum(d * d))
    e3 = float(np.prod(d))
    return math.log1p(nu * nu * (e2 + nu * e3))


def h_gap_closed(p, m: MomentState) -> tuple[float, float]:
    """``(H(M_0) - H(M_nu), H(M_0) - H(M_1))`` from the stress eigenvalues."""
    nu = _nu_closed(p)
    return 0.5 * m.rho * _log_gap(nu, m.eigenvalues), 0.5 * m.rho * _log_gap(1.0, m.eigenvalues)


def collision_frequency(p, m: MomentState) -> float:
    if not isinstance(p, PrandtlParam):
        p = PrandtlParam(p)
    return p.collision_frequency(m.rho, m.T)


def entropy_production(p, f: GridDistribution) -> float:
    """``A_nu * integral (M_nu - f) ln f``; never positive up to quadrature error."""
    m = moments(f)
    M = ellipsoidal_gaussian(p, m, f.grid)
    return collision_frequency(p, m) * float(
        f.grid.integrate((M.values - f.values) * np.log(f.values))
    )
