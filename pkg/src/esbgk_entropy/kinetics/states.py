"""Strictly positive analytic test distributions and matching grids."""

from __future__ import annotations

import math

import numpy as np

from .functionals import MomentState, mixture
from .grid import GridDistribution, VelocityGrid

SIGMAS = 8.0


def grid_for(components, n: int, sigmas: float = SIGMAS) -> VelocityGrid:
    """Grid wide enough for every component and for the mixture's own moments.

    ``components`` is a list of ``(weight, MomentState)``.
    """
    total = sum(w * m.rho for w, m in components)
    U = sum(w * m.rho * m.U for w, m in components) / total
    second = sum(
        w * m.rho * (m.Theta + np.outer(m.U - U, m.U - U)) for w, m in components
    ) / total
    widest = float(np.linalg.eigvalsh(second).max())
    L = float(np.abs(U).max()) + sigmas * math.sqrt(widest)
    for _, m in components:
        L = max(L, float(np.abs(m.U).max()) + sigmas * math.sqrt(m.eigenvalues[0]))
    return VelocityGrid(n, L)


def random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    return q * np.sign(np.diag(r))


def random_components(rng, max_components: int = 4, eig_range=(0.5, 2.5), shift: float = 1.0):
    """One to ``max_components`` Gaussians with random shapes and offsets."""
    k = int(rng.integers(1, max_components + 1))
    comps = []
    for _ in range(k):
        Q = random_rotation(rng)
        Th = Q @ np.diag(rng.uniform(*eig_range, size=3)) @ Q.T
        m = MomentState(1.0, rng.uniform(-shift, shift, size=3), 0.5 * (Th + Th.T))
        comps.append((float(rng.uniform(0.2, 1.0)), m))
    return comps


def random_state(rng, n: int = 48, **kw) -> GridDistribution:
    comps = random_components(rng, **kw)
    return mixture(comps, grid_for(comps, n))
