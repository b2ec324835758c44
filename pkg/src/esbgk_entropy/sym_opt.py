"""Three-variable log-ratio over stress eigenvalues and its reduction chain.

For eigenvalues theta with mean m, write ``d_i = theta_i / m - 1`` so that
``sum(d) = 0``. With ``e2 = d1 d2 + d2 d3 + d3 d1 = -|d|^2 / 2`` and
``e3 = d1 d2 d3`` the functional becomes

    F_nu = log1p(nu^2 (e2 + nu e3)) / log1p(e2 + e3)

which is what :func:`f_nu` evaluates. The numerator depends on the triple
only through its sum, product and pairwise-product sum, which is why fixing
the sum and product and minimising the pairwise sum can only raise F_nu.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._roots import bracketed_newton
from .errors import DegenerateTriple, DomainError, InfeasibleSP
from .scalar_analysis import _nu

DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class EigenTriple:
    theta: tuple[float, float, float]

    def __post_init__(self):
        th = tuple(float(v) for v in self.theta)
        if len(th) != 3 or not all(v > 0 for v in th):
            raise DomainError(f"expected three positive eigenvalues, got {self.theta!r}")
        object.__setattr__(self, "theta", th)

    @property
    def S(self) -> float:
        return sum(self.theta)

    @property
    def Delta(self) -> float:
        a, b, c = self.theta
        return a * b + b * c + c * a

    @property
    def P(self) -> float:
        a, b, c = self.theta
        return a * b * c

    def __iter__(self):
        return iter(self.theta)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.theta, dtype=dtype)


def _as_theta(t) -> np.ndarray:
    th = np.asarray(t.theta if isinstance(t, EigenTriple) else t, dtype=float)
    if th.shape[-1] != 3:
        raise DomainError("eigenvalue arrays must have a trailing axis of length 3")
    if np.any(th <= 0):
        raise DomainError("eigenvalues must be positive")
    return th


def _spread(th: np.ndarray) -> np.ndarray:
    return th.max(axis=-1) - th.min(axis=-1)


def _log_ratio(w: np.ndarray, m: np.ndarray, c: np.ndarray) -> np.ndarray:
    # ln prod(w_i / m) with c = prod(w_i / m) - 1 formed without cancellation;
    # log1p(c) is accurate near 1, the direct logs far from it
    with np.errstate(invalid="ignore", divide="ignore"):
        far = np.sum(np.log(w / m), axis=-1)
        return np.where(np.abs(c) < 0.5, np.log1p(c), far)


def _f_nu_array(nu: float, th: np.ndarray) -> np.ndarray:
    m = th.mean(axis=-1, keepdims=True)
    d = (th - m) / m
    e2 = -0.5 * np.sum(d * d, axis=-1)
    e3 = np.prod(d, axis=-1)
    # (1-nu) m + nu theta_i written as a sum of non-negative terms
    others = np.stack([th[..., 1] + th[..., 2], th[..., 0] + th[..., 2], th[..., 0] + th[..., 1]], -1)
    w = ((1 + 2 * nu) * th + (1 - nu) * others) / 3
    num = _log_ratio(w, m, nu * nu * (e2 + nu * e3))
    den = _log_ratio(th, m, e2 + e3)
    with np.errstate(invalid="ignore", divide="ignore"):
        return num / den


def f_nu(p, t) -> float:
    """Log-ratio of Gaussian entropy gaps for stress eigenvalues ``t``.

    Raises :class:`DegenerateTriple` when all three eigenvalues coincide to
    relative precision 1e-12, where the ratio is 0/0.
    """
    nu = _nu(p)
    th = _as_theta(t)
    if th.ndim != 1:
        raise DomainError("f_nu takes a single triple; use f_nu_many for batches")
    if _spread(th) < DEGENERACY_RTOL * th.sum():
        raise DegenerateTriple(f"eigenvalues {tuple(th)} are all equal")
    return float(_f_nu_array(nu, th))


def f_nu_many(p, thetas) -> np.ndarray:
    """Vectorised :func:`f_nu` over an ``(..., 3)`` array; NaN where degenerate."""
    nu = _nu(p)
    th = _as_theta(thetas)
    out = _f_nu_array(nu, th)
    return np.where(_spread(th) < DEGENERACY_RTOL * th.sum(axis=-1), np.nan, out)


@dataclass(frozen=True)
class SPRange:
    S: float
    P: float
    k: float
    alpha: float
    beta: float
    delta_min: float
    delta_max: float
    argmin: EigenTriple
    argmax: EigenTriple

    def contains(self, delta, atol: float = 1e-9):
        delta = np.asarray(delta)
        return (delta >= self.delta_min - atol) & (delta <= self.delta_max + atol)


def _cubic_root(k: float, lo: float, hi: float) -> float:
    x, _ = bracketed_newton(
        lambda x: x * x - x**3 - k, lambda x: 2 * x - 3 * x * x, lo, hi, xtol=1e-15
    )
    return x


def sp_range(S: float, P: float) -> SPRange:
    """Range of xy + yz + zx over positive triples with sum S and product P."""
    S, P = float(S), float(P)
    if not (S > 0 and P > 0):
        raise DomainError("S and P must be positive")
    if P >= S**3 / 27:
        raise InfeasibleSP(f"P={P} >= S^3/27={S**3 / 27}: only (or no) equal triples")
    k = 4.0 * P / S**3
    alpha = _cubic_root(k, 0.0, 2.0 / 3.0)
    beta = _cubic_root(k, 2.0 / 3.0, 1.0)
    return SPRange(
        S=S,
        P=P,
        k=k,
        alpha=alpha,
        beta=beta,
        delta_min=S * S * (4 * alpha - 3 * alpha * alpha) / 4,
        delta_max=S * S * (4 * beta - 3 * beta * beta) / 4,
        argmin=EigenTriple((S * alpha / 2, S * alpha / 2, S * (1 - alpha))),
        argmax=EigenTriple((S * beta / 2, S * beta / 2, S * (1 - beta))),
    )


def sample_sp_fiber(S: float, P: float, n: int, rng=None) -> np.ndarray:
    """Random positive triples with exact sum ``S`` and product ``P``.

    One coordinate ``z`` is drawn uniformly over the interval where the
    remaining pair ``x + y = S - z, xy = P / z`` has real roots; the pair is
    then solved from the quadratic. Returns an ``(n, 3)`` array.
    """
    rng = np.random.default_rng(rng)
    r = sp_range(S, P)
    z_lo, z_hi = S * (1 - r.beta), S * (1 - r.alpha)
    out = np.empty((0, 3))
    while len(out) < n:
        z = rng.uniform(z_lo, z_hi, size=2 * (n - len(out)))
        s, q = S - z, P / z
        disc = s * s - 4 * q
        keep = disc >= 0
        z, s, q, disc = z[keep], s[keep], q[keep], disc[keep]
        x = 0.5 * (s + np.sqrt(disc))
        y = q / x
        out = np.concatenate([out, np.stack([x, y, z], axis=1)])
    return out[:n]


def reduce_to_two(p, t) -> EigenTriple:
    """Triple ``(a, b, b)``, ``a > b``, with the same sum and product as ``t``.

    It minimises the pairwise-product sum over that fiber, so
    ``f_nu(result) >= f_nu(t)`` for every admissible nu.
    """
    _nu(p)
    th = np.sort(_as_theta(t))[::-1]
    S = float(th.sum())
    if _spread(th) < DEGENERACY_RTOL * S:
        raise DegenerateTriple(f"eigenvalues {tuple(th)} are all equal")
    # already the minimiser of its own fiber
    if th[1] - th[2] <= DEGENERACY_RTOL * S:
        return EigenTriple((th[0], th[1], th[1]))
    P = float(np.prod(th))
    r = sp_range(S, P)
    small = S * r.alpha / 2
    return EigenTriple((S * (1 - r.alpha), small, small))


@dataclass(frozen=True)
class GridSpec:
    """Log-spaced ratio grid ``(theta1/theta3, theta2/theta3)``; theta3 = 1."""

    n: int = 400
    ratio_min: float = 1e-4
    ratio_max: float = 1e4

    def thetas(self) -> np.ndarray:
        r = np.logspace(np.log10(self.ratio_min), np.log10(self.ratio_max), self.n)
        r1, r2 = np.meshgrid(r, r, indexing="ij")
        return np.stack([r1.ravel(), r2.ravel(), np.ones(r1.size)], axis=1)


def brute_force_sup(p, grid_spec: GridSpec | None = None) -> float:
    """Maximum of :func:`f_nu` over a ratio grid (degenerate points skipped)."""
    nu = _nu(p)
    grid_spec = grid_spec or GridSpec()
    if nu == 0.0:
        return 0.0
    return float(np.nanmax(f_nu_many(nu, grid_spec.thetas())))
