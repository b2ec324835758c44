"""Property suites run by ``esbgk verify``.

Each suite returns a list of row dicts; every row carries ``margin`` (which
must be non-negative up to the suite tolerance already folded in) and
``passed``.
"""

from __future__ import annotations

import numpy as np

from .kinetics.functionals import (
    conservation_residual,
    conservation_scales,
    ellipsoidal_gaussian,
    entropy_production,
    moments,
    relative_entropy,
    collision_frequency,
)
from .kinetics.states import random_state
from .scalar_analysis import PrandtlParam, compute_cnu, verify_product_inequality
from .sym_opt import f_nu, reduce_to_two, sample_sp_fiber, sp_range

PRODUCT_RTOL = 1e-12
SP_ATOL = 1e-9
REDUCTION_ATOL = 1e-10
CERCIGNANI_ATOL = 1e-6
H_SIGN_ATOL = 1e-8
CONSERVATION_RTOL = 1e-6
CERCIGNANI_NUS = (-0.5, -0.25, 0.0, 0.5)


def product_inequality(seed: int, samples: int = 200) -> list[dict]:
    """``samples`` x ``samples`` grid of nu in [-1/2, 0.99] and log-spaced x."""
    nus = np.linspace(-0.5, 0.99, samples)
    xs = np.logspace(-3, 6, samples)
    rows = []
    for nu in nus:
        rep = verify_product_inequality(nu, xs)
        ok = rep.margin >= -PRODUCT_RTOL * rep.lhs
        for x, mg, rel, good in zip(xs, rep.margin, rep.relative_margin, ok):
            rows.append(
                {"nu": nu, "x": x, "margin": mg, "relative_margin": rel, "passed": bool(good)}
            )
    return rows


def _sp_cases(rng, count: int):
    yield 3.0, 0.5
    for _ in range(count):
        S = float(rng.uniform(0.5, 10.0))
        P = float(rng.uniform(0.02, 0.98)) * S**3 / 27
        yield S, P


def sp_lemma(seed: int, samples: int = 100_000, fibers: int = 9) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    for S, P in _sp_cases(rng, fibers):
        r = sp_range(S, P)
        t = sample_sp_fiber(S, P, samples, rng)
        delta = t[:, 0] * t[:, 1] + t[:, 1] * t[:, 2] + t[:, 2] * t[:, 0]
        lo, hi = float(delta.min()), float(delta.max())
        margin = min(lo - r.delta_min, r.delta_max - hi)
        attained = all(
            abs(tr.S - S) <= 1e-9 * S and abs(tr.P - P) <= 1e-9 * P
            for tr in (r.argmin, r.argmax)
        ) and (abs(r.argmin.Delta - r.delta_min) <= 1e-9 * r.delta_min) and (
            abs(r.argmax.Delta - r.delta_max) <= 1e-9 * r.delta_max
        )
        rows.append(
            {
                "S": S,
                "P": P,
                "delta_min": r.delta_min,
                "delta_max": r.delta_max,
                "observed_min": lo,
                "observed_max": hi,
                "margin": margin,
                "passed": bool(margin >= -SP_ATOL and attained),
            }
        )
    return rows


def reduction(seed: int, samples: int = 10_000) -> list[dict]:
    """Random triples and nu: reducing to (a, b, b) never lowers the log-ratio."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(samples):
        nu = float(rng.uniform(-0.5, 0.99))
        t = rng.uniform(0.01, 10.0, size=3)
        before = f_nu(nu, t)
        after = f_nu(nu, reduce_to_two(nu, t))
        margin = after - before
        c = compute_cnu(nu, check=False).value
        rows.append(
            {
                "nu": nu,
                "theta1": t[0],
                "theta2": t[1],
                "theta3": t[2],
                "f_before": before,
                "f_after": after,
                "c_nu": c,
                "margin": margin,
                "passed": bool(margin >= -REDUCTION_ATOL and after <= c + 1e-9),
            }
        )
    return rows


def cercignani(seed: int, samples: int = 100, n: int = 48, nus=CERCIGNANI_NUS) -> list[dict]:
    """Random positive Gaussian mixtures: sign of D_nu, conservation, decay bound."""
    rng = np.random.default_rng(seed)
    cnu = {nu: compute_cnu(nu).value for nu in nus}
    rows = []
    for case in range(samples):
        f = random_state(rng, n=n)
        m = moments(f)
        h_rel = relative_entropy(f, ellipsoidal_gaussian(0.0, m, f.grid))
        scales = conservation_scales(m)
        for nu in nus:
            p = PrandtlParam(nu)
            A = collision_frequency(p, m)
            D = entropy_production(p, f)
            bound = -(1.0 - cnu[nu]) * A * h_rel
            mass, mom, energy = conservation_residual(p, f)
            cons = max(
                abs(mass) / scales[0], float(np.abs(mom).max()) / scales[1], abs(energy) / scales[2]
            )
            margin = bound - D
            rows.append(
                {
                    "case": case,
                    "nu": nu,
                    "D": D,
                    "H_rel": h_rel,
                    "bound": bound,
                    "conservation": cons,
                    "margin": margin,
                    "passed": bool(
                        margin >= -CERCIGNANI_ATOL
                        and D <= H_SIGN_ATOL
                        and cons < CONSERVATION_RTOL
                    ),
                }
            )
    return rows


SUITES = {
    "product_inequality": product_inequality,
    "sp_lemma": sp_lemma,
    "reduction": reduction,
    "cercignani": cercignani,
}
