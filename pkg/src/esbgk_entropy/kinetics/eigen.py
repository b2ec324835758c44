"""Closed-form eigenvalues of real symmetric 3x3 matrices."""

import math

import numpy as np


def symmetrize(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return 0.5 * (A + A.T)


def eigvalsh3(A) -> np.ndarray:
    """Eigenvalues of a symmetric 3x3 matrix, sorted descending.

    Uses the trigonometric solution of the characteristic cubic on the
    shifted, scaled matrix ``B = (A - q I) / p``.
    """
    A = symmetrize(A)
    if A.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {A.shape}")
    off = A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2
    q = np.trace(A) / 3.0
    diag = np.diag(A)
    p2 = float(np.sum((diag - q) ** 2) + 2.0 * off)
    if off == 0.0 or p2 == 0.0:
        return np.sort(diag)[::-1].copy()
    p = math.sqrt(p2 / 6.0)
    B = (A - q * np.eye(3)) / p
    r = (
        B[0, 0] * (B[1, 1] * B[2, 2] - B[1, 2] * B[2, 1])
        - B[0, 1] * (B[1, 0] * B[2, 2] - B[1, 2] * B[2, 0])
        + B[0, 2] * (B[1, 0] * B[2, 1] - B[1, 1] * B[2, 0])
    ) / 2.0
    # |r| <= 1 in exact arithmetic
    phi = math.acos(min(1.0, max(-1.0, r))) / 3.0
    e1 = q + 2.0 * p * math.cos(phi)
    e3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    e2 = 3.0 * q - e1 - e3
    return np.array([e1, e2, e3])
