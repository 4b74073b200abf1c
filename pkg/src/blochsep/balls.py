"""Separable-ball radii for N-qubit systems in the TILDE Bloch representation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .catalog import tightness_family
from .errors import UsageError
from .linalg import DensityMatrix, kron, validate_density


class BallKind(enum.Enum):
    LARGEST_SEPARABLE = "LARGEST_SEPARABLE"
    MIN_ENCLOSING_SEPARABLE = "MIN_ENCLOSING_SEPARABLE"


@dataclass(frozen=True)
class BallSpec:
    p: float
    radius: float
    kind: BallKind


def _check(p, N):
    p = float(p)
    if not p >= 1:
        raise UsageError(f"p must be >= 1, got {p}")
    if int(N) < 1:
        raise UsageError(f"N must be >= 1, got {N}")
    return p, int(N)


def largest_l1_radius(N: int) -> float:
    """Radius of the largest l1 separable ball around I/2^N; independent of N."""
    _check(1, N)
    return 1.0


def largest_l1_ball(N: int) -> BallSpec:
    return BallSpec(1.0, largest_l1_radius(N), BallKind.LARGEST_SEPARABLE)


def l2_radius_interval(N: int) -> tuple[float, float]:
    """Known bracket for the largest l2 separable ball (no exact value is available).

    Only meaningful for ``N >= 2``; at ``N = 1`` the lower end exceeds the upper.
    """
    _, N = _check(2, N)
    if N < 2:
        raise UsageError("the l2 bracket needs N >= 2")
    return math.sqrt(1 / (4 / 9 * 3 ** N - 1)), math.sqrt(1 / (2 ** N - 1))


def r_e(p: float, N: int) -> float:
    """Radius of the smallest l_p ball (of this form) containing every separable N-qubit state."""
    p, N = _check(p, N)
    if math.isinf(p):
        return 1.0
    if p <= 2:
        return ((3 ** (1 - p / 2) + 1) ** N - 1) ** (1 / p)
    return (2 ** N - 1) ** (1 / p)


def min_enclosing_ball(p: float, N: int) -> BallSpec:
    return BallSpec(float(p), r_e(p, N), BallKind.MIN_ENCLOSING_SEPARABLE)


_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def extremal_local_state(p: float) -> np.ndarray:
    """Single-qubit pure state whose tensor powers maximise the Bloch p-norm."""
    p = float(p)
    if p <= 2:
        return (np.eye(2) + sum(_SIGMA) / np.sqrt(3)) / 2
    return (np.eye(2) + _SIGMA[0]) / 2


def extremal_states(p: float, N: int) -> DensityMatrix:
    p, N = _check(p, N)
    return validate_density(kron([extremal_local_state(p)] * N), [2] * N)


def l1_tightness_family(N: int, eps: float) -> np.ndarray:
    """Re-export of :func:`blochsep.catalog.tightness_family` (raw, non-positive for eps > 0)."""
    return tightness_family(N, eps)
