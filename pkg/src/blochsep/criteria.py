"""Necessary conditions for full separability on the correlation tensor.

A violated bound proves entanglement.  Nothing here ever certifies
separability; non-violation is reported as INCONCLUSIVE.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .bloch import CorrelationTensor, p_norm
from .errors import UsageError

DECISION_TOL = 1e-9


class Verdict(enum.Enum):
    ENTANGLED = "ENTANGLED"
    SEPARABLE_CERTIFIED = "SEPARABLE_CERTIFIED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class CriterionVerdict:
    verdict: Verdict
    criterion: str
    lhs: float
    bound: float
    detail: dict[str, Any] = field(default_factory=dict)
    decomposition: Any = None

    @property
    def entangled(self) -> bool:
        return self.verdict is Verdict.ENTANGLED

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.SEPARABLE_CERTIFIED


def _flag(lhs: float, bound: float, tol: float) -> Verdict:
    return Verdict.ENTANGLED if lhs > bound + tol else Verdict.INCONCLUSIVE


def theorem1_bound(shape, p: float) -> float:
    """Largest correlation-tensor p-norm attainable by a fully separable state."""
    p = float(p)
    if not p >= 1:
        raise UsageError(f"p must be >= 1, got {p}")
    if p > 2:
        return 1.0
    return float(np.prod([(n * n - 1) ** (1 / p - 0.5) for n in shape]))


def theorem1_check(T: CorrelationTensor, p: float = 1, decision_tol: float = DECISION_TOL) -> CriterionVerdict:
    bound = theorem1_bound(T.shape, p)
    lhs = p_norm(T.values, p)
    return CriterionVerdict(_flag(lhs, bound, decision_tol), f"theorem1(p={p:g})", lhs, bound, {"p": float(p)})


def sign_tensor(T: CorrelationTensor) -> np.ndarray:
    """Entrywise sign of the correlation tensor with ``sign(0) = 0``.

    Exact zeros come from the Bloch transform's ``zero_tol`` clamp.
    """
    return np.sign(T.values).astype(np.int8)


def theorem2_M(t: np.ndarray) -> float:
    """Average over parties of the largest absolute slice sum of the sign tensor."""
    a = np.abs(np.asarray(t, dtype=float))
    if a.size == 0:
        return 0.0
    N = a.ndim
    total = 0.0
    for k in range(N):
        others = tuple(j for j in range(N) if j != k)
        total += float(a.sum(axis=others).max())
    return total / N


def theorem2_check(T: CorrelationTensor, decision_tol: float = DECISION_TOL) -> CriterionVerdict:
    M = theorem2_M(sign_tensor(T))
    lhs = T.norm(1)
    return CriterionVerdict(_flag(lhs, M, decision_tol), "theorem2", lhs, M, {"T_norm1": lhs, "M": M})
