"""Run the criteria pipeline on one state and cross-check it against the PPT oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .bloch import Convention, correlation_tensor, to_bloch
from .certificates import theorem3, theorem4, theorem5, theorem6, theorem7
from .criteria import DECISION_TOL, CriterionVerdict, Verdict, theorem1_check, theorem2_check
from .errors import UsageError
from .linalg import DensityMatrix
from .ppt import PPT_TOL, ppt_all_cuts

ALL_CRITERIA = ("theorem1", "theorem2", "theorem3", "theorem4", "theorem5", "theorem6", "theorem7")


def applicable_criteria(shape) -> list[str]:
    qubits = all(n == 2 for n in shape)
    names = ["theorem1", "theorem2"]
    if qubits:
        names.append("theorem3")
        if len(shape) == 3:
            names += ["theorem4", "theorem5"]
        elif len(shape) == 4:
            names.append("theorem6")
    else:
        names.append("theorem7")
    return names


def run_criteria(rho: DensityMatrix, criteria: Sequence[str] | None = None,
                 ps: Sequence[float] = (1, 2), decision_tol: float = DECISION_TOL) -> list[CriterionVerdict]:
    """Necessary criteria first, then the sufficient ones that fit ``rho``'s shape.

    Criteria named explicitly but not applicable to the shape raise
    :class:`UsageError`.
    """
    applicable = applicable_criteria(rho.shape)
    if criteria is None:
        names = applicable
    else:
        names = list(criteria)
        for c in names:
            if c not in ALL_CRITERIA:
                raise UsageError(f"unknown criterion {c!r}; known: {', '.join(ALL_CRITERIA)}")
            if c not in applicable:
                raise UsageError(f"{c} does not apply to shape {list(rho.shape)}")
    tilde = to_bloch(rho, Convention.TILDE)
    T = correlation_tensor(tilde)
    out = []
    for name in names:
        if name == "theorem1":
            out.extend(theorem1_check(T, p, decision_tol) for p in ps)
        elif name == "theorem2":
            out.append(theorem2_check(T, decision_tol))
        elif name == "theorem7":
            out.append(theorem7(to_bloch(rho, Convention.CHECK), decision_tol))
        else:
            fn = {"theorem3": theorem3, "theorem4": theorem4, "theorem5": theorem5, "theorem6": theorem6}[name]
            out.append(fn(tilde, decision_tol))
    return out


def overall_verdict(records: Sequence[CriterionVerdict]) -> Verdict | None:
    """ENTANGLED or SEPARABLE_CERTIFIED if any record says so; ``None`` if both do."""
    ent = any(r.entangled for r in records)
    sep = any(r.certified for r in records)
    if ent and sep:
        return None
    if ent:
        return Verdict.ENTANGLED
    if sep:
        return Verdict.SEPARABLE_CERTIFIED
    return Verdict.INCONCLUSIVE


@dataclass
class OracleCheck:
    cuts: dict[tuple[int, ...], float]
    ppt_all: bool
    consistent: bool
    notes: list[str] = field(default_factory=list)


def oracle_check(rho: DensityMatrix, verdict: Verdict | None, tol: float = PPT_TOL) -> OracleCheck:
    """Certified states must be PPT on every cut; entangled 2-qubit states must be NPT."""
    cuts = ppt_all_cuts(rho)
    ppt = all(v >= -tol for v in cuts.values())
    notes = []
    consistent = verdict is not None
    if verdict is Verdict.SEPARABLE_CERTIFIED and not ppt:
        consistent = False
        notes.append("certified state fails PPT")
    if verdict is Verdict.ENTANGLED and tuple(rho.shape) == (2, 2) and ppt:
        consistent = False
        notes.append("2-qubit state flagged entangled but PPT")
    if verdict is None:
        notes.append("criteria disagree")
    return OracleCheck(cuts, ppt, consistent, notes)
