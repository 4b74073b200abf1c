"""Positive-partial-transpose oracle used to cross-check every verdict."""

from __future__ import annotations

import itertools
from typing import Iterable

import numpy as np

from .errors import UsageError
from .linalg import DensityMatrix, min_eigenvalue, partial_transpose

PPT_TOL = 1e-10
FULL_CUT_LIMIT = 4


def ppt_min_eigenvalue(rho: DensityMatrix, parties: Iterable[int]) -> float:
    return min_eigenvalue(partial_transpose(rho, None, parties))


def is_ppt(rho: DensityMatrix, parties: Iterable[int], tol: float = PPT_TOL) -> bool:
    """True iff the partial transpose over ``parties`` has no eigenvalue below ``-tol``."""
    parties = set(parties)
    if not parties or len(parties) >= rho.n_parties:
        raise UsageError(f"bipartition {sorted(parties)} is trivial for {rho.n_parties} parties")
    return ppt_min_eigenvalue(rho, parties) >= -tol


def bipartitions(n_parties: int, full: bool | None = None) -> list[tuple[int, ...]]:
    """One side of each cut.

    All ``2^(N-1) - 1`` cuts (party 0 never on the listed side) up to
    :data:`FULL_CUT_LIMIT` parties; beyond that only the ``N`` single-party
    cuts unless ``full`` is given explicitly.
    """
    if full is None:
        full = n_parties <= FULL_CUT_LIMIT
    if not full:
        return [(k,) for k in range(n_parties)]
    rest = range(1, n_parties)
    return [S for size in range(1, n_parties) for S in itertools.combinations(rest, size)]


def ppt_all_cuts(rho: DensityMatrix, tol: float = PPT_TOL) -> dict[tuple[int, ...], float]:
    """Minimum partial-transpose eigenvalue for every cut (see :func:`bipartitions`)."""
    if rho.n_parties < 2:
        return {}
    return {S: ppt_min_eigenvalue(rho, S) for S in bipartitions(rho.n_parties)}


def is_ppt_all(rho: DensityMatrix, tol: float = PPT_TOL) -> bool:
    return all(v >= -tol for v in ppt_all_cuts(rho).values())


def two_qubit_separable(rho: DensityMatrix) -> bool:
    """Exact separability for two qubits (PPT is necessary and sufficient there)."""
    if tuple(rho.shape) != (2, 2):
        raise UsageError(f"two_qubit_separable needs shape [2, 2], got {list(rho.shape)}")
    return is_ppt(rho, {1})
