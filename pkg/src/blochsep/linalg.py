"""Dense complex-matrix primitives and the validated :class:`DensityMatrix` type."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    NonHermitian,
    NotPositiveSemidefinite,
    ShapeMismatch,
    TraceNotOne,
    UsageError,
)

DEFAULT_TOL = 1e-9


def kron(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of ``factors`` in listed order."""
    factors = list(factors)
    if not factors:
        raise UsageError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


def check_shape(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) < 1:
        raise UsageError("a system needs at least one party")
    if any(d < 2 for d in dims):
        raise UsageError(f"every local dimension must be >= 2, got {dims}")
    return dims


def hermitian_defect(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0


def min_eigenvalue(mat: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix (the upper triangle is ignored)."""
    return float(np.linalg.eigvalsh(mat)[0])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix on a tensor-product space.

    Build instances with :func:`validate_density`; the constructor itself does
    not check anything.
    """

    shape: tuple[int, ...]
    mat: np.ndarray = field(repr=False)
    validation_tol: float = DEFAULT_TOL

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def n_parties(self) -> int:
        return len(self.shape)

    def with_shape(self, shape: Sequence[int]) -> "DensityMatrix":
        """Reinterpret the same matrix under another factorisation of its dimension."""
        return validate_density(self.mat, shape, self.validation_tol)


def validate_density(mat, shape: Sequence[int], tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity, then wrap ``mat``.

    Raises a :class:`~blochsep.errors.ValidationError` subclass naming the
    first violated invariant; its ``magnitude`` attribute carries the size of
    the violation.
    """
    shape = check_shape(shape)
    mat = np.array(mat, dtype=complex)
    n = int(np.prod(shape))
    if mat.ndim != 2 or mat.shape != (n, n):
        raise ShapeMismatch(f"expected a {n}x{n} matrix for shape {list(shape)}, got {mat.shape}")
    defect = hermitian_defect(mat)
    if defect > tol:
        raise NonHermitian(f"max |A - A^dagger| = {defect:.3e} exceeds {tol:g}", defect)
    # symmetrise away sub-tolerance noise so downstream eigensolves see a Hermitian matrix
    mat = (mat + mat.conj().T) / 2
    trace_err = abs(np.trace(mat).real - 1.0)
    if trace_err > tol:
        raise TraceNotOne(f"|Tr - 1| = {trace_err:.3e} exceeds {tol:g}", trace_err)
    lowest = min_eigenvalue(mat)
    if lowest < -tol:
        raise NotPositiveSemidefinite(f"minimum eigenvalue {lowest:.3e} below -{tol:g}", -lowest)
    mat.setflags(write=False)
    return DensityMatrix(shape, mat, tol)


def partial_transpose(mat, shape: Sequence[int], parties: Iterable[int]) -> np.ndarray:
    """Transpose the indices of the listed (0-based) ``parties``.

    ``mat`` may be a bare array or a :class:`DensityMatrix`; for the latter the
    ``shape`` argument may be ``None``.
    """
    if isinstance(mat, DensityMatrix):
        shape = mat.shape if shape is None else shape
        mat = mat.mat
    shape = check_shape(shape)
    n_parties = len(shape)
    parties = sorted(set(int(p) for p in parties))
    if any(p < 0 or p >= n_parties for p in parties):
        raise UsageError(f"party indices must lie in 0..{n_parties - 1}, got {parties}")
    n = int(np.prod(shape))
    t = np.asarray(mat).reshape(shape + shape)
    axes = list(range(2 * n_parties))
    for p in parties:
        axes[p], axes[p + n_parties] = axes[p + n_parties], axes[p]
    return t.transpose(axes).reshape(n, n)
