"""Generalized Bloch representation of multipartite density matrices.

Every party of local dimension ``n`` gets a basis ``{B_0, ..., B_{n^2-1}}``:
``B_0`` is proportional to the identity and ``B_i`` (``i >= 1``) is a scaled
SU(n) generator.  Three normalisations are supported (see :class:`Convention`).
A state is written

    rho = (I + sum_alpha c_alpha B_alpha) / n,

where ``alpha`` runs over multi-indices other than all-zeros and ``B_alpha`` is
the Kronecker product of local elements.  Components are stored flat in
lexicographic multi-index order with ``(0, ..., 0)`` skipped.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import NumericalInconsistency, ShapeMismatch, UsageError
from .linalg import DensityMatrix, check_shape

ZERO_TOL = 1e-12
IMAG_TOL = 1e-8


class Convention(enum.Enum):
    """Normalisation of the local basis.

    TILDE:  ``{I, sqrt(n(n-1)/2) lambda_i}`` (pure qubit-like states have unit local vectors)
    CHECK:  ``{I, sqrt(n/(2(n-1))) lambda_i}`` (unit local vectors are always positive)
    PRIME:  ``{sqrt(n-1) I, sqrt(n(n-1)/2) lambda_i}`` (every element has the same norm)
    """

    TILDE = "TILDE"
    CHECK = "CHECK"
    PRIME = "PRIME"

    @classmethod
    def parse(cls, value) -> "Convention":
        if isinstance(value, cls):
            return value
        return cls(str(value).upper())


@lru_cache(maxsize=None)
def _generators(n: int) -> tuple[np.ndarray, ...]:
    mats = []
    for j, k in itertools.combinations(range(n), 2):
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = m[k, j] = 1
        mats.append(m)
    for j, k in itertools.combinations(range(n), 2):
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        mats.append(m)
    for r in range(1, n):
        diag = np.zeros(n)
        diag[:r] = 1
        diag[r] = -r
        mats.append(np.diag(diag * np.sqrt(2 / (r * (r + 1)))).astype(complex))
    for m in mats:
        m.setflags(write=False)
    return tuple(mats)


def generators(n: int) -> list[np.ndarray]:
    """The ``n^2 - 1`` generalized Gell-Mann matrices with ``Tr(l_i l_j) = 2 delta_ij``.

    Ordering: symmetric off-diagonal pairs ``(j, k)``, ``j < k`` row-major, then
    the antisymmetric pairs in the same order, then the diagonal generators by
    increasing rank.  For ``n = 2`` this yields the Pauli matrices in order.
    """
    if int(n) < 2:
        raise UsageError(f"generators need n >= 2, got {n}")
    return list(_generators(int(n)))


def _scales(n: int, convention: Convention) -> tuple[float, float]:
    """(identity scale, generator scale) for one party."""
    if convention is Convention.TILDE:
        return 1.0, np.sqrt(n * (n - 1) / 2)
    if convention is Convention.CHECK:
        return 1.0, np.sqrt(n / (2 * (n - 1)))
    return np.sqrt(n - 1), np.sqrt(n * (n - 1) / 2)


@lru_cache(maxsize=None)
def local_basis(n: int, convention: Convention) -> np.ndarray:
    """Stack of the ``n^2`` scaled local basis matrices, shape ``(n^2, n, n)``."""
    convention = Convention.parse(convention)
    s0, s = _scales(n, convention)
    stack = np.empty((n * n, n, n), dtype=complex)
    stack[0] = s0 * np.eye(n)
    stack[1:] = s * np.array(_generators(n))
    stack.setflags(write=False)
    return stack


@lru_cache(maxsize=None)
def local_norms(n: int, convention: Convention) -> np.ndarray:
    """``Tr(B_i^2)`` for each local basis element."""
    convention = Convention.parse(convention)
    s0, s = _scales(n, convention)
    out = np.full(n * n, 2 * s * s)
    out[0] = n * s0 * s0
    out.setflags(write=False)
    return out


def basis_norms(shape: Sequence[int], convention: Convention) -> np.ndarray:
    """``Tr(B_alpha^2)`` as a full tensor of shape ``(n_1^2, ..., n_N^2)``."""
    convention = Convention.parse(convention)
    out = np.ones(())
    for n in shape:
        out = np.multiply.outer(out, local_norms(n, convention))
    return out


def _check_index(shape: tuple[int, ...], idx: Sequence[int]) -> tuple[int, ...]:
    idx = tuple(int(i) for i in idx)
    if len(idx) != len(shape):
        raise UsageError(f"multi-index {idx} does not match {len(shape)} parties")
    for i, n in zip(idx, shape):
        if not 0 <= i < n * n:
            raise UsageError(f"multi-index {idx} out of range for shape {list(shape)}")
    return idx


def basis_element(shape: Sequence[int], convention: Convention, idx: Sequence[int]) -> np.ndarray:
    """Kronecker product of the convention-scaled local elements named by ``idx``."""
    shape = check_shape(shape)
    convention = Convention.parse(convention)
    idx = _check_index(shape, idx)
    out = np.ones((1, 1), dtype=complex)
    for n, i in zip(shape, idx):
        out = np.kron(out, local_basis(n, convention)[i])
    return out


def iter_multi_indices(shape: Sequence[int], nonzero_only: bool = False) -> Iterator[tuple[int, ...]]:
    """Multi-indices in storage order: lexicographic, ``(0, ..., 0)`` skipped."""
    start = 1 if nonzero_only else 0
    it = itertools.product(*(range(start, n * n) for n in shape))
    if not nonzero_only:
        next(it)
    return it


def expand(shape: Sequence[int], convention: Convention, coeffs: np.ndarray) -> np.ndarray:
    """``sum_alpha coeffs[alpha] * B_alpha`` for a full coefficient tensor (zero index included)."""
    shape = tuple(shape)
    convention = Convention.parse(convention)
    t = np.asarray(coeffs, dtype=complex)
    for n in shape:
        t = np.tensordot(t, local_basis(n, convention), axes=([0], [0]))
    k = len(shape)
    # axes are now (a_0, b_0, a_1, b_1, ...)
    t = t.transpose(list(range(0, 2 * k, 2)) + list(range(1, 2 * k, 2)))
    dim = int(np.prod(shape))
    return t.reshape(dim, dim)


def overlaps(mat: np.ndarray, shape: Sequence[int], convention: Convention) -> np.ndarray:
    """``Tr(mat B_alpha)`` for every multi-index, as a full tensor."""
    shape = tuple(shape)
    convention = Convention.parse(convention)
    t = np.asarray(mat, dtype=complex).reshape(shape + shape)
    m = len(shape)
    for n in shape:
        # contract the leading row index a_k with column index b_k: Tr(rho B) = sum rho[a,b] B[b,a]
        t = np.tensordot(t, local_basis(n, convention), axes=([0, m], [2, 1]))
        m -= 1
    return t


@dataclass(frozen=True, eq=False)
class BlochVector:
    """Real Bloch components of a state under one basis convention."""

    shape: tuple[int, ...]
    convention: Convention
    components: np.ndarray = field(repr=False)

    def __post_init__(self):
        expected = int(np.prod([n * n for n in self.shape])) - 1
        if self.components.shape != (expected,):
            raise ShapeMismatch(
                f"shape {list(self.shape)} needs {expected} components, got {self.components.shape}"
            )

    @classmethod
    def from_tensor(cls, shape, convention, tensor: np.ndarray) -> "BlochVector":
        shape = check_shape(shape)
        flat = np.asarray(tensor, dtype=float).reshape(-1)[1:].copy()
        flat.setflags(write=False)
        return cls(shape, Convention.parse(convention), flat)

    @classmethod
    def from_components(cls, shape, convention, values: Mapping[tuple[int, ...], float]) -> "BlochVector":
        """Build from a sparse ``{multi_index: value}`` mapping; missing entries are 0."""
        shape = check_shape(shape)
        t = np.zeros([n * n for n in shape])
        for idx, v in values.items():
            idx = _check_index(shape, idx)
            if not any(idx):
                raise UsageError("the all-zero component is implicit and fixed to 1")
            t[idx] = v
        return cls.from_tensor(shape, convention, t)

    @property
    def tensor(self) -> np.ndarray:
        """Full coefficient tensor with the implicit leading 1 restored."""
        return np.concatenate([[1.0], self.components]).reshape([n * n for n in self.shape])

    def __getitem__(self, idx) -> float:
        idx = _check_index(self.shape, idx)
        if not any(idx):
            return 1.0
        return float(self.tensor[idx])

    def norm(self, p: float = 1) -> float:
        return p_norm(self.components, p)

    def block(self, parties: Sequence[int]) -> np.ndarray:
        """Components whose nonzero positions are exactly ``parties`` (0-based).

        A single party gives its local vector ``r_k``; for a pure product
        state the block over several parties is the outer product of their
        local vectors.
        """
        parties = set(parties)
        sl = tuple(slice(1, None) if k in parties else 0 for k in range(len(self.shape)))
        return self.tensor[sl]

    def local_vector(self, party: int) -> np.ndarray:
        return self.block([party])

    def nonzero(self) -> dict[tuple[int, ...], float]:
        """Sparse view ``{multi_index: value}`` of the nonzero components."""
        t = self.tensor
        out = {}
        for idx in zip(*np.nonzero(t)):
            idx = tuple(int(i) for i in idx)
            if any(idx):
                out[idx] = float(t[idx])
        return out


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """Components whose multi-index is nonzero at every party; shape ``(n_1^2-1, ...)``."""

    shape: tuple[int, ...]
    values: np.ndarray = field(repr=False)

    def norm(self, p: float = 1) -> float:
        return p_norm(self.values, p)


def to_bloch(rho: DensityMatrix, convention: Convention = Convention.TILDE,
             zero_tol: float = ZERO_TOL) -> BlochVector:
    """Components ``c_alpha = n Tr(rho B_alpha) / Tr(B_alpha^2)``.

    Components below ``zero_tol`` in magnitude are stored as exact zeros.
    """
    return operator_components(rho.mat, rho.shape, convention, zero_tol)


def operator_components(mat, shape: Sequence[int], convention: Convention = Convention.TILDE,
                        zero_tol: float = ZERO_TOL) -> BlochVector:
    """Bloch components of a unit-trace Hermitian operator that need not be positive."""
    convention = Convention.parse(convention)
    shape = check_shape(shape)
    mat = np.asarray(mat, dtype=complex)
    n = int(np.prod(shape))
    if mat.shape != (n, n):
        raise ShapeMismatch(f"matrix of size {mat.shape} does not match shape {list(shape)}")
    raw = overlaps(mat, shape, convention)
    residue = float(np.max(np.abs(raw.imag)))
    if residue > IMAG_TOL:
        raise NumericalInconsistency(f"imaginary residue {residue:.3e} in Bloch components")
    coeffs = n * raw.real / basis_norms(shape, convention)
    coeffs[np.abs(coeffs) < zero_tol] = 0.0
    trace = np.real(np.trace(mat))
    if abs(trace - 1) > IMAG_TOL:
        raise NumericalInconsistency(f"operator trace {trace} is not 1")
    return BlochVector.from_tensor(shape, convention, coeffs)


def from_bloch(b: BlochVector) -> np.ndarray:
    """``(I + sum c_alpha B_alpha) / n``.  The result is not checked for positivity."""
    n = int(np.prod(b.shape))
    t = b.tensor
    # B_0 carries the identity scale (sqrt(n_k - 1) under PRIME), so undo it
    t[(0,) * len(b.shape)] = 1 / np.prod([_scales(k, b.convention)[0] for k in b.shape])
    return expand(b.shape, b.convention, t) / n


def correlation_tensor(b: BlochVector) -> CorrelationTensor:
    sl = tuple(slice(1, None) for _ in b.shape)
    values = b.tensor[sl].copy()
    values.setflags(write=False)
    return CorrelationTensor(b.shape, values)


def p_norm(values, p: float) -> float:
    """``(sum |a_i|^p)^(1/p)``; ``p = inf`` gives the max norm."""
    p = float(p)
    if not p >= 1:
        raise UsageError(f"p-norm needs p >= 1, got {p}")
    a = np.abs(np.asarray(values, dtype=float)).reshape(-1)
    if a.size == 0:
        return 0.0
    if np.isinf(p):
        return float(a.max())
    if p == 1:
        return float(a.sum())
    if p == 2:
        return float(np.sqrt(np.dot(a, a)))
    m = a.max()
    if m == 0:
        return 0.0
    return float(m * np.sum((a / m) ** p) ** (1 / p))


class Purity(NamedTuple):
    lhs: float
    rhs: float


def purity_relation(rho: DensityMatrix, tol: float = 1e-10) -> Purity:
    """``Tr(rho^2)`` against its expression through the PRIME-basis 2-norm.

    For all-qubit shapes the TILDE identity ``Tr(rho^2) = (1 + |c|^2) / 2^N``
    is checked as well.  Raises :class:`NumericalInconsistency` past ``tol``.
    """
    shape = rho.shape
    lhs = float(np.real(np.vdot(rho.mat, rho.mat)))
    prime = to_bloch(rho, Convention.PRIME, zero_tol=0.0)
    rhs = (1 + np.prod([n - 1 for n in shape]) * prime.norm(2) ** 2) / np.prod(shape)
    if abs(lhs - rhs) > tol:
        raise NumericalInconsistency(f"purity mismatch {lhs} vs {rhs}")
    if all(n == 2 for n in shape):
        tilde = to_bloch(rho, Convention.TILDE, zero_tol=0.0)
        q = (1 + tilde.norm(2) ** 2) / 2 ** len(shape)
        if abs(lhs - q) > tol:
            raise NumericalInconsistency(f"qubit purity mismatch {lhs} vs {q}")
    return Purity(lhs, float(rhs))
