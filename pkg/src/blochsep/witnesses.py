"""Witness operators whose expectation value equals a Bloch 1-norm minus an offset."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .bloch import BlochVector, Convention, basis_norms, expand
from .criteria import sign_tensor, theorem2_M
from .bloch import correlation_tensor
from .errors import ShapeMismatch, UnsupportedConvention, UsageError
from .linalg import DensityMatrix, check_shape

IMAG_TOL = 1e-10


class WitnessMode(enum.Enum):
    FULL_NORM = "FULL_NORM"
    CORRELATION_ONLY = "CORRELATION_ONLY"


@dataclass(frozen=True, eq=False)
class Witness:
    matrix: np.ndarray = field(repr=False)
    offset_a: float
    mode: WitnessMode
    shape: tuple[int, ...]
    signs: np.ndarray = field(repr=False)

    @property
    def sign_pattern(self) -> dict[tuple[int, ...], int]:
        """Nonzero entries of the sign tensor keyed by multi-index."""
        return {tuple(int(i) for i in idx): int(self.signs[idx])
                for idx in zip(*np.nonzero(self.signs))}


def _mask(shape, mode: WitnessMode) -> np.ndarray:
    mask = np.ones([n * n for n in shape], dtype=bool)
    if mode is WitnessMode.CORRELATION_ONLY:
        mask[...] = False
        mask[tuple(slice(1, None) for _ in shape)] = True
    mask[(0,) * len(shape)] = False
    return mask


def witness_from_signs(shape, signs: np.ndarray, a: float, mode=WitnessMode.FULL_NORM) -> Witness:
    """``W = -a I + sum_alpha sign_alpha * n / Tr(B_alpha^2) * B_alpha`` in the TILDE basis.

    ``signs`` is a full tensor over multi-indices; entries outside the mode's
    index set are ignored.
    """
    shape = check_shape(shape)
    mode = WitnessMode(mode.value if isinstance(mode, WitnessMode) else str(mode).upper())
    signs = np.asarray(signs)
    if signs.shape != tuple(n * n for n in shape):
        raise ShapeMismatch(f"sign tensor shape {signs.shape} does not match {list(shape)}")
    signs = np.where(_mask(shape, mode), np.sign(signs), 0).astype(np.int8)
    n = int(np.prod(shape))
    coeffs = signs * (n / basis_norms(shape, Convention.TILDE))
    # B_0 is the identity in the TILDE basis
    coeffs[(0,) * len(shape)] = -a
    W = expand(shape, Convention.TILDE, coeffs)
    W = (W + W.conj().T) / 2
    W.setflags(write=False)
    signs.setflags(write=False)
    return Witness(W, float(a), mode, shape, signs)


def build_witness(b: BlochVector, a: float, mode=WitnessMode.FULL_NORM) -> Witness:
    if b.convention is not Convention.TILDE:
        raise UnsupportedConvention("witnesses are built from TILDE components")
    return witness_from_signs(b.shape, np.sign(b.tensor), a, mode)


def evaluate_witness(w: Witness, rho: DensityMatrix) -> float:
    """``Re Tr(rho W)``; the imaginary part must vanish."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if mat.shape != w.matrix.shape:
        raise ShapeMismatch(f"state of size {mat.shape} vs witness {w.matrix.shape}")
    val = np.einsum("ij,ji->", mat, w.matrix)
    if abs(val.imag) > IMAG_TOL:
        raise UsageError(f"Tr(rho W) has imaginary part {val.imag:.3e}")
    return float(val.real)


def offset_preset(name: str, b: BlochVector) -> float:
    """Named offsets: ``theorem3`` (1), ``theorem1`` (prod sqrt(n_k^2 - 1)), ``M`` (theorem 2 bound)."""
    key = str(name).lower()
    if key in ("theorem3", "1", "one"):
        return 1.0
    if key == "theorem1":
        return float(np.prod([np.sqrt(n * n - 1) for n in b.shape]))
    if key in ("m", "theorem2"):
        return theorem2_M(sign_tensor(correlation_tensor(b)))
    raise UsageError(f"unknown offset preset {name!r}")


def random_sign_witnesses(shape, a: float, count: int, seed: int,
                          mode=WitnessMode.FULL_NORM) -> list[Witness]:
    """Witnesses with independent uniform +-1 sign patterns; deterministic per ``seed``."""
    if count < 1:
        raise UsageError("count must be >= 1")
    shape = check_shape(shape)
    rng = np.random.default_rng(seed)
    dims = [n * n for n in shape]
    return [witness_from_signs(shape, rng.choice(np.array([-1, 1], dtype=np.int8), size=dims), a, mode)
            for _ in range(count)]
