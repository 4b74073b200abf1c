"""State families used throughout the examples and tests, plus random samplers."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bloch import Convention, basis_element
from .errors import NotPositiveSemidefinite, UsageError
from .linalg import DensityMatrix, kron, validate_density

CATALOG_TOL = 1e-10


def _in_range(name, value, lo, hi):
    if not lo <= value <= hi:
        raise UsageError(f"{name} must lie in [{lo}, {hi}], got {value}")


def _pure(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def _ket(dim: int, i: int) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[i] = 1
    return e


def maximally_mixed(shape) -> DensityMatrix:
    n = int(np.prod(shape))
    return validate_density(np.eye(n) / n, shape)


def isotropic(d: int, alpha: float) -> DensityMatrix:
    """``(1 - alpha) I / d^2 + alpha |phi+><phi+|`` on ``[d, d]``."""
    d = int(d)
    if d < 2:
        raise UsageError(f"d must be >= 2, got {d}")
    _in_range("alpha", alpha, 0, 1)
    phi = sum(np.kron(_ket(d, i), _ket(d, i)) for i in range(d))
    mat = (1 - alpha) * np.eye(d * d) / d ** 2 + alpha * _pure(phi)
    return validate_density(mat, [d, d], CATALOG_TOL)


def ghz_vector(N: int) -> np.ndarray:
    v = np.zeros(2 ** N, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


def noisy_ghz(N: int, alpha: float) -> DensityMatrix:
    """``(1 - alpha) I / 2^N + alpha |GHZ_N><GHZ_N|``."""
    N = int(N)
    if N < 2:
        raise UsageError(f"N must be >= 2, got {N}")
    _in_range("alpha", alpha, 0, 1)
    n = 2 ** N
    mat = (1 - alpha) * np.eye(n) / n + alpha * _pure(ghz_vector(N))
    return validate_density(mat, [2] * N, CATALOG_TOL)


def state_A(alpha: float) -> DensityMatrix:
    """``alpha A + (1 - alpha) I/8`` with ``A = (I + s1 s3 s1 + s2 s2 s2)/8``.

    Positive exactly for ``alpha <= 1/sqrt(2)``; larger values are rejected by
    the eigenvalue check rather than by a hard-coded limit.
    """
    if not alpha >= 0:
        raise UsageError(f"alpha must be >= 0, got {alpha}")
    shape = (2, 2, 2)
    A = (np.eye(8) + basis_element(shape, Convention.TILDE, (1, 3, 1))
         + basis_element(shape, Convention.TILDE, (2, 2, 2))) / 8
    mat = alpha * A + (1 - alpha) * np.eye(8) / 8
    try:
        return validate_density(mat, shape, CATALOG_TOL)
    except NotPositiveSemidefinite as exc:
        raise UsageError(f"state_A is not positive at alpha={alpha}: {exc}") from exc


def bound_entangled_core(a: float) -> np.ndarray:
    """The ``2 x 4`` bound entangled family ``rho_a`` as an 8x8 matrix (computational order)."""
    _in_range("a", a, 0, 1)
    k = lambda i, j: np.kron(_ket(2, i), _ket(4, j))  # noqa: E731
    psis = [(k(0, i - 1) + k(1, i)) / np.sqrt(2) for i in (1, 2, 3)]
    ent = 2 / 7 * sum(_pure(p) for p in psis) + 1 / 7 * _pure(k(0, 3))
    phi = np.kron(_ket(2, 1), np.sqrt((1 + a) / 2) * _ket(4, 0) + np.sqrt((1 - a) / 2) * _ket(4, 2))
    return 7 * a / (7 * a + 1) * ent + 1 / (7 * a + 1) * _pure(phi)


def bound_entangled(a: float, alpha: float, shape=(2, 2, 2)) -> DensityMatrix:
    """``alpha rho_a + (1 - alpha) I/8``; ``shape`` may be ``[2, 4]`` or ``[2, 2, 2]``."""
    _in_range("alpha", alpha, 0, 1)
    if int(np.prod(shape)) != 8:
        raise UsageError(f"bound_entangled lives in dimension 8, got shape {list(shape)}")
    mat = alpha * bound_entangled_core(a) + (1 - alpha) * np.eye(8) / 8
    return validate_density(mat, shape, CATALOG_TOL)


def tightness_family(N: int, eps: float) -> np.ndarray:
    """``(I + s1^{xN} + eps s2^{xN}) / 2^N`` as a raw Hermitian matrix.

    Its Bloch 1-norm is ``1 + eps``.  It is **not** positive for ``eps > 0``:
    the two strings commute or anticommute, so the spectrum reaches
    ``1 - sqrt(1 + eps^2)`` (odd N) or ``-eps`` (even N).  Use
    :func:`tightness_state` for a genuine density matrix with the same role.
    """
    N = int(N)
    if N < 1:
        raise UsageError("N must be >= 1")
    shape = (2,) * N
    mat = (np.eye(2 ** N) + basis_element(shape, Convention.TILDE, (1,) * N)
           + eps * basis_element(shape, Convention.TILDE, (2,) * N)) / 2 ** N
    return mat


def tightness_state(N: int, eps: float) -> DensityMatrix:
    """A valid N-qubit state with Bloch 1-norm ``1 + eps`` that is NPT for ``eps > 0``.

    Two-qubit isotropic state with ``alpha = (1 + eps)/3`` on parties 0 and 1,
    maximally mixed on the rest.
    """
    N = int(N)
    if N < 2:
        raise UsageError("N must be >= 2")
    _in_range("eps", eps, 0, 2)
    iso = isotropic(2, (1 + eps) / 3).mat
    mat = np.kron(iso, np.eye(2 ** (N - 2)) / 2 ** (N - 2))
    return validate_density(mat, [2] * N, CATALOG_TOL)


# --- random states -----------------------------------------------------------

class RandomKind(enum.Enum):
    GENERIC = "GENERIC"
    PRODUCT_MIXTURE = "PRODUCT_MIXTURE"


def _ginibre(rng, n, k=None):
    k = n if k is None else k
    return rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))


def random_pure_vector(rng, n: int) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_states(shape, kind=RandomKind.GENERIC, seed: int = 0, count: int = 1,
                  max_terms: int | None = None) -> list[DensityMatrix]:
    """Deterministic random states.

    GENERIC: ``G G^dagger / Tr`` with a square complex Ginibre ``G``.
    PRODUCT_MIXTURE: random convex mixtures of random pure product states
    (separable by construction); the number of terms is drawn from
    ``1..max_terms`` (default ``2 n``).
    """
    if count < 1:
        raise UsageError("count must be >= 1")
    kind = RandomKind(kind.value if isinstance(kind, RandomKind) else str(kind).upper())
    shape = tuple(int(d) for d in shape)
    n = int(np.prod(shape))
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        if kind is RandomKind.GENERIC:
            g = _ginibre(rng, n)
            m = g @ g.conj().T
            m /= np.trace(m).real
        else:
            terms = int(rng.integers(1, (max_terms or 2 * n) + 1))
            w = rng.dirichlet(np.ones(terms))
            m = np.zeros((n, n), dtype=complex)
            for wi in w:
                m += wi * kron([_pure(random_pure_vector(rng, d)) for d in shape])
        out.append(validate_density(m, shape, CATALOG_TOL))
    return out


# --- catalog registry ----------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: dict[str, float]
    builder: Callable[..., DensityMatrix]
    sweep: str

    def build(self, **params) -> DensityMatrix:
        kwargs = dict(self.parameters)
        unknown = set(params) - set(kwargs)
        if unknown:
            raise UsageError(f"unknown parameters for {self.name}: {sorted(unknown)}")
        kwargs.update(params)
        return self.builder(**kwargs)


def _bound_entangled_entry(a=0.0, alpha=0.2, bipartite=0):
    return bound_entangled(a, alpha, (2, 4) if bipartite else (2, 2, 2))


def _int_args(f, *names):
    def wrapped(**kw):
        for k in names:
            if k in kw:
                v = kw[k]
                if float(v) != int(v):
                    raise UsageError(f"{k} must be an integer, got {v}")
                kw[k] = int(v)
        return f(**kw)
    return wrapped


CATALOG: dict[str, CatalogEntry] = {
    "isotropic": CatalogEntry("isotropic", {"d": 2, "alpha": 0.0}, _int_args(isotropic, "d"), "alpha"),
    "noisy_ghz": CatalogEntry("noisy_ghz", {"N": 3, "alpha": 0.0}, _int_args(noisy_ghz, "N"), "alpha"),
    "state_A": CatalogEntry("state_A", {"alpha": 0.0}, state_A, "alpha"),
    "bound_entangled": CatalogEntry("bound_entangled", {"a": 0.0, "alpha": 0.2, "bipartite": 0},
                                    _int_args(_bound_entangled_entry, "bipartite"), "alpha"),
    "tightness_state": CatalogEntry("tightness_state", {"N": 2, "eps": 0.0},
                                    _int_args(tightness_state, "N"), "eps"),
}


def build(name: str, **params) -> DensityMatrix:
    if name not in CATALOG:
        raise UsageError(f"unknown catalog family {name!r}; known: {sorted(CATALOG)}")
    return CATALOG[name].build(**params)
