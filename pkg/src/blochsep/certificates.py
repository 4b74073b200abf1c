"""Sufficient conditions for full separability with explicit decompositions.

Each certifying function returns a :class:`~blochsep.criteria.CriterionVerdict`
whose ``decomposition`` is a :class:`SeparableDecomposition` when the verdict
is SEPARABLE_CERTIFIED.  Decompositions are assembled from two building blocks:

* u-states ``(I + s B_alpha)/n``: averages of ``2^(m-1)`` product states picked
  out of the character table of ``(Z/2)^m``, ``m`` being the number of active
  parties;
* even blocks ``(I + sum_{|S| even} a_S B_S)/n``: the average of one product
  state and its local mirror image.

Every certificate is re-verified before it is returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .bloch import BlochVector, Convention, basis_element, local_basis, to_bloch
from .characters import character_table
from .criteria import DECISION_TOL, CriterionVerdict, Verdict
from .errors import NotPositiveSemidefinite, UnsupportedConvention, UsageError, ValidationError
from .linalg import DensityMatrix, kron, validate_density


class Term(NamedTuple):
    weight: float
    locals: tuple[np.ndarray, ...]


@dataclass
class SeparableDecomposition:
    """Convex combination ``sum_i w_i rho_i^(1) x ... x rho_i^(N)``."""

    terms: list[Term]
    target_shape: tuple[int, ...]

    def __len__(self):
        return len(self.terms)

    @property
    def weights(self) -> np.ndarray:
        return np.array([t.weight for t in self.terms])

    def matrix(self) -> np.ndarray:
        n = int(np.prod(self.target_shape))
        out = np.zeros((n, n), dtype=complex)
        for w, locs in self.terms:
            out += w * kron(locs)
        return out


@dataclass
class VerificationReport:
    ok: bool
    distance: float
    weight_sum: float
    failures: list[str] = field(default_factory=list)


def verify_decomposition(d: SeparableDecomposition, target, tol: float = 1e-9) -> VerificationReport:
    """Check weights, local factors and reconstruction against ``target``."""
    target_mat = target.mat if isinstance(target, DensityMatrix) else np.asarray(target)
    failures = []
    w = d.weights
    if np.any(w < 0):
        failures.append(f"negative weight {w.min():.3e}")
    wsum = float(w.sum())
    if abs(wsum - 1) > 1e-10:
        failures.append(f"weights sum to {wsum!r}")
    seen = {}
    for t_idx, (_, locs) in enumerate(d.terms):
        if len(locs) != len(d.target_shape):
            failures.append(f"term {t_idx} has {len(locs)} factors")
            continue
        for k, loc in enumerate(locs):
            key = id(loc)
            if key not in seen:
                try:
                    validate_density(loc, [d.target_shape[k]], tol)
                    seen[key] = None
                except ValidationError as exc:
                    seen[key] = f"{exc.invariant}: {exc}"
            if seen[key] is not None:
                failures.append(f"term {t_idx} party {k}: {seen[key]}")
    dist = float("inf")
    if not any("factors" in f for f in failures):
        recon = d.matrix()
        if recon.shape == target_mat.shape:
            dist = float(np.linalg.norm(recon - target_mat))
        else:
            failures.append(f"reconstruction shape {recon.shape} != {target_mat.shape}")
    if dist > tol:
        failures.append(f"Frobenius distance {dist:.3e} exceeds {tol:g}")
    return VerificationReport(not failures, dist, wsum, failures)


# --- building blocks -------------------------------------------------------

class _FactorCache:
    """Shares local factor matrices ``(I + x B_i)/n`` between terms."""

    def __init__(self, shape, convention):
        self.shape = shape
        self.convention = convention
        self._cache = {}

    def factor(self, party: int, i: int, x: int) -> np.ndarray:
        key = (party, i, x)
        if key not in self._cache:
            n = self.shape[party]
            if i == 0:
                m = np.eye(n, dtype=complex) / n
            else:
                m = (np.eye(n) + x * local_basis(n, self.convention)[i]) / n
            m.setflags(write=False)
            self._cache[key] = m
        return self._cache[key]


def _check_convention(shape, convention, active) -> Convention:
    convention = Convention.parse(convention)
    if convention is Convention.PRIME:
        raise UnsupportedConvention("product-state constructions need TILDE or CHECK")
    if convention is Convention.TILDE and any(shape[k] != 2 for k in active):
        raise UnsupportedConvention(
            "TILDE u-states are only positive for qubit parties; use CHECK for n_k > 2"
        )
    return convention


def _u_terms(cache: _FactorCache, idx, sign: int, weight: float) -> list[Term]:
    active = [k for k, i in enumerate(idx) if i]
    m = len(active)
    ct = character_table(m)
    rows = ct.rows_with_value(range(1, m + 1), sign)
    gen_cols = [ct.column([k]) for k in range(1, m + 1)]
    w = weight / len(rows)
    terms = []
    for r in rows:
        x = dict(zip(active, ct.table[r, gen_cols]))
        locs = tuple(cache.factor(k, idx[k], int(x.get(k, 1))) for k in range(len(idx)))
        terms.append(Term(w, locs))
    return terms


def u_state_decomposition(shape: Sequence[int], idx: Sequence[int], sign: int,
                          convention: Convention = Convention.CHECK) -> SeparableDecomposition:
    """Split ``(I + sign * B_idx)/n`` into ``2^(m-1)`` equally weighted product states."""
    shape = tuple(shape)
    idx = tuple(int(i) for i in idx)
    if len(idx) != len(shape) or not any(idx):
        raise UsageError(f"need a nonzero multi-index for {len(shape)} parties, got {idx}")
    if any(not 0 <= i < n * n for i, n in zip(idx, shape)):
        raise UsageError(f"multi-index {idx} out of range for shape {list(shape)}")
    if sign not in (1, -1):
        raise UsageError("sign must be +1 or -1")
    active = [k for k, i in enumerate(idx) if i]
    convention = _check_convention(shape, convention, active)
    return SeparableDecomposition(_u_terms(_FactorCache(shape, convention), idx, sign, 1.0), shape)


def _even_block_terms(cache: _FactorCache, local_idx, a, weight: float) -> list[Term]:
    """Mirror-pair average giving ``(I + sum_{|S| even} prod(a_S) B_S)/n``."""
    plus = tuple(cache.factor(k, i, int(s)) for k, (i, s) in enumerate(zip(local_idx, a)))
    minus = tuple(cache.factor(k, i, -int(s)) for k, (i, s) in enumerate(zip(local_idx, a)))
    return [Term(weight / 2, plus), Term(weight / 2, minus)]


def _even_supports(N: int) -> list[tuple[int, ...]]:
    return [S for size in range(2, N + 1, 2) for S in itertools.combinations(range(N), size)]


def _even_pattern(N: int, signs: dict) -> np.ndarray | None:
    """Local signs ``a`` (``a[0] = +1``) with ``prod(a_S) = signs[S]`` for every nonzero entry."""
    zero_to_plus = {S: (1 if s >= 0 else -1) for S, s in signs.items()}
    fallback = None
    for tail in itertools.product((1, -1), repeat=N - 1):
        a = np.array((1,) + tail)
        if all(s == 0 or np.prod(a[list(S)]) == s for S, s in signs.items()):
            if all(np.prod(a[list(S)]) == s for S, s in zero_to_plus.items()):
                return a
            if fallback is None:
                fallback = a
    return fallback


def _finalize(terms: list[Term], shape, identity_weight: float, cache: _FactorCache) -> SeparableDecomposition:
    # identity weight can dip below zero by rounding at the certification boundary
    if identity_weight > 0:
        terms.append(Term(identity_weight, tuple(cache.factor(k, 0, 1) for k in range(len(shape)))))
    terms = [t for t in terms if t.weight > 0]
    total = sum(t.weight for t in terms)
    if identity_weight < 0 or abs(total - 1) > 1e-12:
        terms = [Term(t.weight / total, t.locals) for t in terms]
    return SeparableDecomposition(terms, tuple(shape))


def _certify(name, lhs, bound, detail, build, target, decision_tol) -> CriterionVerdict:
    if lhs > bound + decision_tol:
        return CriterionVerdict(Verdict.INCONCLUSIVE, name, lhs, bound, detail)
    decomp = build()
    report = verify_decomposition(decomp, target)
    if not report.ok:
        detail = dict(detail, verification_failures=report.failures)
        return CriterionVerdict(Verdict.INCONCLUSIVE, name, lhs, bound, detail)
    detail = dict(detail, reconstruction_distance=report.distance, n_terms=len(decomp))
    return CriterionVerdict(Verdict.SEPARABLE_CERTIFIED, name, lhs, bound, detail, decomp)


def _residual_terms(cache, b: BlochVector, skip) -> list[Term]:
    terms = []
    for idx, v in b.nonzero().items():
        if idx not in skip:
            terms.extend(_u_terms(cache, idx, 1 if v > 0 else -1, abs(v)))
    return terms


def _target(b: BlochVector) -> np.ndarray:
    from .bloch import from_bloch
    return from_bloch(b)


# --- criteria --------------------------------------------------------------

def _require_qubits(b: BlochVector, n_parties: int | None, name: str):
    if any(n != 2 for n in b.shape) or (n_parties is not None and len(b.shape) != n_parties):
        want = f"{n_parties}-qubit" if n_parties else "all-qubit"
        raise UsageError(f"{name} needs a {want} shape, got {list(b.shape)}")
    if b.convention is Convention.PRIME:
        raise UnsupportedConvention(f"{name} needs TILDE components")


def _l1_certificate(b: BlochVector, name: str, decision_tol: float) -> CriterionVerdict:
    norm1 = b.norm(1)
    cache = _FactorCache(b.shape, b.convention)

    def build():
        return _finalize(_residual_terms(cache, b, ()), b.shape, 1 - norm1, cache)

    return _certify(name, norm1, 1.0, {"norm1": norm1}, build, _target(b), decision_tol)


def theorem3(b: BlochVector, decision_tol: float = DECISION_TOL) -> CriterionVerdict:
    """``||rho||_1 <= 1`` certifies an N-qubit state."""
    _require_qubits(b, None, "theorem3")
    return _l1_certificate(b, "theorem3", decision_tol)


def _supports_for(axes) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Map each even support S to the multi-index with ``axes`` on S and 0 elsewhere."""
    N = len(axes)
    out = {}
    for S in _even_supports(N):
        out[S] = tuple(axes[k] if k in S else 0 for k in range(N))
    return out


def _even_block_candidate(b: BlochVector, axes):
    """Score one axis choice: returns (gain, pattern, supports) or None if the block is unusable.

    ``gain`` is the sum of the smallest half (rounded down) of the block's
    component magnitudes; the certificate bound is ``1 + 2 * gain``.
    """
    t = b.tensor
    supports = _supports_for(axes)
    values = {S: float(t[idx]) for S, idx in supports.items()}
    signs = {S: int(np.sign(v)) for S, v in values.items()}
    pattern = _even_pattern(len(axes), signs)
    mags = sorted(abs(v) for v in values.values())
    gain = float(sum(mags[: len(mags) // 2]))
    if pattern is None:
        return None
    return gain, pattern, supports, values


def _even_block_terms_for(cache, b, axes, pattern, supports, values) -> tuple[list[Term], float]:
    """Terms of the block template plus the gain actually used."""
    order = sorted(supports, key=lambda S: -abs(values[S]))
    K = len(order)
    half = K // 2
    median = abs(values[order[half]])
    terms = []
    if median > 0:
        terms.extend(_even_block_terms(cache, axes, pattern, median))
    for pos, S in enumerate(order):
        idx = supports[S]
        s = int(np.prod(pattern[list(S)]))
        mag = abs(values[S])
        if pos < half:
            if mag - median > 0:
                terms.extend(_u_terms(cache, idx, s, mag - median))
        elif pos > half:
            if median - mag > 0:
                terms.extend(_u_terms(cache, idx, -s, median - mag))
    gain = float(sum(abs(values[S]) for S in order[half + 1:]))
    return terms, gain


def _best_even_block(b: BlochVector):
    ranges = [range(1, n * n) for n in b.shape]
    best = None
    for axes in itertools.product(*ranges):
        cand = _even_block_candidate(b, axes)
        if cand is None:
            continue
        if best is None or cand[0] > best[1][0]:
            best = (axes, cand)
    return best


def _even_block_certificate(b: BlochVector, name: str, decision_tol: float) -> CriterionVerdict:
    norm1 = b.norm(1)
    best = _best_even_block(b)
    if best is None:
        return CriterionVerdict(Verdict.INCONCLUSIVE, name, norm1, 1.0, {"reason": "no admissible index tuple"})
    axes, (gain, pattern, supports, values) = best
    bound = 1 + 2 * gain
    detail = {
        "indices": [int(a) for a in axes],
        "gain": gain,
        "norm1": norm1,
        "block_components": {",".join(map(str, supports[S])): values[S] for S in supports},
    }
    cache = _FactorCache(b.shape, b.convention)

    def build():
        if gain == 0:
            return _finalize(_residual_terms(cache, b, ()), b.shape, 1 - norm1, cache)
        terms, used = _even_block_terms_for(cache, b, axes, pattern, supports, values)
        terms.extend(_residual_terms(cache, b, set(supports.values())))
        return _finalize(terms, b.shape, 1 - norm1 + 2 * used, cache)

    return _certify(name, norm1, bound, detail, build, _target(b), decision_tol)


def theorem4(b: BlochVector, decision_tol: float = DECISION_TOL) -> CriterionVerdict:
    """3-qubit bound ``1 + 2 min{|rho_0jk|, |rho_i0k|, |rho_ij0|}`` over sign-compatible ``(i, j, k)``."""
    _require_qubits(b, 3, "theorem4")
    v = _even_block_certificate(b, "theorem4", decision_tol)
    v.detail["min"] = v.detail.get("gain")
    return v


def theorem6(b: BlochVector, decision_tol: float = DECISION_TOL) -> CriterionVerdict:
    """4-qubit bound ``1 + 2 lessmid`` over the seven even-weight components of ``(i, j, k, l)``."""
    _require_qubits(b, 4, "theorem6")
    v = _even_block_certificate(b, "theorem6", decision_tol)
    v.detail["lessmid"] = v.detail.get("gain")
    return v


def theorem6_conditions(b: BlochVector, axes) -> bool:
    """The four sign-product conditions (zero signs pass) for a 4-qubit index tuple."""
    i, j, k, l = axes
    t = b.tensor
    s = {
        "ij": np.sign(t[i, j, 0, 0]), "ik": np.sign(t[i, 0, k, 0]), "il": np.sign(t[i, 0, 0, l]),
        "jk": np.sign(t[0, j, k, 0]), "jl": np.sign(t[0, j, 0, l]), "kl": np.sign(t[0, 0, k, l]),
        "ijkl": np.sign(t[i, j, k, l]),
    }
    return bool(
        np.prod(list(s.values())) >= 0
        and s["ij"] * s["ik"] * s["jk"] >= 0
        and s["ij"] * s["il"] * s["jl"] >= 0
        and s["ik"] * s["il"] * s["kl"] >= 0
    )


def _triple_candidates(b: BlochVector):
    """Positive-weight index triples ``(i, j, k)`` with a usable 3-party block."""
    out = []
    for axes in itertools.product(*(range(1, n * n) for n in b.shape)):
        cand = _even_block_candidate(b, axes)
        if cand is not None and cand[0] > 0:
            out.append((cand[0], axes, cand))
    out.sort(key=lambda c: -c[0])
    return out


def _best_disjoint(cands, size: int = 3):
    """Max-weight set of at most ``size`` triples pairwise distinct in every coordinate."""
    best = [0.0, ()]

    def rec(start, chosen, total):
        if total > best[0] + 1e-15:
            best[0], best[1] = total, tuple(chosen)
        if len(chosen) == size:
            return
        room = size - len(chosen)
        for pos in range(start, len(cands)):
            w, axes, _ = cands[pos]
            if total + room * w <= best[0] + 1e-15:
                return
            if all(all(a != c for a, c in zip(axes, other[1])) for other in chosen):
                chosen.append(cands[pos])
                rec(pos + 1, chosen, total + w)
                chosen.pop()

    rec(0, [], 0.0)
    return best[0], best[1]


def _three_block_certificate(b: BlochVector, name: str, decision_tol: float) -> CriterionVerdict:
    norm1 = b.norm(1)
    gain, chosen = _best_disjoint(_triple_candidates(b))
    bound = 1 + 2 * gain
    detail = {"norm1": norm1, "gain": gain, "triples": [[int(a) for a in c[1]] for c in chosen]}
    cache = _FactorCache(b.shape, b.convention)

    def build():
        terms, used, skip = [], 0.0, set()
        for _, axes, (_, pattern, supports, values) in chosen:
            block, g = _even_block_terms_for(cache, b, axes, pattern, supports, values)
            terms.extend(block)
            used += g
            skip.update(supports.values())
        terms.extend(_residual_terms(cache, b, skip))
        return _finalize(terms, b.shape, 1 - norm1 + 2 * used, cache)

    return _certify(name, norm1, bound, detail, build, _target(b), decision_tol)


def theorem5(b: BlochVector, decision_tol: float = DECISION_TOL) -> CriterionVerdict:
    """3-qubit bound summing three ``2 min{...}`` gains over index triples distinct in i, j and k."""
    _require_qubits(b, 3, "theorem5")
    return _three_block_certificate(b, "theorem5", decision_tol)


def theorem7(b: BlochVector, decision_tol: float = DECISION_TOL) -> CriterionVerdict:
    """Arbitrary dimensions in the CHECK basis.

    Part 1 (``||rho||_1 <= 1``) applies to every shape; for three parties the
    single-triple and three-triple bounds (parts 2 and 3) are tried as well.
    The certifying part with the most slack wins; otherwise the part with the
    largest bound is reported.
    """
    if b.convention is not Convention.CHECK:
        raise UnsupportedConvention("theorem7 needs CHECK components")
    parts = {"part1": _l1_certificate(b, "theorem7", decision_tol)}
    if len(b.shape) == 3:
        parts["part2"] = _even_block_certificate(b, "theorem7", decision_tol)
        parts["part3"] = _three_block_certificate(b, "theorem7", decision_tol)
    certified = [(k, v) for k, v in parts.items() if v.certified]
    pool = certified or list(parts.items())
    key, chosen = max(pool, key=lambda kv: kv[1].bound - kv[1].lhs)
    chosen.detail["part"] = key
    chosen.detail["parts"] = {k: {"lhs": v.lhs, "bound": v.bound, "verdict": v.verdict.value}
                              for k, v in parts.items()}
    return chosen


def ghz_compatible_state(N: int, axes: Sequence[int]) -> tuple[DensityMatrix, SeparableDecomposition]:
    """Separable N-qubit state supported on every even-weight product of the chosen local axes.

    It is the average of ``(I + s_1)/2 x ... x (I + s_N)/2`` and its mirror
    ``(I - s_1)/2 x ...`` with ``s_k`` the Pauli matrix ``axes[k]``.
    """
    N = int(N)
    axes = tuple(int(a) for a in axes)
    if N < 2 or len(axes) != N or any(a not in (1, 2, 3) for a in axes):
        raise UsageError(f"need N >= 2 and N axes in {{1,2,3}}, got N={N}, axes={axes}")
    shape = (2,) * N
    cache = _FactorCache(shape, Convention.TILDE)
    decomp = SeparableDecomposition(_even_block_terms(cache, axes, np.ones(N, dtype=int), 1.0), shape)
    mat = np.eye(2 ** N, dtype=complex)
    for S in _even_supports(N):
        mat += basis_element(shape, Convention.TILDE, tuple(axes[k] if k in S else 0 for k in range(N)))
    return validate_density(mat / 2 ** N, shape), decomp


def sufficient_checks(rho: DensityMatrix, decision_tol: float = DECISION_TOL) -> list[CriterionVerdict]:
    """Run the sufficient criteria that apply to ``rho``'s shape."""
    shape = rho.shape
    if all(n == 2 for n in shape):
        b = to_bloch(rho, Convention.TILDE)
        out = [theorem3(b, decision_tol)]
        if len(shape) == 3:
            out += [theorem4(b, decision_tol), theorem5(b, decision_tol)]
        if len(shape) == 4:
            out.append(theorem6(b, decision_tol))
        return out
    return [theorem7(to_bloch(rho, Convention.CHECK), decision_tol)]
