"""Acceptance suite.  Each check prints one ``[PASS]`` / ``[FAIL]`` line.

Run with ``pytest -s tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest

from blochsep.analysis import overall_verdict, run_criteria
from blochsep.balls import extremal_states, r_e
from blochsep.bloch import (Convention, basis_element, correlation_tensor, iter_multi_indices,
                            operator_components, purity_relation, to_bloch)
from blochsep.catalog import (CATALOG, RandomKind, bound_entangled, bound_entangled_core, isotropic,
                              noisy_ghz, random_states, state_A, tightness_family)
from blochsep.certificates import theorem3, theorem4, theorem6, u_state_decomposition, verify_decomposition
from blochsep.characters import character_table
from blochsep.cli import bisect_changes
from blochsep.criteria import theorem2_check
from blochsep.errors import UsageError
from blochsep.linalg import validate_density
from blochsep.ppt import is_ppt, is_ppt_all
from blochsep.witnesses import WitnessMode, build_witness, evaluate_witness


def bisect(pred, lo, hi, tol=1e-13):
    """Boundary of a predicate that is True at ``lo`` and False at ``hi``."""
    assert pred(lo) and not pred(hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def check_isotropic_boundary():
    notes = []
    for d in (2, 3, 4):
        t0 = time.perf_counter()
        rows = bisect_changes("isotropic", "alpha", [0.0, 1.0], {"d": d}, "theorem2")
        dt = time.perf_counter() - t0
        if len(rows) != 1 or rows[0]["to"] != "ENTANGLED":
            return False, f"d={d}: unexpected changes {rows}"
        flip = rows[0]["estimate"]
        if abs(flip - 1 / (d + 1)) > 1e-9 or dt >= 1:
            return False, f"d={d}: flip {flip!r}, {dt:.2f}s"
        if d in (2, 3):
            ppt_flip = bisect(lambda a: is_ppt(isotropic(d, a), {1}), 0.0, 1.0)
            if abs(ppt_flip - flip) > 1e-9:
                return False, f"d={d}: PPT flip {ppt_flip!r} vs {flip!r}"
        notes.append(f"d={d}: {flip - 1 / (d + 1):+.1e} in {dt:.2f}s")
    return True, "; ".join(notes)


def check_state_A():
    grid = np.linspace(0, 1 / math.sqrt(2), 1001)[1:]
    for a in grid:
        b = to_bloch(state_A(a))
        sep = theorem3(b).certified
        ent = theorem2_check(correlation_tensor(b)).entangled
        if sep == ent:
            return False, f"alpha={a!r}: certified={sep} entangled={ent}"
        if sep != (a <= 0.5 + 1e-9) or ent != (a > 0.5 + 1e-9):
            return False, f"alpha={a!r} on the wrong side"
    return True, f"{len(grid)} points, every point decided exactly once"


def _flip(fn, N, lo, hi):
    return bisect(lambda a: fn(to_bloch(noisy_ghz(N, a))).certified, lo, hi)


def check_ghz3():
    t4 = _flip(theorem4, 3, 0.0, 0.5)
    t3 = _flip(theorem3, 3, 0.0, 0.5)
    rho = noisy_ghz(3, 0.2)
    v = theorem4(to_bloch(rho))
    dist = verify_decomposition(v.decomposition, rho).distance if v.certified else math.inf
    ok = (abs(t4 - 0.2) <= 1e-9 and abs(t3 - 1 / 7) <= 1e-9 and v.certified
          and list(v.detail["indices"]) == [3, 3, 3] and dist <= 1e-9)
    return ok, f"theorem4 edge {t4 - 0.2:+.1e}, theorem3 edge {t3 - 1 / 7:+.1e}, indices {v.detail.get('indices')}, dist {dist:.1e}"


def check_ghz4():
    t6 = _flip(theorem6, 4, 0.0, 0.5)
    worst = 0.0
    for a in np.linspace(0.01, 1 / 9, 12):
        v = theorem6(to_bloch(noisy_ghz(4, a)))
        worst = max(worst, abs(v.detail["lessmid"] - 3 * a))
    rho = noisy_ghz(4, 1 / 9)
    v = theorem6(to_bloch(rho))
    rep = verify_decomposition(v.decomposition, rho) if v.certified else None
    ok = abs(t6 - 1 / 9) <= 1e-9 and worst <= 1e-12 and rep is not None and rep.ok
    return ok, f"edge {t6 - 1 / 9:+.1e}, lessmid error {worst:.1e}, boundary dist {rep.distance if rep else math.inf:.1e}"


def _f(a):
    b = operator_components(bound_entangled_core(a), (2, 2, 2))
    return b.norm(1) - 2 * min(abs(b[0, 1, 3]), abs(b[3, 0, 3]), abs(b[3, 1, 0]))


def check_bound_entangled():
    grid = np.linspace(0, 1, 101)
    errs = [abs(_f(a) - (1 + 15 * a + 4 * math.sqrt(1 - a * a)) / (1 + 7 * a)) for a in grid]
    fs = [_f(a) for a in grid]
    certified = [theorem4(to_bloch(bound_entangled(a, 0.2))).certified for a in grid]
    ok = max(errs) <= 1e-10 and int(np.argmax(fs)) == 0 and abs(fs[0] - 5) <= 1e-10 and all(certified)
    return ok, f"max |f - closed form| {max(errs):.1e}, max f {max(fs):.12g} at a={grid[int(np.argmax(fs))]:g}, certified {sum(certified)}/101"


def check_tightness():
    for N in (2, 3, 4):
        for eps in (1e-3, 1e-2, 1e-1):
            T = correlation_tensor(operator_components(tightness_family(N, eps), (2,) * N))
            v = theorem2_check(T)
            if abs(T.norm(1) - (1 + eps)) > 1e-12 or not v.entangled:
                return False, f"N={N} eps={eps}: ||T||_1={T.norm(1)!r}, {v.verdict.value}"
        rho = validate_density(tightness_family(N, 0.0), (2,) * N)
        if not theorem3(to_bloch(rho)).certified:
            return False, f"N={N}: eps=0 not certified"
    return True, "9 (N, eps) pairs flagged; eps=0 certified for N=2,3,4"


def check_r_e():
    worst = 0.0
    for p in (1, 1.5, 2, 3, math.inf):
        for N in range(1, 6):
            worst = max(worst, abs(to_bloch(extremal_states(p, N)).norm(p) - r_e(p, N)))
    branches = all(((3 ** (1 - 2 / 2) + 1) ** N - 1) ** (1 / 2) == (2 ** N - 1) ** (1 / 2) for N in range(1, 6))
    return worst <= 1e-10 and branches, f"max deviation {worst:.1e}, branches equal at p=2: {branches}"


def check_witness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    shapes = [(2, 2), (2, 2, 2), (3, 3), (2, 4)]
    worst, count = 0.0, 0
    for k, shape in enumerate(shapes):
        for rho in random_states(shape, seed=100 + k, count=125):
            b = to_bloch(rho)
            a = float(rng.uniform(0, 3))
            for mode in WitnessMode:
                norm = b.norm(1) if mode is WitnessMode.FULL_NORM else correlation_tensor(b).norm(1)
                worst = max(worst, abs(evaluate_witness(build_witness(b, a, mode), rho) - (norm - a)))
            count += 1
    dt = time.perf_counter() - t0
    return worst <= 1e-10 and count == 500 and dt < 30, f"{count} states, max error {worst:.1e}, {dt:.1f}s"


def check_characters():
    for N in range(1, 7):
        t = character_table(N).table.astype(np.int64)
        eye = (2 ** N) * np.eye(2 ** N, dtype=np.int64)
        if not (np.array_equal(t @ t.T, eye) and np.array_equal(t.T @ t, eye)):
            return False, f"N={N} not orthogonal"
    worst = 0.0
    for shape in ((2, 2, 2), (3, 3)):
        n = int(np.prod(shape))
        for idx in iter_multi_indices(shape):
            for sign in (1, -1):
                d = u_state_decomposition(shape, idx, sign, Convention.CHECK)
                target = (np.eye(n) + sign * basis_element(shape, Convention.CHECK, idx)) / n
                worst = max(worst, float(np.linalg.norm(d.matrix() - target)))
    return worst <= 1e-12, f"tables N=1..6 orthogonal, u-state max error {worst:.1e}"


def check_purity():
    worst = 0.0
    for k, shape in enumerate([(2, 2), (2, 3), (3, 3), (2, 2, 2)]):
        for rho in random_states(shape, seed=300 + k, count=200):
            pur = purity_relation(rho, tol=1.0)
            worst = max(worst, abs(pur.lhs - pur.rhs))
    return worst <= 1e-10, f"800 states, max deviation {worst:.1e}"


def _soundness_states():
    for name, entry in CATALOG.items():
        lo, hi = {"alpha": (0.0, 1.0), "eps": (0.0, 2.0)}[entry.sweep]
        variants = {"isotropic": [{"d": d} for d in (2, 3, 4)], "noisy_ghz": [{"N": N} for N in (2, 3, 4, 5)],
                    "bound_entangled": [{"a": a, "bipartite": bp} for a in (0, 0.3, 1) for bp in (0, 1)],
                    "tightness_state": [{"N": N} for N in (2, 3)]}.get(name, [{}])
        for fixed in variants:
            for x in np.linspace(lo, hi, 41):
                try:
                    yield f"{name}{fixed}@{x:.3f}", entry.build(**fixed, **{entry.sweep: float(x)})
                except UsageError:
                    continue  # outside the family's valid range (state_A past 1/sqrt 2)
    rng = np.random.default_rng(77)
    shapes = [(2, 2), (2, 2, 2), (2, 2, 2, 2), (2, 3), (3, 3), (2, 4), (2, 2, 3)]
    for i in range(1000):
        shape = shapes[i % len(shapes)]
        kind = RandomKind.PRODUCT_MIXTURE if i % 2 else RandomKind.GENERIC
        rho = random_states(shape, kind, seed=1000 + i)[0]
        t = float(rng.uniform(0, 1))
        n = rho.dim
        yield f"random{shape}#{i}", validate_density(t * rho.mat + (1 - t) * np.eye(n) / n, shape)


def check_soundness():
    counts = {"states": 0, "certified": 0, "entangled": 0}
    for label, rho in _soundness_states():
        counts["states"] += 1
        verdict = overall_verdict(run_criteria(rho))
        if verdict is None:
            return False, f"{label}: both ENTANGLED and SEPARABLE_CERTIFIED"
        if verdict.value == "SEPARABLE_CERTIFIED":
            counts["certified"] += 1
            if not is_ppt_all(rho):
                return False, f"{label}: certified but NPT"
        if verdict.value == "ENTANGLED":
            counts["entangled"] += 1
            if rho.shape == (2, 2) and is_ppt(rho, {1}):
                return False, f"{label}: 2-qubit entangled but PPT"
    return True, ", ".join(f"{k} {v}" for k, v in counts.items())


CHECKS = [
    (1, "isotropic boundary", check_isotropic_boundary),
    (2, "state A characterization", check_state_A),
    (3, "noisy GHZ3", check_ghz3),
    (4, "noisy GHZ4", check_ghz4),
    (5, "bound entangled family", check_bound_entangled),
    (6, "l1 ball tightness", check_tightness),
    (7, "enclosing-ball radius", check_r_e),
    (8, "witness identity", check_witness),
    (9, "character machinery", check_characters),
    (10, "purity relation", check_purity),
    (11, "global soundness", check_soundness),
]


def run(number, title, fn):
    ok, info = fn()
    print(f"[{'PASS' if ok else 'FAIL'}] {number:2d} {title}: {info}")
    return ok


@pytest.mark.parametrize("number, title, fn", CHECKS, ids=[f"{n:02d}-{t.replace(' ', '-')}" for n, t, _ in CHECKS])
def test_acceptance(number, title, fn):
    assert run(number, title, fn)


if __name__ == "__main__":
    results = [run(*c) for c in CHECKS]
    sys.exit(0 if all(results) else 1)
