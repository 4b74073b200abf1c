import numpy as np
import pytest

from blochsep.bloch import CorrelationTensor, correlation_tensor, to_bloch
from blochsep.catalog import isotropic, noisy_ghz, random_states, state_A
from blochsep.criteria import (Verdict, sign_tensor, theorem1_bound, theorem1_check, theorem2_M,
                               theorem2_check)
from blochsep.errors import UsageError
from blochsep.ppt import two_qubit_separable


def T_of(rho):
    return correlation_tensor(to_bloch(rho))


@pytest.mark.parametrize("shape, p, expected", [
    ((2, 2), 1, 3.0),
    ((2, 2), 2, 1.0),
    ((3, 3), 1, 8.0),
    ((2, 3), 1, np.sqrt(3 * 8)),
    ((2, 2, 2), 1, 3 ** 1.5),
    ((2, 2), 3, 1.0),
    ((2, 2), 1.5, 3 ** (1 / 1.5 - 0.5) * 3 ** (1 / 1.5 - 0.5)),
])
def test_theorem1_bound(shape, p, expected):
    assert theorem1_bound(shape, p) == pytest.approx(expected)


def test_theorem1_bound_rejects_small_p():
    with pytest.raises(UsageError):
        theorem1_bound((2, 2), 0.9)


def test_bell_state_flagged():
    rho = isotropic(2, 1.0)
    # p = 1 sits exactly on its bound, p = 2 detects
    assert theorem1_check(T_of(rho), 1).verdict is Verdict.INCONCLUSIVE
    assert theorem1_check(T_of(rho), 2).verdict is Verdict.ENTANGLED
    r = theorem2_check(T_of(rho))
    assert r.lhs == pytest.approx(3) and r.bound == pytest.approx(1)


def test_theorem2_M_examples():
    assert theorem2_M(np.ones((3, 3))) == 3
    assert theorem2_M(np.eye(3)) == 1
    t = np.zeros((3, 3, 3))
    t[0, 0, 0] = 1
    t[2, 2, 2] = -1
    assert theorem2_M(t) == 1


def test_sign_tensor_keeps_zero():
    T = CorrelationTensor((2, 2), np.array([[0.5, 0.0, -1e-3], [0, 0, 0], [0, 0, 2]]))
    np.testing.assert_array_equal(sign_tensor(T), [[1, 0, -1], [0, 0, 0], [0, 0, 1]])


def test_noisy_ghz3_values():
    # GHZ3 correlation tensor: T_333 = 0 (odd weight), T_111 = 1, T_122 = T_212 = T_221 = -1
    T = T_of(noisy_ghz(3, 0.6))
    assert T.norm(1) == pytest.approx(4 * 0.6)
    assert theorem2_M(sign_tensor(T)) == 2
    assert theorem2_check(T).verdict is Verdict.ENTANGLED


@pytest.mark.parametrize("alpha, verdict", [(0.49, Verdict.INCONCLUSIVE), (0.51, Verdict.ENTANGLED)])
def test_state_A_theorem2(alpha, verdict):
    assert theorem2_check(T_of(state_A(alpha))).verdict is verdict


@pytest.mark.parametrize("m", [3, 8, 15])
def test_theorem2_bound_below_theorem1_square_bipartite(rng, m):
    # for m x m sign tensors every slice sum is at most m = sqrt(m * m)
    for _ in range(50):
        t = rng.choice([-1, 0, 1], size=(m, m))
        assert theorem2_M(t) <= m


@pytest.mark.parametrize("shape", [(3, 8), (3, 3, 3)])
def test_theorem2_bound_can_exceed_theorem1(shape):
    # dense sign tensors on unequal or multipartite shapes: M > prod sqrt(n_k^2 - 1)
    assert theorem2_M(np.ones(shape)) > np.sqrt(np.prod(shape))


def test_two_qubit_soundness():
    for rho in random_states([2, 2], seed=99, count=200):
        T = T_of(rho)
        flagged = theorem2_check(T).entangled or any(theorem1_check(T, p).entangled for p in (1, 2))
        if flagged:
            assert not two_qubit_separable(rho)
