import pytest

from blochsep.catalog import isotropic, noisy_ghz, random_states
from blochsep.errors import UsageError
from blochsep.ppt import bipartitions, is_ppt, is_ppt_all, ppt_all_cuts, two_qubit_separable


def test_bipartitions_counts():
    assert bipartitions(2) == [(1,)]
    assert len(bipartitions(3)) == 3
    assert len(bipartitions(4)) == 7
    assert bipartitions(6) == [(k,) for k in range(6)]
    assert len(bipartitions(6, full=True)) == 31
    for cut in bipartitions(5, full=True):
        assert 0 not in cut


@pytest.mark.parametrize("d", [2, 3, 4])
def test_isotropic_ppt_threshold(d):
    edge = 1 / (d + 1)
    assert is_ppt(isotropic(d, edge - 1e-6), {1})
    assert not is_ppt(isotropic(d, edge + 1e-6), {1})


def test_trivial_cut_rejected():
    rho = isotropic(2, 0.1)
    with pytest.raises(UsageError):
        is_ppt(rho, set())
    with pytest.raises(UsageError):
        is_ppt(rho, {0, 1})


def test_ghz3_ppt_threshold():
    # noisy GHZ_N is NPT on any cut iff alpha > 1/(1 + 2^(N-1))
    assert is_ppt_all(noisy_ghz(3, 0.2 - 1e-6))
    assert not is_ppt_all(noisy_ghz(3, 0.2 + 1e-6))
    assert set(ppt_all_cuts(noisy_ghz(3, 0.1))) == {(1,), (2,), (1, 2)}


def test_product_mixtures_are_ppt():
    for rho in random_states([2, 3], kind="PRODUCT_MIXTURE", seed=3, count=20):
        assert is_ppt_all(rho)


def test_two_qubit_separable_shape():
    with pytest.raises(UsageError):
        two_qubit_separable(isotropic(3, 0.1))
