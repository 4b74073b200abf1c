import numpy as np
import pytest

from blochsep.characters import character_table, signed_average
from blochsep.errors import UsageError

TABLE_N2 = [
    [1, 1, 1, 1],
    [1, 1, -1, -1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
]


def test_two_party_table():
    np.testing.assert_array_equal(character_table(2).table, TABLE_N2)


def test_three_party_rows_for_second_generator():
    ct = character_table(3)
    np.testing.assert_array_equal(ct.rows_with_value({2}, 1), [0, 1, 4, 5])
    np.testing.assert_array_equal(signed_average(3, {2}, 1), [1, 0, 1, 0, 0, 0, 0, 0])


def test_column_order():
    labels = character_table(3).column_labels
    assert [sorted(g) for g in labels] == [[], [1], [2], [3], [1, 2], [1, 3], [2, 3], [1, 2, 3]]


@pytest.mark.parametrize("N", range(1, 7))
def test_orthogonality(N):
    t = character_table(N).table.astype(np.int64)
    size = 2 ** N
    np.testing.assert_array_equal(t @ t.T, size * np.eye(size, dtype=np.int64))
    np.testing.assert_array_equal(t.T @ t, size * np.eye(size, dtype=np.int64))


@pytest.mark.parametrize("N", [2, 3, 4])
def test_signed_average_isolates_element(N):
    ct = character_table(N)
    for c, g in enumerate(ct.column_labels[1:], start=1):
        for sign in (1, -1):
            avg = signed_average(N, g, sign)
            expected = np.zeros(2 ** N)
            expected[0], expected[c] = 1, sign
            np.testing.assert_array_equal(avg, expected)


@pytest.mark.parametrize("N", [0, 13])
def test_level_range(N):
    with pytest.raises(UsageError):
        character_table(N)
