"""Character tables of the elementary abelian 2-group (Z/2)^N.

Group elements are subsets ``g`` of the generators ``{1, ..., N}`` (a product
of commuting involutions); characters are the Walsh functions
``chi_u(g) = (-1)^{|u & g|}``.  Rows are ordered by binary counting with
generator 1 as the most significant bit, columns by subset size and then
lexicographically, which reproduces the tables printed for N = 2, 3, 4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import UsageError

MAX_LEVEL = 12


@dataclass(frozen=True, eq=False)
class CharacterTable:
    level: int
    table: np.ndarray = field(repr=False)
    column_labels: tuple[frozenset[int], ...] = field(repr=False)
    row_labels: tuple[frozenset[int], ...] = field(repr=False)

    def column(self, g) -> int:
        return self.column_labels.index(frozenset(g))

    def rows_with_value(self, g, value: int) -> np.ndarray:
        """Row indices whose character takes ``value`` (+1 or -1) on element ``g``."""
        return np.flatnonzero(self.table[:, self.column(g)] == value)


def _columns(N: int) -> tuple[frozenset[int], ...]:
    cols = []
    for size in range(N + 1):
        cols.extend(frozenset(c) for c in itertools.combinations(range(1, N + 1), size))
    return tuple(cols)


@lru_cache(maxsize=None)
def character_table(N: int) -> CharacterTable:
    N = int(N)
    if not 1 <= N <= MAX_LEVEL:
        raise UsageError(f"character table level must be in 1..{MAX_LEVEL}, got {N}")
    cols = _columns(N)
    rows = tuple(
        frozenset(k for k in range(1, N + 1) if (r >> (N - k)) & 1) for r in range(2 ** N)
    )
    table = np.empty((2 ** N, 2 ** N), dtype=np.int64)
    for r, u in enumerate(rows):
        for c, g in enumerate(cols):
            table[r, c] = -1 if len(u & g) % 2 else 1
    table.setflags(write=False)
    return CharacterTable(N, table, cols, rows)


def signed_average(N: int, g, sign: int) -> np.ndarray:
    """``sum_u chi_u / 2^(N-1)`` over the characters with ``chi_u(g) = sign``.

    The result is ``sign`` at column ``g``, 1 at the identity and 0 elsewhere.
    """
    ct = character_table(N)
    rows = ct.rows_with_value(g, sign)
    return ct.table[rows].sum(axis=0) / 2 ** (N - 1)
