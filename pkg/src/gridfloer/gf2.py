"""GF(2) linear algebra on int bitsets.

A vector is a Python int whose bit ``k`` is the coefficient of basis
element ``k``.  Pivot tables are keyed by the highest set bit.
"""

from __future__ import annotations

from typing import Iterable


def rank(rows: Iterable[int]) -> int:
    """Rank of the span of ``rows``."""
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = row
                break
            row ^= p
    return len(pivots)


def kernel(rows: list[int]) -> list[int]:
    """Basis of ``{c : XOR of rows[k] over bits k of c == 0}``.

    Each returned int is a combination mask over row indices.
    """
    pivots: dict[int, tuple[int, int]] = {}
    out = []
    for k, row in enumerate(rows):
        tag = 1 << k
        while row:
            top = row.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = (row, tag)
                break
            row ^= p[0]
            tag ^= p[1]
        if not row:
            out.append(tag)
    return out


def apply(matrix_rows: list[int], vec: int) -> int:
    """Image of ``vec`` under the map sending basis ``k`` to ``matrix_rows[k]``."""
    out = 0
    while vec:
        low = vec & -vec
        out ^= matrix_rows[low.bit_length() - 1]
        vec ^= low
    return out


class QuotientBasis:
    """Basis of a quotient space ``Z / B`` with coordinate extraction.

    Insert the subspace ``B`` first with :meth:`add_relation`, then offer
    vectors of ``Z`` with :meth:`offer`; those independent modulo the
    current span become basis elements of the quotient.
    """

    def __init__(self):
        self._pivots: dict[int, tuple[int, int]] = {}
        self.representatives: list[int] = []

    def __len__(self):
        return len(self.representatives)

    def _reduce(self, vec: int, tag: int = 0):
        pivots = self._pivots
        while vec:
            top = vec.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                break
            vec ^= p[0]
            tag ^= p[1]
        return vec, tag

    def add_relation(self, vec: int) -> bool:
        vec, tag = self._reduce(vec)
        if not vec:
            return False
        if tag:
            raise ValueError("relations must be added before quotient generators")
        self._pivots[vec.bit_length() - 1] = (vec, 0)
        return True

    def offer(self, vec: int) -> bool:
        reduced, tag = self._reduce(vec)
        if not reduced:
            return False
        k = len(self.representatives)
        tag ^= 1 << k
        self._pivots[reduced.bit_length() - 1] = (reduced, tag)
        self.representatives.append(vec)
        return True

    def coordinates(self, vec: int) -> int:
        """Coordinates (as a bitmask over representatives) of ``vec`` mod B.

        ``vec`` must lie in the span of the relations and representatives.
        """
        reduced, tag = self._reduce(vec)
        if reduced:
            raise ValueError("vector is outside the span of the quotient basis")
        # Tags record which representatives were XORed in while building
        # the pivot rows; a pivot row equals its representatives' sum mod B.
        return tag


def compose(outer: list[int], inner: list[int]) -> list[int]:
    """Column lists: ``(outer o inner)[k] = outer(inner[k])``."""
    return [apply(outer, c) for c in inner]
