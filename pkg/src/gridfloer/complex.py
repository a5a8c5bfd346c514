"""The fully blocked grid complex and its multigraded homology.

Gradings use the planar J-count formulas on the fundamental domain.
Alexander gradings are stored doubled (``alex2 = 2A``) so that all
arithmetic stays in the integers.
"""

from __future__ import annotations

import heapq
import itertools
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from . import gf2
from .errors import GridTooLarge, NotDivisible
from .grid import ComponentPartition, GridDiagram, trace_components

DEFAULT_MAX_SIZE = 8
MAX_STATES_ENV = "GRIDFLOER_MAX_STATES"


class MultiGrading(NamedTuple):
    maslov: int
    alex2: tuple[int, ...]


def state_limit(max_size: Optional[int] = None) -> int:
    if max_size is not None:
        return math.factorial(max_size)
    env = os.environ.get(MAX_STATES_ENV)
    if env:
        return int(env)
    return math.factorial(DEFAULT_MAX_SIZE)


def check_size(g: GridDiagram, max_size: Optional[int] = None):
    limit = state_limit(max_size)
    if math.factorial(g.n) > limit:
        raise GridTooLarge(
            f"grid of size {g.n} has {math.factorial(g.n)} states, limit is {limit}"
        )


# --- gradings -------------------------------------------------------------
#
# Points are kept in doubled coordinates: a grid-state point (j, r) becomes
# (2j, 2r) and a marking in cell (j, r) becomes (2j + 1, 2r + 1).  Strict
# south-west comparisons are unaffected by the scaling.


def _count_sw(P, Q) -> int:
    return sum(1 for p in P for q in Q if p[0] < q[0] and p[1] < q[1])


def _twice_j(P, Q) -> int:
    return _count_sw(P, Q) + _count_sw(Q, P)


def _marking_points(g: GridDiagram, part: ComponentPartition):
    O = [(2 * j + 1, 2 * r + 1) for j, r in enumerate(g.o_rows)]
    X = [(2 * j + 1, 2 * r + 1) for j, r in enumerate(g.x_rows)]
    O_i = [[p for j, p in enumerate(O) if part.column_owner[j] == i] for i in range(part.l)]
    X_i = [[p for j, p in enumerate(X) if part.column_owner[j] == i] for i in range(part.l)]
    return O, X, O_i, X_i


@dataclass(frozen=True)
class _GradingConstants:
    """State-independent pieces of the grading formulas."""

    twice_j_oo: int
    alex_const: tuple[int, ...]  # (2J(X+O, X_i - O_i)) / 2 + (n_i - 1)


@lru_cache(maxsize=64)
def _grading_constants(g: GridDiagram) -> _GradingConstants:
    part = trace_components(g)
    O, X, O_i, X_i = _marking_points(g, part)
    consts = []
    for i in range(part.l):
        k = (_twice_j(X, X_i[i]) + _twice_j(O, X_i[i])
             - _twice_j(X, O_i[i]) - _twice_j(O, O_i[i]))
        if k % 2:
            raise AssertionError(f"odd Alexander normalisation constant for component {i}")
        consts.append(k // 2 + part.marks_per_component[i] - 1)
    return _GradingConstants(_twice_j(O, O), tuple(consts))


def grade_state(g: GridDiagram, x) -> MultiGrading:
    """Maslov grading and doubled Alexander multigrading of one state.

    ``x[j]`` is the row of the state's point in column ``j``.
    """
    part = trace_components(g)
    consts = _grading_constants(g)
    pts = [(2 * j, 2 * r) for j, r in enumerate(x)]
    O, X, O_i, X_i = _marking_points(g, part)
    # J(x,x) = I(x,x) because I(x,x) counts unordered pairs once
    maslov = _count_sw(pts, pts) - _twice_j(pts, O) + consts.twice_j_oo // 2 + 1
    alex2 = tuple(
        _twice_j(pts, X_i[i]) - _twice_j(pts, O_i[i]) - consts.alex_const[i]
        for i in range(part.l)
    )
    return MultiGrading(maslov, alex2)


# --- multigraded ranks ----------------------------------------------------


@dataclass
class MultigradedRanks:
    """Nonzero ranks indexed by :class:`MultiGrading`.

    ``flavor`` is ``"tilde"`` for the blocked grid homology and ``"hat"``
    after the extra tensor factors have been divided out.
    """

    entries: dict
    n: int
    l: int
    marks_per_component: tuple[int, ...]
    flavor: str = "tilde"

    def __post_init__(self):
        self.entries = {MultiGrading(k[0], tuple(k[1])): int(v)
                        for k, v in self.entries.items() if v}
        for k, v in self.entries.items():
            if v < 0:
                raise ValueError(f"negative rank {v} at {k}")

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def sorted_items(self):
        return sorted(self.entries.items(), key=lambda kv: (-kv[0].maslov, kv[0].alex2))

    def by_alexander(self) -> dict[tuple[int, ...], int]:
        """Ranks summed over the Maslov grading."""
        out: dict[tuple[int, ...], int] = {}
        for k, v in self.entries.items():
            out[k.alex2] = out.get(k.alex2, 0) + v
        return out

    def support(self) -> set[tuple[int, ...]]:
        return set(self.by_alexander())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "components": self.l,
            "entries": [
                {"maslov": k.maslov, "alex2": list(k.alex2), "rank": v}
                for k, v in self.sorted_items()
            ],
            "total": self.total,
        }


# --- the complex ------------------------------------------------------------


@dataclass
class _Block:
    """Generators of one Alexander block, split by Maslov grading."""

    alex2: tuple[int, ...]
    states: dict[int, np.ndarray]  # maslov -> global state indices (sorted)
    boundary: dict[int, list[int]] = field(default_factory=dict)
    # maslov m -> rows of d: C_m -> C_{m-1}, bitmasks over local indices


class GridComplex:
    """All grid states of ``g`` with gradings and empty rectangles.

    Only rectangles avoiding every X and O marking are kept (the fully
    blocked differential).  For each rectangle we also record the data a
    connecting path needs to weight it.
    """

    def __init__(self, g: GridDiagram, check: bool = False):
        self.g = g
        self.part = trace_components(g)
        n = g.n
        self.states = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
        self.bits = max(1, (n - 1).bit_length())
        self.shifts = np.array([self.bits * (n - 1 - j) for j in range(n)], dtype=np.int64)
        self.keys = (self.states << self.shifts).sum(axis=1)
        self.maslov, self.alex2 = self._gradings()
        self._rectangles()
        if check:
            self._check_grading_change()
        self._build_blocks()
        if check:
            self.check_d_squared()

    @property
    def size(self) -> int:
        return len(self.states)

    def _gradings(self):
        g, part, S = self.g, self.part, self.states
        n, N = g.n, len(S)
        consts = _grading_constants(g)
        # I(x, x): column pairs j < k with rising rows
        ixx = np.zeros(N, dtype=np.int64)
        for j in range(n):
            for k in range(j + 1, n):
                ixx += S[:, j] < S[:, k]

        def twice_j_state_marks(cols, rows):
            # I(x, M) + I(M, x) for markings at cells (c, r)
            tot = np.zeros(N, dtype=np.int64)
            for c, r in zip(cols, rows):
                for j in range(n):
                    if j <= c:
                        tot += S[:, j] <= r
                    else:
                        tot += S[:, j] > r
            return tot

        maslov = ixx - twice_j_state_marks(range(n), g.o_rows) + consts.twice_j_oo // 2 + 1
        alex2 = np.zeros((N, part.l), dtype=np.int64)
        for i in range(part.l):
            cols = part.columns(i)
            alex2[:, i] = (
                twice_j_state_marks(cols, [g.x_rows[c] for c in cols])
                - twice_j_state_marks(cols, [g.o_rows[c] for c in cols])
                - consts.alex_const[i]
            )
        return maslov, alex2

    def _rectangles(self):
        g, S, keys = self.g, self.states, self.keys
        n = g.n
        o = np.array(g.o_rows, dtype=np.int64)
        x = np.array(g.x_rows, dtype=np.int64)
        src, dst, c1s, ws, r1s, r2s = [], [], [], [], [], []
        for c1 in range(n):
            for c2 in range(n):
                if c1 == c2:
                    continue
                w = (c2 - c1) % n
                r1 = S[:, c1]
                h = (S[:, c2] - r1) % n
                ok = np.ones(len(S), dtype=bool)
                for t in range(w):
                    k = (c1 + t) % n
                    ok &= (o[k] - r1) % n >= h
                    ok &= (x[k] - r1) % n >= h
                idx = np.nonzero(ok)[0]
                if len(idx) == 0:
                    continue
                r1i = r1[idx]
                hi = h[idx]
                keep = np.ones(len(idx), dtype=bool)
                for t in range(1, w):
                    d = (S[idx, (c1 + t) % n] - r1i) % n
                    keep &= ~((d > 0) & (d < hi))
                idx = idx[keep]
                r1i = r1i[keep]
                r2i = S[idx, c2]
                tkey = keys[idx] + ((r2i - r1i) << self.shifts[c1]) + ((r1i - r2i) << self.shifts[c2])
                src.append(idx)
                dst.append(np.searchsorted(keys, tkey))
                c1s.append(np.full(len(idx), c1, dtype=np.int64))
                ws.append(np.full(len(idx), w, dtype=np.int64))
                r1s.append(r1i)
                r2s.append(r2i)

        def cat(parts):
            return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

        self.edge_src = cat(src)
        self.edge_dst = cat(dst)
        self.edge_col = cat(c1s)
        self.edge_width = cat(ws)
        self.edge_bottom = cat(r1s)
        self.edge_top = cat(r2s)

    def _check_grading_change(self):
        dm = self.maslov[self.edge_src] - self.maslov[self.edge_dst]
        if not np.all(dm == 1):
            raise AssertionError("differential does not lower the Maslov grading by one")
        if not np.array_equal(self.alex2[self.edge_src], self.alex2[self.edge_dst]):
            raise AssertionError("differential does not preserve the Alexander grading")

    def _build_blocks(self):
        N = self.size
        l = self.part.l
        # group states by (alex2, maslov); local index = rank within group
        order = np.lexsort((np.arange(N), self.maslov) + tuple(self.alex2[:, i] for i in reversed(range(l))))
        self.local = np.zeros(N, dtype=np.int64)
        self.blocks: dict[tuple[int, ...], _Block] = {}
        start = 0
        sorted_alex = self.alex2[order]
        sorted_m = self.maslov[order]
        while start < N:
            a = tuple(int(v) for v in sorted_alex[start])
            m = int(sorted_m[start])
            stop = start
            while stop < N and sorted_m[stop] == m and tuple(sorted_alex[stop]) == a:
                stop += 1
            members = order[start:stop]
            self.local[members] = np.arange(stop - start)
            block = self.blocks.setdefault(a, _Block(a, {}))
            block.states[m] = members
            start = stop
        for block in self.blocks.values():
            for m, members in block.states.items():
                block.boundary[m] = [0] * len(members)
        src_local = self.local[self.edge_src].tolist()
        dst_local = self.local[self.edge_dst].tolist()
        ms = self.maslov[self.edge_src].tolist()
        alexes = [tuple(r) for r in self.alex2[self.edge_src].tolist()]
        for s, d, m, a in zip(src_local, dst_local, ms, alexes):
            self.blocks[a].boundary[m][s] ^= 1 << d

    def check_d_squared(self):
        for block in self.blocks.values():
            for m, rows in block.boundary.items():
                lower = block.boundary.get(m - 1)
                for r in rows:
                    if r and (lower is None or gf2.apply(lower, r)):
                        raise AssertionError(f"d^2 != 0 in block {block.alex2}, Maslov {m}")

    def homology_ranks(self) -> MultigradedRanks:
        entries = {}
        for a, block in self.blocks.items():
            ranks = {m: gf2.rank(rows) for m, rows in block.boundary.items()}
            for m, members in block.states.items():
                dim = len(members) - ranks[m] - ranks.get(m + 1, 0)
                if dim:
                    entries[MultiGrading(m, a)] = dim
        return MultigradedRanks(entries, self.g.n, self.part.l, self.part.marks_per_component, "tilde")

    @lru_cache(maxsize=None)
    def homology_basis(self, alex2: tuple[int, ...], m: int) -> gf2.QuotientBasis:
        """Cycle representatives spanning homology at (alex2, m)."""
        block = self.blocks[alex2]
        basis = gf2.QuotientBasis()
        for row in block.boundary.get(m + 1, []):
            basis.add_relation(row)
        for z in gf2.kernel(block.boundary.get(m, [])):
            basis.offer(z)
        return basis


@lru_cache(maxsize=16)
def grid_complex(g: GridDiagram, check: bool = False) -> GridComplex:
    return GridComplex(g, check=check)


def tilde_homology(g: GridDiagram, max_size: Optional[int] = None, check: bool = False) -> MultigradedRanks:
    """Multigraded homology of the fully blocked grid complex of ``g``."""
    check_size(g, max_size)
    return grid_complex(g, check).homology_ranks()


def _divide_factor(entries: dict, i: int) -> dict:
    """Exact division by ``1 + q^-1 tau_i^-2`` (one extra marking pair)."""
    def shifted(k):
        a = list(k.alex2)
        a[i] -= 2
        return MultiGrading(k.maslov - 1, tuple(a))

    def order(k):
        return (-k.maslov, tuple(-v for v in k.alex2))

    rem = dict(entries)
    heap = [(order(k), k) for k in rem]
    heapq.heapify(heap)
    quotient = {}
    while heap:
        _, k = heapq.heappop(heap)
        c = rem.pop(k, 0)
        if c == 0:
            continue
        if c < 0:
            raise NotDivisible(f"hat_ranks: negative remainder {c} at {k}")
        quotient[k] = c
        k2 = shifted(k)
        if k2 not in rem:
            rem[k2] = 0
            heapq.heappush(heap, (order(k2), k2))
        rem[k2] -= c
    return quotient


def hat_ranks(t: MultigradedRanks) -> MultigradedRanks:
    """Divide the blocked invariant by one 2-dimensional factor per extra
    marking pair of each component, leaving the hat link Floer ranks."""
    if t.flavor != "tilde":
        raise ValueError("hat_ranks expects tilde ranks")
    entries = dict(t.entries)
    for i, ni in enumerate(t.marks_per_component):
        for _ in range(ni - 1):
            entries = _divide_factor(entries, i)
    return MultigradedRanks(entries, t.n, t.l, t.marks_per_component, "hat")


@lru_cache(maxsize=64)
def _hat_cached(g: GridDiagram, max_size: Optional[int]) -> MultigradedRanks:
    return hat_ranks(tilde_homology(g, max_size))


def link_floer_ranks(g: GridDiagram, max_size: Optional[int] = None) -> MultigradedRanks:
    """Hat link Floer ranks of the link presented by ``g``."""
    check_size(g, max_size)
    return _hat_cached(g, max_size)


def lfr(g: GridDiagram, max_size: Optional[int] = None) -> int:
    return link_floer_ranks(g, max_size).total


def clear_caches() -> None:
    """Drop memoized complexes and ranks (used for cold timings)."""
    grid_complex.cache_clear()
    _hat_cached.cache_clear()
    _grading_constants.cache_clear()
