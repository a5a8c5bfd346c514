"""Homological action of an arc joining two link components.

An arc on the grid torus is a chain of cell centers.  A rectangle ``r``
is weighted by the parity of the number of times the arc crosses the two
horizontal edges of ``r``; summing weighted rectangles gives a chain map
that commutes with the blocked differential and squares to zero on
homology.  Over ``A = F[X]/(X^2)`` the homology is free exactly when the
induced map has rank half the dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import gf2
from .complex import GridComplex, check_size, grid_complex
from .errors import InvalidComponent, NotChainMap, SameComponent
from .grid import GridDiagram, trace_components

Cell = tuple[int, int]


@dataclass(frozen=True)
class ConnectingPath:
    """A walk through cell centers, one unit step at a time (wrapping mod n)."""

    n: int
    cells: tuple[Cell, ...]

    def __post_init__(self):
        for (a, b), (c, d) in zip(self.cells, self.cells[1:]):
            dc = (c - a) % self.n
            dr = (d - b) % self.n
            if sorted((dc, dr)) not in ([0, 1], [0, self.n - 1]):
                raise ValueError(f"non-unit step from {(a, b)} to {(c, d)}")

    def crossings(self) -> dict[tuple[int, int], int]:
        """Parity of crossings, keyed by (horizontal line index, column)."""
        out: dict[tuple[int, int], int] = {}
        for (a, b), (c, d) in zip(self.cells, self.cells[1:]):
            if a != c:
                continue  # horizontal step: crosses a vertical line only
            line = d if (d - b) % self.n == 1 else b
            key = (line % self.n, a)
            out[key] = out.get(key, 0) ^ 1
        return {k: v for k, v in out.items() if v}


def _walk(n: int, start: Cell, moves: Sequence[tuple[str, int]]) -> list[Cell]:
    cells = [start]
    col, row = start
    for axis, steps in moves:
        unit = 1 if steps > 0 else -1
        for _ in range(abs(steps)):
            if axis == "v":
                row = (row + unit) % n
            else:
                col = (col + unit) % n
            cells.append((col, row))
    return cells


def staircase_path(
    g: GridDiagram,
    start: Cell,
    end: Cell,
    vertical_first: bool = True,
    upward: bool = True,
    rightward: bool = True,
) -> ConnectingPath:
    """Two-leg walk from ``start`` to ``end`` on the grid torus."""
    n = g.n
    dv = (end[1] - start[1]) % n
    dh = (end[0] - start[0]) % n
    if not upward and dv:
        dv -= n
    if not rightward and dh:
        dh -= n
    legs = [("v", dv), ("h", dh)] if vertical_first else [("h", dh), ("v", dv)]
    return ConnectingPath(n, tuple(_walk(n, start, legs)))


def default_path(g: GridDiagram, c1: int, c2: int) -> ConnectingPath:
    """From the X of ``c1`` in its leftmost column, up to the row of the O of
    ``c2`` in its leftmost column, then right to that O."""
    part = trace_components(g)
    j1 = min(part.columns(c1))
    j2 = min(part.columns(c2))
    return staircase_path(g, (j1, g.x_rows[j1]), (j2, g.o_rows[j2]))


def _edge_weights(cx: GridComplex, path: ConnectingPath) -> np.ndarray:
    n = cx.g.n
    e = np.zeros(len(cx.edge_src), dtype=bool)
    for (line, col), _ in path.crossings().items():
        inside = (col - cx.edge_col) % n < cx.edge_width
        e ^= inside & ((cx.edge_bottom == line) ^ (cx.edge_top == line))
    return e


@dataclass
class ActionOperator:
    """Induced map on homology, one matrix per (alex2, maslov) source block.

    ``blocks[(a, m)]`` lists, for each homology basis element at ``(a, m)``,
    the bitmask of its image's coordinates at ``(a, m - 1)``.
    """

    pair: tuple[int, int]
    dims: dict
    blocks: dict

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    @property
    def rank(self) -> int:
        return sum(gf2.rank(cols) for cols in self.blocks.values())

    def squared_is_zero(self) -> bool:
        for (a, m), cols in self.blocks.items():
            lower = self.blocks.get((a, m - 1))
            if lower is None:
                continue
            if any(gf2.apply(lower, c) for c in cols):
                return False
        return True

    def dense(self) -> np.ndarray:
        """Full 0/1 matrix in the basis ordered by (alex2, maslov desc)."""
        order = sorted(self.dims, key=lambda k: (k[0], -k[1]))
        offset, pos = {}, 0
        for k in order:
            offset[k] = pos
            pos += self.dims[k]
        mat = np.zeros((pos, pos), dtype=np.uint8)
        for (a, m), cols in self.blocks.items():
            tgt = offset.get((a, m - 1))
            for k, c in enumerate(cols):
                bit = 0
                while c:
                    if c & 1:
                        mat[tgt + bit, offset[(a, m)] + k] = 1
                    c >>= 1
                    bit += 1
        return mat

    def to_json(self) -> dict:
        v = is_free_module(self)
        return {"pair": list(self.pair), "dim": v.dim, "rank": v.rank, "free": v.free}


def homology_action(
    g: GridDiagram,
    c1: int,
    c2: int,
    path: Optional[ConnectingPath] = None,
    max_size: Optional[int] = None,
    check: bool = True,
) -> ActionOperator:
    part = trace_components(g)
    for c in (c1, c2):
        if not 0 <= c < part.l:
            raise InvalidComponent(f"component {c} does not exist (link has {part.l} components)")
    if c1 == c2:
        raise SameComponent(f"homology_action needs two distinct components, got {c1} twice")
    check_size(g, max_size)
    cx = grid_complex(g)
    if path is None:
        path = default_path(g, c1, c2)
    weights = _edge_weights(cx, path)

    act_rows = {a: {m: [0] * len(mem) for m, mem in b.states.items()} for a, b in cx.blocks.items()}
    src = cx.edge_src[weights]
    dst = cx.edge_dst[weights]
    for s, d, m, a in zip(
        cx.local[src].tolist(),
        cx.local[dst].tolist(),
        cx.maslov[src].tolist(),
        map(tuple, cx.alex2[src].tolist()),
    ):
        act_rows[a][m][s] ^= 1 << d

    if check:
        for a, block in cx.blocks.items():
            for m, rows in act_rows[a].items():
                d_lower = block.boundary.get(m - 1)
                a_lower = act_rows[a].get(m - 1)
                d_here = block.boundary[m]
                for s, row in enumerate(rows):
                    left = gf2.apply(d_lower, row) if d_lower and row else 0
                    right = gf2.apply(a_lower, d_here[s]) if a_lower and d_here[s] else 0
                    if left != right:
                        raise NotChainMap(
                            f"action of pair ({c1},{c2}) fails to commute with d at "
                            f"alex2={a}, maslov={m}"
                        )

    tilde = cx.homology_ranks()
    dims = {(k.alex2, k.maslov): v for k, v in tilde.entries.items()}
    blocks = {}
    for (a, m) in dims:
        if (a, m - 1) not in dims:
            continue
        src_basis = cx.homology_basis(a, m)
        tgt_basis = cx.homology_basis(a, m - 1)
        rows = act_rows[a][m]
        blocks[(a, m)] = [tgt_basis.coordinates(gf2.apply(rows, z)) for z in src_basis.representatives]
    return ActionOperator((c1, c2), dims, blocks)


@dataclass(frozen=True)
class FreenessVerdict:
    free: bool
    dim: int
    rank: int


def is_free_module(op: ActionOperator) -> FreenessVerdict:
    """Free over F[X]/(X^2) iff the action has rank exactly half the dimension."""
    dim, rank = op.dim, op.rank
    return FreenessVerdict(2 * rank == dim, dim, rank)
