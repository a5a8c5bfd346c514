"""Exact convex geometry on the doubled Alexander lattice (dimension <= 4).

Facets are found by exhaustive search over affinely independent point
subsets; every quantity is an integer (numpy int64 for the bulk sign
tests, Python ints and Fractions for the rest).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from .errors import DimensionMismatch, DimensionTooLarge, EmptyErosion, NotASummand

MAX_DIM = 4

Point = tuple[int, ...]
Facet = tuple[tuple[int, ...], int]


def _rank(vectors: Iterable[Iterable]) -> int:
    rows = [[Fraction(v) for v in vec] for vec in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def _det_stack(M: np.ndarray) -> np.ndarray:
    """Determinants of a stack of k x k integer matrices, k <= 3."""
    k = M.shape[-1]
    if k == 0:
        return np.ones(M.shape[0], dtype=np.int64)
    if k == 1:
        return M[:, 0, 0]
    if k == 2:
        return M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    if k == 3:
        return (
            M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
            - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
            + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0])
        )
    raise DimensionTooLarge(f"determinant of size {k}")


def _normals(D: np.ndarray) -> np.ndarray:
    """Generalised cross products of stacks of (k-1) vectors in Z^k."""
    k = D.shape[-1]
    cols = []
    for i in range(k):
        minor = np.delete(D, i, axis=2)
        cols.append((-1) ** i * _det_stack(minor))
    return np.stack(cols, axis=1)


def _primitive(normal, offset) -> Facet:
    # offset = normal . (integer point), so the gcd of the normal divides it
    g = 0
    for v in normal:
        g = math.gcd(g, int(v))
    return tuple(int(v) // g for v in normal), int(offset) // g


def _facets_full(pts: np.ndarray) -> list[Facet]:
    """Facet inequalities of a full-dimensional point set in Z^k."""
    npts, k = pts.shape
    found: set[Facet] = set()
    combos = np.array(list(itertools.combinations(range(npts), k)), dtype=np.int64)
    chunk = 20000
    for s in range(0, len(combos), chunk):
        cmb = combos[s:s + chunk]
        base = pts[cmb[:, 0]]
        D = pts[cmb[:, 1:]] - base[:, None, :]
        N = _normals(D)
        nz = np.any(N != 0, axis=1)
        N, base = N[nz], base[nz]
        off = np.einsum("ij,ij->i", N, base)
        vals = N @ pts.T - off[:, None]
        upper = np.all(vals <= 0, axis=1)
        lower = np.all(vals >= 0, axis=1)
        for normal, b in zip(N[upper].tolist(), off[upper].tolist()):
            found.add(_primitive(normal, b))
        for normal, b in zip((-N[lower]).tolist(), (-off[lower]).tolist()):
            found.add(_primitive(normal, b))
    return sorted(found)


def _affine_frame(points: list[Point]):
    """Affine dimension and a set of coordinates injective on the hull."""
    p0 = points[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in points[1:]]
    k = _rank(diffs) if diffs else 0
    dim = len(p0)
    for coords in itertools.combinations(range(dim), k):
        if _rank([[d[c] for c in coords] for d in diffs] or [[0] * k]) == k:
            return k, coords
    raise AssertionError("no injective coordinate projection")


@dataclass(frozen=True)
class LatticePolytope:
    dim: int
    vertices: frozenset
    _facets: Optional[tuple] = field(default=None, compare=False, repr=False)

    @cached_property
    def affine_dim(self) -> int:
        return _affine_frame(sorted(self.vertices))[0]

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    @cached_property
    def facets(self) -> list[Facet]:
        """Facet inequalities ``normal . x <= offset``; empty unless full-dimensional."""
        if self._facets is not None:
            return list(self._facets)
        if not self.is_full_dimensional or self.dim == 0:
            return []
        return _facets_full(np.array(sorted(self.vertices), dtype=np.int64))

    def sorted_vertices(self) -> list[Point]:
        return sorted(self.vertices)

    def contains(self, point) -> bool:
        point = tuple(point)
        if self.is_full_dimensional:
            return all(sum(a * x for a, x in zip(nv, point)) <= b for nv, b in self.facets)
        verts = self.sorted_vertices()
        k, coords = _affine_frame(verts)
        if _affine_frame(verts + [point])[0] != k:
            return False  # off the affine hull
        if k == 0:
            return point == verts[0]
        proj = np.array([[v[c] for c in coords] for v in verts], dtype=np.int64)
        return all(
            sum(a * point[c] for a, c in zip(nv, coords)) <= b for nv, b in _facets_full(proj)
        )

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.sorted_vertices()],
            "facets": [{"normal": list(a), "offset": b} for a, b in self.facets],
            "shape": polytope_shape(self).to_json(),
        }


def convex_vertices(points: Iterable, dim: int) -> LatticePolytope:
    """Extreme points of the integer point set ``points`` in ``Z^dim``."""
    if dim > MAX_DIM:
        raise DimensionTooLarge(f"dimension {dim} exceeds the supported maximum {MAX_DIM}")
    pts = sorted({tuple(int(c) for c in p) for p in points})
    if not pts:
        raise ValueError("convex_vertices needs at least one point")
    if any(len(p) != dim for p in pts):
        raise DimensionMismatch(f"points do not all have dimension {dim}")
    k, coords = _affine_frame(pts)
    if k == 0:
        return LatticePolytope(dim, frozenset(pts))
    proj = np.array([[p[c] for c in coords] for p in pts], dtype=np.int64)
    facets = _facets_full(proj)
    normals = np.array([a for a, _ in facets], dtype=np.int64)
    offsets = np.array([b for _, b in facets], dtype=np.int64)
    tight = (proj @ normals.T) == offsets[None, :]
    verts = []
    for i, p in enumerate(pts):
        active = normals[tight[i]]
        if len(active) >= k and _rank(active.tolist()) == k:
            verts.append(p)
    return LatticePolytope(dim, frozenset(verts), tuple(facets) if k == dim else ())


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.dim != q.dim:
        raise DimensionMismatch(f"cannot add polytopes of dimensions {p.dim} and {q.dim}")
    sums = {tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices}
    return convex_vertices(sums, p.dim)


def cube(dim: int, side: int = 2) -> LatticePolytope:
    if side <= 0 or side % 2:
        raise ValueError(f"cube side must be a positive even integer, got {side}")
    h = side // 2
    return convex_vertices(itertools.product((-h, h), repeat=dim), dim)


def _solve(A: list[list[int]], b: list[int]) -> Optional[list[Fraction]]:
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col] / M[col][col]
                M[i] = [a - f * c for a, c in zip(M[i], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def vertices_from_inequalities(facets: list[Facet], dim: int) -> list[tuple[Fraction, ...]]:
    """Vertices of the bounded region ``{x : a . x <= b}`` (exact)."""
    verts = set()
    for subset in itertools.combinations(facets, dim):
        sol = _solve([list(a) for a, _ in subset], [b for _, b in subset])
        if sol is None:
            continue
        if all(sum(ai * xi for ai, xi in zip(a, sol)) <= b for a, b in facets):
            verts.add(tuple(sol))
    return sorted(verts)


def erode_by_cube(p: LatticePolytope, side: int = 2) -> LatticePolytope:
    """``{x : x + C in P}`` for the cube ``C = [-side/2, side/2]^dim``.

    Raises EmptyErosion when no translate of the cube fits, and NotASummand
    when the eroded region has non-lattice vertices (then the cube cannot
    be a Minkowski summand of a lattice polytope).
    """
    if side <= 0 or side % 2:
        raise ValueError(f"cube side must be a positive even integer, got {side}")
    if not p.is_full_dimensional:
        raise EmptyErosion("polytope is not full-dimensional, no cube translate fits inside")
    h = side // 2
    shrunk = [(a, b - h * sum(abs(v) for v in a)) for a, b in p.facets]
    verts = vertices_from_inequalities(shrunk, p.dim)
    if not verts:
        raise EmptyErosion(f"eroding by the side-{side} cube leaves nothing")
    if any(v.denominator != 1 for vert in verts for v in vert):
        raise NotASummand("eroded region has non-lattice vertices")
    return convex_vertices([tuple(int(v) for v in vert) for vert in verts], p.dim)


@dataclass(frozen=True)
class ShapeReport:
    vertex_count: int
    is_axis_box: bool
    is_centrally_symmetric: bool
    is_full_dimensional: bool

    def to_json(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "is_axis_box": self.is_axis_box,
            "is_centrally_symmetric": self.is_centrally_symmetric,
            "is_full_dimensional": self.is_full_dimensional,
        }


def polytope_shape(p: LatticePolytope) -> ShapeReport:
    verts = p.vertices
    lows = [min(v[k] for v in verts) for k in range(p.dim)]
    highs = [max(v[k] for v in verts) for k in range(p.dim)]
    box = set(itertools.product(*({lo, hi} for lo, hi in zip(lows, highs))))
    return ShapeReport(
        vertex_count=len(verts),
        is_axis_box=box == set(verts),
        is_centrally_symmetric=all(tuple(-c for c in v) in verts for v in verts),
        is_full_dimensional=p.is_full_dimensional,
    )


@dataclass
class LinkFloerPolytope:
    polytope: LatticePolytope
    dual_thurston: Optional[LatticePolytope]
    reason: Optional[str]
    trivial_candidates: tuple[int, ...]

    @property
    def dual_thurston_valid(self) -> bool:
        return self.dual_thurston is not None and not self.trivial_candidates

    def to_json(self) -> dict:
        return {
            "polytope": self.polytope.to_json(),
            "dual_thurston": None if self.dual_thurston is None else self.dual_thurston.to_json(),
            "dual_thurston_valid": self.dual_thurston_valid,
            "reason": self.reason,
            "trivial_candidates": list(self.trivial_candidates),
        }


def link_floer_polytope(r, linking: list[list[int]]) -> LinkFloerPolytope:
    """Hull of the Alexander support, and the cube-complementary summand.

    A coordinate on which the whole support vanishes and whose component
    has zero linking with the rest is flagged as a trivial component; in
    that case the dual Thurston polytope is not reported.
    """
    support = r.support()
    l = r.l
    poly = convex_vertices(support, l)
    trivial = tuple(
        i for i in range(l)
        if all(h[i] == 0 for h in support) and all(linking[i][j] == 0 for j in range(l) if j != i)
    )
    if trivial:
        return LinkFloerPolytope(poly, None, "trivial component present", trivial)
    if not poly.is_full_dimensional:
        return LinkFloerPolytope(poly, None, "link Floer polytope is degenerate", trivial)
    try:
        summand = erode_by_cube(poly, 2)
    except EmptyErosion:
        return LinkFloerPolytope(poly, None, "cube does not fit inside the polytope", trivial)
    except NotASummand:
        return LinkFloerPolytope(poly, None, "eroded region is not a lattice polytope", trivial)
    if minkowski_sum(summand, cube(l, 2)) != poly:
        return LinkFloerPolytope(poly, None, "cube is not a Minkowski summand", trivial)
    return LinkFloerPolytope(poly, summand, None, trivial)
