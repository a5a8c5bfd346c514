"""Bundled grid files and the invariant suite run over them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterator, Optional

import numpy as np

from .action import homology_action, is_free_module, staircase_path
from .complex import grid_complex, link_floer_ranks
from .detect import (
    detect_all,
    euler_and_alexander,
    predict_disjoint_union,
    removal_audit,
)
from .grid import (
    GridDiagram,
    cyclic_shift,
    disjoint_union,
    linking_matrix,
    parse_grid,
    remove_component,
    serialize_grid,
    trace_components,
)
from .polytope import convex_vertices, cube, link_floer_polytope, minkowski_sum

CORPUS_NAMES = (
    "unknot2",
    "unknot-stabilized",
    "hopf",
    "unlink2",
    "trefoil",
    "hopf-disjoint-unknot",
    "l6a2",
)

# components, link Floer rank, is an unlink (unknots count), is split
EXPECTED = {
    "unknot2": (1, 1, True, False),
    "unknot-stabilized": (1, 1, True, False),
    "hopf": (2, 4, False, False),
    "unlink2": (2, 2, True, True),
    "trefoil": (1, 3, False, False),
    "hopf-disjoint-unknot": (3, 8, False, True),
    "l6a2": (2, 20, False, False),
}

CONTAINS_TREFOIL = {"trefoil"}

# largest grid formed when checking disjoint unions of corpus pairs
UNION_LIMIT = 8


def load_corpus(name: str) -> GridDiagram:
    if name not in CORPUS_NAMES:
        raise KeyError(f"no bundled grid named {name!r}")
    text = resources.files(__package__).joinpath("corpus", f"{name}.grid").read_text("utf-8")
    return parse_grid(text)


def corpus() -> dict[str, GridDiagram]:
    return {name: load_corpus(name) for name in CORPUS_NAMES}


def union_pairs(grids: dict[str, GridDiagram], limit: int = UNION_LIMIT):
    """Unordered corpus pairs (with repetition) whose union fits ``limit``."""
    names = list(grids)
    for a, b in itertools.combinations_with_replacement(names, 2):
        if grids[a].n + grids[b].n <= limit:
            yield a, b


def detour_path(g: GridDiagram, c1: int, c2: int):
    """An alternative arc: from the rightmost X of ``c1`` go left, then down,
    to the rightmost O of ``c2``."""
    part = trace_components(g)
    j1 = max(part.columns(c1))
    j2 = max(part.columns(c2))
    return staircase_path(
        g, (j1, g.x_rows[j1]), (j2, g.o_rows[j2]),
        vertical_first=False, upward=False, rightward=False,
    )


@dataclass(frozen=True)
class Check:
    module: str
    invariant: str
    subject: str
    passed: bool
    detail: str = ""


def _run(module: str, invariant: str, subject: str, fn: Callable[[], Optional[str]]) -> Check:
    """``fn`` returns None on success or a failure description."""
    try:
        problem = fn()
    except Exception as exc:  # any exception is a failed invariant
        problem = f"{type(exc).__name__}: {exc}"
    return Check(module, invariant, subject, problem is None, problem or "")


# --- per-module checks --------------------------------------------------------


def _grid_checks(name: str, g: GridDiagram) -> Iterator[Check]:
    l_expected = EXPECTED[name][0]
    part = trace_components(g)

    def roundtrip():
        if parse_grid(serialize_grid(g)) != g:
            return "serialize then parse changed the diagram"

    def components():
        if part.l != l_expected:
            return f"found {part.l} components, expected {l_expected}"

    def linking_symmetric():
        lk = linking_matrix(g, part)
        if any(lk[i][j] != lk[j][i] for i in range(part.l) for j in range(part.l)):
            return f"linking matrix {lk} is not symmetric"

    def removal():
        for i in range(part.l if part.l > 1 else 0):
            sub = trace_components(remove_component(g, i))
            if sub.l != part.l - 1:
                return f"removing {i} left {sub.l} components"
            kept = [m for j, m in enumerate(part.marks_per_component) if j != i]
            if list(sub.marks_per_component) != kept:
                return f"removing {i} changed marking counts to {sub.marks_per_component}"

    yield _run("grid", "parse/serialize round trip", name, roundtrip)
    yield _run("grid", "component count", name, components)
    yield _run("grid", "linking symmetry", name, linking_symmetric)
    yield _run("grid", "component removal", name, removal)


def _complex_checks(name: str, g: GridDiagram) -> Iterator[Check]:
    l, rank, _, _ = EXPECTED[name]

    def d_squared():
        cx = grid_complex(g)
        cx._check_grading_change()
        cx.check_d_squared()

    def expected_rank():
        total = link_floer_ranks(g).total
        if total != rank:
            return f"link Floer rank {total}, expected {rank}"

    def symmetry():
        by_a = link_floer_ranks(g).by_alexander()
        for a, v in by_a.items():
            if by_a.get(tuple(-x for x in a), 0) != v:
                return f"rank {v} at {a} but {by_a.get(tuple(-x for x in a), 0)} at its negative"

    def parity():
        total = link_floer_ranks(g).total
        if (total % 2 == 1) != (l == 1):
            return f"rank {total} has the wrong parity for {l} components"

    def lattice():
        lk = linking_matrix(g)
        for a in link_floer_ranks(g).support():
            for i in range(l):
                if (a[i] + sum(lk[i][j] for j in range(l) if j != i)) % 2:
                    return f"grading {a} violates the lattice parity in coordinate {i}"

    def independence():
        ref = link_floer_ranks(g).entries
        owner = trace_components(g).column_owner
        for dc, dr in ((1, 0), (0, 1), (2, 3)):
            h = cyclic_shift(g, dc, dr)
            new_owner = trace_components(h).column_owner
            # old component index -> its index in the translated grid
            relabel = {owner[j]: new_owner[(j + dc) % g.n] for j in range(g.n)}
            moved = {
                (k.maslov, tuple(k.alex2[relabel[i]] for i in range(l))): v
                for k, v in link_floer_ranks(h).entries.items()
            }
            if moved != {(k.maslov, k.alex2): v for k, v in ref.items()}:
                return f"torus translation ({dc},{dr}) changed the ranks"

    def knotted_bound():
        total = link_floer_ranks(g).total
        if total < 3 * 2 ** (l - 1):
            return f"rank {total} below the knotted-component bound {3 * 2 ** (l - 1)}"

    yield _run("complex", "d^2 = 0 and grading change", name, d_squared)
    yield _run("complex", "expected rank", name, expected_rank)
    yield _run("complex", "central symmetry", name, symmetry)
    yield _run("complex", "rank parity", name, parity)
    yield _run("complex", "grading lattice", name, lattice)
    yield _run("complex", "diagram independence", name, independence)
    if name in CONTAINS_TREFOIL:
        yield _run("complex", "knotted component bound", name, knotted_bound)


def _action_checks(name: str, g: GridDiagram) -> Iterator[Check]:
    l, _, _, split = EXPECTED[name]
    pairs = list(itertools.permutations(range(l), 2))

    def nilpotent():
        for c1, c2 in pairs:
            if not homology_action(g, c1, c2).squared_is_zero():
                return f"action of {(c1, c2)} does not square to zero"

    def path_independent():
        for c1, c2 in pairs:
            a = homology_action(g, c1, c2).dense()
            b = homology_action(g, c1, c2, path=detour_path(g, c1, c2)).dense()
            if not np.array_equal(a, b):
                return f"detoured arc changes the action of {(c1, c2)}"

    def nonsplit():
        for c1, c2 in pairs:
            if is_free_module(homology_action(g, c1, c2)).free:
                return f"action of {(c1, c2)} is free on a nonsplit link"

    if l > 1:
        yield _run("action", "nilpotence", name, nilpotent)
        yield _run("action", "path independence", name, path_independent)
        if not split:
            yield _run("action", "not free on nonsplit link", name, nonsplit)


def _polytope_checks(name: str, g: GridDiagram) -> Iterator[Check]:
    l, _, _, split = EXPECTED[name]
    r = link_floer_ranks(g)
    lp = link_floer_polytope(r, linking_matrix(g))

    def idempotent():
        p = lp.polytope
        if convex_vertices(p.vertices, p.dim) != p:
            return "hull of the vertices differs from the polytope"

    def reconstruction():
        if lp.dual_thurston is not None:
            if minkowski_sum(lp.dual_thurston, cube(l, 2)) != lp.polytope:
                return "summand plus cube does not rebuild the polytope"

    def vertex_bound():
        p = lp.polytope
        if len(p.vertices) < 2 ** l or not p.is_full_dimensional:
            return f"{len(p.vertices)} vertices, full-dimensional={p.is_full_dimensional}"

    yield _run("polytope", "hull idempotence", name, idempotent)
    yield _run("polytope", "erosion reconstruction", name, reconstruction)
    if not split and not lp.trivial_candidates:
        yield _run("polytope", "vertex bound", name, vertex_bound)


def _detect_checks(name: str, g: GridDiagram) -> Iterator[Check]:
    l, rank, unlink, split = EXPECTED[name]
    r = link_floer_ranks(g)

    def alexander():
        ea = euler_and_alexander(r)
        flipped = ea.chi.substitute_negated()
        if flipped != ea.chi and flipped != -ea.chi:
            return "Euler characteristic is not symmetric up to sign"

    def rank_inequality():
        for i in range(l if l > 1 else 0):
            sub = link_floer_ranks(remove_component(g, i)).total
            if r.total < 2 * sub:
                return f"removing {i}: {r.total} < 2*{sub}"

    def chained():
        bound = 2 ** (l - 1)
        if r.total < bound:
            return f"rank {r.total} below {bound}"
        if (r.total == bound) != unlink:
            return f"equality with {bound} is {r.total == bound}, unlink is {unlink}"

    def verdicts():
        rep = detect_all(g)
        v = {k: x.value for k, x in rep.verdicts.items()}
        rules = {
            "unknot implies knot and not split": not v["is_unknot"] or (l == 1 and not v["is_split"]),
            "hopf implies l=2, rank 4, not split": not v["is_hopf_link"] or (l == 2 and rep.lfr == 4 and not v["is_split"]),
            "unlink implies split": not v["is_unlink"] or v["is_split"],
            "unlink excludes second class": not (v["is_unlink"] and v["is_second_smallest_class"]),
            "split matches expectation": v["is_split"] == split,
            "unlink matches expectation": v["is_unlink"] == (unlink and l > 1),
        }
        bad = [k for k, ok in rules.items() if not ok]
        if bad:
            return "; ".join(bad)

    def audits():
        for i in range(l if l > 1 else 0):
            a = removal_audit(g, i)
            if not a.agrees:
                return f"removal audit of component {i} disagrees with its predictions"

    yield _run("detect", "Alexander polynomial and chi symmetry", name, alexander)
    yield _run("detect", "rank inequality", name, rank_inequality)
    yield _run("detect", "chained bound", name, chained)
    yield _run("detect", "verdict consistency", name, verdicts)
    yield _run("detect", "removal audits", name, audits)


def _union_checks(grids: dict[str, GridDiagram]) -> Iterator[Check]:
    for a, b in union_pairs(grids):
        g1, g2 = grids[a], grids[b]
        u = disjoint_union(g1, g2)
        subject = f"{a}+{b}"

        def formula(g1=g1, g2=g2, u=u):
            r1, r2, ru = link_floer_ranks(g1), link_floer_ranks(g2), link_floer_ranks(u)
            if ru.total != 2 * r1.total * r2.total:
                return f"rank {ru.total} != 2*{r1.total}*{r2.total}"
            got = {(k.maslov, k.alex2): v for k, v in ru.entries.items()}
            if got != predict_disjoint_union(r1, r2):
                return "multigraded ranks differ from the tensor product"

        def free_across(g1=g1, u=u):
            l1 = trace_components(g1).l
            lu = trace_components(u).l
            for c1 in range(l1):
                for c2 in range(l1, lu):
                    if not is_free_module(homology_action(u, c1, c2)).free:
                        return f"action of {(c1, c2)} across the union is not free"

        yield _run("detect", "disjoint union formula", subject, formula)
        yield _run("action", "free across split union", subject, free_across)


def run_suite(grids: Optional[dict[str, GridDiagram]] = None) -> list[Check]:
    grids = grids if grids is not None else corpus()
    checks: list[Check] = []
    for name, g in grids.items():
        for family in (_grid_checks, _complex_checks, _action_checks, _polytope_checks, _detect_checks):
            checks.extend(family(name, g))
    checks.extend(_union_checks(grids))
    return checks
