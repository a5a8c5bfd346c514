import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from gridfloer.action import (
    ConnectingPath,
    default_path,
    homology_action,
    is_free_module,
    staircase_path,
)
from gridfloer.corpus import detour_path
from gridfloer.errors import InvalidComponent, SameComponent
from gridfloer.grid import disjoint_union, trace_components

import oracles
from conftest import TORUS_2_4


def marking_cells(g, c):
    part = trace_components(g)
    cols = part.columns(c)
    return [(j, g.x_rows[j]) for j in cols] + [(j, g.o_rows[j]) for j in cols]


def all_paths(g, c1, c2):
    """Staircase arcs between every marking of ``c1`` and every marking of ``c2``."""
    for start, end in itertools.product(marking_cells(g, c1), marking_cells(g, c2)):
        for flags in itertools.product([True, False], repeat=3):
            yield staircase_path(g, start, end, *flags)


def test_path_validation():
    with pytest.raises(ValueError):
        ConnectingPath(4, ((0, 0), (2, 0)))
    # wrapping steps are unit steps on the torus
    ConnectingPath(4, ((3, 0), (0, 0), (0, 3)))


def test_crossings_record_horizontal_lines():
    p = ConnectingPath(4, ((1, 0), (1, 1), (1, 2), (2, 2), (2, 1)))
    assert p.crossings() == {(1, 1): 1, (2, 1): 1, (2, 2): 1}
    assert set(p.crossings()) == oracles.path_line_crossings(4, p.cells)


def test_staircase_endpoints(grids):
    g = grids["l6a2"]
    for p in all_paths(g, 0, 1):
        assert p.cells[0] in marking_cells(g, 0)
        assert p.cells[-1] in marking_cells(g, 1)


def test_errors(grids):
    with pytest.raises(SameComponent):
        homology_action(grids["hopf"], 1, 1)
    with pytest.raises(InvalidComponent):
        homology_action(grids["hopf"], 0, 2)
    with pytest.raises(InvalidComponent):
        homology_action(grids["trefoil"], 0, 1)


@pytest.mark.parametrize("name", ["hopf", "unlink2"])
def test_matches_dense_oracle(grids, name):
    g = grids[name]
    for c1, c2 in [(0, 1), (1, 0)]:
        op = homology_action(g, c1, c2)
        assert oracles.action_rank(g, default_path(g, c1, c2).cells) == (op.dim, op.rank)


@given(oracles.grids(min_n=4, max_n=5), st.data())
@settings(max_examples=15, deadline=None)
def test_random_links_match_dense_oracle(g, data):
    part = trace_components(g)
    assume(part.l >= 2)
    c1, c2 = data.draw(st.permutations(range(part.l)))[:2]
    path = data.draw(st.sampled_from(list(all_paths(g, c1, c2))))
    op = homology_action(g, c1, c2, path=path)
    assert oracles.action_rank(g, path.cells) == (op.dim, op.rank)


def test_freeness_verdicts(grids):
    unlink = is_free_module(homology_action(grids["unlink2"], 0, 1))
    assert (unlink.free, unlink.dim, unlink.rank) == (True, 8, 4)
    hopf = is_free_module(homology_action(grids["hopf"], 0, 1))
    assert (hopf.free, hopf.dim, hopf.rank) == (False, 16, 0)
    assert not is_free_module(homology_action(grids["l6a2"], 0, 1)).free
    assert not is_free_module(homology_action(TORUS_2_4, 0, 1)).free
    hu = grids["hopf-disjoint-unknot"]
    verdicts = {p: is_free_module(homology_action(hu, *p)).free for p in [(0, 1), (0, 2), (1, 2)]}
    assert verdicts == {(0, 1): False, (0, 2): True, (1, 2): True}


def test_json(grids):
    assert homology_action(grids["unlink2"], 0, 1).to_json() == {
        "pair": [0, 1], "dim": 8, "rank": 4, "free": True,
    }


@pytest.mark.parametrize("name", ["hopf", "unlink2", "hopf-disjoint-unknot", "l6a2"])
def test_nilpotent_and_grading_preserving(grids, name):
    g = grids[name]
    l = trace_components(g).l
    for c1, c2 in itertools.permutations(range(l), 2):
        op = homology_action(g, c1, c2)
        assert op.squared_is_zero()
        m = op.dense().astype(np.float64)  # exact: entries stay below 2**53
        assert not ((m @ m) % 2).any()
        for (a, mas), cols in op.blocks.items():
            assert len(cols) == op.dims[(a, mas)]
            target = op.dims.get((a, mas - 1), 0)
            assert all(c < 1 << target for c in cols)


@pytest.mark.parametrize("name", ["hopf", "unlink2", "hopf-disjoint-unknot"])
def test_path_independence_exhaustive(grids, name):
    g = grids[name]
    l = trace_components(g).l
    for c1, c2 in itertools.permutations(range(l), 2):
        ref = homology_action(g, c1, c2).dense()
        for p in all_paths(g, c1, c2):
            assert np.array_equal(homology_action(g, c1, c2, path=p).dense(), ref)


def test_path_independence_detour(grids):
    for g in grids.values():
        l = trace_components(g).l
        for c1, c2 in itertools.permutations(range(l), 2):
            a = homology_action(g, c1, c2).dense()
            b = homology_action(g, c1, c2, path=detour_path(g, c1, c2)).dense()
            assert np.array_equal(a, b)


def test_path_independence_nontrivial_split_union(grids):
    u = disjoint_union(grids["unknot-stabilized"], grids["unknot2"])
    ref = homology_action(u, 0, 1)
    assert ref.rank > 0
    for p in all_paths(u, 0, 1):
        assert np.array_equal(homology_action(u, 0, 1, path=p).dense(), ref.dense())


@given(oracles.grids(max_n=3), oracles.grids(max_n=3))
@settings(max_examples=15, deadline=None)
def test_free_across_any_split_union(g1, g2):
    u = disjoint_union(g1, g2)
    l1 = trace_components(g1).l
    l = trace_components(u).l
    for c1 in range(l1):
        for c2 in range(l1, l):
            assert is_free_module(homology_action(u, c1, c2)).free
