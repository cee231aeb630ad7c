"""
Acceptance suites over generated trees and enumerated diagrams. The
small sweeps run by default; the desk-scale sweeps need ``--runslow``.
"""
import random
from fractions import Fraction

import pytest

from core.groups.diagram import metrics
from core.groups.homotopy import (
    fl_exact,
    fl_schedule_prop2,
    prop2_bound,
    replay,
    step4_growth,
    step4_growth_bound,
    step4_loop_bound,
    valence_area_bound,
    valence_fl_bound,
)
from core.groups.invariants import area_growth_steps, enumerate_diagrams, filling_functions, reduced_words
from core.groups.presentation import bridson_presentation, triangularize
from core.groups.tree_shelling import (
    all_trees,
    complete_tree,
    exact_visibility,
    greedy_shell,
    lemma1_bound,
    random_tree,
    single,
    visibility_of_schedule,
)

def _greedy(tree):
    forest = single(tree)
    return visibility_of_schedule(forest, greedy_shell(forest))


def test_greedy_shelling_on_random_trees():
    rng = random.Random(0)
    for _ in range(1000):
        n = 2 * rng.randrange(1001) + 1
        tree = random_tree(n, rng)
        assert _greedy(tree) <= lemma1_bound(n)


def test_greedy_shelling_on_all_small_trees():
    for n in range(1, 16, 2):
        for tree in all_trees(n):
            assert exact_visibility(single(tree)) <= _greedy(tree) <= lemma1_bound(n)


@pytest.mark.parametrize('depth', range(0, 7))
def test_complete_trees_are_sharp(depth):
    tree = complete_tree(depth)
    assert exact_visibility(single(tree), max_nodes=len(tree)) == depth + 1
    assert _greedy(tree) == depth + 1


def _enumerate(n_max, max_area):
    from core.groups.presentation import load_presentation
    from tests.conftest import SAMPLES
    presentation = load_presentation(SAMPLES / 'z2_triangular.pres')
    diagrams = []
    for n in range(0, n_max + 1):
        for word in reduced_words(presentation, n):
            diagrams.extend(enumerate_diagrams(presentation, word, max_area))
    return diagrams


@pytest.fixture(scope='module')
def enumerated():
    """Every diagram over triangular Z^2 with area <= 4 and boundary length <= 6"""
    return _enumerate(6, 4)


@pytest.fixture(scope='module')
def enumerated_full():
    """Every diagram over triangular Z^2 with area <= 6 and boundary length <= 8"""
    return _enumerate(8, 6)


def _check_scheduler_bounds(diagrams):
    assert diagrams
    for diagram in diagrams:
        m = metrics(diagram)
        trace = fl_schedule_prop2(diagram)
        replay(diagram, trace)
        assert trace.realized_fl <= prop2_bound(m.area, m.diameter, m.boundary_length)
        loop_bound = step4_loop_bound(m.area, m.diameter)
        for record in trace.records:
            if record.job_loop is not None:
                assert record.job_loop <= loop_bound
        for _, _, grown in step4_growth(trace):
            assert grown <= step4_growth_bound(m.diameter)


def test_scheduler_bound_on_enumerated_diagrams(enumerated):
    _check_scheduler_bounds(enumerated)


@pytest.mark.slow
def test_scheduler_bound_on_all_desk_scale_diagrams(enumerated_full):
    _check_scheduler_bounds(enumerated_full)


def test_oracle_sandwich(enumerated, two_triangle, single_triangle, path_aA):
    for diagram in [two_triangle, single_triangle, path_aA] + [d for d in enumerated if d.area <= 3]:
        m = metrics(diagram)
        scheduled = fl_schedule_prop2(diagram).realized_fl
        assert fl_exact(diagram, 200000) <= scheduled <= prop2_bound(m.area, m.diameter, m.boundary_length)


def test_valence_bounds(enumerated):
    for diagram in enumerated:
        m = metrics(diagram)
        assert m.area <= valence_area_bound(m.diameter, m.max_valence)
        scheduled = fl_schedule_prop2(diagram).realized_fl
        assert scheduled <= valence_fl_bound(m.diameter, m.boundary_length, m.max_valence)


def test_area_growth_of_boundary_stars(enumerated, hex_patch):
    for diagram in enumerated + [hex_patch]:
        for _, before, after, curve in area_growth_steps(diagram):
            assert Fraction(after - before) >= Fraction(curve, 3)


def _check_chain(table):
    for row in table.rows:
        assert row.g0 <= row.h0 <= 2 * 3 * row.f0 + row.n
    assert table.row(4).f0 >= 2


def test_filling_function_chain(z2_tri):
    _check_chain(filling_functions(z2_tri, n_max=4, max_area=4))


@pytest.mark.slow
def test_filling_function_chain_to_length_six(z2_tri):
    _check_chain(filling_functions(z2_tri, n_max=6, max_area=6, reduced_only=True))


def test_triangularization(z2):
    tri = triangularize(z2)
    assert tri.max_relator_length <= 3
    assert enumerate_diagrams(tri, tri.parse('abAB'), 2)
    for m in (1, 2, 3):
        assert triangularize(bridson_presentation(m)).max_relator_length <= 3
