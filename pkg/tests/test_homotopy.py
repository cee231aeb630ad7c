import math

import pytest

from core.groups.diagram import metrics, validate
from core.groups.homotopy import (
    OneCellCollapse,
    TwoCellCollapse,
    apply_move,
    fl_exact,
    fl_schedule_prop2,
    initial_state,
    legal_moves,
    prop2_bound,
    replay,
    step4_growth,
    step4_growth_bound,
    step4_loop_bound,
    trace_document,
    trace_from_document,
    valence_area_bound,
    valence_fl_bound,
)
from core.models.reports import DartRecord, DiagramDocument
from core.utils.error_handler import IllegalMoveError, NonTriangularPresentationError, OracleBudgetExceeded


@pytest.fixture
def square(z2):
    """abAB over <a, b | abAB> as a single square face"""
    darts = [
        DartRecord(id=0, origin=0, twin=1, label='a'), DartRecord(id=1, origin=1, twin=0, label='A'),
        DartRecord(id=2, origin=1, twin=3, label='b'), DartRecord(id=3, origin=2, twin=2, label='B'),
        DartRecord(id=4, origin=2, twin=5, label='A'), DartRecord(id=5, origin=3, twin=4, label='a'),
        DartRecord(id=6, origin=3, twin=7, label='B'), DartRecord(id=7, origin=0, twin=6, label='b'),
    ]
    document = DiagramDocument(
        presentation='z2.pres',
        vertices=[0, 1, 2, 3],
        darts=darts,
        rotation={0: [7, 0], 1: [1, 2], 2: [3, 4], 3: [5, 6]},
        faces=[[7, 5, 3, 1]],
        base=0,
        boundary=[0, 2, 4, 6],
    )
    return validate(document, z2)


def test_legal_moves_two_triangle(two_triangle):
    moves = legal_moves(initial_state(two_triangle))
    assert len(moves) == 4
    assert all(isinstance(m, TwoCellCollapse) for m in moves)
    assert {m.face for m in moves} == {0, 1}


def test_legal_moves_path_and_trivial(path_aA, trivial):
    assert legal_moves(initial_state(path_aA)) == [OneCellCollapse(edge=0, vertex=1)]
    assert legal_moves(initial_state(trivial)) == []
    assert initial_state(trivial).is_terminal


def test_face_collapse_adds_face_length_minus_two(two_triangle):
    state = initial_state(two_triangle)
    after = apply_move(state, legal_moves(state)[0])
    assert after.length == 5
    assert len(after.faces) == 1
    assert isinstance(legal_moves(after)[0], OneCellCollapse)


def test_state_counts(two_triangle):
    state = initial_state(two_triangle)
    assert (state.vertex_count, state.edge_count) == (4, 5)
    after = apply_move(state, TwoCellCollapse(face=0, edge=0))
    assert (after.vertex_count, after.edge_count) == (4, 4)


def test_illegal_moves(two_triangle, path_aA):
    state = initial_state(two_triangle)
    with pytest.raises(IllegalMoveError):
        apply_move(state, OneCellCollapse(edge=0, vertex=1))
    with pytest.raises(IllegalMoveError):
        apply_move(state, TwoCellCollapse(face=0, edge=4))
    with pytest.raises(IllegalMoveError):
        apply_move(state, TwoCellCollapse(face=5, edge=0))
    with pytest.raises(IllegalMoveError):
        apply_move(initial_state(path_aA), OneCellCollapse(edge=0, vertex=0))


def test_exact_filling_lengths(path_aA, single_triangle, two_triangle, trivial):
    assert fl_exact(path_aA, 1000) == 2
    assert fl_exact(single_triangle, 1000) == 4
    assert fl_exact(two_triangle, 1000) == 5
    assert fl_exact(trivial, 1000) == 0


def test_exact_below_threshold(two_triangle):
    assert fl_exact(two_triangle, 1000, below=5) is None
    assert fl_exact(two_triangle, 1000, below=6) == 5


def test_exact_budget(two_triangle):
    with pytest.raises(OracleBudgetExceeded) as info:
        fl_exact(two_triangle, 1)
    assert info.value.expanded == 2


def test_schedule_two_triangle(two_triangle):
    trace = fl_schedule_prop2(two_triangle)
    assert trace.profile == (4, 5, 3, 4, 2, 0)
    assert trace.realized_fl == 5
    assert trace.deviations == ()
    assert {r.step for r in trace.records} <= {1, 2, 3, 4}
    replay(two_triangle, trace)


def test_schedule_single_triangle(single_triangle):
    trace = fl_schedule_prop2(single_triangle)
    assert trace.profile == (3, 4, 2, 0)
    assert trace.realized_fl == 4


def test_schedule_path(path_aA):
    trace = fl_schedule_prop2(path_aA)
    assert trace.profile == (2, 0)
    assert trace.records[0].step == 1


def test_schedule_on_hex_patch(hex_patch):
    trace = fl_schedule_prop2(hex_patch)
    m = metrics(hex_patch)
    replay(hex_patch, trace)
    assert trace.realized_fl <= prop2_bound(m.area, m.diameter, m.boundary_length)
    assert trace.realized_fl <= valence_fl_bound(m.diameter, m.boundary_length, m.max_valence)
    for record in trace.records:
        if record.job_loop is not None:
            assert record.job_loop <= step4_loop_bound(m.area, m.diameter)
    for _, _, grown in step4_growth(trace):
        assert grown <= step4_growth_bound(m.diameter)


def test_job_loops_close_within_the_base_point_loop(hex_patch, two_triangle):
    for diagram in (hex_patch, two_triangle):
        trace = fl_schedule_prop2(diagram)
        diameter = metrics(diagram).diameter
        for index, record in enumerate(trace.records):
            if record.job_loop is not None:
                # arc on the current loop plus both tree paths to the base point
                assert record.job_loop <= trace.profile[index] + 2 * diameter


def test_replay_rejects_tampered_profile(two_triangle):
    trace = fl_schedule_prop2(two_triangle)
    document = trace_document(two_triangle, trace)
    document.profile[1] = 7
    with pytest.raises(IllegalMoveError):
        replay(two_triangle, trace_from_document(document))


def test_replay_rejects_short_trace(two_triangle):
    trace = fl_schedule_prop2(two_triangle)
    document = trace_document(two_triangle, trace)
    document.moves = document.moves[:-1]
    document.profile = document.profile[:-1]
    with pytest.raises(IllegalMoveError):
        replay(two_triangle, trace_from_document(document))


def test_trace_document(two_triangle):
    trace = fl_schedule_prop2(two_triangle)
    document = trace_document(two_triangle, trace)
    assert document.boundary_word == 'abAB'
    assert document.realized_fl == 5
    assert trace_from_document(document) == trace


def test_scheduler_refuses_long_relators(square):
    with pytest.raises(NonTriangularPresentationError):
        fl_schedule_prop2(square)
    assert fl_exact(square, 1000) == 6


@pytest.mark.parametrize('area, diam, n, expected', [
    (2, 1, 4, 3 * (math.log2(3) + 1) + 9),
    (0, 0, 0, 2),
    (7, 2, 5, 34),
])
def test_prop2_bound(area, diam, n, expected):
    assert prop2_bound(area, diam, n) == pytest.approx(expected)


def test_prop2_bound_two_triangle_value():
    assert prop2_bound(2, 1, 4) == pytest.approx(16.7549, abs=1e-4)


def test_valence_bounds_use_at_least_three():
    assert valence_area_bound(1, 2) == 8
    assert valence_area_bound(1, 4) == 15
    assert valence_fl_bound(0, 3, 1) == pytest.approx(math.log2(3) + 4)
    assert valence_fl_bound(2, 6, 2) == valence_fl_bound(2, 6, 3)
