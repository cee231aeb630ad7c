import copy
import json

import pytest

from core.groups.diagram import (
    boundary_curves,
    boundary_subcomplex,
    canonical_form,
    canonical_relabel,
    distance_to_boundary,
    geodesic_spanning_tree,
    load_diagram,
    metrics,
    star,
    star_i,
    to_document,
    validate,
)
from core.groups.invariants import area_growth_steps, enumerate_diagrams
from core.utils.error_handler import DiagramValidationError


@pytest.fixture
def two_triangle_raw(samples_dir):
    return json.loads((samples_dir / 'two_triangle.json').read_text())


def _dart(raw, dart_id):
    return next(d for d in raw['darts'] if d['id'] == dart_id)


def test_fixtures_validate(two_triangle, single_triangle, path_aA, trivial):
    assert two_triangle.boundary_text() == 'abAB'
    assert single_triangle.boundary_text() == 'T1ab'
    assert path_aA.boundary_text() == 'aA'
    assert trivial.boundary_text() == ''
    assert trivial.area == 0


def test_two_triangle_metrics(two_triangle):
    assert metrics(two_triangle) == (2, 1, 0, 3, 4)
    assert two_triangle.num_edges == 5


def test_single_triangle_metrics(single_triangle):
    m = metrics(single_triangle)
    assert (m.area, m.diameter, m.radius, m.max_valence, m.boundary_length) == (1, 1, 0, 2, 3)


def test_path_metrics(path_aA):
    m = metrics(path_aA)
    assert (m.area, m.diameter, m.radius, m.boundary_length) == (0, 1, 0, 2)


@pytest.mark.parametrize('name', ['two_triangle', 'single_triangle', 'path_aA', 'hex_patch'])
def test_euler_characteristic(name, request):
    diagram = request.getfixturevalue(name)
    assert diagram.num_vertices - diagram.num_edges + diagram.area + 1 == 2


def test_face_words_are_relators(two_triangle):
    words = {two_triangle.presentation.render(two_triangle.face_word(f)) for f in range(two_triangle.area)}
    assert words == {'At1B', 'aT1b'}


def test_geodesic_tree_two_triangle(two_triangle):
    tree = geodesic_spanning_tree(two_triangle)
    assert tree.depth == (0, 1, 1, 1)
    assert tree.parent_dart[0] is None
    assert len(tree.tree_edges) == 3
    assert tree.distance(1, 3) == 2
    assert tree.distance(2, 2) == 0


def test_geodesic_tree_depths_are_distances(hex_patch):
    tree = geodesic_spanning_tree(hex_patch)
    m = metrics(hex_patch)
    assert max(tree.depth) == m.diameter
    for v in range(hex_patch.num_vertices):
        dart = tree.parent_dart[v]
        if dart is not None:
            assert hex_patch.head(dart) == v
            assert tree.depth[hex_patch.origin[dart]] == tree.depth[v] - 1


def test_hex_patch_shape(hex_patch):
    assert hex_patch.num_vertices == 19
    assert hex_patch.area == 24
    assert len(hex_patch.boundary) == 12
    m = metrics(hex_patch)
    assert (m.diameter, m.radius, m.max_valence) == (4, 2, 6)


def test_stars_of_boundary(two_triangle, hex_patch):
    assert star(two_triangle, boundary_subcomplex(two_triangle)).faces == frozenset({0, 1})
    k = boundary_subcomplex(hex_patch)
    assert star_i(hex_patch, k, 0) == k
    assert len(star_i(hex_patch, k, 1).faces) == 18
    assert len(star_i(hex_patch, k, 2).faces) == 24
    assert star_i(hex_patch, k, 5) == star_i(hex_patch, k, 2)


def _star_vertices_match_boundary_distance(diagram):
    near = distance_to_boundary(diagram)
    k = boundary_subcomplex(diagram)
    for i in range(max(near.values(), default=0) + 2):
        assert star_i(diagram, k, i).vertices == {v for v, d in near.items() if d <= i}


def test_star_vertices_are_boundary_balls(hex_patch, two_triangle, single_triangle, path_aA):
    for diagram in (hex_patch, two_triangle, single_triangle, path_aA):
        _star_vertices_match_boundary_distance(diagram)


def test_star_vertices_are_boundary_balls_on_enumerated_diagrams(z2_tri, word):
    diagrams = enumerate_diagrams(z2_tri, word('abAB'), 4) + enumerate_diagrams(z2_tri, word('aabAAB'), 4)
    assert diagrams
    for diagram in diagrams:
        _star_vertices_match_boundary_distance(diagram)


def test_boundary_curves(hex_patch, two_triangle):
    assert boundary_curves(hex_patch, 0) == []
    curves = boundary_curves(hex_patch, 1)
    assert [c.length for c in curves] == [6]
    assert boundary_curves(hex_patch, 2) == []
    assert boundary_curves(two_triangle, 1) == []


def test_area_growth_of_stars(hex_patch):
    assert area_growth_steps(hex_patch) == [(0, 0, 18, 0), (1, 18, 24, 6), (2, 24, 24, 0)]
    for _, before, after, curve in area_growth_steps(hex_patch):
        assert 3 * (after - before) >= curve


def test_radius_diameter_relation(hex_patch, two_triangle, single_triangle):
    for diagram in (hex_patch, two_triangle, single_triangle):
        m = metrics(diagram)
        assert m.diameter <= m.radius + -(-m.boundary_length // 2)


def test_document_round_trip(two_triangle, z2_tri):
    again = validate(to_document(two_triangle, 'z2_triangular.pres'), z2_tri)
    assert canonical_form(again) == canonical_form(two_triangle)


def test_canonical_form_ignores_ids(two_triangle_raw, two_triangle, z2_tri):
    shifted = copy.deepcopy(two_triangle_raw)
    for d in shifted['darts']:
        d['id'] += 100
        d['twin'] += 100
        d['origin'] += 10
    shifted['vertices'] = [v + 10 for v in shifted['vertices']]
    shifted['rotation'] = {str(int(v) + 10): [d + 100 for d in r] for v, r in shifted['rotation'].items()}
    shifted['faces'] = [[d + 100 for d in c] for c in shifted['faces']]
    shifted['boundary'] = [d + 100 for d in shifted['boundary']]
    shifted['base'] += 10
    diagram = validate(shifted, z2_tri)
    assert canonical_form(diagram) == canonical_form(two_triangle)
    assert canonical_relabel(canonical_relabel(diagram)).twin == canonical_relabel(diagram).twin


def test_base_rotates_boundary(two_triangle_raw, z2_tri):
    raw = copy.deepcopy(two_triangle_raw)
    raw['base'] = 2
    diagram = validate(raw, z2_tri)
    assert diagram.boundary_text() == 'ABab'


def test_load_resolves_presentation(samples_dir):
    diagram = load_diagram(samples_dir / 'two_triangle.json')
    assert diagram.presentation.names == ('a', 'b', 't1')


def test_unreadable_diagram_file(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{not json')
    with pytest.raises(DiagramValidationError) as info:
        load_diagram(path)
    assert info.value.code == 'malformed'


def _broken(raw, how):
    raw = copy.deepcopy(raw)
    if how == 'twin':
        _dart(raw, 0)['twin'] = 2
    elif how == 'label_pair':
        _dart(raw, 1)['label'] = 'B'
    elif how == 'face_label':
        _dart(raw, 8)['label'] = 'a'
        _dart(raw, 9)['label'] = 'A'
    elif how == 'base':
        raw['base'] = 99
    elif how == 'disconnected':
        raw['vertices'].append(4)
    elif how == 'euler':
        raw['faces'].append(raw['boundary'])
        raw['boundary'] = []
    elif how == 'rotation_order':
        raw['rotation']['0'] = [0, 6, 8]
    elif how == 'unknown_label':
        _dart(raw, 0)['label'] = 'c'
    elif how == 'wrong_origin':
        raw['rotation']['0'] = [0, 8]
        raw['rotation']['1'] = [2, 1, 6]
    elif how == 'partition':
        raw['faces'] = raw['faces'][:1]
    return raw


@pytest.mark.parametrize('how, code', [
    ('twin', 'twin_not_involution'),
    ('label_pair', 'twin_not_involution'),
    ('face_label', 'face_label'),
    ('base', 'base_off_boundary'),
    ('disconnected', 'disconnected'),
    ('euler', 'euler_characteristic'),
    ('rotation_order', 'malformed'),
    ('unknown_label', 'malformed'),
    ('wrong_origin', 'malformed'),
    ('partition', 'malformed'),
])
def test_validation_errors(two_triangle_raw, z2_tri, how, code):
    with pytest.raises(DiagramValidationError) as info:
        validate(_broken(two_triangle_raw, how), z2_tri)
    assert info.value.code == code


def test_base_must_lie_on_boundary(hex_patch, z2_tri):
    document = to_document(hex_patch, 'z2_triangular.pres')
    interior = next(v for v, d in distance_to_boundary(hex_patch).items() if d > 0)
    document.base = interior
    with pytest.raises(DiagramValidationError) as info:
        validate(document, z2_tri)
    assert info.value.code == 'base_off_boundary'
