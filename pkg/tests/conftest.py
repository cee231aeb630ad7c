import math
from pathlib import Path

import pytest

from core.groups.diagram import load_diagram, validate
from core.groups.presentation import load_presentation, parse_word
from core.models.reports import DartRecord, DiagramDocument

SAMPLES = Path(__file__).resolve().parent.parent / 'data' / 'samples'

# lattice steps of the triangulated plane and their generator names
STEPS = {(1, 0): 'a', (0, 1): 'b', (1, 1): 't1'}


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run slow acceptance suites')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


def _signed_area(points):
    return sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(points, points[1:] + points[:1])) / 2


def lattice_patch(presentation, radius):
    """
    Hexagonal patch of the triangulated Z^2 plane around the origin, as a
    validated diagram based at (-radius, 0)
    """
    points = sorted(
        (x, y) for x in range(-radius, radius + 1) for y in range(-radius, radius + 1)
        if max(abs(x), abs(y), abs(x - y)) <= radius
    )
    index = {p: i for i, p in enumerate(points)}
    darts = []
    for p in points:
        for (dx, dy), name in STEPS.items():
            q = (p[0] + dx, p[1] + dy)
            if q in index:
                d = len(darts)
                darts.append(DartRecord(id=d, origin=index[p], twin=d + 1, label=name))
                darts.append(DartRecord(id=d + 1, origin=index[q], twin=d, label=name[0].upper() + name[1:]))
    head = {r.id: darts[r.twin].origin for r in darts}

    def angle(r):
        (x0, y0), (x1, y1) = points[r.origin], points[head[r.id]]
        return math.atan2(y1 - y0, x1 - x0)

    rotation = {i: [r.id for r in sorted((r for r in darts if r.origin == i), key=angle)] for i in range(len(points))}
    sigma = {}
    for ring in rotation.values():
        for k, d in enumerate(ring):
            sigma[d] = ring[(k + 1) % len(ring)]

    orbits, seen = [], set()
    for r in darts:
        if r.id in seen:
            continue
        orbit, d = [], r.id
        while d not in seen:
            seen.add(d)
            orbit.append(d)
            d = sigma[darts[d].twin]
        orbits.append(orbit)
    # rotations are counter-clockwise, so only the outer orbit runs counter-clockwise
    outer = [o for o in orbits if _signed_area([points[darts[d].origin] for d in o]) > 0]
    assert len(outer) == 1
    boundary = outer[0]
    base = index[(-radius, 0)]
    start = next(k for k, d in enumerate(boundary) if darts[d].origin == base)
    document = DiagramDocument(
        presentation='z2_triangular.pres',
        vertices=list(range(len(points))),
        darts=darts,
        rotation=rotation,
        faces=[o for o in orbits if o is not outer[0]],
        base=base,
        boundary=boundary[start:] + boundary[:start],
    )
    return validate(document, presentation)


@pytest.fixture
def samples_dir():
    return SAMPLES


@pytest.fixture
def z2():
    return load_presentation(SAMPLES / 'z2.pres')


@pytest.fixture
def z2_tri():
    return load_presentation(SAMPLES / 'z2_triangular.pres')


@pytest.fixture
def two_triangle():
    return load_diagram(SAMPLES / 'two_triangle.json')


@pytest.fixture
def single_triangle():
    return load_diagram(SAMPLES / 'single_triangle.json')


@pytest.fixture
def path_aA(z2_tri):
    document = DiagramDocument(
        presentation='z2_triangular.pres',
        vertices=[0, 1],
        darts=[DartRecord(id=0, origin=0, twin=1, label='a'), DartRecord(id=1, origin=1, twin=0, label='A')],
        rotation={0: [0], 1: [1]},
        faces=[],
        base=0,
        boundary=[0, 1],
    )
    return validate(document, z2_tri)


@pytest.fixture
def trivial(z2_tri):
    return validate(DiagramDocument(presentation='z2_triangular.pres', vertices=[0], base=0), z2_tri)


@pytest.fixture
def hex_patch(z2_tri):
    return lattice_patch(z2_tri, 2)


@pytest.fixture
def word(z2_tri):
    return lambda text: parse_word(text, z2_tri)
