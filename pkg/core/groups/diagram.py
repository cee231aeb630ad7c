"""
Van Kampen diagrams as planar combinatorial maps

A diagram is a set of darts (half-edges). Each dart has an origin vertex,
a twin (the same edge traversed backwards, carrying the inverse label) and
a place in the cyclic rotation of darts leaving its origin. Faces are the
orbits of ``phi(d) = sigma(twin(d))`` where ``sigma`` is the rotation
successor. One orbit is the outer face: the boundary, read from the base
dart, spells the boundary word. The remaining orbits are the inner faces
and each must spell a cyclic permutation of a relator or its inverse.

Diagrams need not be discs: spurs and cut vertices are allowed.
"""
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

import networkx as nx
from pydantic import ValidationError as PydanticValidationError

from core.groups.presentation import (
    Letter,
    Presentation,
    Word,
    cyclic_conjugates,
    load_presentation,
    parse_word,
    render_letter,
    render_word,
)
from core.models.reports import DartRecord, DiagramDocument
from core.utils.error_handler import DiagramValidationError, PresentationParseError
from core.utils.logging_config import get_logger

logger = get_logger(__name__)

OUTER = -1


@dataclass(frozen=True, eq=False)
class VanKampenDiagram:
    """
    Immutable van Kampen diagram

    Vertices are ``0..num_vertices-1`` and darts ``0..len(origin)-1``.
    ``faces`` lists inner faces as dart cycles; ``boundary`` is the outer
    face cycle starting at the base dart.
    """
    presentation: Presentation
    num_vertices: int
    origin: Tuple[int, ...]
    twin: Tuple[int, ...]
    labels: Tuple[Letter, ...]
    rotation: Tuple[Tuple[int, ...], ...]
    faces: Tuple[Tuple[int, ...], ...]
    base: int
    boundary: Tuple[int, ...]

    @property
    def num_darts(self) -> int:
        return len(self.origin)

    @property
    def num_edges(self) -> int:
        return len(self.origin) // 2

    @property
    def area(self) -> int:
        return len(self.faces)

    def head(self, dart: int) -> int:
        return self.origin[self.twin[dart]]

    def edge_id(self, dart: int) -> int:
        return min(dart, self.twin[dart])

    @cached_property
    def sigma(self) -> Tuple[int, ...]:
        succ = [0] * self.num_darts
        for darts in self.rotation:
            for i, dart in enumerate(darts):
                succ[dart] = darts[(i + 1) % len(darts)]
        return tuple(succ)

    def phi(self, dart: int) -> int:
        return self.sigma[self.twin[dart]]

    @cached_property
    def face_of_dart(self) -> Tuple[int, ...]:
        owner = [OUTER] * self.num_darts
        for index, cycle in enumerate(self.faces):
            for dart in cycle:
                owner[dart] = index
        return tuple(owner)

    @cached_property
    def edges(self) -> Tuple[int, ...]:
        return tuple(d for d in range(self.num_darts) if d < self.twin[d])

    @cached_property
    def face_vertices(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(self.origin[d] for d in cycle) for cycle in self.faces)

    @cached_property
    def face_edges(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(self.edge_id(d) for d in cycle) for cycle in self.faces)

    @cached_property
    def boundary_word(self) -> Word:
        return tuple(self.labels[d] for d in self.boundary)

    def face_word(self, face: int) -> Word:
        return tuple(self.labels[d] for d in self.faces[face])

    @cached_property
    def graph(self) -> nx.MultiGraph:
        """1-skeleton; edge keys are edge ids"""
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.num_vertices))
        for e in self.edges:
            g.add_edge(self.origin[e], self.head(e), key=e)
        return g

    @cached_property
    def boundary_vertices(self) -> FrozenSet[int]:
        return frozenset([self.base] + [self.origin[d] for d in self.boundary])

    def boundary_text(self) -> str:
        return render_word(self.boundary_word, self.presentation)


class Metrics(NamedTuple):
    area: int
    diameter: int
    radius: int
    max_valence: int
    boundary_length: int


def vertex_distances(diagram: VanKampenDiagram) -> Dict[int, int]:
    """1-skeleton distance of every vertex to the base point"""
    return nx.single_source_shortest_path_length(diagram.graph, diagram.base)


def distance_to_boundary(diagram: VanKampenDiagram) -> Dict[int, int]:
    """1-skeleton distance of every vertex to the boundary vertex set"""
    lengths = nx.multi_source_dijkstra_path_length(diagram.graph, set(diagram.boundary_vertices))
    return {v: int(d) for v, d in lengths.items()}


def metrics(diagram: VanKampenDiagram) -> Metrics:
    """Area, diameter (base-point eccentricity), radius, max valence, |w|"""
    to_base = vertex_distances(diagram)
    to_boundary = distance_to_boundary(diagram)
    return Metrics(
        area=diagram.area,
        diameter=max(to_base.values(), default=0),
        radius=max(to_boundary.values(), default=0),
        max_valence=max((len(r) for r in diagram.rotation), default=0),
        boundary_length=len(diagram.boundary),
    )


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

def _orbit(start: int, step) -> List[int]:
    cycle = [start]
    current = step(start)
    while current != start:
        cycle.append(current)
        current = step(current)
    return cycle


def _relator_words(presentation: Presentation) -> Set[Word]:
    words: Set[Word] = set()
    for relator in presentation.relators:
        words.update(cyclic_conjugates(relator))
    return words


def validate(document: Union[DiagramDocument, dict], presentation: Presentation) -> VanKampenDiagram:
    """
    Check a diagram document against every diagram invariant

    Args:
        document: Diagram document (or its dict form)
        presentation: Presentation the face labels must come from

    Returns:
        The validated, immutable diagram (ids renumbered contiguously in
        ascending order)

    Raises:
        DiagramValidationError: With ``code`` naming the violated invariant
    """
    if not isinstance(document, DiagramDocument):
        try:
            document = DiagramDocument.model_validate(document)
        except PydanticValidationError as e:
            raise DiagramValidationError('malformed', f"Document does not match the schema: {e}")

    vertex_ids = sorted(set(document.vertices))
    if len(vertex_ids) != len(document.vertices) or not vertex_ids:
        raise DiagramValidationError('malformed', "Vertex ids must be unique and nonempty")
    vertex_index = {v: i for i, v in enumerate(vertex_ids)}

    dart_ids = sorted(record.id for record in document.darts)
    if len(set(dart_ids)) != len(dart_ids):
        raise DiagramValidationError('malformed', "Dart ids must be unique")
    dart_index = {d: i for i, d in enumerate(dart_ids)}
    records = sorted(document.darts, key=lambda r: r.id)

    origin: List[int] = []
    twin: List[int] = []
    labels: List[Letter] = []
    for record in records:
        if record.origin not in vertex_index:
            raise DiagramValidationError('malformed', f"Dart {record.id} starts at unknown vertex {record.origin}")
        if record.twin not in dart_index:
            raise DiagramValidationError('twin_not_involution', f"Dart {record.id} has unknown twin {record.twin}")
        try:
            word = parse_word(record.label, presentation)
        except PresentationParseError as e:
            raise DiagramValidationError('malformed', f"Dart {record.id} label: {e}")
        if len(word) != 1:
            raise DiagramValidationError('malformed', f"Dart {record.id} label must be one letter, got {record.label!r}")
        origin.append(vertex_index[record.origin])
        twin.append(dart_index[record.twin])
        labels.append(word[0])

    for d, t in enumerate(twin):
        if t == d or twin[t] != d:
            raise DiagramValidationError(
                'twin_not_involution', f"twin is not a fixed-point-free involution at dart {dart_ids[d]}"
            )
        if labels[t] != labels[d].inverse():
            raise DiagramValidationError(
                'twin_not_involution', f"Twin darts {dart_ids[d]} and {dart_ids[t]} do not carry inverse labels"
            )

    def remap_darts(darts: Sequence[int], what: str) -> List[int]:
        try:
            return [dart_index[d] for d in darts]
        except KeyError as e:
            raise DiagramValidationError('malformed', f"{what} mentions unknown dart {e.args[0]}")

    rotation: List[List[int]] = [[] for _ in vertex_ids]
    if set(document.rotation) - set(vertex_index):
        raise DiagramValidationError('malformed', "Rotation given for an unknown vertex")
    for v, darts in document.rotation.items():
        rotation[vertex_index[v]] = remap_darts(darts, f"Rotation of vertex {v}")
    placed = [d for darts in rotation for d in darts]
    if sorted(placed) != list(range(len(records))):
        raise DiagramValidationError('malformed', "Every dart must appear exactly once in the rotation lists")
    for v, darts in enumerate(rotation):
        for d in darts:
            if origin[d] != v:
                raise DiagramValidationError(
                    'malformed', f"Dart {dart_ids[d]} listed in the rotation of vertex {vertex_ids[v]} it does not leave"
                )

    sigma = [0] * len(records)
    for darts in rotation:
        for i, d in enumerate(darts):
            sigma[d] = darts[(i + 1) % len(darts)]

    def phi(d: int) -> int:
        return sigma[twin[d]]

    faces = [remap_darts(cycle, "Face") for cycle in document.faces]
    boundary = remap_darts(document.boundary, "Boundary")
    for cycle in faces:
        if not cycle:
            raise DiagramValidationError('malformed', "Empty face cycle")
    covered = [d for cycle in faces for d in cycle] + boundary
    if sorted(covered) != list(range(len(records))):
        raise DiagramValidationError('malformed', "Face and boundary cycles must partition the darts")
    for cycle in faces + ([boundary] if boundary else []):
        for i, d in enumerate(cycle):
            if phi(d) != cycle[(i + 1) % len(cycle)]:
                raise DiagramValidationError(
                    'malformed', f"Cycle {[dart_ids[x] for x in cycle]} is not a face orbit of the rotation system"
                )

    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(vertex_ids)))
    graph.add_edges_from((origin[d], origin[twin[d]]) for d in range(len(records)) if d < twin[d])
    if not nx.is_connected(graph):
        raise DiagramValidationError('disconnected', "The 1-skeleton is not connected")

    v_count, e_count, f_count = len(vertex_ids), len(records) // 2, len(faces) + 1
    if v_count - e_count + f_count != 2:
        raise DiagramValidationError(
            'euler_characteristic',
            f"V - E + F = {v_count} - {e_count} + {f_count} = {v_count - e_count + f_count}, expected 2"
        )

    if document.base not in vertex_index:
        raise DiagramValidationError('base_off_boundary', f"Base point {document.base} is not a vertex")
    base = vertex_index[document.base]
    if boundary:
        starts = [i for i, d in enumerate(boundary) if origin[d] == base]
        if not starts:
            raise DiagramValidationError('base_off_boundary', f"Base point {document.base} is not on the boundary cycle")
        boundary = boundary[starts[0]:] + boundary[:starts[0]]

    allowed = _relator_words(presentation)
    for cycle in faces:
        word = tuple(labels[d] for d in cycle)
        if word not in allowed:
            raise DiagramValidationError(
                'face_label',
                f"Face labeled {render_word(word, presentation)!r} is not a cyclic permutation of a relator or its inverse"
            )

    return VanKampenDiagram(
        presentation=presentation,
        num_vertices=len(vertex_ids),
        origin=tuple(origin),
        twin=tuple(twin),
        labels=tuple(labels),
        rotation=tuple(tuple(r) for r in rotation),
        faces=tuple(_normalize_cycle(c) for c in faces),
        base=base,
        boundary=tuple(boundary),
    )


def _normalize_cycle(cycle: Sequence[int]) -> Tuple[int, ...]:
    start = cycle.index(min(cycle))
    return tuple(cycle[start:]) + tuple(cycle[:start])


def to_document(diagram: VanKampenDiagram, presentation_path: str) -> DiagramDocument:
    return DiagramDocument(
        presentation=presentation_path,
        vertices=list(range(diagram.num_vertices)),
        darts=[
            DartRecord(
                id=d,
                origin=diagram.origin[d],
                twin=diagram.twin[d],
                label=render_letter(diagram.labels[d], diagram.presentation),
            )
            for d in range(diagram.num_darts)
        ],
        rotation={v: list(r) for v, r in enumerate(diagram.rotation)},
        faces=[list(c) for c in diagram.faces],
        base=diagram.base,
        boundary=list(diagram.boundary),
    )


def load_diagram(path: Union[str, Path], presentation: Optional[Presentation] = None) -> VanKampenDiagram:
    """
    Read and validate a diagram file

    The document's ``presentation`` entry is resolved relative to the
    diagram file unless a presentation is passed in.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise DiagramValidationError('malformed', f"Cannot read diagram file {path}: {e}")
    try:
        document = DiagramDocument.model_validate(raw)
    except PydanticValidationError as e:
        raise DiagramValidationError('malformed', f"Diagram file {path} does not match the schema: {e}")
    if presentation is None:
        presentation = load_presentation(path.parent / document.presentation)
    diagram = validate(document, presentation)
    logger.debug(f"Loaded diagram {path}: area {diagram.area}, boundary {diagram.boundary_text()!r}")
    return diagram


def trivial_diagram(presentation: Presentation) -> VanKampenDiagram:
    return VanKampenDiagram(presentation, 1, (), (), (), ((),), (), 0, ())


# --------------------------------------------------------------------------
# Geodesic spanning tree
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GeodesicTree:
    """
    Breadth-first spanning tree rooted at the base point

    ``parent_dart[v]`` is the tree dart from the parent of ``v`` into ``v``
    (None at the base).
    """
    diagram: VanKampenDiagram = field(repr=False)
    parent_dart: Tuple[Optional[int], ...]
    depth: Tuple[int, ...]

    @cached_property
    def tree_edges(self) -> FrozenSet[int]:
        return frozenset(self.diagram.edge_id(d) for d in self.parent_dart if d is not None)

    def is_tree_edge(self, dart: int) -> bool:
        return self.diagram.edge_id(dart) in self.tree_edges

    def parent(self, vertex: int) -> Optional[int]:
        dart = self.parent_dart[vertex]
        return None if dart is None else self.diagram.origin[dart]

    def distance(self, u: int, v: int) -> int:
        """Length of the tree path between two vertices"""
        steps = 0
        while u != v:
            if self.depth[u] >= self.depth[v]:
                u = self.parent(u)
            else:
                v = self.parent(v)
            steps += 1
        return steps


def geodesic_spanning_tree(diagram: VanKampenDiagram) -> GeodesicTree:
    """
    Breadth-first tree from the base point

    Darts leaving a vertex are explored in rotation order, starting at the
    base dart for the base point and just after the dart back to the
    parent elsewhere.
    """
    n = diagram.num_vertices
    parent_dart: List[Optional[int]] = [None] * n
    depth: List[Optional[int]] = [None] * n
    depth[diagram.base] = 0
    queue = deque([diagram.base])
    while queue:
        v = queue.popleft()
        darts = diagram.rotation[v]
        if not darts:
            continue
        if v == diagram.base:
            start = diagram.boundary[0] if diagram.boundary else darts[0]
        else:
            start = diagram.sigma[diagram.twin[parent_dart[v]]]
        offset = darts.index(start)
        for dart in darts[offset:] + darts[:offset]:
            w = diagram.head(dart)
            if depth[w] is None:
                depth[w] = depth[v] + 1
                parent_dart[w] = dart
                queue.append(w)
    return GeodesicTree(diagram, tuple(parent_dart), tuple(depth))


# --------------------------------------------------------------------------
# Subcomplexes, stars and the curves c_i
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Subcomplex:
    vertices: FrozenSet[int]
    edges: FrozenSet[int]
    faces: FrozenSet[int]

    def union(self, other: 'Subcomplex') -> 'Subcomplex':
        return Subcomplex(self.vertices | other.vertices, self.edges | other.edges, self.faces | other.faces)


def boundary_subcomplex(diagram: VanKampenDiagram) -> Subcomplex:
    return Subcomplex(
        vertices=diagram.boundary_vertices,
        edges=frozenset(diagram.edge_id(d) for d in diagram.boundary),
        faces=frozenset(),
    )


def closure(diagram: VanKampenDiagram, faces: Iterable[int]) -> Subcomplex:
    faces = frozenset(faces)
    vertices: Set[int] = set()
    edges: Set[int] = set()
    for f in faces:
        vertices |= diagram.face_vertices[f]
        edges |= diagram.face_edges[f]
    return Subcomplex(frozenset(vertices), frozenset(edges), faces)


def star(diagram: VanKampenDiagram, k: Subcomplex) -> Subcomplex:
    """k together with every closed face meeting it"""
    meeting = [f for f in range(diagram.area) if diagram.face_vertices[f] & k.vertices]
    return k.union(closure(diagram, meeting))


def star_i(diagram: VanKampenDiagram, k: Subcomplex, i: int) -> Subcomplex:
    if i < 0:
        raise ValueError("Star iterate must be non-negative")
    current = k
    for _ in range(i):
        grown = star(diagram, current)
        if grown == current:
            break
        current = grown
    return current


@dataclass(frozen=True)
class BoundaryCurve:
    darts: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.darts)


def boundary_curves(diagram: VanKampenDiagram, i: int) -> List[BoundaryCurve]:
    """
    The closed curves making up c_i, the frontier of star_i of the
    boundary inside the diagram

    Each curve is traced along the edge of the region of faces outside
    star_i, keeping that region on the face side of each dart.
    """
    if i <= 0:
        return []
    inside = star_i(diagram, boundary_subcomplex(diagram), i).faces
    face_of = diagram.face_of_dart
    outside = frozenset(range(diagram.area)) - inside

    def on_curve(d: int) -> bool:
        return face_of[d] in outside and face_of[diagram.twin[d]] not in outside

    curves: List[BoundaryCurve] = []
    seen: Set[int] = set()
    for start in range(diagram.num_darts):
        if start in seen or not on_curve(start):
            continue
        darts = []
        d = start
        while True:
            darts.append(d)
            seen.add(d)
            x = diagram.sigma[diagram.twin[d]]
            while face_of[diagram.twin[x]] in outside:
                x = diagram.sigma[x]
            d = x
            if d == start:
                break
        curves.append(BoundaryCurve(tuple(darts)))
    return curves


# --------------------------------------------------------------------------
# Construction and canonical form
# --------------------------------------------------------------------------

class MapBuilder:
    """
    Mutable map under construction

    Diagrams are assembled by gluing: a new edge is inserted into the
    rotation of a vertex immediately before a given dart.
    """

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self.origin: List[int] = []
        self.twin: List[int] = []
        self.labels: List[Letter] = []
        self.rotation: List[List[int]] = []
        self.faces: List[List[int]] = []

    def absorb(self, diagram: VanKampenDiagram) -> Tuple[int, int]:
        """Copy a diagram in; returns its (vertex offset, dart offset)"""
        v_off, d_off = len(self.rotation), len(self.origin)
        self.origin.extend(v + v_off for v in diagram.origin)
        self.twin.extend(t + d_off for t in diagram.twin)
        self.labels.extend(diagram.labels)
        self.rotation.extend([d + d_off for d in r] for r in diagram.rotation)
        self.faces.extend([d + d_off for d in c] for c in diagram.faces)
        return v_off, d_off

    def new_vertex(self) -> int:
        self.rotation.append([])
        return len(self.rotation) - 1

    def new_edge(self, tail: int, head: int, label: Letter) -> Tuple[int, int]:
        d = len(self.origin)
        self.origin.extend([tail, head])
        self.twin.extend([d + 1, d])
        self.labels.extend([label, label.inverse()])
        return d, d + 1

    def insert_before(self, dart: int, anchor: Optional[int]):
        """Place ``dart`` in its origin's rotation right before ``anchor``"""
        darts = self.rotation[self.origin[dart]]
        if anchor is None:
            darts.append(dart)
        else:
            darts.insert(darts.index(anchor), dart)

    def build(self, base: int, boundary: Sequence[int]) -> VanKampenDiagram:
        return VanKampenDiagram(
            presentation=self.presentation,
            num_vertices=len(self.rotation),
            origin=tuple(self.origin),
            twin=tuple(self.twin),
            labels=tuple(self.labels),
            rotation=tuple(tuple(r) for r in self.rotation),
            faces=tuple(_normalize_cycle(f) for f in self.faces),
            base=base,
            boundary=tuple(boundary),
        )


def canonical_relabel(diagram: VanKampenDiagram) -> VanKampenDiagram:
    """
    Renumber darts and vertices by breadth-first discovery from the base
    dart (twin first, then rotation successor). Two diagrams are
    isomorphic by a map fixing the base dart iff their relabelings are
    equal.
    """
    if not diagram.boundary:
        return trivial_diagram(diagram.presentation)
    order: List[int] = []
    new_id: Dict[int, int] = {}
    queue = deque([diagram.boundary[0]])
    new_id[diagram.boundary[0]] = 0
    while queue:
        d = queue.popleft()
        order.append(d)
        for nxt in (diagram.twin[d], diagram.sigma[d]):
            if nxt not in new_id:
                new_id[nxt] = len(new_id)
                queue.append(nxt)
    vertex_id: Dict[int, int] = {}
    for d in order:
        if diagram.origin[d] not in vertex_id:
            vertex_id[diagram.origin[d]] = len(vertex_id)
    origin = [0] * len(order)
    twin = [0] * len(order)
    labels: List[Letter] = [None] * len(order)
    for d in order:
        origin[new_id[d]] = vertex_id[diagram.origin[d]]
        twin[new_id[d]] = new_id[diagram.twin[d]]
        labels[new_id[d]] = diagram.labels[d]
    rotation: List[Tuple[int, ...]] = [()] * len(vertex_id)
    for v, darts in enumerate(diagram.rotation):
        mapped = [new_id[d] for d in darts]
        start = mapped.index(min(mapped))
        rotation[vertex_id[v]] = tuple(mapped[start:] + mapped[:start])
    faces = sorted(_normalize_cycle([new_id[d] for d in cycle]) for cycle in diagram.faces)
    return VanKampenDiagram(
        presentation=diagram.presentation,
        num_vertices=len(vertex_id),
        origin=tuple(origin),
        twin=tuple(twin),
        labels=tuple(labels),
        rotation=tuple(rotation),
        faces=tuple(faces),
        base=vertex_id[diagram.base],
        boundary=tuple(new_id[d] for d in diagram.boundary),
    )


def canonical_form(diagram: VanKampenDiagram) -> Tuple:
    """Hashable isomorphism invariant of a diagram with its base dart"""
    d = canonical_relabel(diagram)
    return (d.twin, d.sigma, d.labels)
