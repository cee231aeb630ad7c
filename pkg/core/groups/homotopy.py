"""
Elementary homotopies of van Kampen diagrams

A diagram is null-homotoped to its base point by two kinds of move:

* a 1-cell collapse removes a dangling edge together with its free vertex;
* a 2-cell collapse removes a face together with one of its edges that lies
  on the current boundary, replacing that edge in the boundary word by the
  rest of the face.

The filling length of a diagram is the least possible peak boundary length
over complete move sequences. ``fl_exact`` finds it by search;
``fl_schedule_prop2`` builds a move sequence in polynomial time whose peak
obeys the logarithmic bound in area and diameter.
"""
import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from core.groups.diagram import OUTER, GeodesicTree, VanKampenDiagram, geodesic_spanning_tree, metrics
from core.groups.presentation import Word, render_word
from core.groups.tree_shelling import RootedTree, greedy_shell, single
from core.models.reports import TraceDocument, TraceMove
from core.utils.error_handler import (
    FillingError,
    IllegalMoveError,
    NonTriangularPresentationError,
    OracleBudgetExceeded,
)
from core.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class OneCellCollapse:
    edge: int
    vertex: int


@dataclass(frozen=True)
class TwoCellCollapse:
    face: int
    edge: int


Move = Union[OneCellCollapse, TwoCellCollapse]


@dataclass(frozen=True)
class HomotopyState:
    """
    Diagram part still to be collapsed

    ``faces`` holds the face indices not yet removed and ``boundary`` the
    current outer dart cycle, always starting at the base point.
    """
    diagram: VanKampenDiagram = field(repr=False, compare=False)
    faces: FrozenSet[int]
    boundary: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.boundary)

    @property
    def is_terminal(self) -> bool:
        return not self.boundary

    @property
    def word(self) -> Word:
        return tuple(self.diagram.labels[d] for d in self.boundary)

    def _darts(self) -> List[int]:
        darts = list(self.boundary)
        for f in self.faces:
            darts.extend(self.diagram.faces[f])
        return darts

    @property
    def vertex_count(self) -> int:
        return len({self.diagram.base} | {self.diagram.origin[d] for d in self._darts()})

    @property
    def edge_count(self) -> int:
        return len({self.diagram.edge_id(d) for d in self._darts()})

    @property
    def key(self) -> Tuple[FrozenSet[int], Tuple[int, ...]]:
        return self.faces, self.boundary


def initial_state(diagram: VanKampenDiagram) -> HomotopyState:
    return HomotopyState(diagram, frozenset(range(diagram.area)), diagram.boundary)


def _spur_positions(state: HomotopyState) -> List[int]:
    d = state.diagram
    b = state.boundary
    return [
        k for k in range(len(b) - 1)
        if b[k + 1] == d.twin[b[k]] and d.head(b[k]) != d.base
    ]


def _face_positions(state: HomotopyState) -> List[Tuple[int, int]]:
    d = state.diagram
    found = []
    for k, dart in enumerate(state.boundary):
        f = d.face_of_dart[d.twin[dart]]
        if f != OUTER and f in state.faces:
            found.append((k, f))
    return found


def _collapse_spur(state: HomotopyState, position: int) -> HomotopyState:
    b = state.boundary
    return HomotopyState(state.diagram, state.faces, b[:position] + b[position + 2:])


def _collapse_face(state: HomotopyState, position: int) -> HomotopyState:
    d = state.diagram
    b = state.boundary
    entry = d.twin[b[position]]
    face = d.face_of_dart[entry]
    cycle = d.faces[face]
    j = cycle.index(entry)
    detour = cycle[j + 1:] + cycle[:j]
    return HomotopyState(d, state.faces - {face}, b[:position] + detour + b[position + 1:])


def legal_moves(state: HomotopyState) -> List[Move]:
    """Every applicable move, 1-cell collapses first, each group in boundary order"""
    d = state.diagram
    moves: List[Move] = [
        OneCellCollapse(d.edge_id(state.boundary[k]), d.head(state.boundary[k]))
        for k in _spur_positions(state)
    ]
    moves.extend(
        TwoCellCollapse(f, d.edge_id(state.boundary[k])) for k, f in _face_positions(state)
    )
    return moves


def apply_move(state: HomotopyState, move: Move) -> HomotopyState:
    """
    Apply one move

    Raises:
        IllegalMoveError: If the move's precondition fails in this state
    """
    d = state.diagram
    if isinstance(move, OneCellCollapse):
        if move.vertex == d.base:
            raise IllegalMoveError("A 1-cell collapse may not remove the base point", details={'move': repr(move)})
        for k in _spur_positions(state):
            dart = state.boundary[k]
            if d.edge_id(dart) == move.edge and d.head(dart) == move.vertex:
                return _collapse_spur(state, k)
        raise IllegalMoveError(
            f"Edge {move.edge} does not dangle from vertex {move.vertex}", details={'move': repr(move)}
        )
    if isinstance(move, TwoCellCollapse):
        if move.face not in state.faces:
            raise IllegalMoveError(f"Face {move.face} is not present", details={'move': repr(move)})
        for k, f in _face_positions(state):
            if f == move.face and d.edge_id(state.boundary[k]) == move.edge:
                return _collapse_face(state, k)
        raise IllegalMoveError(
            f"Edge {move.edge} is not shared by face {move.face} and the boundary", details={'move': repr(move)}
        )
    raise IllegalMoveError(f"Unknown move {move!r}")


@dataclass(frozen=True)
class MoveRecord:
    """One move; step-4 moves carry the length of their job loop closed at the endpoints' common ancestor"""
    move: Move
    step: Optional[int] = None
    tag: Optional[str] = None
    job: Optional[int] = None
    job_loop: Optional[int] = None


@dataclass(frozen=True)
class HomotopyTrace:
    """Moves with the boundary length before the first and after every move"""
    records: Tuple[MoveRecord, ...]
    profile: Tuple[int, ...]
    deviations: Tuple[str, ...] = ()

    @property
    def moves(self) -> List[Move]:
        return [r.move for r in self.records]

    @property
    def realized_fl(self) -> int:
        return max(self.profile)


def replay(diagram: VanKampenDiagram, trace: HomotopyTrace) -> HomotopyState:
    """
    Re-apply a trace from the full diagram

    Raises:
        IllegalMoveError: If a move is illegal, the recorded profile is
            wrong or the trace does not end at the base point
    """
    state = initial_state(diagram)
    lengths = [state.length]
    for record in trace.records:
        state = apply_move(state, record.move)
        lengths.append(state.length)
    if tuple(lengths) != tuple(trace.profile):
        raise IllegalMoveError("Recorded profile does not match the replayed boundary lengths",
                               details={'recorded': list(trace.profile), 'replayed': lengths})
    if not state.is_terminal:
        raise IllegalMoveError("Trace stops before reaching the base point",
                               details={'remaining_length': state.length})
    return state


def fl_exact(diagram: VanKampenDiagram, node_budget: int, below: Optional[int] = None) -> Optional[int]:
    """
    Exact filling length of one diagram

    Bottleneck shortest-path search over (remaining faces, boundary)
    states. A dangling edge is always collapsed before anything else: its
    removal commutes with every other move and only shortens the boundary.

    Args:
        diagram: Diagram to null-homotope
        node_budget: Maximum number of states to expand
        below: If given, only values strictly below it are searched for

    Returns:
        The filling length, or None when ``below`` is given and nothing
        beats it

    Raises:
        OracleBudgetExceeded: If the search expands more than node_budget states
    """
    start = initial_state(diagram)
    if below is not None and start.length >= below:
        return None
    counter = itertools.count()
    heap = [(start.length, next(counter), start)]
    best: Dict = {start.key: start.length}
    expanded = 0
    while heap:
        peak, _, state = heapq.heappop(heap)
        if best.get(state.key, math.inf) < peak:
            continue
        if state.is_terminal:
            logger.debug(f"fl_exact: {peak} after {expanded} expansions")
            return peak
        expanded += 1
        if expanded > node_budget:
            raise OracleBudgetExceeded(
                f"Exact filling-length search exceeded its budget of {node_budget} states",
                expanded=expanded,
                details={'area': diagram.area, 'boundary_length': len(diagram.boundary)}
            )
        spurs = _spur_positions(state)
        if spurs:
            successors = [_collapse_spur(state, spurs[0])]
        else:
            successors = [_collapse_face(state, k) for k, _ in _face_positions(state)]
        for nxt in successors:
            value = max(peak, nxt.length)
            if below is not None and value >= below:
                continue
            if value < best.get(nxt.key, math.inf):
                best[nxt.key] = value
                heapq.heappush(heap, (value, next(counter), nxt))
    if below is not None:
        return None
    raise FillingError("Diagram cannot be null-homotoped; its boundary structure is inconsistent", stage="fl_exact")


# --------------------------------------------------------------------------
# Logarithmic scheduler
# --------------------------------------------------------------------------

@dataclass
class _Job:
    """Faces reached from one non-tree boundary edge across non-tree edges"""
    index: int
    root: int
    children: Dict[int, List[int]]
    parent_edge: Dict[int, int]
    rank: Dict[int, int] = field(default_factory=dict)

    @property
    def faces(self) -> FrozenSet[int]:
        return frozenset(self.parent_edge)


def _build_jobs(diagram: VanKampenDiagram, tree: GeodesicTree) -> List[_Job]:
    jobs: List[_Job] = []
    face_of = diagram.face_of_dart
    for dart in diagram.boundary:
        if tree.is_tree_edge(dart):
            continue
        root = face_of[diagram.twin[dart]]
        if root == OUTER:
            continue
        parent_edge = {root: diagram.edge_id(dart)}
        children: Dict[int, List[int]] = {}
        queue = deque([(root, diagram.twin[dart])])
        while queue:
            face, entry = queue.popleft()
            cycle = diagram.faces[face]
            j = cycle.index(entry)
            kids = []
            for x in cycle[j + 1:] + cycle[:j]:
                if tree.is_tree_edge(x):
                    continue
                g = face_of[diagram.twin[x]]
                if g == OUTER or g in parent_edge:
                    continue
                parent_edge[g] = diagram.edge_id(x)
                kids.append(g)
                queue.append((g, diagram.twin[x]))
            children[face] = kids
        job = _Job(len(jobs), root, children, parent_edge)
        job.rank = _shelling_rank(job)
        jobs.append(job)
    covered = sum(len(job.parent_edge) for job in jobs)
    if covered != diagram.area:
        raise FillingError(
            f"Job decomposition covers {covered} of {diagram.area} faces",
            stage="schedule", details={'covered': covered, 'area': diagram.area}
        )
    return jobs


def _shelling_rank(job: _Job) -> Dict[int, int]:
    """
    Order in which the greedy shelling removes the branching faces of a job

    Chains of single-child faces are contracted so the job tree becomes a
    full binary tree.
    """
    def representative(face: int) -> int:
        while len(job.children[face]) == 1:
            face = job.children[face][0]
        return face

    root = representative(job.root)
    order = [root]
    arena: List[Optional[Tuple[int, int]]] = [None]
    stack = [0]
    while stack:
        node = stack.pop()
        kids = job.children[order[node]]
        if len(kids) != 2:
            continue
        ids = []
        for kid in kids:
            order.append(representative(kid))
            arena.append(None)
            ids.append(len(order) - 1)
        arena[node] = (ids[0], ids[1])
        stack.extend(ids)
    schedule = greedy_shell(single(RootedTree(tuple(arena))))
    return {order[node]: step for step, (_, node) in enumerate(schedule.steps)}


def _classify(state: HomotopyState, job: _Job, position: int, face: int) -> Tuple[int, str]:
    d = state.diagram
    entry = d.twin[state.boundary[position]]
    on_loop = set(state.boundary)
    n_children = len(job.children[face])
    if any(d.twin[x] in on_loop for x in d.faces[face] if x != entry):
        return 2, 'i' if n_children == 0 else 'ii'
    if n_children <= 1:
        return 3, 'iv' if n_children == 0 else 'iii'
    return 4, 'v' if face == job.root else 'vi'


def fl_schedule_prop2(diagram: VanKampenDiagram) -> HomotopyTrace:
    """
    Null-homotope a diagram over a triangular presentation

    A breadth-first geodesic tree from the base point splits the faces into
    jobs, one per boundary edge outside the tree. Jobs run in boundary
    order. At every instant the first available step is taken:

    1. collapse the leftmost dangling edge;
    2. collapse a visible face with another edge already on the loop
       (tags i/ii);
    3. collapse a visible face with at most one child (tags iii/iv);
    4. collapse a branching face in greedy shelling order (tags v/vi).

    A face is visible when the edge joining it to its parent in the job
    tree lies on the loop.

    Each step-4 move records ``job_loop``: the boundary arc spanning the
    visible faces of its job, closed through the geodesic tree by the
    path between the arc's endpoints (via their lowest common ancestor).
    This is never longer than the loop closed through the base point.

    Raises:
        NonTriangularPresentationError: If some relator is longer than 3
    """
    presentation = diagram.presentation
    if presentation.max_relator_length > 3:
        raise NonTriangularPresentationError(presentation.max_relator_length)

    tree = geodesic_spanning_tree(diagram)
    jobs = _build_jobs(diagram, tree)
    logger.debug(f"Scheduler: {len(jobs)} jobs over {diagram.area} faces")

    state = initial_state(diagram)
    records: List[MoveRecord] = []
    profile = [state.length]
    swept = set()
    current = 0
    while not state.is_terminal:
        while current < len(jobs) and jobs[current].faces <= swept:
            current += 1
        job_index = current if current < len(jobs) else None

        spurs = _spur_positions(state)
        if spurs:
            dart = state.boundary[spurs[0]]
            move = OneCellCollapse(diagram.edge_id(dart), diagram.head(dart))
            state = _collapse_spur(state, spurs[0])
            records.append(MoveRecord(move, 1, '1-cell', job_index))
            profile.append(state.length)
            continue

        if job_index is None:
            raise FillingError("No move available before the base point was reached", stage="schedule")
        job = jobs[job_index]
        visible = [
            (k, f) for k, f in _face_positions(state)
            if f in job.parent_edge and f not in swept
            and job.parent_edge[f] == diagram.edge_id(state.boundary[k])
        ]
        if not visible:
            raise FillingError(f"Job {job_index} has no visible face", stage="schedule")

        best = None
        for k, f in visible:
            step, tag = _classify(state, job, k, f)
            key = (step, job.rank.get(f, 0) if step == 4 else 0, k)
            if best is None or key < best[0]:
                best = (key, k, f, step, tag)
        _, k, f, step, tag = best

        job_loop = None
        if step == 4:
            first, last = visible[0][0], visible[-1][0]
            job_loop = (last - first + 1) + tree.distance(
                diagram.head(state.boundary[last]), diagram.origin[state.boundary[first]]
            )
        move = TwoCellCollapse(f, diagram.edge_id(state.boundary[k]))
        state = _collapse_face(state, k)
        swept.add(f)
        records.append(MoveRecord(move, step, tag, job_index, job_loop))
        profile.append(state.length)

    trace = HomotopyTrace(tuple(records), tuple(profile))
    deviations = _profile_deviations(diagram, trace)
    if deviations:
        logger.warning(f"Scheduler profile deviates from the in-proof bounds: {deviations}")
        trace = HomotopyTrace(trace.records, trace.profile, tuple(deviations))
    return trace


def step4_growth(trace: HomotopyTrace) -> List[Tuple[int, int, int]]:
    """
    Boundary growth between consecutive step-4 moves of the same job

    Returns:
        (move index, next step-4 move index, peak length in between minus
        the length at the first one)
    """
    growth = []
    last: Dict[int, int] = {}
    for m, record in enumerate(trace.records):
        if record.step != 4:
            continue
        if record.job in last:
            i = last[record.job]
            growth.append((i, m, max(trace.profile[i + 1:m + 1]) - trace.profile[i]))
        last[record.job] = m
    return growth


def _profile_deviations(diagram: VanKampenDiagram, trace: HomotopyTrace) -> List[str]:
    m = metrics(diagram)
    loop_bound = step4_loop_bound(m.area, m.diameter)
    growth_bound = step4_growth_bound(m.diameter)
    deviations = []
    for index, record in enumerate(trace.records):
        if record.job_loop is not None and record.job_loop > loop_bound:
            deviations.append(f"move {index}: step-4 loop {record.job_loop} exceeds {loop_bound:.3f}")
    for i, j, grown in step4_growth(trace):
        if grown > growth_bound:
            deviations.append(f"moves {i}..{j}: growth {grown} exceeds {growth_bound}")
    return deviations


def prop2_bound(area: int, diam: int, n: int) -> float:
    return (2 * diam + 1) * (math.log2(area + 1) + 1) + 4 * diam + 1 + n


def step4_loop_bound(area: int, diam: int) -> float:
    return (2 * diam + 1) * (math.log2(area + 1) + 1)


def step4_growth_bound(diam: int) -> int:
    return 1 + 4 * diam


def _valence_base(valence: int) -> int:
    return max(3, valence)


def valence_area_bound(diam: int, valence: int) -> int:
    """
    N^(D+1) - 1 with N = max(3, valence)

    Valences below 3 (paths, single faces) count as 3.
    """
    return _valence_base(valence) ** (diam + 1) - 1


def valence_fl_bound(diam: int, n: int, valence: int) -> float:
    """(2D+1)(D+1) log2 N + 4D + 1 + n with N = max(3, valence), as in valence_area_bound"""
    return (2 * diam + 1) * (diam + 1) * math.log2(_valence_base(valence)) + 4 * diam + 1 + n


def _move_fields(move: Move) -> Dict:
    if isinstance(move, OneCellCollapse):
        return {'kind': 'one_cell', 'edge': move.edge, 'vertex': move.vertex}
    return {'kind': 'two_cell', 'edge': move.edge, 'face': move.face}


def trace_document(diagram: VanKampenDiagram, trace: HomotopyTrace) -> TraceDocument:
    return TraceDocument(
        boundary_word=render_word(diagram.boundary_word, diagram.presentation),
        moves=[
            TraceMove(step=r.step, tag=r.tag, job=r.job, job_loop=r.job_loop, **_move_fields(r.move))
            for r in trace.records
        ],
        profile=list(trace.profile),
        realized_fl=trace.realized_fl,
        deviations=list(trace.deviations),
    )


def trace_from_document(document: TraceDocument) -> HomotopyTrace:
    records = []
    for m in document.moves:
        if m.kind == 'one_cell':
            move: Move = OneCellCollapse(m.edge, m.vertex)
        else:
            move = TwoCellCollapse(m.face, m.edge)
        records.append(MoveRecord(move, m.step, m.tag, m.job, m.job_loop))
    return HomotopyTrace(tuple(records), tuple(document.profile), tuple(document.deviations))
