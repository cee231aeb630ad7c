"""
Logarithmic shelling of rooted binary forests

An elementary shelling removes one root of a forest; its children (if any)
become roots. The visible nodes are the current roots, and the visibility
number of a shelling is the peak count of visible nodes, the initial roots
included.

Trees interchange as nested parentheses: ``()`` is a leaf and ``(L R)`` an
internal node. A forest is whitespace-separated trees.
"""
import heapq
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from core.config.config import config
from core.utils.error_handler import ScheduleValidationError, SizeGuardExceeded, TreeParseError
from core.utils.logging_config import get_logger

logger = get_logger(__name__)

# (tree index in the forest, node id inside that tree)
NodeRef = Tuple[int, int]
Children = Optional[Tuple[int, int]]


@dataclass(frozen=True)
class RootedTree:
    """
    Full binary rooted tree stored as an arena

    ``children[i]`` is None for a leaf or the (left, right) pair of node ids.
    """
    children: Tuple[Children, ...]
    root: int = 0
    sizes: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.children:
            raise ValueError("A rooted tree needs at least one node")
        if not 0 <= self.root < len(self.children):
            raise ValueError(f"Root {self.root} outside the arena")
        parents = [0] * len(self.children)
        for node, pair in enumerate(self.children):
            if pair is None:
                continue
            if len(pair) != 2:
                raise ValueError(f"Node {node} must have 0 or 2 children")
            for child in pair:
                if not 0 <= child < len(self.children) or child == self.root:
                    raise ValueError(f"Node {node} has invalid child {child}")
                parents[child] += 1
        if any(count > 1 for count in parents):
            raise ValueError("A node has more than one parent")
        order = _preorder(self.children, self.root)
        if len(order) != len(self.children):
            raise ValueError("Tree arena has unreachable nodes or a cycle")
        sizes = [1] * len(self.children)
        for node in reversed(order):
            pair = self.children[node]
            if pair is not None:
                sizes[node] = 1 + sizes[pair[0]] + sizes[pair[1]]
        object.__setattr__(self, 'sizes', tuple(sizes))

    def __len__(self) -> int:
        return len(self.children)

    @property
    def node_count(self) -> int:
        return len(self.children)

    def depth(self) -> int:
        deepest = 0
        stack = [(self.root, 0)]
        while stack:
            node, level = stack.pop()
            deepest = max(deepest, level)
            pair = self.children[node]
            if pair is not None:
                stack.extend((child, level + 1) for child in pair)
        return deepest


def _preorder(children: Sequence[Children], root: int) -> List[int]:
    order: List[int] = []
    seen = set()
    stack = [root]
    while stack:
        node = stack.pop()
        if node in seen:
            return order
        seen.add(node)
        order.append(node)
        pair = children[node]
        if pair is not None:
            stack.append(pair[1])
            stack.append(pair[0])
    return order


@dataclass(frozen=True)
class Forest:
    trees: Tuple[RootedTree, ...]

    @property
    def node_count(self) -> int:
        return sum(len(tree) for tree in self.trees)

    def roots(self) -> List[NodeRef]:
        return [(i, tree.root) for i, tree in enumerate(self.trees)]


@dataclass(frozen=True)
class ShellingSchedule:
    """Ordered elementary shellings with the visible count after each one"""
    steps: Tuple[NodeRef, ...]
    trace: Tuple[int, ...]
    initial_visible: int

    @property
    def visibility(self) -> int:
        return max((self.initial_visible,) + self.trace)


def single(tree: RootedTree) -> Forest:
    return Forest((tree,))


def _from_shape(shape) -> RootedTree:
    # shape: None for a leaf, (left, right) otherwise
    children: List[Children] = []
    pending = [(shape, None, 0)]
    while pending:
        node_shape, parent, slot = pending.pop()
        node = len(children)
        children.append(None)
        if parent is not None:
            pair = list(children[parent])
            pair[slot] = node
            children[parent] = tuple(pair)
        if node_shape is not None:
            children[node] = (-1, -1)
            pending.append((node_shape[1], node, 1))
            pending.append((node_shape[0], node, 0))
    return RootedTree(tuple(children))


def complete_tree(depth: int) -> RootedTree:
    """The complete binary tree T(d) with 2^(d+1) - 1 nodes"""
    if depth < 0:
        raise ValueError("Depth must be non-negative")
    children: List[Children] = []

    def build(level: int) -> int:
        node = len(children)
        children.append(None)
        if level < depth:
            left = build(level + 1)
            right = build(level + 1)
            children[node] = (left, right)
        return node

    build(0)
    return RootedTree(tuple(children))


def random_tree(n_nodes: int, rng: random.Random) -> RootedTree:
    """
    Random full binary tree grown by expanding a uniformly chosen leaf

    Args:
        n_nodes: Odd node count
        rng: Seeded random source
    """
    if n_nodes < 1 or n_nodes % 2 == 0:
        raise ValueError(f"A full binary tree has an odd node count, got {n_nodes}")
    children: List[Children] = [None]
    leaves = [0]
    for _ in range((n_nodes - 1) // 2):
        slot = rng.randrange(len(leaves))
        node = leaves[slot]
        left, right = len(children), len(children) + 1
        children.extend([None, None])
        children[node] = (left, right)
        leaves[slot] = left
        leaves.append(right)
    return RootedTree(tuple(children))


@lru_cache(maxsize=None)
def _shapes(n_nodes: int) -> Tuple:
    if n_nodes == 1:
        return (None,)
    result = []
    for left_size in range(1, n_nodes - 1, 2):
        for left in _shapes(left_size):
            for right in _shapes(n_nodes - 1 - left_size):
                result.append((left, right))
    return tuple(result)


def all_trees(n_nodes: int) -> Iterator[RootedTree]:
    """Every full binary tree shape with ``n_nodes`` nodes (left/right ordered)"""
    if n_nodes < 1 or n_nodes % 2 == 0:
        return
    for shape in _shapes(n_nodes):
        yield _from_shape(shape)


def parse_forest(text: str) -> Forest:
    """
    Parse whitespace-separated nested-parenthesis trees

    Raises:
        TreeParseError: On unbalanced input or a node with one child
    """
    trees: List[RootedTree] = []
    stack: List[List] = []
    for position, char in enumerate(text):
        if char.isspace():
            continue
        if char == '(':
            stack.append([])
        elif char == ')':
            if not stack:
                raise TreeParseError("Unbalanced ')'", position=position)
            items = stack.pop()
            if len(items) not in (0, 2):
                raise TreeParseError(
                    f"Node with {len(items)} children; expected 0 or 2", position=position
                )
            shape = None if not items else (items[0], items[1])
            if stack:
                stack[-1].append(shape)
            else:
                trees.append(_from_shape(shape))
        else:
            raise TreeParseError(f"Unexpected character {char!r} in tree text", position=position)
    if stack:
        raise TreeParseError("Unbalanced '('", position=len(text))
    return Forest(tuple(trees))


def render_tree(tree: RootedTree) -> str:
    out: List[str] = []
    stack: List = [tree.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        pair = tree.children[item]
        if pair is None:
            out.append('()')
        else:
            out.append('(')
            stack.extend([')', pair[1], ' ', pair[0]])
    return ''.join(out)


def render_forest(forest: Forest) -> str:
    return ' '.join(render_tree(tree) for tree in forest.trees)


def greedy_shell(forest: Forest) -> ShellingSchedule:
    """
    Shell the visible tree with the fewest nodes first

    Ties go to the smaller (tree index, node id). For a single tree with
    2^d - 1 < N <= 2^(d+1) - 1 nodes the visibility number is at most d+1.
    """
    heap = [(tree.sizes[tree.root], i, tree.root) for i, tree in enumerate(forest.trees)]
    heapq.heapify(heap)
    initial = len(heap)
    steps: List[NodeRef] = []
    trace: List[int] = []
    while heap:
        _, tree_index, node = heapq.heappop(heap)
        tree = forest.trees[tree_index]
        steps.append((tree_index, node))
        pair = tree.children[node]
        if pair is not None:
            for child in pair:
                heapq.heappush(heap, (tree.sizes[child], tree_index, child))
        trace.append(len(heap))
    return ShellingSchedule(tuple(steps), tuple(trace), initial)


def visibility_of_schedule(forest: Forest, schedule: ShellingSchedule) -> int:
    """
    Replay a schedule and return its visibility number

    Raises:
        ScheduleValidationError: If a step removes a node that is not
            currently a root, or the schedule leaves nodes unshelled
    """
    visible = set(forest.roots())
    peak = len(visible)
    for step_number, ref in enumerate(schedule.steps):
        ref = tuple(ref)
        if ref not in visible:
            raise ScheduleValidationError(
                f"Step {step_number} removes node {ref}, which is not visible",
                details={'step': step_number, 'node': list(ref)}
            )
        visible.remove(ref)
        tree_index, node = ref
        pair = forest.trees[tree_index].children[node]
        if pair is not None:
            visible.update((tree_index, child) for child in pair)
        peak = max(peak, len(visible))
    if visible or len(schedule.steps) != forest.node_count:
        raise ScheduleValidationError(
            f"Schedule is incomplete: {len(visible)} nodes still visible",
            details={'remaining_visible': len(visible)}
        )
    return peak


def _canonical_shape(tree: RootedTree, node: int):
    # children sorted, so mirror images coincide
    memo: Dict[int, Tuple] = {}
    for current in reversed(_preorder(tree.children, node)):
        pair = tree.children[current]
        if pair is None:
            memo[current] = ()
        else:
            left, right = memo[pair[0]], memo[pair[1]]
            memo[current] = (left, right) if left <= right else (right, left)
    return memo[node]


def _min_peak(state: Tuple, memo: Dict[Tuple, int]) -> int:
    if not state:
        return 0
    known = memo.get(state)
    if known is not None:
        return known
    best = math.inf
    tried = set()
    for position, shape in enumerate(state):
        if shape in tried:
            continue
        tried.add(shape)
        rest = state[:position] + state[position + 1:] + tuple(shape)
        value = max(len(state), _min_peak(tuple(sorted(rest)), memo))
        if value < best:
            best = value
            if best == len(state):
                break
    memo[state] = best
    return best


def exact_visibility(forest: Forest, max_nodes: Optional[int] = None) -> int:
    """
    Minimum visibility number over all complete shellings

    Exhaustive search over multisets of visible subtree shapes, memoized
    per call.

    Args:
        forest: Forest to shell
        max_nodes: Size guard; defaults to the configured limit

    Raises:
        SizeGuardExceeded: If the forest has more nodes than the guard
    """
    limit = config.EXACT_VISIBILITY_MAX_NODES if max_nodes is None else max_nodes
    if forest.node_count > limit:
        raise SizeGuardExceeded(
            f"Exact visibility refused: {forest.node_count} nodes exceed the guard of {limit}",
            stage="exact_visibility",
            details={'nodes': forest.node_count, 'guard': limit}
        )
    state = tuple(sorted(_canonical_shape(tree, tree.root) for tree in forest.trees))
    return int(_min_peak(state, {}))


def lemma1_bound(n: int) -> int:
    """d + 1 for the unique d with 2^d - 1 < n <= 2^(d+1) - 1"""
    if n < 1:
        raise ValueError("Node count must be at least 1")
    return n.bit_length()


def corollary1_bound(n: int) -> float:
    """Real-valued bound log2(n + 1) + 1"""
    return math.log2(n + 1) + 1
