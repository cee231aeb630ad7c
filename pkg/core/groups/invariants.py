"""
Diagram enumeration, filling functions and inequality checks

Every van Kampen diagram with boundary word w decomposes uniquely at its
first boundary dart d (label x):

* the twin of d also lies on the boundary, at some position j with
  w[j] = x^-1: removing the edge leaves a diagram for w[1:j] hanging off a
  diagram for w[j+1:];
* the twin of d lies on an inner face spelling x^-1 u: collapsing that face
  across d leaves a diagram for u w[1:] with one face fewer.

Minimal area is searched along this recursion with memoized budgets; the
same recursion, run in reverse with ``MapBuilder``, glues every diagram
within an area budget.
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from core.config.config import config
from core.groups.diagram import (
    MapBuilder,
    Metrics,
    VanKampenDiagram,
    boundary_curves,
    boundary_subcomplex,
    canonical_form,
    canonical_relabel,
    metrics,
    star,
    to_document,
    trivial_diagram,
)
from core.groups.homotopy import (
    fl_exact,
    fl_schedule_prop2,
    prop2_bound,
    replay,
    step4_growth,
    step4_growth_bound,
    step4_loop_bound,
    trace_document,
    valence_area_bound,
    valence_fl_bound,
)
from core.groups.presentation import Letter, Presentation, Word, abelianization, cyclic_conjugates, render_word
from core.models.reports import CheckResult, FillingRow, FillingTableDocument, VerificationReport, WordRecordModel
from core.utils.error_handler import (
    EnumerationRefused,
    IllegalMoveError,
    InvariantViolation,
    OracleBudgetExceeded,
    RefusalError,
)
from core.utils.logging_config import get_logger

logger = get_logger(__name__)


class _AbelianBound:
    """
    Lower bound on area from exponent sums

    A word needs at least as many faces as the fewest signed relator
    exponent vectors summing to its own. Layers of such sums are grown
    breadth-first until the table reaches ``cap`` entries.
    """

    def __init__(self, presentation: Presentation, cap: int):
        rank = presentation.rank
        steps = set()
        for relator in presentation.relators:
            vector = abelianization(relator, rank)
            if any(vector):
                steps.add(vector)
                steps.add(tuple(-c for c in vector))
        self.rank = rank
        self.steps = sorted(steps)
        self.cap = cap
        zero = (0,) * rank
        self.reached: Dict[Tuple[int, ...], int] = {zero: 0}
        self.frontier = [zero]
        self.depth = 0
        self.closed = False
        self.capped = False

    def _grow(self):
        layer = []
        for vector in self.frontier:
            for step in self.steps:
                nxt = tuple(a + b for a, b in zip(vector, step))
                if nxt not in self.reached:
                    self.reached[nxt] = self.depth + 1
                    layer.append(nxt)
        self.depth += 1
        self.frontier = layer
        self.closed = not layer
        self.capped = len(self.reached) > self.cap

    def lower_bound(self, word: Word, budget: int) -> float:
        vector = abelianization(word, self.rank)
        while vector not in self.reached and self.depth < budget and not (self.closed or self.capped):
            self._grow()
        if vector in self.reached:
            return self.reached[vector]
        return math.inf if self.closed else self.depth + 1


class Enumerator:
    """
    Area search and diagram enumeration for one presentation

    Memoizes exact minimal areas per word and, for words with no diagram
    within some budget, the largest such budget.
    """

    def __init__(self, presentation: Presentation, abelian_cap: Optional[int] = None):
        self.presentation = presentation
        continuations: Dict[Letter, List[Word]] = {}
        for relator in presentation.relators:
            for conjugate in cyclic_conjugates(relator):
                rest = continuations.setdefault(conjugate[0].inverse(), [])
                if conjugate[1:] not in rest:
                    rest.append(conjugate[1:])
        self.continuations = {x: tuple(us) for x, us in continuations.items()}
        self._exact: Dict[Word, int] = {}
        self._failed: Dict[Word, int] = {}
        self._abelian = _AbelianBound(presentation, config.ABELIAN_CAP if abelian_cap is None else abelian_cap)

    def min_area(self, word: Word, budget: int) -> Optional[int]:
        """Least area of a diagram for ``word`` if it is at most ``budget``, else None"""
        if not word:
            return 0
        known = self._exact.get(word)
        if known is not None:
            return known if known <= budget else None
        if budget < 0 or self._failed.get(word, -1) >= budget:
            return None
        if self._abelian.lower_bound(word, budget) > budget:
            self._failed[word] = max(budget, self._failed.get(word, -1))
            return None

        x = word[0]
        best: Optional[int] = None
        limit = budget
        for j in range(1, len(word)):
            if word[j] != x.inverse():
                continue
            left = self.min_area(word[1:j], limit)
            if left is None:
                continue
            right = self.min_area(word[j + 1:], limit - left)
            if right is None:
                continue
            best, limit = left + right, left + right - 1
            if best == 0:
                break
        if best != 0:
            for u in self.continuations.get(x, ()):
                if limit < 1:
                    break
                inner = self.min_area(u + word[1:], limit - 1)
                if inner is not None:
                    best, limit = inner + 1, inner
        if best is None:
            self._failed[word] = max(budget, self._failed.get(word, -1))
            return None
        self._exact[word] = best
        return best

    def decompositions(self, word: Word, budget: int) -> Iterator[VanKampenDiagram]:
        """Every diagram for ``word`` with area at most ``budget``, each exactly once"""
        if not word:
            yield trivial_diagram(self.presentation)
            return
        if self.min_area(word, budget) is None:
            return
        x = word[0]
        for j in range(1, len(word)):
            if word[j] != x.inverse():
                continue
            left_word, right_word = word[1:j], word[j + 1:]
            left_min = self.min_area(left_word, budget)
            if left_min is None:
                continue
            right_min = self.min_area(right_word, budget - left_min)
            if right_min is None:
                continue
            rights: Optional[List[VanKampenDiagram]] = None
            for left in self.decompositions(left_word, budget - right_min):
                if rights is None:
                    rights = list(self.decompositions(right_word, budget - left_min))
                for right in rights:
                    if left.area + right.area <= budget:
                        yield _glue_spur(x, left, right)
        if budget < 1:
            return
        for u in self.continuations.get(x, ()):
            inner_word = u + word[1:]
            if self.min_area(inner_word, budget - 1) is None:
                continue
            for inner in self.decompositions(inner_word, budget - 1):
                yield _glue_face(x, len(u), inner)


def _glue_spur(x: Letter, left: VanKampenDiagram, right: VanKampenDiagram) -> VanKampenDiagram:
    # new edge from the base of ``right`` to the base of ``left``
    builder = MapBuilder(right.presentation)
    builder.absorb(right)
    v_off, d_off = builder.absorb(left)
    x0, y = right.base, left.base + v_off
    b1 = [d + d_off for d in left.boundary]
    b2 = list(right.boundary)
    d, d_twin = builder.new_edge(x0, y, x)
    builder.insert_before(d, b2[0] if b2 else None)
    builder.insert_before(d_twin, b1[0] if b1 else None)
    return canonical_relabel(builder.build(x0, [d] + b1 + [d_twin] + b2))


def _glue_face(x: Letter, k: int, inner: VanKampenDiagram) -> VanKampenDiagram:
    # new edge closes the first k boundary darts of ``inner`` into a face
    builder = MapBuilder(inner.presentation)
    builder.absorb(inner)
    b = list(inner.boundary)
    x0 = inner.base
    z = builder.origin[b[k]] if k < len(b) else x0
    d, d_twin = builder.new_edge(x0, z, x)
    if not b:
        builder.rotation[x0] = [d, d_twin]
    elif k == len(b):
        builder.insert_before(d_twin, b[0])
        builder.insert_before(d, b[0])
    elif k == 0:
        builder.insert_before(d, b[0])
        builder.insert_before(d_twin, b[0])
    else:
        builder.insert_before(d, b[0])
        builder.insert_before(d_twin, b[k])
    builder.faces.append([d_twin] + b[:k])
    return canonical_relabel(builder.build(x0, [d] + b[k:]))


@lru_cache(maxsize=8)
def _enumerator(presentation: Presentation) -> Enumerator:
    return Enumerator(presentation)


def min_area(presentation: Presentation, word: Word, budget: int) -> Optional[int]:
    return _enumerator(presentation).min_area(tuple(word), budget)


def witness_diagram(presentation: Presentation, word: Word, area_budget: int) -> Optional[VanKampenDiagram]:
    """A minimal-area diagram for ``word``, or None if none fits the budget"""
    enumerator = _enumerator(presentation)
    area = enumerator.min_area(tuple(word), area_budget)
    if area is None:
        return None
    return next(enumerator.decompositions(tuple(word), area))


def reject_isomorphs(diagrams: Iterable[VanKampenDiagram]) -> Iterator[VanKampenDiagram]:
    """
    Yield the first diagram of each isomorphism class (canonical form
    anchored at the base dart)

    Raises:
        InvariantViolation: If a rejected duplicate has metrics different
            from the representative it matched
    """
    seen: Dict[Tuple, Metrics] = {}
    for diagram in diagrams:
        form = canonical_form(diagram)
        kept = seen.get(form)
        if kept is None:
            seen[form] = metrics(diagram)
            yield diagram
            continue
        duplicate = metrics(diagram)
        if duplicate != kept:
            raise InvariantViolation(
                f"Isomorphic diagrams for {diagram.boundary_text()!r} disagree on metrics",
                details={'kept': kept._asdict(), 'duplicate': duplicate._asdict()}
            )


def enumerate_diagrams(
    presentation: Presentation,
    word: Word,
    max_area: int,
    max_diagrams: Optional[int] = None
) -> List[VanKampenDiagram]:
    """
    All diagrams with boundary ``word`` and area at most ``max_area``, up
    to isomorphism fixing the base dart

    Raises:
        EnumerationRefused: If more than ``max_diagrams`` diagrams turn up
    """
    guard = config.MAX_DIAGRAMS if max_diagrams is None else max_diagrams
    diagrams: List[VanKampenDiagram] = []
    for diagram in reject_isomorphs(_enumerator(presentation).decompositions(tuple(word), max_area)):
        diagrams.append(diagram)
        if len(diagrams) > guard:
            raise EnumerationRefused(
                f"More than {guard} diagrams for {render_word(word, presentation)!r} within area {max_area}",
                partial_count=len(diagrams),
                details={'word': render_word(word, presentation), 'max_area': max_area}
            )
    logger.debug(f"{len(diagrams)} diagrams for {render_word(word, presentation)!r} within area {max_area}")
    return diagrams


def words_of_length(presentation: Presentation, n: int, reduced: bool = False) -> Iterator[Word]:
    """Words of length exactly n in lexicographic letter order, optionally only freely reduced ones"""
    letters = [Letter(g, s) for g in range(presentation.rank) for s in (1, -1)]

    def extend(prefix: Word) -> Iterator[Word]:
        if len(prefix) == n:
            yield prefix
            return
        for letter in letters:
            if reduced and prefix and prefix[-1] == letter.inverse():
                continue
            yield from extend(prefix + (letter,))

    yield from extend(())


def reduced_words(presentation: Presentation, n: int) -> Iterator[Word]:
    return words_of_length(presentation, n, reduced=True)


# --------------------------------------------------------------------------
# Filling functions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WordRecord:
    word: Word
    area: int
    diam: int
    fl: int
    fl_exact: bool
    diagrams: Tuple[VanKampenDiagram, ...] = field(repr=False)
    witness: VanKampenDiagram = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class FillingTable:
    presentation: Presentation = field(repr=False)
    n_max: int
    max_area: int
    rows: Tuple[FillingRow, ...]
    words: Tuple[WordRecord, ...] = field(repr=False)

    def row(self, n: int) -> FillingRow:
        return self.rows[n]

    def diagrams(self) -> Iterator[VanKampenDiagram]:
        for record in self.words:
            yield from record.diagrams


def diagram_fl(
    diagram: VanKampenDiagram,
    node_budget: int,
    oracle_max_area: int,
    below: Optional[int] = None
) -> Tuple[Optional[int], bool]:
    """
    Filling length of one diagram and whether it is exact

    Small diagrams (and any diagram over a non-triangular presentation)
    go to the exact search; the rest, or any search over budget, fall back
    to the scheduler, which only bounds the value from above.
    """
    triangular = diagram.presentation.is_triangular()
    if diagram.area <= oracle_max_area or not triangular:
        try:
            return fl_exact(diagram, node_budget, below), True
        except OracleBudgetExceeded:
            if not triangular:
                raise
            logger.info(f"Oracle budget exhausted on a diagram of area {diagram.area}; using the scheduler")
    return fl_schedule_prop2(diagram).realized_fl, False


def word_record(
    presentation: Presentation,
    word: Word,
    max_area: int,
    node_budget: int,
    oracle_max_area: Optional[int] = None
) -> Optional[WordRecord]:
    """Area, Diam and FL of a word, or None when no diagram fits the area budget"""
    oracle_max_area = config.ORACLE_MAX_AREA if oracle_max_area is None else oracle_max_area
    area = min_area(presentation, word, max_area)
    if area is None:
        return None
    diagrams = sorted(enumerate_diagrams(presentation, word, max_area), key=lambda d: d.area)
    witness = diagrams[0]
    diam = min(metrics(d).diameter for d in diagrams)

    best: Optional[int] = None
    fell_back = False
    for diagram in diagrams:
        if best == len(word):
            break
        value, exact = diagram_fl(diagram, node_budget, oracle_max_area, below=best)
        fell_back = fell_back or not exact
        if value is not None and (best is None or value < best):
            best = value
    return WordRecord(
        word=tuple(word),
        area=area,
        diam=diam,
        fl=best,
        fl_exact=not fell_back or best == len(word),
        diagrams=tuple(diagrams),
        witness=witness,
    )


def filling_functions(
    presentation: Presentation,
    n_max: int,
    max_area: int,
    node_budget: Optional[int] = None,
    oracle_max_area: Optional[int] = None,
    reduced_only: bool = False
) -> FillingTable:
    """
    Tabulate f0, g0, h0 for n <= n_max over every word that has a diagram
    within the area budget. Unreduced words such as aA count: their path
    diagrams give area 0 and FL |w|.

    Raises:
        EnumerationRefused: If some word has too many diagrams
    """
    node_budget = config.NODE_BUDGET if node_budget is None else node_budget
    records: List[WordRecord] = []
    rows: List[FillingRow] = []
    f0 = g0 = h0 = 0
    limited = False
    for n in range(n_max + 1):
        total = certified = 0
        for word in words_of_length(presentation, n, reduced=reduced_only):
            total += 1
            record = word_record(presentation, word, max_area, node_budget, oracle_max_area)
            if record is None:
                continue
            certified += 1
            records.append(record)
            f0, g0, h0 = max(f0, record.area), max(g0, record.diam), max(h0, record.fl)
            limited = limited or not record.fl_exact
        rows.append(FillingRow(
            n=n, f0=f0, g0=g0, h0=h0,
            budget_flag='budget-limited' if limited else 'exact',
            words_total=total, words_certified=certified,
        ))
        logger.info(f"n={n}: {certified}/{total} words certified; f0={f0} g0={g0} h0={h0}")
    return FillingTable(presentation, n_max, max_area, tuple(rows), tuple(records))


# --------------------------------------------------------------------------
# Verification
# --------------------------------------------------------------------------

def _num(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _check(name: str, instance: str, lhs, rhs, passed: bool, gating: bool = True,
           counterexample: Optional[Dict] = None) -> CheckResult:
    return CheckResult(
        name=name, instance=instance, lhs=_num(lhs), rhs=_num(rhs), passed=passed, gating=gating,
        counterexample=None if passed else counterexample,
    )


def area_growth_steps(diagram: VanKampenDiagram) -> List[Tuple[int, int, int, int]]:
    """
    (i, Area(N_i), Area(N_{i+1}), l(c_i)) for N_i = star_i of the boundary,
    until the stars stop growing
    """
    steps = []
    current = boundary_subcomplex(diagram)
    i = 0
    while True:
        grown = star(diagram, current)
        curve_length = sum(c.length for c in boundary_curves(diagram, i))
        steps.append((i, len(current.faces), len(grown.faces), curve_length))
        if grown == current:
            return steps
        current = grown
        i += 1


def _counterexample(diagram: VanKampenDiagram, trace=None) -> Dict:
    example = {
        'word': diagram.boundary_text(),
        'diagram': to_document(diagram, presentation_path='').model_dump(),
    }
    if trace is not None:
        example['trace'] = trace_document(diagram, trace).model_dump()
    return example


def check_diagram(
    diagram: VanKampenDiagram,
    instance: str,
    node_budget: int,
    oracle_max_area: int
) -> Tuple[List[CheckResult], List[str]]:
    """
    Per-diagram inequalities: the scheduler bound with its two in-proof
    profile bounds, the oracle sandwich, the valence bounds, the
    radius-diameter relation and the area growth of boundary stars

    Returns:
        (checks, refusals)
    """
    checks: List[CheckResult] = []
    refusals: List[str] = []
    m = metrics(diagram)
    n = m.boundary_length

    try:
        trace = fl_schedule_prop2(diagram)
    except RefusalError as e:
        return checks, [f"{instance}: {e}"]
    example = _counterexample(diagram, trace)
    fl_sched = trace.realized_fl

    try:
        replay(diagram, trace)
        checks.append(_check('trace_replay', instance, len(trace.records), len(trace.records), True))
    except IllegalMoveError as e:
        checks.append(_check('trace_replay', instance, str(e), 'legal', False, counterexample=example))

    bound = prop2_bound(m.area, m.diameter, n)
    checks.append(_check('prop2_bound', instance, fl_sched, bound, fl_sched <= bound, counterexample=example))

    loop_bound = step4_loop_bound(m.area, m.diameter)
    for index, record in enumerate(trace.records):
        if record.job_loop is not None:
            checks.append(_check('step4_loop', f"{instance} move {index}", record.job_loop, loop_bound,
                                 record.job_loop <= loop_bound, counterexample=example))
    growth_bound = step4_growth_bound(m.diameter)
    for i, j, grown in step4_growth(trace):
        checks.append(_check('step4_growth', f"{instance} moves {i}..{j}", grown, growth_bound,
                             grown <= growth_bound, counterexample=example))

    if m.area <= oracle_max_area:
        try:
            exact = fl_exact(diagram, node_budget)
            checks.append(_check('oracle_sandwich', instance, exact, fl_sched, exact <= fl_sched,
                                 counterexample=example))
        except OracleBudgetExceeded as e:
            refusals.append(f"{instance}: {e}")

    area_bound = valence_area_bound(m.diameter, m.max_valence)
    checks.append(_check('valence_area', instance, m.area, area_bound, m.area <= area_bound,
                         counterexample=example))
    fl_bound = valence_fl_bound(m.diameter, n, m.max_valence)
    checks.append(_check('valence_fl', instance, fl_sched, fl_bound, fl_sched <= fl_bound,
                         counterexample=example))

    half = math.ceil(n / 2)
    checks.append(_check('radius_diameter', instance, m.diameter, m.radius + half,
                         m.diameter <= m.radius + half, counterexample=example))

    for i, area_i, area_next, curve_length in area_growth_steps(diagram):
        lhs, rhs = Fraction(area_next - area_i), Fraction(curve_length, 3)
        checks.append(_check('area_growth', f"{instance} i={i}", lhs, rhs, lhs >= rhs, counterexample=example))
    return checks, refusals


def radius_constant(table: FillingTable, exponent: int) -> Fraction:
    """Empirical M = max f0(n) / n^r over the tabulated range"""
    return max((Fraction(row.f0, row.n ** exponent) for row in table.rows if row.n > 0), default=Fraction(0))


def verify_paper_inequalities(
    presentation: Presentation,
    table: FillingTable,
    fixtures: Sequence[Tuple[str, VanKampenDiagram]] = (),
    node_budget: Optional[int] = None,
    oracle_max_area: Optional[int] = None,
    radius_exponent: Optional[int] = None
) -> VerificationReport:
    """
    Evaluate every inequality on the table, its enumerated diagrams and
    the given fixtures. Failures are report entries, never exceptions.
    """
    node_budget = config.NODE_BUDGET if node_budget is None else node_budget
    oracle_max_area = config.ORACLE_MAX_AREA if oracle_max_area is None else oracle_max_area
    exponent = config.RADIUS_EXPONENT if radius_exponent is None else radius_exponent
    report = VerificationReport()
    K = presentation.max_relator_length

    previous = None
    for row in table.rows:
        instance = f"n={row.n}"
        chain = 2 * K * row.f0 + row.n
        report.checks.append(_check('g0_le_h0', instance, row.g0, row.h0, row.g0 <= row.h0))
        report.checks.append(_check('h0_le_2Kf0_plus_n', instance, row.h0, chain, row.h0 <= chain))
        if row.n > 0 and any(r.length == row.n for r in table.words):
            report.checks.append(_check('h0_ge_n', instance, row.h0, row.n, row.h0 >= row.n))
        if previous is not None:
            for key in ('f0', 'g0', 'h0'):
                before, after = getattr(previous, key), getattr(row, key)
                report.checks.append(_check(f'monotone_{key}', instance, before, after, before <= after))
        previous = row

    if not presentation.is_triangular():
        report.refusals.append(f"Presentation has relators of length {K} > 3; diagram checks need 'triangulate'")
        return report

    diagrams: List[Tuple[str, VanKampenDiagram]] = list(fixtures)
    for record in table.words:
        text = render_word(record.word, presentation) or '1'
        diagrams.extend((f"{text}#{k}", d) for k, d in enumerate(record.diagrams))
    for instance, diagram in diagrams:
        checks, refusals = check_diagram(diagram, instance, node_budget, oracle_max_area)
        report.checks.extend(checks)
        report.refusals.extend(refusals)

    M = radius_constant(table, exponent)
    for record in table.words:
        if not record.word:
            continue
        n = record.length
        radius = metrics(record.witness).radius
        rhs = 12 * M * Fraction(n) ** (exponent - 1)
        report.checks.append(_check('radius_estimate', render_word(record.word, presentation), radius, rhs,
                                    radius <= rhs, gating=False))

    failed = len(report.failures)
    logger.info(f"Verification: {len(report.checks)} checks, {failed} failed, {len(report.refusals)} refusals")
    return report


# --------------------------------------------------------------------------
# Export
# --------------------------------------------------------------------------

CSV_COLUMNS = ('n', 'f0', 'g0', 'h0', 'budget_flag')


def table_document(table: FillingTable) -> FillingTableDocument:
    return FillingTableDocument(
        max_area=table.max_area,
        rows=list(table.rows),
        words=[
            WordRecordModel(
                word=render_word(r.word, table.presentation),
                length=r.length,
                area=r.area,
                diam=r.diam,
                fl=r.fl,
                fl_exact=r.fl_exact,
                diagram_count=len(r.diagrams),
            )
            for r in table.words
        ],
    )


def render_table(table: FillingTable, output_format: str, header: str) -> str:
    if output_format == 'json':
        document = {'header': header, **table_document(table).model_dump()}
        return json.dumps(document, indent=2) + "\n"
    if output_format == 'csv':
        buffer = io.StringIO()
        buffer.write(f"# {header}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in table.rows:
            writer.writerow([getattr(row, column) for column in CSV_COLUMNS])
        return buffer.getvalue()
    lines = [f"# {header}", f"{'n':>3} {'f0':>4} {'g0':>4} {'h0':>4}  {'certified':>12}  flag"]
    for row in table.rows:
        lines.append(f"{row.n:>3} {row.f0:>4} {row.g0:>4} {row.h0:>4}  "
                     f"{row.words_certified:>5}/{row.words_total:<6}  {row.budget_flag}")
    return "\n".join(lines) + "\n"


def render_report(report: VerificationReport, output_format: str, header: str) -> str:
    if output_format == 'json':
        document = {'header': header, 'passed': report.passed, **report.model_dump()}
        return json.dumps(document, indent=2) + "\n"
    if output_format == 'csv':
        buffer = io.StringIO()
        buffer.write(f"# {header}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(('name', 'instance', 'lhs', 'rhs', 'passed', 'gating'))
        for c in report.checks:
            writer.writerow((c.name, c.instance, c.lhs, c.rhs, c.passed, c.gating))
        return buffer.getvalue()
    lines = [f"# {header}"]
    for name, counts in report.summary().items():
        lines.append(f"{name:<20} passed {counts['passed']:>6}  failed {counts['failed']:>4}")
    for c in report.failures:
        lines.append(f"FAIL {c.name} [{c.instance}]: {c.lhs} vs {c.rhs}")
    for refusal in report.refusals:
        lines.append(f"REFUSED {refusal}")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines) + "\n"
