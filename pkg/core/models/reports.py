"""
Document models for everything the toolkit reads or writes
"""
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator


class DartRecord(BaseModel):
    id: int
    origin: int
    twin: int
    label: str


class DiagramDocument(BaseModel):
    """Diagram interchange file"""
    presentation: str
    vertices: List[int]
    darts: List[DartRecord] = Field(default_factory=list)
    rotation: Dict[int, List[int]] = Field(default_factory=dict)
    faces: List[List[int]] = Field(default_factory=list)
    base: int
    boundary: List[int] = Field(default_factory=list)


class TraceMove(BaseModel):
    kind: Literal['one_cell', 'two_cell']
    edge: int
    vertex: Optional[int] = None
    face: Optional[int] = None
    step: Optional[int] = None
    tag: Optional[str] = None
    job: Optional[int] = None
    job_loop: Optional[int] = None


class TraceDocument(BaseModel):
    """Exported homotopy trace"""
    boundary_word: str
    moves: List[TraceMove]
    profile: List[int]
    realized_fl: int
    deviations: List[str] = Field(default_factory=list)


class FillingRow(BaseModel):
    n: int
    f0: int
    g0: int
    h0: int
    budget_flag: Literal['exact', 'budget-limited']
    words_total: int
    words_certified: int


class WordRecordModel(BaseModel):
    word: str
    length: int
    area: int
    diam: int
    fl: Optional[int]
    fl_exact: bool
    diagram_count: int


class FillingTableDocument(BaseModel):
    max_area: int
    rows: List[FillingRow]
    words: List[WordRecordModel]


class CheckResult(BaseModel):
    name: str
    instance: str
    lhs: str
    rhs: str
    passed: bool
    gating: bool = True
    counterexample: Optional[Dict[str, Any]] = None


class VerificationReport(BaseModel):
    checks: List[CheckResult] = Field(default_factory=list)
    refusals: List[str] = Field(default_factory=list)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if c.gating and not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures and not self.refusals

    def summary(self) -> Dict[str, Dict[str, int]]:
        """Pass/fail counts per check name, in first-seen order"""
        counts: Dict[str, Dict[str, int]] = {}
        for check in self.checks:
            entry = counts.setdefault(check.name, {'passed': 0, 'failed': 0})
            entry['passed' if check.passed else 'failed'] += 1
        return counts


class RunConfig(BaseModel):
    """Settings of one command-line run; recorded in every output header"""
    command: Literal['triangulate', 'shell', 'analyze', 'functions', 'verify']
    inputs: List[str] = Field(default_factory=list)
    n_max: int = Field(default=6, ge=0)
    max_area: int = Field(default=6, ge=1)
    node_budget: int = Field(default=200000, ge=1)
    output_format: Literal['csv', 'json', 'text'] = 'text'
    seed: int = 0
    out: Optional[str] = None
    complete: Optional[int] = Field(default=None, ge=0)
    random: Optional[int] = Field(default=None, ge=1)
    reduced_only: bool = False

    @field_validator('random')
    @classmethod
    def _odd_node_count(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value % 2 == 0:
            raise ValueError('a full binary tree has an odd number of nodes')
        return value

    def header(self) -> str:
        parts = [f"command={self.command}", f"seed={self.seed}"]
        if self.command in ('functions', 'verify'):
            parts += [f"n_max={self.n_max}", f"max_area={self.max_area}", f"node_budget={self.node_budget}"]
            if self.reduced_only:
                parts.append("reduced_only")
        if self.complete is not None:
            parts.append(f"complete={self.complete}")
        if self.random is not None:
            parts.append(f"random={self.random}")
        return ' '.join(parts)
