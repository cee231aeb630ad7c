"""
State schema for the filling-function workflow
"""
from typing import Any, Dict, List, Optional, TypedDict

from core.groups.diagram import VanKampenDiagram
from core.groups.invariants import FillingTable
from core.groups.presentation import Presentation
from core.models.reports import VerificationReport


class FillingRunState(TypedDict, total=False):
    """
    Complete state schema for a functions/verify run.
    Each node updates specific fields in this state.
    """

    # Run identity
    run_id: str
    command: str  # "functions" or "verify"
    run_config: Dict[str, Any]
    header: str

    # LOAD node outputs
    presentation_path: str
    presentation: Presentation
    fixture_paths: List[str]
    fixtures: List[Any]  # (name, VanKampenDiagram) pairs

    # TRIANGULARIZE node outputs
    triangularized: bool
    original_rank: int

    # TABULATE node outputs
    table: FillingTable

    # VERIFY node outputs
    report: VerificationReport

    # EXPORT node outputs
    output: str
    exit_code: int
    error_summary: Dict[str, Any]

    # Bookkeeping
    refusals: List[str]
    status: str
    error_info: Optional[Dict[str, Any]]
