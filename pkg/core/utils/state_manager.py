"""
State management utilities for workflow state operations
"""
from typing import Any, Dict, List, Optional, Tuple

from core.models.reports import RunConfig
from core.models.state import FillingRunState
from core.utils.helpers import generate_run_id


class StateManager:
    """
    Utility class for managing workflow state
    """

    @staticmethod
    def create_initial_state(
        run_config: RunConfig,
        fixture_paths: Optional[List[str]] = None,
        run_id: Optional[str] = None
    ) -> FillingRunState:
        """
        Create initial workflow state

        Args:
            run_config: Validated settings of this run; the first input is
                the presentation file
            fixture_paths: Diagram files checked alongside the table
            run_id: Ledger identifier; generated when omitted

        Returns:
            Initial FillingRunState
        """
        if not run_config.inputs:
            raise ValueError("A presentation file is required")
        return {
            'run_id': run_id or generate_run_id(),
            'command': run_config.command,
            'run_config': run_config.model_dump(),
            'header': run_config.header(),
            'presentation_path': run_config.inputs[0],
            'fixture_paths': list(fixture_paths or run_config.inputs[1:]),
            'refusals': [],
            'status': 'PENDING',
        }

    @staticmethod
    def get_state_summary(state: FillingRunState) -> Dict[str, Any]:
        """
        Get a summary of the current state

        Args:
            state: Current state

        Returns:
            Summary dictionary
        """
        table = state.get('table')
        report = state.get('report')
        return {
            'run_id': state.get('run_id'),
            'command': state.get('command'),
            'status': state.get('status'),
            'triangularized': state.get('triangularized', False),
            'rows': len(table.rows) if table is not None else 0,
            'checks': len(report.checks) if report is not None else 0,
            'failures': len(report.failures) if report is not None else 0,
            'refusals': len(state.get('refusals', [])),
            'exit_code': state.get('exit_code'),
        }

    @staticmethod
    def validate_state(state: FillingRunState, required_fields: list) -> Tuple[bool, list]:
        """
        Validate that state contains required fields

        Args:
            state: State to validate
            required_fields: List of required field names

        Returns:
            Tuple of (is_valid, missing_fields)
        """
        missing_fields = [
            field for field in required_fields
            if field not in state or state[field] is None
        ]

        return (len(missing_fields) == 0, missing_fields)
