"""
EXPORT Node - Render the table or report and settle the exit code
"""
from datetime import datetime
from typing import Any, Dict

from app.nodes.base_node import BaseNode
from core.groups.invariants import render_report, render_table
from core.models.state import FillingRunState
from core.utils.error_handler import error_handler
from core.utils.helpers import calculate_hash
from core.utils.logging_config import get_logger

logger = get_logger(__name__)


class ExportNode(BaseNode):
    """
    EXPORT node: final stage of every run

    Exit code 0 only when nothing was refused and, for verify, every
    gating check passed.
    """

    def __init__(self):
        super().__init__(name="EXPORT")

    def execute(self, state: FillingRunState) -> Dict[str, Any]:
        run_config = state['run_config']
        output_format = run_config['output_format']
        header = state['header']
        refusals = state.get('refusals', [])
        report = state.get('report')

        if state['command'] == 'verify' and report is not None:
            report = report.model_copy(update={'refusals': list(refusals)})
            output = render_report(report, output_format, header)
            exit_code = 0 if report.passed else 1
        elif state.get('table') is not None:
            output = render_table(state['table'], output_format, header)
            exit_code = 1 if refusals else 0
        else:
            lines = [f"# {header}"] + [f"REFUSED {r}" for r in refusals]
            output = "\n".join(lines) + "\n"
            exit_code = 1

        outcome = 'PASSED' if exit_code == 0 else ('REFUSED' if refusals else 'FAILED')
        error_summary = error_handler.get_error_summary()
        if error_summary['total_errors']:
            logger.info(f"Errors this run: {error_summary['by_stage']}")
        self._record_run(state, outcome, report)
        return {'output': output, 'exit_code': exit_code, 'status': outcome, 'error_summary': error_summary}

    def _record_run(self, state: FillingRunState, outcome: str, report):
        from core.models.database import RunRecord, get_session, ledger_enabled

        if not ledger_enabled():
            return
        session = get_session()
        try:
            session.merge(RunRecord(
                run_id=state['run_id'],
                command=state['command'],
                config_hash=calculate_hash(state['run_config']),
                seed=state['run_config'].get('seed'),
                outcome=outcome,
                checks_total=len(report.checks) if report is not None else 0,
                checks_failed=len(report.failures) if report is not None else 0,
                refusals=len(state.get('refusals', [])),
                finished_at=datetime.utcnow(),
            ))
            session.commit()
        except Exception as e:
            session.rollback()
            logger.error(f"Failed to record run: {e}")
        finally:
            session.close()


# Create node instance
export_node = ExportNode()
