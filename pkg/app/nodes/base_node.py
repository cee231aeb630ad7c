"""
Base node class for LangGraph workflow nodes
"""
import time
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, Optional

from core.models.state import FillingRunState
from core.utils.error_handler import FillingError, error_handler
from core.utils.logging_config import get_logger

logger = get_logger(__name__)


class BaseNode(ABC):
    """
    Abstract base class for the stages of a functions/verify run

    Subclasses implement ``execute`` and return only the state fields they
    change; LangGraph merges the update into the run state.
    """

    def __init__(self, name: str):
        """
        Args:
            name: Stage name as it appears in logs and the ledger ("LOAD", "TABULATE", ...)
        """
        self.name = name

    def __call__(self, state: FillingRunState) -> Dict[str, Any]:
        return self.run(state)

    def run(self, state: FillingRunState) -> Dict[str, Any]:
        """
        Execute the stage, routing failures through the error handler

        A refusal (budget or guard exceeded) is recoverable: it is appended
        to ``refusals`` and the run moves on with status REFUSED. Anything
        else is logged and re-raised, which ends the run.

        Args:
            state: Current workflow state

        Returns:
            State updates
        """
        logger.info(f"{'=' * 60}")
        logger.info(f"Starting node: {self.name}")
        started = time.perf_counter()

        try:
            updates = self.execute(state)
        except Exception as e:
            error_info = error_handler.handle_error(error=e, stage=self.name, state=state)
            outcome = "refused" if error_info['refusal'] else "failed"
            self._log_audit(state, outcome, {'error': error_info, 'duration_ms': _elapsed_ms(started)})

            if not error_info['recoverable']:
                logger.error(f"Failed node: {self.name} - {e}")
                raise

            return {
                'status': 'REFUSED',
                'error_info': error_info,
                'refusals': list(state.get('refusals', [])) + [f"{self.name}: {error_info['message']}"],
            }

        self._log_audit(state, "success", {'duration_ms': _elapsed_ms(started)})
        logger.info(f"Completed node: {self.name} ({_elapsed_ms(started):.0f} ms)")
        return updates

    @abstractmethod
    def execute(self, state: FillingRunState) -> Dict[str, Any]:
        """Stage logic; returns the state fields it changed"""

    def _log_audit(self, state: FillingRunState, result: str, details: Optional[Dict[str, Any]] = None):
        """Write one AuditLog row for this execution when the ledger is enabled"""
        from core.models.database import AuditLog, get_session, ledger_enabled

        if not ledger_enabled():
            return
        session = get_session()
        try:
            session.add(AuditLog(
                run_id=state.get('run_id', 'unknown'),
                node_name=self.name,
                action=f"{self.name}_execute",
                result=result,
                details=details or {}
            ))
            session.commit()
        except Exception as e:
            session.rollback()
            logger.error(f"Failed to log audit entry: {e}")
        finally:
            session.close()

    def validate_required_fields(self, state: FillingRunState, required_fields: Iterable[str]):
        """
        Raises:
            FillingError: If an earlier stage did not produce a required field
        """
        missing = [name for name in required_fields if state.get(name) is None]
        if missing:
            raise FillingError(f"Missing required fields in {self.name}: {missing}", stage=self.name)


def _elapsed_ms(started: float) -> float:
    return (time.perf_counter() - started) * 1000
