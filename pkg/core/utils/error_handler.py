"""
Error types and failure bookkeeping for the filling-length toolkit
"""
import logging
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


class FillingError(Exception):
    """Base exception for every failure raised by the toolkit"""

    def __init__(
        self,
        message: str,
        stage: Optional[str] = None,
        recoverable: bool = False,
        details: Optional[Dict[str, Any]] = None
    ):
        super().__init__(message)
        self.message = message
        self.stage = stage
        self.recoverable = recoverable
        self.details = details or {}


class InputParseError(FillingError):
    """Input text could not be parsed; carries the line and position when known"""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        position: Optional[int] = None
    ):
        details = {}
        if line is not None:
            details['line'] = line
        if position is not None:
            details['position'] = position
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        text = f"{message} ({', '.join(where)})" if where else message
        super().__init__(text, stage="parse", details=details)
        self.line = line
        self.position = position


class PresentationParseError(InputParseError):
    """Presentation or word text could not be parsed"""


class TreeParseError(InputParseError):
    """Parenthesized tree text could not be parsed"""


class DiagramValidationError(FillingError):
    """A diagram document violates a van Kampen diagram invariant"""

    CODES = (
        'malformed',
        'twin_not_involution',
        'euler_characteristic',
        'face_label',
        'base_off_boundary',
        'disconnected',
    )

    def __init__(self, code: str, message: str, details: Optional[Dict[str, Any]] = None):
        if code not in self.CODES:
            raise ValueError(f"Unknown diagram validation code: {code}")
        super().__init__(f"[{code}] {message}", stage="validate", details=details)
        self.code = code


class InvariantViolation(FillingError):
    """A computed object broke an invariant the algorithms rely on"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, stage="invariant", details=details)


class ScheduleValidationError(FillingError):
    """A shelling schedule is not a valid complete shelling of its forest"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, stage="shell", details=details)


class IllegalMoveError(FillingError):
    """A collapse move was applied whose precondition does not hold"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, stage="homotopy", details=details)


class RefusalError(FillingError):
    """
    A computation declined to answer rather than report an unreliable value.
    Refusals are recoverable: a run records them and carries on.
    """

    def __init__(self, message: str, stage: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, stage=stage, recoverable=True, details=details)


class SizeGuardExceeded(RefusalError):
    """Input exceeds the tractability guard of an exhaustive search"""
    pass


class EnumerationRefused(RefusalError):
    """Diagram enumeration hit its explosion guard"""

    def __init__(self, message: str, partial_count: int, details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        details['partial_count'] = partial_count
        super().__init__(message, stage="enumerate", details=details)
        self.partial_count = partial_count


class OracleBudgetExceeded(RefusalError):
    """The exact filling-length search ran out of node budget"""

    def __init__(self, message: str, expanded: int, details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        details['expanded'] = expanded
        super().__init__(message, stage="fl_exact", details=details)
        self.expanded = expanded


class NonTriangularPresentationError(RefusalError):
    """The scheduler needs a triangular presentation"""

    def __init__(self, max_length: int):
        super().__init__(
            f"Presentation has relators of length {max_length} > 3; "
            f"run 'triangulate' on it first",
            stage="schedule",
            details={'max_relator_length': max_length}
        )


class ErrorHandler:
    """
    Collects failures raised while a run executes
    """

    def __init__(self):
        self.error_history: List[Dict[str, Any]] = []

    def handle_error(
        self,
        error: Exception,
        stage: str,
        state: Optional[Dict[str, Any]] = None
    ) -> Dict[str, Any]:
        """
        Record an error and describe it

        Args:
            error: The exception that was raised
            stage: Stage (node name) where it happened
            state: Current workflow state, if any

        Returns:
            Error information dictionary
        """
        error_info = {
            'stage': stage,
            'error_type': type(error).__name__,
            'message': str(error),
            'recoverable': isinstance(error, FillingError) and error.recoverable,
            'refusal': isinstance(error, RefusalError),
        }
        if isinstance(error, FillingError):
            error_info['details'] = error.details
        if state is not None and state.get('command'):
            error_info['command'] = state['command']

        self.error_history.append(error_info)

        if error_info['refusal']:
            logger.warning(f"Refusal in {stage}: {error}")
        else:
            logger.error(f"Error in {stage}: {error}")
        return error_info

    def get_error_summary(self) -> Dict[str, Any]:
        """
        Get summary of recorded errors

        Returns:
            Summary dictionary with counts by type and stage
        """
        by_type: Dict[str, int] = {}
        by_stage: Dict[str, int] = {}
        for entry in self.error_history:
            by_type[entry['error_type']] = by_type.get(entry['error_type'], 0) + 1
            by_stage[entry['stage']] = by_stage.get(entry['stage'], 0) + 1
        return {
            'total_errors': len(self.error_history),
            'refusals': sum(1 for e in self.error_history if e['refusal']),
            'by_type': by_type,
            'by_stage': by_stage,
        }

    def reset(self):
        self.error_history.clear()


# Global error handler instance
error_handler = ErrorHandler()
