"""
VERIFY Node - Check every inequality against the table and diagrams
"""
from typing import Any, Dict

from app.nodes.base_node import BaseNode
from core.groups.invariants import verify_paper_inequalities
from core.models.state import FillingRunState
from core.utils.logging_config import get_logger

logger = get_logger(__name__)


class VerifyNode(BaseNode):

    def __init__(self):
        super().__init__(name="VERIFY")

    def execute(self, state: FillingRunState) -> Dict[str, Any]:
        self.validate_required_fields(state, ['presentation', 'table'])

        report = verify_paper_inequalities(
            state['presentation'],
            state['table'],
            fixtures=state.get('fixtures', []),
            node_budget=state['run_config']['node_budget'],
        )

        if report.failures:
            logger.warning(f"Verification failed - {len(report.failures)} checks")
            for check in report.failures:
                logger.warning(f"  - {check.name} [{check.instance}]: {check.lhs} vs {check.rhs}")
        return {
            'report': report,
            'refusals': list(state.get('refusals', [])) + list(report.refusals),
            'status': 'VERIFIED' if report.passed else 'VERIFICATION_FAILED',
        }


# Create node instance
verify_node = VerifyNode()
