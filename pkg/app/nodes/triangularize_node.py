"""
TRIANGULARIZE Node - Split long relators so every relator has length <= 3
"""
from typing import Any, Dict

from app.nodes.base_node import BaseNode
from core.groups.presentation import triangularize
from core.models.state import FillingRunState
from core.utils.logging_config import get_logger

logger = get_logger(__name__)


class TriangularizeNode(BaseNode):

    def __init__(self):
        super().__init__(name="TRIANGULARIZE")

    def execute(self, state: FillingRunState) -> Dict[str, Any]:
        self.validate_required_fields(state, ['presentation'])
        presentation = triangularize(state['presentation'])
        logger.warning(f"Presentation was not triangular; running on its triangularization "
                       f"({presentation.rank} generators, {len(presentation.relators)} relators)")
        return {
            'presentation': presentation,
            'triangularized': True,
            'status': 'TRIANGULARIZED',
        }


# Create node instance
triangularize_node = TriangularizeNode()
