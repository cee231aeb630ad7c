"""
TABULATE Node - Compute the filling functions f0, g0, h0
"""
from typing import Any, Dict

from app.nodes.base_node import BaseNode
from core.groups.invariants import filling_functions
from core.models.state import FillingRunState
from core.utils.helpers import format_ratio
from core.utils.logging_config import get_logger

logger = get_logger(__name__)


class TabulateNode(BaseNode):
    """
    TABULATE node: enumerate words and diagrams, minimize Area, Diam, FL

    Raises EnumerationRefused (recoverable) when a word has too many
    diagrams.
    """

    def __init__(self):
        super().__init__(name="TABULATE")

    def execute(self, state: FillingRunState) -> Dict[str, Any]:
        self.validate_required_fields(state, ['presentation', 'run_config'])
        run_config = state['run_config']

        table = filling_functions(
            state['presentation'],
            n_max=run_config['n_max'],
            max_area=run_config['max_area'],
            node_budget=run_config['node_budget'],
            reduced_only=run_config.get('reduced_only', False),
        )

        certified = sum(row.words_certified for row in table.rows)
        total = sum(row.words_total for row in table.rows)
        logger.info(f"Certified words: {format_ratio(certified, total)}")
        return {'table': table, 'status': 'TABULATED'}


# Create node instance
tabulate_node = TabulateNode()
