"""
LOAD Node - Read the presentation and any fixture diagrams
"""
from typing import Any, Dict, List, Tuple

from app.nodes.base_node import BaseNode
from core.groups.diagram import VanKampenDiagram, load_diagram
from core.groups.presentation import load_presentation
from core.models.state import FillingRunState
from core.utils.logging_config import get_logger

logger = get_logger(__name__)


class LoadNode(BaseNode):
    """
    LOAD node: parse inputs

    Parse and validation errors are not recoverable; they abort the run.
    """

    def __init__(self):
        super().__init__(name="LOAD")

    def execute(self, state: FillingRunState) -> Dict[str, Any]:
        self.validate_required_fields(state, ['presentation_path'])

        presentation = load_presentation(state['presentation_path'])
        fixtures: List[Tuple[str, VanKampenDiagram]] = []
        for path in state.get('fixture_paths', []):
            fixtures.append((path, load_diagram(path)))

        logger.info(f"Presentation: {presentation.rank} generators, {len(presentation.relators)} relators, "
                    f"K={presentation.max_relator_length}; {len(fixtures)} fixtures")
        return {
            'presentation': presentation,
            'original_rank': presentation.rank,
            'fixtures': fixtures,
            'status': 'LOADED',
        }


# Create node instance
load_node = LoadNode()
