"""
LangGraph Workflow - filling-function runs (functions and verify commands)
"""
from typing import Literal

from langgraph.graph import END, StateGraph

from app.nodes.export_node import export_node
from app.nodes.load_node import load_node
from app.nodes.tabulate_node import tabulate_node
from app.nodes.triangularize_node import triangularize_node
from app.nodes.verify_node import verify_node
from core.models.state import FillingRunState
from core.utils.error_handler import error_handler
from core.utils.logging_config import get_logger

logger = get_logger(__name__)


# Conditional edge functions
def needs_triangularization(state: FillingRunState) -> Literal["triangularize", "tabulate"]:
    """
    Route non-triangular presentations through TRIANGULARIZE

    Args:
        state: Current workflow state

    Returns:
        "triangularize" if some relator is longer than 3, "tabulate" otherwise
    """
    if state['presentation'].is_triangular():
        return "tabulate"
    logger.info("Presentation not triangular - routing to TRIANGULARIZE")
    return "triangularize"


def after_tabulate(state: FillingRunState) -> Literal["verify", "export"]:
    """
    Determine whether the table goes on to verification

    Args:
        state: Current workflow state

    Returns:
        "verify" for the verify command with a table, "export" otherwise
    """
    if state.get('table') is None:
        logger.info("Tabulation refused - routing to EXPORT")
        return "export"
    return "verify" if state['command'] == 'verify' else "export"


# Build the workflow graph
def create_workflow() -> StateGraph:
    """
    Create the filling-function workflow

    LOAD → [TRIANGULARIZE] → TABULATE → [VERIFY] → EXPORT

    Returns:
        Uncompiled StateGraph
    """
    workflow = StateGraph(FillingRunState)

    workflow.add_node("load", load_node)
    workflow.add_node("triangularize", triangularize_node)
    workflow.add_node("tabulate", tabulate_node)
    workflow.add_node("verify", verify_node)
    workflow.add_node("export", export_node)

    workflow.set_entry_point("load")
    workflow.add_conditional_edges(
        "load",
        needs_triangularization,
        {
            "triangularize": "triangularize",
            "tabulate": "tabulate"
        }
    )
    workflow.add_edge("triangularize", "tabulate")
    workflow.add_conditional_edges(
        "tabulate",
        after_tabulate,
        {
            "verify": "verify",
            "export": "export"
        }
    )
    workflow.add_edge("verify", "export")
    workflow.add_edge("export", END)

    return workflow


def get_compiled_workflow():
    """
    Get the compiled workflow

    Runs are batch jobs with no pause points, so no checkpointer is attached.
    """
    return create_workflow().compile()


def run_workflow(initial_state: FillingRunState) -> FillingRunState:
    """Execute one run to completion and return the final state"""
    error_handler.reset()
    final_state = get_compiled_workflow().invoke(initial_state)
    logger.info(f"Run {final_state.get('run_id')} finished: {final_state.get('status')}")
    return final_state
