"""
Pydantic documents, workflow state and the optional run ledger
"""
