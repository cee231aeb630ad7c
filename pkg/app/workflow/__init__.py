"""
LangGraph wiring of the filling-function run
"""
