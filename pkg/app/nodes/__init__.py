"""
Workflow nodes for functions and verify runs
"""
