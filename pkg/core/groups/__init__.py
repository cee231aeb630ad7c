"""
Algorithms on group presentations, van Kampen diagrams and rooted-tree shellings
"""
