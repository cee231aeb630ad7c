"""
Settings loaded from settings.yaml and FILLING_* environment variables
"""
