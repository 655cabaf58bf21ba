"""
Domain models: automata, trees, file schemas
"""
