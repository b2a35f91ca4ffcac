"""
Services module - lattice algorithms and the catalog
"""
