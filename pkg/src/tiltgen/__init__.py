"""Exact line bundle cohomology and tilting-collection checks.

The modules build on each other in this order: ``lattice`` (Picard lattices),
``geometry`` (spaces), ``cohomology`` (engines and the toric oracle),
``sheaves`` (Ext groups), ``tilting`` (collection reports) and ``cli``.
"""
__version__ = "0.1.0"
