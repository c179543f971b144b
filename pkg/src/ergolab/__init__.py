"""
ergolab - desk-scale laboratory for weighted subsequential ergodic averages
on finite-dimensional tracial von Neumann algebras.
"""

__version__ = "0.1.0"
