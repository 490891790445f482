"""Executable Plonka-sum machinery on finite, arity-capped data.

Truncated (semi-)analytic monads from operad presentations, categories of
regular/linear polynomials, generalized Plonka sums and their
preservation checks, distributive laws of the terminal theories,
Plonka products on Kleisli categories, and exact-rational convexity
algebras.
"""

__version__ = "0.1.0"
