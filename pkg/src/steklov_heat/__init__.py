"""Steklov heat invariants from the Dirichlet-to-Neumann symbol calculus."""

__version__ = "0.1.0"
