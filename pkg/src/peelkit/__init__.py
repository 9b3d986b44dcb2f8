"""Certified polytope peeling and a symbolic replay of the lattice argument built on it."""
__version__ = "0.1.0"
