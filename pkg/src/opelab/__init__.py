"""Exact-arithmetic workbench for vertex Lie algebras and their
envelopes, BRST reduction, torus-equivariant models, and operad
relation suites.  Everything is computed over Q or Q[x] for a single
named parameter; no floats anywhere."""

__version__ = "0.1.0"
