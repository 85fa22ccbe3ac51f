"""Noncontextuality inequalities for minimum-error state discrimination.

Modules:

- ``exactgeom``: exact rational constraints, Fourier-Motzkin projection,
  redundancy removal and linear programming.
- ``scenario``: the 3 x 4 data tables and their symmetric summaries.
- ``ncmodels``: noncontextual models over deterministic ontic vertices, the
  derived inequalities and an exact feasibility oracle.
- ``quantum``: qubit realizations in one plane of the Bloch ball.
- ``secondary``: secondary procedures built from noisy primaries.
- ``bellmap``: the equivalent Bell scenario and its CHSH inequalities.
"""

__version__ = "0.1.0"
