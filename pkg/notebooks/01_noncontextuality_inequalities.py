"""
Deriving noncontextuality inequalities
======================================

A noncontextual model of the four preparations and three binary
measurements only needs eight ontic states, one per deterministic
assignment of the three outcomes.  Each preparation is a distribution over
them, and preparation noncontextuality forces the two mixtures that are
operationally equivalent to be the same distribution.  Projecting that
polytope onto the observable parameters gives the inequalities.
"""

import time
from fractions import Fraction

from ncmesd.exactgeom import make_equalities_explicit, remove_redundant
from ncmesd.ncmodels import build_nc_system, derive_nc_inequalities, enumerate_vertices, load_golden

# %%
# The ontic vertices and the response vectors of the three effects.
verts, resp = enumerate_vertices()
for v in verts:
    print(tuple(v))
print("g_phi response:", resp.g)

# %%
# The constraint system: positivity, normalization, the noncontextuality
# equality per vertex, and the dot products that define the observables.
system = build_nc_system("symmetric", labeling=True)
print(len(system.variables), "variables,", len(system.constraints), "constraints")

# %%
# Eliminating the 32 weights exactly leaves five inequalities in (s, c, eps).
# Besides the upper bound s <= 1 - (c - eps)/2 the projection also keeps the
# lower bound s >= (c - eps)/2, which a relabeled guess would otherwise beat.
print(derive_nc_inequalities("symmetric", True).to_text())

# %%
# With eps = 0 the bound reads s <= 1 - c/2.  Restricting to the six ontic
# states an optimal discriminating measurement can use turns it into an
# equality.
print(remove_redundant(derive_nc_inequalities("symmetric", True).substitute({"eps": Fraction(0)})).to_text())
pruned = derive_nc_inequalities("symmetric", True, pruned=True).substitute({"eps": 0})
print(make_equalities_explicit(pruned).to_text())

# %%
# Without the symmetries there are nine free parameters.  The exact
# projection (well under a minute) reproduces the vendored list of 30
# inequalities.
start = time.perf_counter()
full = derive_nc_inequalities("full", True)
print(f"{len(full.constraints)} inequalities in {time.perf_counter() - start:.1f}s")
print("matches vendored list:", set(full.constraints) == set(load_golden("appendixD").constraints))
