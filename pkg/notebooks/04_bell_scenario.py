"""
The equivalent Bell scenario
============================

Reading S_1 and S_2 as measurements that steer a partner into P_phi /
P_phibar and P_psi / P_psibar turns the discrimination data into
correlators of a 2 x 3 Bell scenario.  Under the symmetries the CHSH
expression equals 4s + 2c - 2eps - 2, so CHSH <= 2 is exactly the
noncontextual bound.
"""

import math
from fractions import Fraction

from ncmesd.bellmap import bell_to_mesd, chsh_value, local_polytope, mesd_to_bell
from ncmesd.exactgeom import equivalent
from ncmesd.ncmodels import derive_nc_inequalities
from ncmesd.scenario import SymmetricSummary

# %%
x = SymmetricSummary(Fraction(3, 4), Fraction(1, 2), Fraction(0))
b = mesd_to_bell(x)
print(b.e, "CHSH =", chsh_value(b, (1, 3)))

s_q = (1 + math.sqrt(0.5)) / 2
print("ideal qubit CHSH:", chsh_value(mesd_to_bell(SymmetricSummary(s_q, 0.5, 0))))

# %%
# The map inverts on symmetric correlators.
print(bell_to_mesd(b).summary)

# %%
# Without labeling, the noncontextual polytope is positivity plus all 24
# CHSH inequalities of the scenario.
print("symmetric case equal:", equivalent(derive_nc_inequalities("symmetric", False), local_polytope("symmetric")))
