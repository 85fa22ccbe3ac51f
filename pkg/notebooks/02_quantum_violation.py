"""
Quantum violation of the noncontextual bound
============================================

Two pure qubit states at Bloch angle theta have confusability
c = cos^2(theta/2).  The Helstrom measurement guesses correctly with
probability (1 + sqrt(1 - c))/2, which beats the noncontextual bound
1 - c/2 for every c strictly between 0 and 1.
"""

import numpy as np

from ncmesd.ncmodels import nc_feasible
from ncmesd.quantum import noisy_model, quantum_table, tradeoff_curve, tradeoff_formula

# %%
# The noise-free tradeoff.
for c, s_nc, s_q in tradeoff_curve(0.0, 10):
    print(f"c={c:.1f}  noncontextual {s_nc:.4f}  quantum {s_q:.4f}")

# %%
# With test noise eps the states are pushed apart until the noisy test
# reproduces confusability c.  The closed form agrees with this
# construction once its inner radicand is read as eps(1-eps)c(1-c).
for c, eps in [(0.5, 0.05), (0.4, 0.1), (0.7, 0.2)]:
    r = noisy_model(c, eps)
    print(f"c={c} eps={eps}: s={r.s:.6f}, closed form {tradeoff_formula(c, eps, 'geometric'):.6f}, "
          f"bound {1 - (c - eps) / 2:.6f}")

# %%
# The oracle rationalizes the Born-rule table and solves the exact LP.
verdict = nc_feasible(quantum_table(0.5, 0.1))
print("noncontextual model:", verdict.feasible)
for con in verdict.violated:
    print("  violates", con)

# %%
# The gap over the whole labeled region.
gaps = [noisy_model(c, e).s - (1 - (c - e) / 2)
        for c in np.linspace(0.05, 0.95, 19) for e in np.linspace(0, 0.3, 7) if e < c < 1 - e]
print(f"smallest gap {min(gaps):.4f}, largest {max(gaps):.4f}")
