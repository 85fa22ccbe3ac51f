"""
Depolarizing noise and secondary procedures
===========================================

Depolarizing both states and effects by v shrinks every table entry towards
1/2 by the factor (1 - v)^2.  The violation survives up to a contrast loss
of 1 - 1/(cos^2(theta/2) + sin(theta/2)), largest at theta = pi/3.

Real preparations never meet the operational equivalence exactly.  Mixing
the performed (primary) procedures into secondary ones restores it, and a
pair of linear programs picks the mixtures with the largest violation.
"""

import math

import numpy as np

from ncmesd.quantum import (
    PlaneState,
    critical_depolarization,
    depolarize,
    depolarized_parameters,
    direction,
    ideal_model,
    max_noise,
    noise_curve,
)
from ncmesd.secondary import PrimarySet, optimize_alternating

# %%
# Threshold as a function of the Bloch angle.
theta, v = noise_curve(180).T
k = int(np.argmax(v))
print(f"largest threshold {v[k]:.4f} at theta = {theta[k]:.4f} (pi/3 = {math.pi / 3:.4f})")
print(f"channel parameter at the boundary for theta = pi/3: {critical_depolarization(math.pi / 3):.4f}")

# %%
# Primaries: the ideal theta = pi/3 model depolarized by v = 0.1, plus four
# extra states that only enlarge the hull.
c_q = math.cos(math.pi / 6) ** 2
m = depolarize(ideal_model(c_q), 0.1)
pad = tuple(PlaneState(0.95 * direction(a)) for a in np.pi / 4 * np.array([1, 3, 5, 7]))
sol = optimize_alternating(PrimarySet(tuple(m.states) + pad, tuple(m.effects)))
print("achieved", sol.achieved, "violation", round(float(sol.violation), 6))
print("prediction", depolarized_parameters(c_q, 0.1).violation)

# %%
# Beyond the threshold no mixture helps.
m = depolarize(ideal_model(c_q), 0.25)
sol = optimize_alternating(PrimarySet(tuple(m.states), tuple(m.effects)))
print("v = 0.25 violation", round(float(sol.violation), 6), "max_noise(pi/3) =", max_noise(math.pi / 3))
