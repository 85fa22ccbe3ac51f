"""Random rational inputs shared by the test modules."""

import itertools
import random
from fractions import Fraction

from ncmesd.ncmodels import satisfies_labeling
from ncmesd.scenario import FULL_VARS, FullParameters, TableError


def random_fraction(rng: random.Random, max_den: int = 24) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)


def random_full_parameters(rng: random.Random, labeling: bool = True) -> FullParameters:
    """Uniform-ish rational parameters, redrawn until the table is valid (and
    labeled, if requested)."""
    while True:
        values = {k: random_fraction(rng) for k in FULL_VARS}
        # keep noise small so the labeling convention is often met
        for k in ("eps_phi", "eps_phibar", "eps_psi"):
            values[k] /= 3
        try:
            p = FullParameters(**values)
        except TableError:
            continue
        if labeling and not satisfies_labeling("full", values):
            continue
        return p


def random_distribution(rng: random.Random, n: int, max_den: int = 12) -> tuple[Fraction, ...]:
    raw = [rng.randint(0, max_den) * rng.randint(0, 1) for _ in range(n)]
    if not any(raw):
        raw[rng.randrange(n)] = 1
    total = sum(raw)
    return tuple(Fraction(x, total) for x in raw)


def brute_force_guess(mu_a, mu_b) -> Fraction:
    """Best success over every deterministic guess function on the vertices."""
    best = Fraction(0)
    for g in itertools.product((0, 1), repeat=len(mu_a)):
        r = sum((Fraction(a) if pick == 0 else Fraction(b) for a, b, pick in zip(mu_a, mu_b, g)), Fraction(0)) / 2
        best = max(best, r)
    return best
