import json
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from _sampling import random_full_parameters

from ncmesd.bellmap import (
    BellCorrelators,
    BellError,
    all_chsh_values,
    bell_to_mesd,
    chsh_family,
    chsh_value,
    local_polytope,
    mesd_to_bell,
    table_correlators,
)
from ncmesd.exactgeom import equivalent
from ncmesd.ncmodels import derive_nc_inequalities
from ncmesd.quantum import ideal_model, success_from_confusability, table_from_model
from ncmesd.scenario import SymmetricSummary, build_table_full, build_table_symmetric


def labeled_grid(n):
    for i in range(n + 1):
        for j in range(n + 1):
            for k in range(n + 1):
                s, c, eps = F(i, n), F(j, n), F(k, n)
                if eps <= c <= 1 - eps:
                    yield SymmetricSummary(s, c, eps)


class TestForwardMap:
    def test_deterministic_case(self):
        b = mesd_to_bell(SymmetricSummary(1, 0, 0))
        assert (b(1, 3), b(2, 3), b(1, 2), b(1, 1)) == (1, -1, -1, 1)

    def test_uniform_noise(self):
        b = mesd_to_bell(SymmetricSummary(F(1, 2), F(1, 2), F(1, 2)))
        assert all(x == 0 for r in b.e for x in r)

    def test_ideal_quantum(self):
        c_q = 0.3
        s_q = success_from_confusability(c_q)
        b = mesd_to_bell(SymmetricSummary(s_q, c_q, 0))
        assert b(1, 1) == b(2, 2) == 1
        np.testing.assert_allclose([b(1, 2), b(1, 3), b(2, 3)], [2 * c_q - 1, 2 * s_q - 1, 1 - 2 * s_q])

    def test_agrees_with_table_correlators(self):
        x = SymmetricSummary(F(4, 5), F(3, 10), F(1, 10))
        assert table_correlators(build_table_symmetric(x).rows) == mesd_to_bell(x)

    def test_bounds(self):
        for x in labeled_grid(6):
            b = mesd_to_bell(x)
            assert all(-1 <= v <= 1 for r in b.e for v in r)

    def test_rejects_out_of_range(self):
        with pytest.raises(BellError):
            BellCorrelators(((1, 0, 0), (0, 0, F(3, 2))))


class TestCHSH:
    def test_expansion(self):
        for x in labeled_grid(5):
            assert chsh_value(mesd_to_bell(x), (1, 3)) == 4 * x.s + 2 * x.c - 2 * x.eps - 2

    def test_examples(self):
        assert chsh_value(mesd_to_bell(SymmetricSummary(1, 0, 0))) == 2
        s = (1 + math.sqrt(0.5)) / 2
        assert chsh_value(mesd_to_bell(SymmetricSummary(s, 0.5, 0))) == pytest.approx(1 + math.sqrt(2))

    def test_invalid_pairing(self):
        with pytest.raises(BellError):
            chsh_value(mesd_to_bell(SymmetricSummary(1, 0, 0)), (3, 1))

    def test_family_size(self):
        fam = chsh_family()
        assert len(fam) == 24
        assert len({tuple(sorted(w.items())) for _, _, w in fam}) == 24

    def test_family_contains_pairing_values(self):
        b = mesd_to_bell(SymmetricSummary(F(7, 8), F(1, 4), F(1, 8)))
        assert chsh_value(b, (1, 3)) in all_chsh_values(b)

    def test_equivalence_with_bound(self):
        for x in labeled_grid(12):
            b = mesd_to_bell(x)
            assert (chsh_value(b, (1, 3)) <= 2) == (x.violation <= 0)
            assert (chsh_value(b, (2, 3)) <= 2) == (x.violation <= 0)


class TestInverse:
    def test_round_trip(self):
        for x in labeled_grid(4):
            r = bell_to_mesd(mesd_to_bell(x))
            assert r.summary == x and all(v == 0 for v in r.residuals.values())

    def test_inconsistent(self):
        b = BellCorrelators(((1.0, 0.0, 0.9), (0.0, 1.0, -0.8)))
        with pytest.raises(BellError, match="s1 m3"):
            bell_to_mesd(b, 1e-9)

    def test_ideal_quantum_table(self):
        c_q = 0.5
        r = bell_to_mesd(table_correlators(table_from_model(ideal_model(c_q)).rows))
        np.testing.assert_allclose(
            (r.summary.s, r.summary.c, r.summary.eps), (success_from_confusability(c_q), c_q, 0), atol=1e-9
        )

    def test_json_round_trip(self):
        b = mesd_to_bell(SymmetricSummary(F(3, 4), F(1, 3), 0))
        assert BellCorrelators.from_json(json.loads(json.dumps(b.to_json()))) == b


class TestLocalPolytope:
    def test_symmetric_reduction(self):
        assert equivalent(local_polytope("symmetric"), derive_nc_inequalities("symmetric", False))

    def test_asymmetric_tables(self):
        rng = random.Random(5)
        poly = local_polytope("full")
        for _ in range(200):
            p = random_full_parameters(rng, labeling=False)
            b = table_correlators(build_table_full(p).rows)
            assert poly.satisfied_by(p.as_dict()) == all(v <= 2 for v in all_chsh_values(b))

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            local_polytope("bogus")
