import math
import warnings
from fractions import Fraction as F

import numpy as np
import pytest

from ncmesd.ncmodels import nc_feasible
from ncmesd.quantum import (
    PlaneEffect,
    PlaneState,
    QubitModel,
    depolarize,
    depolarized_parameters,
    direction,
    ideal_model,
)
from ncmesd.scenario import SymmetricSummary, build_table_symmetric, extract_symmetric
from ncmesd.secondary import (
    PrimarySet,
    SecondaryError,
    find_secondary_effects,
    find_secondary_preparations,
    hull_membership,
    nominal_effect_weights,
    optimize_alternating,
    secondary_effects,
    secondary_states,
)

THETA = math.pi / 3
C_Q = math.cos(THETA / 2) ** 2
PADDING = tuple(PlaneState(0.95 * direction(a)) for a in (math.pi / 4, 3 * math.pi / 4, 5 * math.pi / 4, 7 * math.pi / 4))


def rotated(m: QubitModel, angle: float) -> QubitModel:
    c, s = math.cos(angle), math.sin(angle)
    R = np.array([[c, s], [-s, c]])
    states = [PlaneState(R @ x.bloch) for x in m.states]
    effects = [PlaneEffect(e.bias, R @ e.bloch_part) for e in m.effects]
    return QubitModel(*states, *effects)


def primaries(v: float, pad=(), rotation: float = 0.0) -> PrimarySet:
    m = depolarize(rotated(ideal_model(C_Q), rotation), v)
    return PrimarySet(tuple(m.states) + tuple(pad), tuple(m.effects))


def quiet(fn, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args, **kwargs)


class TestHull:
    def test_member(self):
        pts = [(0, 0), (1, 0), (0, 1)]
        v = hull_membership((1, 0), pts)
        assert v.member and v.weights == (0, 1, 0)

    def test_midpoint(self):
        v = hull_membership((F(1, 2), F(1, 2)), [(1, 0), (0, 1)])
        assert v.weights == (F(1, 2), F(1, 2))

    def test_outside(self):
        assert not hull_membership((1, 1), [(0, 0), (1, 0), (0, 1)])

    def test_depolarized_state_in_square(self):
        square = [PlaneState(0.95 * direction(a)) for a in (0, THETA, math.pi, math.pi + THETA)]
        target = PlaneState(0.9 * direction(THETA))
        v = hull_membership(target, square)
        assert v.member
        np.testing.assert_allclose(np.array(v.weights) @ np.array([p.bloch for p in square]), target.bloch, atol=1e-9)

    def test_effects(self):
        e = PlaneEffect.projector(0.3)
        assert hull_membership(PlaneEffect(0.5, 0.5 * e.bloch_part), [e, PlaneEffect.unit().complement(), e.complement()])

    def test_empty(self):
        with pytest.raises(SecondaryError):
            hull_membership((0, 0), [])


class TestPrimarySet:
    def test_minimum_sizes(self):
        with pytest.raises(SecondaryError):
            PrimarySet(tuple(ideal_model(0.5).states[:3]), tuple(ideal_model(0.5).effects))

    def test_json_round_trip(self):
        p = primaries(0.1, PADDING)
        q = PrimarySet.from_json(p.to_json())
        np.testing.assert_allclose(q.representation(), p.representation())
        np.testing.assert_allclose(q.response(), p.response())

    def test_raw_json(self):
        p = PrimarySet.from_statistics([[F(1, 2)] * 4] * 3)
        assert p.exact and PrimarySet.from_json(p.to_json()) == p


class TestSecondary:
    def test_identity_for_ideal_primaries(self):
        p = primaries(0.0)
        sol = optimize_alternating(p)
        assert sol.rounds == 1
        assert sol.violation == pytest.approx(depolarized_parameters(C_Q, 0).violation, abs=1e-9)
        np.testing.assert_allclose(sol.preparation_weights, np.eye(4), atol=1e-9)

    def test_recovers_depolarized_ideals(self):
        v = 0.1
        p = primaries(v, PADDING)
        sol = optimize_alternating(p)
        expected = depolarized_parameters(C_Q, v)
        assert sol.violation == pytest.approx(expected.violation, abs=1e-9)
        target = depolarize(ideal_model(C_Q), v)
        for got, want in zip(secondary_states(p, sol.preparation_weights), target.states):
            np.testing.assert_allclose(got.bloch, want.bloch, atol=1e-9)

    def test_below_threshold_noise_gives_no_violation(self):
        with pytest.warns(UserWarning, match="no violation"):
            sol = optimize_alternating(primaries(0.25))
        assert sol.violation <= 1e-9

    def test_trivial_effects_warn(self):
        m = ideal_model(C_Q)
        coin = PlaneEffect(0.5, (0.0, 0.0))
        p = PrimarySet(tuple(m.states), (coin, coin, coin))
        prep_w = quiet(find_secondary_preparations, p)
        with pytest.warns(UserWarning, match="no violation"):
            find_secondary_effects(p, prep_w)

    def test_effects_recovered(self):
        p = primaries(0.1, PADDING)
        sol = optimize_alternating(p)
        target = depolarize(ideal_model(C_Q), 0.1)
        for got, want in zip(secondary_effects(p, sol.effect_weights), target.effects):
            np.testing.assert_allclose(got.as_vector(), want.as_vector(), atol=1e-9)

    def test_monotone_in_rounds(self):
        p = primaries(0.15, PADDING, rotation=0.2)
        values = [quiet(optimize_alternating, p, r).violation for r in range(1, 5)]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_rotation_allows_less_noise(self):
        baseline = optimize_alternating(primaries(0.1, PADDING))
        rot = optimize_alternating(primaries(0.05, PADDING, rotation=0.4))
        assert rot.violation >= baseline.violation

    def test_named_infeasibility(self):
        states = tuple(PlaneState(0.9 * direction(a)) for a in (-0.3, -0.1, 0.1, 0.3))
        m = ideal_model(C_Q)
        p = PrimarySet(states, tuple(m.effects))
        with pytest.raises(SecondaryError, match="primaries' hull satisfy: .*symmetry"):
            find_secondary_preparations(p, nominal_effect_weights(p))

    def test_deterministic(self):
        p = primaries(0.1, PADDING)
        assert optimize_alternating(p).to_json() == optimize_alternating(p).to_json()


class TestRawStatistics:
    def raw(self, s, c, eps, extra):
        rows = [list(r) for r in build_table_symmetric(SymmetricSummary(s, c, eps)).rows]
        for col in extra:
            for r, x in zip(rows, col):
                r.append(x)
        return PrimarySet.from_statistics(rows)

    def test_exact_tables_are_symmetric(self):
        extra = [(F(1, 2), F(1, 3), F(2, 3)), (F(1, 5), F(4, 5), F(1, 2))]
        for s, c, eps in [(F(9, 10), F(1, 4), F(1, 10)), (F(7, 10), F(1, 2), F(1, 10)), (F(3, 5), F(1, 2), F(1, 4))]:
            p = self.raw(s, c, eps, extra)
            sol = quiet(optimize_alternating, p)
            assert sol.table.exact
            x = extract_symmetric(sol.table, 0)
            assert x.s - 1 + (x.c - x.eps) / 2 == sol.violation
            assert nc_feasible(sol.table).feasible == (sol.violation <= 0)
            assert sol.violation >= SymmetricSummary(s, c, eps).violation

    def test_exact_weights_are_convex(self):
        p = self.raw(F(9, 10), F(1, 4), F(1, 10), [(F(1, 2), F(1, 2), F(1, 2))])
        sol = quiet(optimize_alternating, p)
        for w in sol.preparation_weights + sol.effect_weights:
            assert all(isinstance(x, F) and x >= 0 for x in w) and sum(w) == 1
