from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncmesd.exactgeom import (
    EQ,
    LE,
    ConstraintSystem,
    InfeasibleError,
    LinearConstraint,
    UnboundedError,
    as_rational,
    canonicalize,
    check_certificate,
    equivalent,
    fme_eliminate,
    implies,
    lp_feasible,
    lp_optimize,
    make_equalities_explicit,
    parse_constraint,
    remove_redundant,
)


def system(*lines, variables=None):
    return ConstraintSystem.build(list(lines), variables)


class TestRationals:
    def test_float_goes_through_repr(self):
        assert as_rational(0.1) == F(1, 10)

    def test_strings(self):
        assert as_rational("3/4") == F(3, 4)
        assert as_rational(" 0.25 ") == F(1, 4)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            as_rational(float("nan"))


class TestCanonicalize:
    def test_gcd_normalization(self):
        c = canonicalize(parse_constraint("2*x + 4*y <= 6"))
        assert c == canonicalize(parse_constraint("x + 2*y <= 3"))
        assert str(c) == "x + 2*y <= 3"

    def test_only_positive_scaling(self):
        c = canonicalize(parse_constraint("-x <= 0"))
        assert str(c) == "-x <= 0"

    def test_collects_terms(self):
        assert str(canonicalize(parse_constraint("x = -x + 2"))) == "x = 1"

    def test_equality_leading_coefficient_positive(self):
        assert str(canonicalize(parse_constraint("-2*x + 4*y = 2"))) == "x - 2*y = -1"

    def test_rational_coefficients_cleared(self):
        assert str(canonicalize(parse_constraint("1/2*x + 1/3*y <= 1/6"))) == "3*x + 2*y <= 1"

    def test_contradiction_marker(self):
        c = canonicalize(LinearConstraint.build({}, LE, -5))
        assert c.is_contradiction and c.const == -1
        t = canonicalize(LinearConstraint.build({"x": 0}, LE, 3))
        assert t.is_trivial and not t.is_contradiction

    @given(st.dictionaries(st.sampled_from("xyzw"), st.integers(-20, 20), min_size=1), st.integers(-20, 20),
           st.sampled_from([LE, EQ]), st.integers(1, 9))
    def test_idempotent_and_scale_invariant(self, coeffs, const, rel, k):
        c = LinearConstraint.build(coeffs, rel, const)
        once = canonicalize(c)
        assert canonicalize(once) == once
        assert canonicalize(c.scaled(F(k, 7))) == once


class TestParsing:
    def test_both_sides_and_ge(self):
        c = parse_constraint("0 <= 2 - x - y + z")
        assert c.coeffs == {"x": 1, "y": 1, "z": -1} and c.const == 2
        assert parse_constraint("x >= 1").coeffs == {"x": -1}

    def test_text_round_trip(self):
        s = system("x + 2*y <= 3", "x - y = 1/2", "-x <= 0")
        assert ConstraintSystem.from_text(s.to_text()) == s

    def test_json_round_trip(self):
        s = system("x + 2/3*y <= 3", "x - y = 1/2")
        data = s.to_json()
        assert data["vars"] == ["x", "y"]
        assert ConstraintSystem.from_json(data) == s

    def test_rejects_chains(self):
        with pytest.raises(ValueError):
            parse_constraint("0 <= x <= 1")


class TestFourierMotzkin:
    def test_interval_projection(self):
        out = fme_eliminate(system("x + y <= 1", "y >= 0", "x >= 0"), ["y"])
        assert set(out.constraints) == set(system("x <= 1", "-x <= 0").constraints)

    def test_transitivity(self):
        out = fme_eliminate(system("x - y <= 0", "y - z <= 0"), ["y"])
        assert [str(c) for c in out.constraints] == ["x - z <= 0"]

    def test_equality_substitution(self):
        out = fme_eliminate(system("x + y = 1", "y >= 0", "y <= 1/2"), ["y"])
        assert set(out.constraints) == set(system("x <= 1", "-x <= -1/2").constraints)

    def test_contradiction_flagged(self):
        out = fme_eliminate(system("x - y <= -1", "y - x <= -1"), ["y"])
        assert out.infeasible
        assert out.variables == ("x",)

    def test_unknown_variable(self):
        with pytest.raises(ValueError):
            fme_eliminate(system("x <= 1"), ["y"])

    def test_unpruned_is_equivalent(self):
        s = system("x + y + z <= 2", "x - y <= 1", "-x <= 0", "-y <= 0", "-z <= 0", "y - z <= 1/2")
        a = fme_eliminate(s, ["z", "y"])
        b = fme_eliminate(s, ["z", "y"], prune=False)
        assert equivalent(a, b)
        assert len(a.constraints) <= len(b.constraints)


class TestRedundancy:
    def test_dominated_bound(self):
        out = remove_redundant(system("x <= 1", "x <= 2", "x >= 0"))
        assert set(out.constraints) == set(system("x <= 1", "-x <= 0").constraints)

    def test_sum_of_bounds_removed(self):
        out = remove_redundant(system("x + y <= 2", "x <= 1", "y <= 1"))
        assert set(out.constraints) == set(system("x <= 1", "y <= 1").constraints)

    def test_dependent_equalities(self):
        out = remove_redundant(system("x + y = 1", "2*x + 2*y = 2", "x - y = 0"))
        assert len(out.equalities) == 2

    def test_implicit_equalities(self):
        out = make_equalities_explicit(system("x + y <= 1", "-x - y <= -1", "-x <= 0", "x <= 3"))
        assert parse_constraint("x + y = 1") in {canonicalize(c) for c in out.constraints}
        assert out.equalities


class TestLP:
    def test_infeasible_with_certificate(self):
        s = system("x >= 1", "x <= 0")
        res = lp_feasible(s)
        assert not res.feasible
        assert res.certificate == {0: 1, 1: 1}
        assert check_certificate(s, res.certificate)

    def test_feasible_witness(self):
        res = lp_feasible(system("x >= 0", "x <= 1"))
        assert res.feasible and res.witness == {"x": 0}

    def test_optimize(self):
        res = lp_optimize(system("x >= 0", "x <= 1"), {"x": 1}, "max")
        assert res.value == 1 and res.point == {"x": 1}
        assert lp_optimize(system("x >= 0", "x <= 1"), {"x": 1}, "min").value == 0

    def test_unbounded_and_infeasible_are_distinct(self):
        with pytest.raises(UnboundedError):
            lp_optimize(system("x >= 0"), {"x": 1})
        with pytest.raises(InfeasibleError):
            lp_optimize(system("x >= 1", "x <= 0"), {"x": 1})

    def test_free_variables(self):
        res = lp_optimize(system("x - y <= 1", "y <= -3"), {"x": 1})
        assert res.value == -2

    def test_implies(self):
        s = system("x <= 1", "y <= 1", "-x <= 0", "-y <= 0")
        assert implies(s, parse_constraint("x + y <= 2"))
        assert not implies(s, parse_constraint("x + y <= 3/2"))
        assert implies(system("x = 1"), parse_constraint("x = 1"))


small = st.integers(-3, 3)


@st.composite
def small_systems(draw):
    """Random bounded systems over x, y, z inside the box [-2, 2]^3."""
    cons = [f"{v} <= 2" for v in "xyz"] + [f"-{v} <= 2" for v in "xyz"]
    for _ in range(draw(st.integers(1, 4))):
        a, b, c = draw(small), draw(small), draw(small)
        k = draw(st.integers(-2, 4))
        cons.append(LinearConstraint.build({"x": a, "y": b, "z": c}, LE, k))
    return ConstraintSystem.build(cons, ("x", "y", "z"))


class TestProperties:
    @settings(max_examples=30, deadline=None)
    @given(small_systems(), st.tuples(small, small, small), st.tuples(small, small))
    def test_projection_sound_and_complete(self, s, point, probe):
        proj = fme_eliminate(s, ["z"])
        if proj.infeasible:
            assert not lp_feasible(s).feasible
            return
        # completeness: projections of feasible points satisfy the projection
        full = dict(zip("xyz", map(F, point)))
        if s.satisfied_by(full):
            assert proj.satisfied_by({"x": full["x"], "y": full["y"]})
        # soundness: a point of the projection lifts to the original system
        q = {"x": F(probe[0], 2), "y": F(probe[1], 2)}
        if proj.satisfied_by(q):
            assert lp_feasible(s.substitute(q)).feasible

    @settings(max_examples=25, deadline=None)
    @given(small_systems(), st.lists(st.tuples(small, small, small), min_size=1, max_size=4))
    def test_redundancy_removal_preserves_optima(self, s, objectives):
        r = remove_redundant(s)
        assert lp_feasible(r).feasible == lp_feasible(s).feasible
        if not lp_feasible(s).feasible:
            return
        for a, b, c in objectives:
            obj = {"x": a, "y": b, "z": c}
            assert lp_optimize(r, obj).value == lp_optimize(s, obj).value

    @settings(max_examples=15, deadline=None)
    @given(small_systems())
    def test_deterministic_regardless_of_order(self, s):
        rev = ConstraintSystem(s.variables, tuple(reversed(s.constraints)))
        assert fme_eliminate(s, ["z", "y"]) == fme_eliminate(rev, ["z", "y"])
