"""Secondary procedures: convex mixtures of the performed (primary)
preparations and effects that obey the operational equivalence and the
discrimination symmetries exactly.

For fixed effects the table is linear in the preparation weights and vice
versa, so each side is a linear program that maximizes the violation
``s - 1 + (c - eps)/2`` of the noncontextual bound.  The joint problem is
bilinear; :func:`optimize_alternating` alternates the two programs.

Primaries are given either as plane vectors (states ``(x, z)``, effects
``(alpha, ax, az)``) or as raw statistics ``D[b][a]`` = probability of the
first outcome of primary effect ``b`` on primary preparation ``a``.  Effect
mixtures may also use the complements of the primary effects and the unit and
zero effects.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .exactgeom import EQ, LE, ConstraintSystem, InfeasibleError, LinearConstraint, lp_optimize
from .quantum import PlaneEffect, PlaneState
from .scenario import DEFAULT_TOL, DataTable, SymmetricSummary, TableError, extract_symmetric

GEOMETRIC = "geometric"
RAW = "raw-statistics"


class SecondaryError(ValueError):
    """Empty input or an unreachable constraint."""


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _array(rows, exact: bool) -> np.ndarray:
    if exact:
        return np.array([[Fraction(x) for x in r] for r in rows], dtype=object)
    return np.array(rows, dtype=float)


# ---------------------------------------------------------------------------
# linear programs


def _solve(objective, eqs, ineqs, n, exact):
    """Maximize ``objective . x`` over ``x >= 0`` with ``A x = b`` rows in
    ``eqs`` and ``A x <= b`` rows in ``ineqs``.  Returns ``x`` or None."""
    if exact:
        names = [f"x{i}" for i in range(n)]
        cons = [LinearConstraint.build({names[i]: -1}, LE, 0) for i in range(n)]
        for rows, rel in ((eqs, EQ), (ineqs, LE)):
            for a, b in rows:
                cons.append(LinearConstraint.build({names[i]: q for i, q in enumerate(a) if q}, rel, b))
        system = ConstraintSystem.build(cons, names)
        try:
            res = lp_optimize(system, {names[i]: q for i, q in enumerate(objective) if q}, "max")
        except InfeasibleError:
            return None
        return np.array([res.point[v] for v in names], dtype=object)
    kw = {}
    if eqs:
        kw["A_eq"] = np.array([a for a, _ in eqs], dtype=float)
        kw["b_eq"] = np.array([b for _, b in eqs], dtype=float)
    if ineqs:
        kw["A_ub"] = np.array([a for a, _ in ineqs], dtype=float)
        kw["b_ub"] = np.array([b for _, b in ineqs], dtype=float)
    res = linprog(
        -np.asarray(objective, dtype=float),
        bounds=(0, None),
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
        **kw,
    )
    if res.status == 2:
        return None
    if res.status != 0:
        raise SecondaryError(f"LP solver failed: {res.message}")
    return np.clip(res.x, 0, None)


def _symmetric_form(T):
    """Named linear conditions on table entries ``T[j][P]`` (each an affine
    pair ``(coeffs, const)``) making the table symmetric and labeled, plus
    the violation objective."""

    def lin(*terms, const=0):
        coeffs = sum(q * T[j][p][0] for q, (j, p) in terms)
        k = const + sum(q * T[j][p][1] for q, (j, p) in terms)
        return coeffs, k

    # each entry is (name, expression == 0)
    sym = [
        ("success-rate symmetry: 1 - p(g_phi|M_d,P_psi) = s", lin((-1, (2, 1)), (-1, (2, 0)), const=1)),
        ("success-rate symmetry: 1 - p(g_phi|M_d,P_phibar) = s", lin((-1, (2, 2)), (-1, (2, 0)), const=1)),
        ("success-rate symmetry: p(g_phi|M_d,P_psibar) = s", lin((1, (2, 3)), (-1, (2, 0)))),
        ("confusability symmetry: p(psi|M_psi,P_phi) = c", lin((1, (1, 0)), (-1, (0, 1)))),
        ("confusability symmetry: 1 - p(phi|M_phi,P_psibar) = c", lin((-1, (0, 3)), (-1, (0, 1)), const=1)),
        ("confusability symmetry: 1 - p(psi|M_psi,P_phibar) = c", lin((-1, (1, 2)), (-1, (0, 1)), const=1)),
        ("noise symmetry: p(psi|M_psi,P_psi) = 1 - eps", lin((1, (1, 1)), (-1, (0, 0)))),
        ("noise symmetry: 1 - p(psi|M_psi,P_psibar) = 1 - eps", lin((-1, (1, 3)), (-1, (0, 0)), const=1)),
        ("noise symmetry: 1 - p(phi|M_phi,P_phibar) = 1 - eps", lin((-1, (0, 2)), (-1, (0, 0)), const=1)),
    ]
    # each entry is (name, expression <= 0)
    labeling = [
        ("labeling eps <= c", lin((-1, (0, 0)), (-1, (0, 1)), const=1)),
        ("labeling c <= 1 - eps", lin((1, (0, 1)), (-1, (0, 0)))),
    ]
    # s - 1 + (c - eps)/2 with eps = 1 - p(phi|M_phi,P_phi)
    half = Fraction(1, 2) if T[0][0][0].dtype == object else 0.5
    violation = lin((1, (2, 0)), (half, (0, 1)), (half, (0, 0)), const=-1 - half)
    return sym, labeling, violation


def _mixture_lp(T, groups, n, exact, extra_eqs=(), objective_T=None):
    """Maximize the violation of the table ``T`` (affine in ``n`` weights)
    subject to the convexity ``groups`` (index lists summing to one),
    ``extra_eqs``, the symmetries and the labeling.  On infeasibility the
    first constraint whose addition breaks feasibility is named."""
    one = Fraction(1) if exact else 1.0
    sym, labeling, violation = _symmetric_form(T)
    if objective_T is not None:
        violation = _symmetric_form(objective_T)[2]
    norm = []
    for g in groups:
        a = np.zeros(n, dtype=object if exact else float)
        a[list(g)] = one
        norm.append(("normalization", (a, one)))
    named_eqs = norm + list(extra_eqs) + [(name, (a, -k)) for name, (a, k) in sym]
    named_ineqs = [(name, (a, -k)) for name, (a, k) in labeling]
    x = _solve(violation[0], [c for _, c in named_eqs], [c for _, c in named_ineqs], n, exact)
    if x is not None:
        return x
    eqs, ineqs = [], []
    for kind, name, con in [("eq", nm, c) for nm, c in named_eqs] + [("le", nm, c) for nm, c in named_ineqs]:
        (eqs if kind == "eq" else ineqs).append(con)
        if _solve(np.zeros(n), eqs, ineqs, n, exact) is None:
            raise SecondaryError(f"no secondary procedures in the primaries' hull satisfy: {name}")
    raise SecondaryError("secondary LP infeasible")


# ---------------------------------------------------------------------------
# primaries


@dataclass(frozen=True)
class PrimarySet:
    """Performed preparations and effects.

    ``provenance`` is ``"geometric"`` (``preparations`` are
    :class:`PlaneState`, ``effects`` :class:`PlaneEffect`) or
    ``"raw-statistics"`` (``statistics[b][a]``, one row per primary effect,
    one column per primary preparation).  The first four preparations and
    first three effects are the nominal P_phi, P_psi, P_phibar, P_psibar and
    phi|M_phi, psi|M_psi, g_phi|M_d.
    """

    preparations: tuple = ()
    effects: tuple = ()
    provenance: str = GEOMETRIC
    statistics: tuple = ()

    def __post_init__(self):
        if self.provenance == GEOMETRIC:
            object.__setattr__(self, "preparations", tuple(self.preparations))
            object.__setattr__(self, "effects", tuple(self.effects))
            if not all(isinstance(p, PlaneState) for p in self.preparations):
                raise SecondaryError("geometric primaries need PlaneState preparations")
            if not all(isinstance(e, PlaneEffect) for e in self.effects):
                raise SecondaryError("geometric primaries need PlaneEffect effects")
            n_prep, n_eff = len(self.preparations), len(self.effects)
        elif self.provenance == RAW:
            stats = tuple(tuple(r) for r in self.statistics)
            if not stats or len({len(r) for r in stats}) != 1:
                raise SecondaryError("raw statistics must be a nonempty rectangular matrix")
            object.__setattr__(self, "statistics", stats)
            n_eff, n_prep = len(stats), len(stats[0])
        else:
            raise SecondaryError(f"unknown provenance {self.provenance!r}")
        if n_prep < 4 or n_eff < 3:
            raise SecondaryError("need at least four primary preparations and three primary effects")

    @classmethod
    def from_statistics(cls, statistics: Sequence[Sequence]) -> "PrimarySet":
        return cls(provenance=RAW, statistics=tuple(tuple(r) for r in statistics))

    @property
    def exact(self) -> bool:
        return self.provenance == RAW and all(_is_exact(x) for r in self.statistics for x in r)

    @property
    def n_preparations(self) -> int:
        return len(self.preparations) if self.provenance == GEOMETRIC else len(self.statistics[0])

    @property
    def n_ingredients(self) -> int:
        """Effect ingredients: the primaries, their complements, unit, zero."""
        n = len(self.effects) if self.provenance == GEOMETRIC else len(self.statistics)
        return 2 * n + 2

    def ingredient_effects(self) -> list[PlaneEffect]:
        if self.provenance != GEOMETRIC:
            raise SecondaryError("raw-statistics primaries have no plane effects")
        return list(self.effects) + [e.complement() for e in self.effects] + [PlaneEffect.unit(), PlaneEffect.zero()]

    def response(self) -> np.ndarray:
        """``G[b][a]``: probability of ingredient ``b`` on primary ``a``."""
        if self.provenance == GEOMETRIC:
            rows = [[e.bias + float(np.dot(e.bloch_part, p.bloch)) for p in self.preparations] for e in self.ingredient_effects()]
            return np.array(rows, dtype=float)
        D = _array(self.statistics, self.exact)
        one = Fraction(1) if self.exact else 1.0
        ones = np.full((1, D.shape[1]), one, dtype=D.dtype)
        return np.vstack([D, ones - D, ones, ones * 0])

    def representation(self) -> np.ndarray:
        """Vectors on which the operational equivalence is imposed: Bloch
        vectors, or each preparation's statistics column."""
        if self.provenance == GEOMETRIC:
            return np.array([p.bloch for p in self.preparations], dtype=float)
        return _array(self.statistics, self.exact).T

    def to_json(self) -> dict:
        if self.provenance == RAW:
            return {"statistics": [[str(x) if isinstance(x, Fraction) else x for x in r] for r in self.statistics]}
        return {
            "states": [{"x": float(p.bloch[0]), "z": float(p.bloch[1])} for p in self.preparations],
            "effects": [
                {"alpha": e.bias, "ax": float(e.bloch_part[0]), "az": float(e.bloch_part[1])} for e in self.effects
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "PrimarySet":
        if isinstance(data, str):
            data = json.loads(data)
        if "statistics" in data:
            return cls.from_statistics([[Fraction(x) if isinstance(x, str) else x for x in r] for r in data["statistics"]])
        try:
            states = [PlaneState((s["x"], s["z"])) for s in data["states"]]
            effects = [PlaneEffect(e["alpha"], (e["ax"], e["az"])) for e in data["effects"]]
        except KeyError as exc:
            raise SecondaryError(f"primary set JSON lacks field {exc}") from exc
        return cls(tuple(states), tuple(effects), GEOMETRIC)


# ---------------------------------------------------------------------------
# hull membership


@dataclass(frozen=True)
class HullVerdict:
    member: bool
    weights: tuple | None = None

    def __bool__(self) -> bool:
        return self.member


def _as_point(x):
    if isinstance(x, PlaneState):
        return list(x.bloch)
    if isinstance(x, PlaneEffect):
        return [x.bias, *x.bloch_part]
    return list(x)


def hull_membership(target, points: Sequence, tol: float = DEFAULT_TOL) -> HullVerdict:
    """Is ``target`` a convex combination of ``points``?

    Points may be :class:`PlaneState`, :class:`PlaneEffect` or plain
    coordinate sequences.  All-rational input is decided exactly and the
    weights reproduce the target exactly; otherwise the reconstruction is
    checked within ``tol``.
    """
    if len(points) == 0:
        raise SecondaryError("hull of an empty set")
    t = _as_point(target)
    pts = [_as_point(p) for p in points]
    if any(len(p) != len(t) for p in pts):
        raise SecondaryError("target and points have different dimensions")
    exact = all(_is_exact(x) for x in t) and all(_is_exact(x) for p in pts for x in p)
    V = _array(pts, exact).T
    tv = _array([t], exact)[0]
    one = Fraction(1) if exact else 1.0
    eqs = [(V[i], tv[i]) for i in range(len(t))]
    eqs.append((np.full(len(pts), one, dtype=V.dtype), one))
    w = _solve(np.zeros(len(pts), dtype=V.dtype), eqs, [], len(pts), exact)
    if w is None:
        return HullVerdict(False)
    if not exact:
        w = w / w.sum()
        if np.max(np.abs(V @ w - tv)) > tol:
            return HullVerdict(False)
    return HullVerdict(True, tuple(w))


# ---------------------------------------------------------------------------
# secondary procedures


def _table_affine(coef: np.ndarray, n: int, exact: bool):
    """Wrap a (3, 4, n) coefficient tensor as affine entries."""
    zero = Fraction(0) if exact else 0.0
    return [[(coef[j, p], zero) for p in range(4)] for j in range(3)]


def _prep_problem(p: PrimarySet, effect_weights):
    exact = p.exact
    G = p.response()
    U = _array(effect_weights, exact)
    E = U @ G  # (3, m): secondary effects on primary preparations
    m = G.shape[1]
    n = 4 * m
    coef = np.zeros((3, 4, n), dtype=object if exact else float)
    for P in range(4):
        coef[:, P, P * m:(P + 1) * m] = E
    R = p.representation()
    eqs = []
    for k in range(R.shape[1]):
        a = np.zeros(n, dtype=coef.dtype)
        a[0:m] += R[:, k]
        a[2 * m:3 * m] += R[:, k]
        a[m:2 * m] -= R[:, k]
        a[3 * m:4 * m] -= R[:, k]
        eqs.append(("operational equivalence", (a, a[0] * 0)))
    return coef, n, m, eqs


def find_secondary_preparations(p: PrimarySet, effect_weights=None, _objective_weights=None) -> tuple:
    """Four convex weight vectors over the primary preparations.

    The secondary preparations obey the operational equivalence exactly and,
    with the secondary effects given by ``effect_weights`` (default: the
    three nominal primary effects), make the table symmetric and labeled
    while maximizing the violation.
    """
    if effect_weights is None:
        effect_weights = nominal_effect_weights(p)
    coef, n, m, eqs = _prep_problem(p, effect_weights)
    T = _table_affine(coef, n, p.exact)
    objective_T = None
    if _objective_weights is not None:
        objective_T = _table_affine(_prep_problem(p, _objective_weights)[0], n, p.exact)
    x = _mixture_lp(T, [range(P * m, (P + 1) * m) for P in range(4)], n, p.exact, eqs, objective_T)
    return tuple(tuple(x[P * m:(P + 1) * m]) for P in range(4))


def find_secondary_effects(p: PrimarySet, preparation_weights) -> tuple:
    """Three convex weight vectors over the effect ingredients (primary
    effects, their complements, unit, zero) maximizing the violation for
    the fixed secondary preparations, with the symmetries enforced."""
    exact = p.exact
    G = p.response()
    W = _array(preparation_weights, exact)
    F = G @ W.T  # (k, 4): ingredients on secondary preparations
    k = G.shape[0]
    n = 3 * k
    coef = np.zeros((3, 4, n), dtype=object if exact else float)
    for j in range(3):
        coef[j, :, j * k:(j + 1) * k] = F.T
    T = _table_affine(coef, n, exact)
    x = _mixture_lp(T, [range(j * k, (j + 1) * k) for j in range(3)], n, exact)
    weights = tuple(tuple(x[j * k:(j + 1) * k]) for j in range(3))
    sol = _evaluate(p, preparation_weights, weights)
    if sol.violation <= 0:
        warnings.warn(f"secondary effects give no violation ({float(sol.violation):.3g})", stacklevel=2)
    return weights


def nominal_effect_weights(p: PrimarySet) -> tuple:
    """Weight 1 on each of the first three primary effects."""
    one, zero = (Fraction(1), Fraction(0)) if p.exact else (1.0, 0.0)
    k = p.n_ingredients
    return tuple(tuple(one if b == j else zero for b in range(k)) for j in range(3))


def trivial_effect_weights(p: PrimarySet) -> tuple:
    """Each secondary effect half unit, half zero: the coin-flip measurement."""
    half, zero = (Fraction(1, 2), Fraction(0)) if p.exact else (0.5, 0.0)
    k = p.n_ingredients
    return tuple(tuple(half if b >= k - 2 else zero for b in range(k)) for _ in range(3))


@dataclass(frozen=True)
class SecondarySolution:
    """Secondary weights with the symmetric summary they achieve."""

    preparation_weights: tuple
    effect_weights: tuple
    achieved: SymmetricSummary
    violation: object
    table: DataTable
    rounds: int = 0

    def to_json(self) -> dict:
        def enc(x):
            return str(x) if isinstance(x, Fraction) else float(x)

        return {
            "preparation_weights": [[enc(x) for x in w] for w in self.preparation_weights],
            "effect_weights": [[enc(x) for x in w] for w in self.effect_weights],
            "achieved": {k: enc(v) for k, v in self.achieved.as_dict().items()},
            "violation": enc(self.violation),
            "rounds": self.rounds,
        }


def secondary_table(p: PrimarySet, preparation_weights, effect_weights) -> DataTable:
    """Data table of the secondary procedures (exact for rational input)."""
    G = p.response()
    W = _array(preparation_weights, p.exact)
    U = _array(effect_weights, p.exact)
    T = U @ G @ W.T
    if not p.exact:
        T = np.clip(T.astype(float), 0.0, 1.0)
    return DataTable(tuple(tuple(r) for r in T.tolist()), True)


def secondary_states(p: PrimarySet, preparation_weights) -> list[PlaneState]:
    R = p.representation()
    if p.provenance != GEOMETRIC:
        raise SecondaryError("raw-statistics primaries have no plane states")
    return [PlaneState(np.asarray(w, dtype=float) @ R) for w in preparation_weights]


def secondary_effects(p: PrimarySet, effect_weights) -> list[PlaneEffect]:
    V = np.array([e.as_vector() for e in p.ingredient_effects()])
    out = []
    for w in effect_weights:
        a, ax, az = np.asarray(w, dtype=float) @ V
        out.append(PlaneEffect(a, (ax, az)))
    return out


def _evaluate(p: PrimarySet, prep_w, eff_w, rounds: int = 0) -> SecondarySolution:
    table = secondary_table(p, prep_w, eff_w)
    try:
        x = extract_symmetric(table)
    except TableError as exc:
        raise SecondaryError(f"secondary table is not symmetric: {exc}") from exc
    return SecondarySolution(prep_w, eff_w, x, x.violation, table, rounds)


def optimize_alternating(p: PrimarySet, rounds: int = 10) -> SecondarySolution:
    """Alternate the preparation and effect programs.

    A round solves the preparation LP under the current effects and then the
    effect LP under the new preparations; each keeps the previous solution
    feasible, so the violation never decreases.  Stops at a fixed point or
    after ``rounds`` rounds.  If the nominal effects admit no symmetric
    preparations, the first round starts from the coin-flip measurement and
    ranks preparations by the nominal effects.  ``rounds`` of the result is
    the round that first reached it.
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    eff_w = nominal_effect_weights(p)
    try:
        prep_w = find_secondary_preparations(p, eff_w)
    except SecondaryError:
        prep_w = find_secondary_preparations(p, trivial_effect_weights(p), _objective_weights=eff_w)
    best = None
    step_tol = 0 if p.exact else 1e-12
    for r in range(1, rounds + 1):
        if r > 1:
            prep_w = find_secondary_preparations(p, eff_w)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            eff_w = find_secondary_effects(p, prep_w)
        sol = _evaluate(p, prep_w, eff_w, r)
        if best is not None and sol.violation <= best.violation + step_tol:
            break
        best = sol
    if best.violation <= 0:
        warnings.warn(f"secondary procedures give no violation ({float(best.violation):.3g})", stacklevel=2)
    return best
