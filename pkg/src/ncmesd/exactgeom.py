"""Exact rational linear algebra over named variables.

Constraints are affine relations ``sum(coeff * var) <= const`` or ``= const``
with :class:`fractions.Fraction` coefficients.  The module provides canonical
forms, Fourier-Motzkin projection with LP-certified redundancy removal, and a
rational two-phase simplex used for feasibility and optimization.  The
projection and LP code is exact throughout; floats only enter through
:func:`as_rational` and the optional tolerance of ``satisfied_by``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

import gmpy2

LE = "<="
EQ = "="

Rational = Fraction


def as_rational(value) -> Fraction:
    """Convert ints, Fractions, ``"p/q"``/decimal strings or floats exactly.

    Floats go through their shortest decimal repr, so ``0.1`` becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"cannot rationalize {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    # numpy scalars and the like
    if hasattr(value, "item"):
        return as_rational(value.item())
    return Fraction(value)


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coeff * var) rel const`` with ``rel`` one of ``<=`` or ``=``.

    ``terms`` is kept sorted by variable name with no zero coefficients, so
    two constraints with the same content compare equal.
    """

    terms: tuple[tuple[str, Fraction], ...]
    rel: str
    const: Fraction

    @classmethod
    def build(cls, coeffs: Mapping[str, object], rel: str = LE, const: object = 0) -> "LinearConstraint":
        if rel == ">=":
            return cls.build({k: -as_rational(v) for k, v in coeffs.items()}, LE, -as_rational(const))
        if rel not in (LE, EQ):
            raise ValueError(f"unknown relation {rel!r}")
        terms = {}
        for name, value in coeffs.items():
            q = as_rational(value)
            if q:
                terms[name] = q
        return cls(tuple(sorted(terms.items())), rel, as_rational(const))

    @property
    def coeffs(self) -> dict[str, Fraction]:
        return dict(self.terms)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.terms)

    def coeff(self, name: str) -> Fraction:
        for n, q in self.terms:
            if n == name:
                return q
        return Fraction(0)

    @property
    def is_trivial(self) -> bool:
        """No variables left (either a tautology or a contradiction)."""
        return not self.terms

    @property
    def is_contradiction(self) -> bool:
        if self.terms:
            return False
        return self.const < 0 if self.rel == LE else self.const != 0

    def lhs(self, point: Mapping[str, object]) -> Fraction:
        return sum((q * as_rational(point[n]) for n, q in self.terms), Fraction(0))

    def slack(self, point: Mapping[str, object]) -> Fraction:
        """``const - lhs``; nonnegative (zero for equalities) when satisfied."""
        return self.const - self.lhs(point)

    def satisfied_by(self, point: Mapping[str, object], tol: float = 0) -> bool:
        """Exact test by default; ``tol`` allows slack for real-valued points."""
        s = self.slack(point)
        return s >= -tol if self.rel == LE else abs(s) <= tol

    def scaled(self, factor: Fraction) -> "LinearConstraint":
        if factor <= 0 and self.rel == LE:
            raise ValueError("inequalities may only be scaled by positive factors")
        return LinearConstraint(tuple((n, q * factor) for n, q in self.terms), self.rel, self.const * factor)

    def substitute(self, values: Mapping[str, object]) -> "LinearConstraint":
        """Fix some variables to constants."""
        const = self.const
        kept = []
        for n, q in self.terms:
            if n in values:
                const -= q * as_rational(values[n])
            else:
                kept.append((n, q))
        return LinearConstraint(tuple(kept), self.rel, const)

    def __str__(self) -> str:
        return format_constraint(self)


def canonicalize(c: LinearConstraint) -> LinearConstraint:
    """Unique representative: integer coefficients with gcd 1.

    Only positive scaling is applied to inequalities; equalities additionally
    get a positive leading coefficient.  Variable-free constraints become
    ``0 <= 0`` / ``0 = 0`` (tautology) or ``0 <= -1`` / ``0 = 1``
    (contradiction marker).
    """
    if not c.terms:
        if c.rel == LE:
            return LinearConstraint((), LE, Fraction(-1) if c.const < 0 else Fraction(0))
        return LinearConstraint((), EQ, Fraction(1) if c.const != 0 else Fraction(0))
    denom = lcm(*(q.denominator for _, q in c.terms), c.const.denominator)
    nums = [int(q * denom) for _, q in c.terms]
    b = int(c.const * denom)
    g = gcd(*nums, b)
    if c.rel == EQ and nums[0] < 0:
        g = -g
    terms = tuple((n, Fraction(k // g)) for (n, _), k in zip(c.terms, nums))
    return LinearConstraint(terms, c.rel, Fraction(b // g))


def combine(p: LinearConstraint, wp: Fraction, n: LinearConstraint, wn: Fraction) -> LinearConstraint:
    """``wp * p + wn * n`` (weights must be nonnegative for inequality parts)."""
    coeffs: dict[str, Fraction] = {}
    for name, q in p.terms:
        coeffs[name] = coeffs.get(name, 0) + wp * q
    for name, q in n.terms:
        coeffs[name] = coeffs.get(name, 0) + wn * q
    rel = EQ if p.rel == EQ and n.rel == EQ else LE
    return LinearConstraint.build(coeffs, rel, wp * p.const + wn * n.const)


# ---------------------------------------------------------------------------
# text format

_TERM = re.compile(r"^(?P<coef>\d+(?:\.\d*)?(?:/\d+)?|\.\d+)?\s*\*?\s*(?P<var>[A-Za-z_][A-Za-z0-9_]*)?$")


def _parse_side(text: str) -> tuple[dict[str, Fraction], Fraction]:
    text = text.strip()
    if not text:
        raise ValueError("empty side in constraint")
    coeffs: dict[str, Fraction] = {}
    const = Fraction(0)
    for sign, body in re.findall(r"([+-]?)\s*([^+-]+)", text.replace(" ", "")):
        m = _TERM.match(body)
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise ValueError(f"cannot parse term {body!r}")
        q = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if sign == "-":
            q = -q
        if m.group("var"):
            coeffs[m.group("var")] = coeffs.get(m.group("var"), 0) + q
        else:
            const += q
    return coeffs, const


def parse_constraint(text: str) -> LinearConstraint:
    """Parse ``'x + 2*y - 1/2*z <= 3'``; both sides may hold terms and constants.

    Accepts ``<=``, ``>=`` and ``=``.  The result is not canonicalized.
    """
    m = re.search(r"<=|>=|=", text)
    if not m:
        raise ValueError(f"no relation in {text!r}")
    rel = m.group(0)
    left, right = text[: m.start()], text[m.end():]
    if re.search(r"<=|>=|=", right):
        raise ValueError(f"chained relations are not supported: {text!r}")
    lc, lk = _parse_side(left)
    rc, rk = _parse_side(right)
    coeffs = dict(lc)
    for k, v in rc.items():
        coeffs[k] = coeffs.get(k, 0) - v
    return LinearConstraint.build(coeffs, rel, rk - lk)


def format_constraint(c: LinearConstraint) -> str:
    parts = []
    for name, q in c.terms:
        mag = abs(q)
        body = name if mag == 1 else f"{_fmt(mag)}*{name}"
        if not parts:
            parts.append(body if q > 0 else f"-{body}")
        else:
            parts.append(("+ " if q > 0 else "- ") + body)
    lhs = " ".join(parts) if parts else "0"
    return f"{lhs} {c.rel} {_fmt(c.const)}"


# ---------------------------------------------------------------------------
# systems


def _sort_key(c: LinearConstraint, order: Mapping[str, int]):
    return (
        0 if c.rel == EQ else 1,
        tuple((order.get(n, len(order)), -q) for n, q in sorted(c.terms, key=lambda t: order.get(t[0], len(order)))),
        c.const,
    )


@dataclass(frozen=True)
class ConstraintSystem:
    """An ordered variable set plus canonical, deduplicated constraints.

    ``infeasible`` is set when a contradictory constant constraint has been
    produced (for instance during elimination); such a system is still a
    valid value.
    """

    variables: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]
    infeasible: bool = False

    @classmethod
    def build(cls, constraints: Iterable[LinearConstraint | str], variables: Sequence[str] | None = None) -> "ConstraintSystem":
        parsed = [parse_constraint(c) if isinstance(c, str) else c for c in constraints]
        if variables is None:
            seen: dict[str, None] = {}
            for c in parsed:
                for n in c.variables:
                    seen.setdefault(n)
            variables = tuple(seen)
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        known = set(variables)
        out: list[LinearConstraint] = []
        seen_c: set[LinearConstraint] = set()
        infeasible = False
        for c in parsed:
            missing = set(c.variables) - known
            if missing:
                raise ValueError(f"constraint {c} uses undeclared variables {sorted(missing)}")
            c = canonicalize(c)
            if c.is_trivial:
                if c.is_contradiction:
                    infeasible = True
                else:
                    continue
            if c not in seen_c:
                seen_c.add(c)
                out.append(c)
        if infeasible:
            out = [c for c in out if c.is_contradiction][:1]
        return cls(variables, tuple(out), infeasible)

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    @property
    def equalities(self) -> tuple[LinearConstraint, ...]:
        return tuple(c for c in self.constraints if c.rel == EQ)

    @property
    def inequalities(self) -> tuple[LinearConstraint, ...]:
        return tuple(c for c in self.constraints if c.rel == LE)

    def sorted(self) -> "ConstraintSystem":
        """Same system with constraints in a deterministic order."""
        order = {n: i for i, n in enumerate(self.variables)}
        return ConstraintSystem(self.variables, tuple(sorted(self.constraints, key=lambda c: _sort_key(c, order))), self.infeasible)

    def add(self, constraints: Iterable[LinearConstraint | str]) -> "ConstraintSystem":
        extra = [parse_constraint(c) if isinstance(c, str) else c for c in constraints]
        names = dict.fromkeys(self.variables)
        for c in extra:
            for n in c.variables:
                names.setdefault(n)
        return ConstraintSystem.build(list(self.constraints) + extra, tuple(names))

    def substitute(self, values: Mapping[str, object]) -> "ConstraintSystem":
        """Fix variables to constants and drop them from the variable set."""
        return ConstraintSystem.build(
            [c.substitute(values) for c in self.constraints],
            tuple(v for v in self.variables if v not in values),
        )

    def satisfied_by(self, point: Mapping[str, object], tol: float = 0) -> bool:
        return not self.infeasible and all(c.satisfied_by(point, tol) for c in self.constraints)

    def violated_by(self, point: Mapping[str, object], tol: float = 0) -> list[LinearConstraint]:
        return [c for c in self.constraints if not c.satisfied_by(point, tol)]

    # serialization -------------------------------------------------------

    def to_text(self) -> str:
        lines = ["# vars: " + " ".join(self.variables)]
        lines += [format_constraint(c) for c in self.constraints]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ConstraintSystem":
        variables = None
        cons = []
        for raw in text.splitlines():
            line = raw.strip()
            if line.startswith("# vars:"):
                variables = line[len("# vars:"):].split()
                continue
            if not line or line.startswith("#"):
                continue
            cons.append(parse_constraint(line))
        return cls.build(cons, variables)

    def to_json(self) -> dict:
        return {
            "vars": list(self.variables),
            "cons": [
                {"coeffs": {n: _fmt(q) for n, q in c.terms}, "rel": c.rel, "const": _fmt(c.const)}
                for c in self.constraints
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "ConstraintSystem":
        if isinstance(data, str):
            data = json.loads(data)
        cons = [LinearConstraint.build(c["coeffs"], c.get("rel", LE), c.get("const", 0)) for c in data["cons"]]
        return cls.build(cons, data.get("vars"))


# ---------------------------------------------------------------------------
# simplex


# the tableau runs on gmpy2 rationals, which are much faster than Fraction
_Q = gmpy2.mpq
_ZERO = _Q(0)
_ONE = _Q(1)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class LPError(ValueError):
    pass


class InfeasibleError(LPError):
    pass


class UnboundedError(LPError):
    pass


def _pivot(rows: list[list[Fraction]], cost: list[Fraction], basis: list[int], r: int, col: int) -> None:
    prow = rows[r]
    p = prow[col]
    if p != 1:
        inv = 1 / p
        prow[:] = [x * inv if x else x for x in prow]
    nz = [j for j, x in enumerate(prow) if x]
    for i, row in enumerate(rows):
        if i != r:
            f = row[col]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
    f = cost[col]
    if f:
        for j in nz:
            cost[j] -= f * prow[j]
    basis[r] = col


def _run_simplex(rows, cost, basis, allowed) -> str:
    """Minimize with Bland's rule; ``cost`` is the reduced-cost row with the
    negated objective value in its last slot."""
    while True:
        enter = next((j for j in allowed if cost[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(rows, cost, basis, best[1], enter)


@dataclass
class _StandardForm:
    columns: list[tuple[str, int]]  # (variable, sign)
    rows: list[list[Fraction]]
    n_struct: int


def _solve(system: ConstraintSystem, objective: Mapping[str, object] | None, maximize: bool):
    """Return (status, value, point).  status in optimal/infeasible/unbounded."""
    if system.infeasible or any(c.is_contradiction for c in system.constraints):
        return "infeasible", None, None
    cons = [c for c in system.constraints if not c.is_trivial]
    variables = list(system.variables)
    for c in cons:
        for n in c.variables:
            if n not in variables:
                variables.append(n)
    if objective:
        for n in objective:
            if n not in variables:
                variables.append(n)
    # sign bounds of the form -x <= 0 become column bounds
    nonneg = set()
    rest = []
    for c in cons:
        if c.rel == LE and len(c.terms) == 1 and c.terms[0][1] < 0 and c.const == 0:
            nonneg.add(c.terms[0][0])
        else:
            rest.append(c)
    columns: list[tuple[str, int]] = []
    for v in variables:
        columns.append((v, 1))
        if v not in nonneg:
            columns.append((v, -1))
    col_of: dict[str, list[tuple[int, int]]] = {}
    for j, (v, sg) in enumerate(columns):
        col_of.setdefault(v, []).append((j, sg))
    n_struct = len(columns)
    n_slack = sum(1 for c in rest if c.rel == LE)
    m = len(rest)
    # artificial columns are added only for rows without a usable slack
    needs_art = []
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    slack_idx = n_struct
    row_data = []
    for c in rest:
        coeffs = [_ZERO] * n_struct
        for n, q in c.terms:
            for j, sg in col_of[n]:
                coeffs[j] = _Q(q) * sg
        b = _Q(c.const)
        slack_sign = 0
        if c.rel == LE:
            slack_sign = 1
        flip = b < 0
        if flip:
            coeffs = [-x for x in coeffs]
            b = -b
            slack_sign = -slack_sign
        row_data.append((coeffs, slack_sign, b))
    n_art = sum(1 for _, sg, _ in row_data if sg != 1)
    width = n_struct + n_slack + n_art + 1
    art_idx = n_struct + n_slack
    for coeffs, sg, b in row_data:
        row = coeffs + [_ZERO] * (n_slack + n_art) + [b]
        if sg != 0:
            row[slack_idx] = _Q(sg)
            this_slack = slack_idx
            slack_idx += 1
        if sg == 1:
            basis.append(this_slack)
        else:
            row[art_idx] = _ONE
            basis.append(art_idx)
            needs_art.append(art_idx)
            art_idx += 1
        rows.append(row)
    n_total = width - 1
    art_start = n_struct + n_slack
    # phase 1
    if n_art:
        cost = [_ZERO] * width
        for i, bcol in enumerate(basis):
            if bcol >= art_start:
                for j in range(width):
                    if j < art_start or j == width - 1:
                        cost[j] -= rows[i][j]
        status = _run_simplex(rows, cost, basis, range(art_start))
        if -cost[-1] > 0:
            return "infeasible", None, None
        # drive zero-level artificials out of the basis
        for i in range(len(rows) - 1, -1, -1):
            if basis[i] >= art_start:
                col = next((j for j in range(art_start) if rows[i][j] != 0), None)
                if col is None:
                    del rows[i]
                    del basis[i]
                else:
                    _pivot(rows, cost, basis, i, col)
    # phase 2
    obj = [_ZERO] * width
    if objective:
        for n, q in objective.items():
            q = _Q(as_rational(q))
            for j, sg in col_of[n]:
                obj[j] = (-q if maximize else q) * sg
    cost = obj[:]
    for i, bcol in enumerate(basis):
        f = cost[bcol]
        if f:
            row = rows[i]
            for j in range(width):
                if row[j]:
                    cost[j] -= f * row[j]
    status = _run_simplex(rows, cost, basis, range(art_start))
    values = [_ZERO] * n_total
    for i, bcol in enumerate(basis):
        values[bcol] = rows[i][-1]
    point = {v: _ZERO for v in variables}
    for j, (v, sg) in enumerate(columns):
        point[v] += sg * values[j]
    point = {v: _frac(q) for v, q in point.items()}
    if status == "unbounded":
        return "unbounded", None, point
    value = -cost[-1]
    value = -value if maximize else value
    return "optimal", _frac(value), point


@dataclass(frozen=True)
class Feasibility:
    """Verdict of :func:`lp_feasible`.

    ``witness`` maps every variable to a rational value satisfying the system
    exactly.  ``certificate`` maps constraint indices to multipliers (nonnegative
    for inequalities) whose combination reads ``0 <= negative``.
    """

    feasible: bool
    witness: dict[str, Fraction] | None = None
    certificate: dict[int, Fraction] | None = None

    def __bool__(self) -> bool:
        return self.feasible


def farkas_certificate(system: ConstraintSystem) -> dict[int, Fraction]:
    """Multipliers proving infeasibility; raises if the system is feasible."""
    cons = list(system.constraints)
    names = [f"y{i}" for i in range(len(cons))]
    rows = []
    for i, c in enumerate(cons):
        if c.rel == LE:
            rows.append(LinearConstraint.build({names[i]: -1}, LE, 0))
    all_vars = sorted({n for c in cons for n in c.variables})
    for v in all_vars:
        rows.append(LinearConstraint.build({names[i]: c.coeff(v) for i, c in enumerate(cons)}, EQ, 0))
    rows.append(LinearConstraint.build({names[i]: c.const for i, c in enumerate(cons)}, EQ, -1))
    dual = ConstraintSystem.build(rows, names)
    status, _, point = _solve(dual, None, True)
    if status != "optimal":
        raise LPError("system is feasible; no infeasibility certificate exists")
    return {i: point[n] for i, n in enumerate(names) if point[n] != 0}


def check_certificate(system: ConstraintSystem, certificate: Mapping[int, Fraction]) -> bool:
    cons = system.constraints
    total: dict[str, Fraction] = {}
    rhs = Fraction(0)
    for i, y in certificate.items():
        c = cons[i]
        if c.rel == LE and y < 0:
            return False
        for n, q in c.terms:
            total[n] = total.get(n, 0) + y * q
        rhs += y * c.const
    return all(v == 0 for v in total.values()) and rhs < 0


def lp_feasible(system: ConstraintSystem) -> Feasibility:
    """Exact feasibility check with a witness point or a Farkas certificate."""
    status, _, point = _solve(system, None, True)
    if status == "infeasible":
        return Feasibility(False, certificate=farkas_certificate(system))
    witness = {v: point.get(v, Fraction(0)) for v in system.variables}
    return Feasibility(True, witness=witness)


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    point: dict[str, Fraction]


def lp_optimize(system: ConstraintSystem, objective: Mapping[str, object], sense: str = "max") -> LPResult:
    """Exact optimum of a linear objective (``sense`` is ``max`` or ``min``).

    Raises :class:`InfeasibleError` or :class:`UnboundedError`.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    unknown = set(objective) - set(system.variables)
    if unknown:
        raise ValueError(f"objective uses unknown variables {sorted(unknown)}")
    status, value, point = _solve(system, objective, sense == "max")
    if status == "infeasible":
        raise InfeasibleError("constraint system is infeasible")
    if status == "unbounded":
        raise UnboundedError(f"objective is unbounded ({sense})")
    return LPResult(value, {v: point.get(v, Fraction(0)) for v in system.variables})


def implies(system: ConstraintSystem, c: LinearConstraint) -> bool:
    """True if every point of ``system`` satisfies ``c`` (vacuous if empty)."""
    c = canonicalize(c)
    if c.is_trivial:
        return not c.is_contradiction or not lp_feasible(system).feasible
    sub = ConstraintSystem(system.variables + tuple(n for n in c.variables if n not in system.variables), system.constraints, system.infeasible)
    try:
        hi = lp_optimize(sub, c.coeffs, "max").value
    except InfeasibleError:
        return True
    except UnboundedError:
        return False
    if c.rel == LE:
        return hi <= c.const
    try:
        lo = lp_optimize(sub, c.coeffs, "min").value
    except UnboundedError:
        return False
    return lo == hi == c.const


def equivalent(a: ConstraintSystem, b: ConstraintSystem) -> bool:
    """Mutual implication, each constraint certified by an exact LP."""
    return all(implies(a, c) for c in b.constraints) and all(implies(b, c) for c in a.constraints)


# ---------------------------------------------------------------------------
# redundancy removal and projection


def _independent_equalities(eqs: list[LinearConstraint], variables: Sequence[str]) -> list[LinearConstraint]:
    """Drop equalities that are linear combinations of earlier ones."""
    kept: list[LinearConstraint] = []
    reduced: list[tuple[str, LinearConstraint]] = []  # (pivot var, reduced row)
    for e in eqs:
        r = e
        for pv, row in reduced:
            q = r.coeff(pv)
            if q:
                r = _add_multiple(r, row, -q / row.coeff(pv))
        if r.is_trivial:
            if r.is_contradiction:
                kept.append(e)
            continue
        pv = min(r.variables, key=lambda n: variables.index(n) if n in variables else len(variables))
        reduced.append((pv, r))
        kept.append(e)
    return kept


def remove_redundant(system: ConstraintSystem, candidates: Iterable[LinearConstraint] | None = None) -> ConstraintSystem:
    """Drop every inequality implied by the remaining constraints.

    Each removal is certified by an exact LP: the constraint's left side is
    maximized over the others and must stay within its bound.  Constraints are
    visited in the deterministic :meth:`ConstraintSystem.sorted` order.  When
    ``candidates`` is given only those constraints are tested (the rest are
    known to be irredundant); dependent equalities and looser parallel copies
    are always dropped.
    """
    if system.infeasible:
        raise ValueError("system is marked infeasible")
    system = system.sorted()
    eqs = _independent_equalities(list(system.equalities), system.variables)
    ineqs = list(system.inequalities)
    tightest: dict[tuple, LinearConstraint] = {}
    for c in ineqs:
        prev = tightest.get(c.terms)
        if prev is None or c.const < prev.const:
            tightest[c.terms] = c
    ineqs = [c for c in ineqs if tightest[c.terms] is c]
    if candidates is None:
        to_test = list(ineqs)
    else:
        wanted = {canonicalize(c) for c in candidates}
        to_test = [c for c in ineqs if c in wanted]
    keep = list(ineqs)
    for c in to_test:
        others = ConstraintSystem(system.variables, tuple(eqs) + tuple(k for k in keep if k is not c))
        status, value, _ = _solve(others, c.coeffs, True)
        if status == "infeasible" or (status == "optimal" and value <= c.const):
            keep.remove(c)
    return ConstraintSystem(system.variables, tuple(eqs) + tuple(keep)).sorted()


def make_equalities_explicit(system: ConstraintSystem) -> ConstraintSystem:
    """Turn every inequality that holds with equality on the whole polyhedron
    into an equality, then drop what became redundant.

    An inequality ``a.x <= b`` is implicitly tight when ``min a.x == b`` over
    the system, e.g. a pair ``x + y <= 1`` and ``-x - y <= -1``.
    """
    if system.infeasible:
        raise ValueError("system is marked infeasible")
    out = []
    for c in system.constraints:
        if c.rel == LE:
            status, value, _ = _solve(system, c.coeffs, False)
            if status == "optimal" and value == c.const:
                c = LinearConstraint(c.terms, EQ, c.const)
        out.append(c)
    return remove_redundant(ConstraintSystem.build(out, system.variables))


def _add_multiple(c: LinearConstraint, eq: LinearConstraint, t: Fraction) -> LinearConstraint:
    """``c + t * eq`` for an equality ``eq``; keeps the relation of ``c``."""
    coeffs = dict(c.terms)
    for n, q in eq.terms:
        coeffs[n] = coeffs.get(n, 0) + t * q
    return LinearConstraint.build(coeffs, c.rel, c.const + t * eq.const)


def _eliminate_one(system: ConstraintSystem, var: str, history: dict | None = None) -> ConstraintSystem:
    remaining = tuple(v for v in system.variables if v != var)
    cons = list(system.constraints)
    eqs = [c for c in cons if c.rel == EQ and c.coeff(var)]
    if eqs:
        pivot = min(eqs, key=lambda c: (len(c.terms), cons.index(c)))
        a = pivot.coeff(var)
        out = []
        for c in cons:
            if c is pivot:
                continue
            q = c.coeff(var)
            if q:
                new = _add_multiple(c, pivot, -q / a)
                if history is not None:
                    _inherit(history, canonicalize(new), history.get(c, frozenset()))
                c = new
            out.append(c)
        return ConstraintSystem.build(out, remaining)
    pos, neg, zero = [], [], []
    for c in cons:
        q = c.coeff(var)
        (pos if q > 0 else neg if q < 0 else zero).append(c)
    out = list(zero)
    for p in pos:
        qp = p.coeff(var)
        for n in neg:
            qn = -n.coeff(var)
            new = combine(p, qn, n, qp)
            if history is not None:
                _inherit(history, canonicalize(new), history.get(p, frozenset()) | history.get(n, frozenset()))
            out.append(new)
    return ConstraintSystem.build(out, remaining)


def _inherit(history: dict, c: LinearConstraint, h: frozenset) -> None:
    # duplicates keep the smallest known history
    prev = history.get(c)
    if prev is None or len(h) < len(prev):
        history[c] = h


def fme_eliminate(system: ConstraintSystem, eliminate: Sequence[str], prune: bool = True) -> ConstraintSystem:
    """Project out ``eliminate`` (in the given order) by Fourier-Motzkin.

    Equalities involving the variable are used for substitution first.  With
    ``prune`` (the default) redundancy removal runs on the input and after
    every step.  Pruning has two stages: Chernikov's rule discards a fresh
    inequality built from more than ``k + 1`` input inequalities after ``k``
    combination steps, then an exact LP certifies every remaining fresh
    inequality.  Older constraints need no check: an irredundant constraint
    stays irredundant under substitution and under projection of a variable
    it does not contain.  An infeasible input yields a system flagged
    ``infeasible``.
    """
    missing = [v for v in eliminate if v not in system.variables]
    if missing:
        raise ValueError(f"cannot eliminate unknown variables {missing}")
    if prune and not system.infeasible:
        system = remove_redundant(system)
    history = {c: frozenset([i]) for i, c in enumerate(system.constraints) if c.rel == LE} if prune else None
    combined = 0
    for var in eliminate:
        before = set(system.constraints)
        substituted = any(c.rel == EQ and c.coeff(var) for c in system.constraints)
        system = _eliminate_one(system, var, history)
        if system.infeasible:
            remaining = tuple(v for v in system.variables if v not in eliminate)
            return ConstraintSystem(remaining, system.constraints, True)
        if not prune:
            continue
        if substituted:
            system = remove_redundant(system, ())
        else:
            combined += 1
            fresh = [c for c in system.constraints if c not in before]
            limit = combined + 1
            dropped = {c for c in fresh if c.rel == LE and len(history.get(c, ())) > limit}
            if dropped:
                system = ConstraintSystem(system.variables, tuple(c for c in system.constraints if c not in dropped))
            system = remove_redundant(system, [c for c in fresh if c not in dropped])
        history = {c: history[c] for c in system.constraints if c in history}
    return system.sorted()
