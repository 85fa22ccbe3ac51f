"""Prepare-and-measure data tables for two-state discrimination.

Four preparations (P_phi, P_psi, P_phibar, P_psibar) and three binary
measurements, recorded by the probability of their first outcome
(phi|M_phi, psi|M_psi, g_phi|M_d).  The preparations obey the operational
equivalence ``(P_phi + P_phibar)/2 ~ (P_psi + P_psibar)/2``, i.e. in every row
``p(P_phi) + p(P_phibar) == p(P_psi) + p(P_psibar)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from fractions import Fraction
from numbers import Real
from typing import Sequence

from .exactgeom import as_rational

PREPARATIONS = ("P_phi", "P_psi", "P_phibar", "P_psibar")
EFFECTS = ("phi|M_phi", "psi|M_psi", "g_phi|M_d")

SYMMETRIC_VARS = ("s", "c", "eps")
FULL_VARS = ("s_phi", "s_phibar", "s_psi", "c_phi", "c_phibar", "c_psi", "eps_phi", "eps_phibar", "eps_psi")

DEFAULT_TOL = 1e-9


class TableError(ValueError):
    """Invalid data table or parameters."""


# Affine expressions for every table entry, as (coefficients, constant).
# Column P_psibar follows from the operational equivalence.
_SYMMETRIC_TABLE = (
    (({"eps": -1}, 1), ({"c": 1}, 0), ({"eps": 1}, 0), ({"c": -1}, 1)),
    (({"c": 1}, 0), ({"eps": -1}, 1), ({"c": -1}, 1), ({"eps": 1}, 0)),
    (({"s": 1}, 0), ({"s": -1}, 1), ({"s": -1}, 1), ({"s": 1}, 0)),
)

_FULL_TABLE = (
    (
        ({"eps_phi": -1}, 1),
        ({"c_psi": 1}, 0),
        ({"eps_phibar": 1}, 0),
        ({"eps_phi": -1, "eps_phibar": 1, "c_psi": -1}, 1),
    ),
    (
        ({"c_phi": 1}, 0),
        ({"eps_psi": -1}, 1),
        ({"c_phibar": -1}, 1),
        ({"c_phi": 1, "c_phibar": -1, "eps_psi": 1}, 0),
    ),
    (
        ({"s_phi": 1}, 0),
        ({"s_psi": -1}, 1),
        ({"s_phibar": -1}, 1),
        ({"s_phi": 1, "s_phibar": -1, "s_psi": 1}, 0),
    ),
)


def symbolic_table(mode: str) -> tuple[tuple[tuple[dict, int], ...], ...]:
    """Table entries as affine expressions of the observable parameters.

    ``mode`` is ``"symmetric"`` (s, c, eps) or ``"full"`` (the nine
    parameters of :class:`FullParameters`).
    """
    if mode == "symmetric":
        return _SYMMETRIC_TABLE
    if mode == "full":
        return _FULL_TABLE
    raise ValueError(f"unknown mode {mode!r}")


def _evaluate(expr, values):
    coeffs, const = expr
    return const + sum(q * values[k] for k, q in coeffs.items())


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


@dataclass(frozen=True)
class DataTable:
    """3 x 4 outcome probabilities, rows in ``EFFECTS`` order, columns in
    ``PREPARATIONS`` order.

    Entries are either all exact (ints/Fractions) or all real; an exact table
    is checked exactly, a real one within ``tol``.
    """

    rows: tuple[tuple, ...]
    equivalence_declared: bool = True
    tol: float = DEFAULT_TOL
    preparations: tuple[str, ...] = PREPARATIONS
    effects: tuple[str, ...] = EFFECTS

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if len(rows) != 3 or any(len(r) != 4 for r in rows):
            raise TableError("a data table has 3 rows of 4 entries")
        flat = [x for r in rows for x in r]
        exact = [_is_exact(x) for x in flat]
        if any(exact) and not all(exact):
            raise TableError("table mixes exact and real entries")
        if all(exact):
            rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        else:
            if not all(isinstance(x, Real) for x in flat):
                raise TableError("table entries must be numbers")
            rows = tuple(tuple(float(x) for x in r) for r in rows)
        object.__setattr__(self, "rows", rows)
        tol = 0 if self.exact else self.tol
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if x < -tol or x > 1 + tol:
                    raise TableError(f"entry ({self.effects[i]}, {self.preparations[j]}) = {x} outside [0, 1]")
        if self.equivalence_declared:
            worst = max(range(3), key=lambda i: abs(self.equivalence_residual(i)))
            res = self.equivalence_residual(worst)
            if abs(res) > tol:
                raise TableError(
                    f"row {self.effects[worst]} violates the declared operational equivalence (residual {res})"
                )

    @property
    def exact(self) -> bool:
        return isinstance(self.rows[0][0], Fraction)

    def entry(self, effect: str, preparation: str):
        return self.rows[self.effects.index(effect)][self.preparations.index(preparation)]

    def equivalence_residual(self, row: int):
        r = self.rows[row]
        return (r[0] + r[2]) - (r[1] + r[3])

    def rationalized(self) -> "DataTable":
        """Exact copy; reals are converted through their decimal repr.

        Entries within ``tol`` of [0, 1] are clipped, and a residual of the
        operational equivalence (at most ``tol`` after the validation) is
        absorbed by whichever entry of the row has the most room.
        """
        if self.exact:
            return self
        rows = []
        for r in self.rows:
            row = [min(Fraction(1), max(Fraction(0), as_rational(x))) for x in r]
            if self.equivalence_declared:
                res = (row[0] + row[2]) - (row[1] + row[3])
                # sign with which each entry enters the residual
                signs = (1, -1, 1, -1)
                room = [row[k] if signs[k] * res > 0 else 1 - row[k] for k in range(4)]
                k = max(range(4), key=lambda i: room[i])
                row[k] -= signs[k] * res
            rows.append(tuple(row))
        return DataTable(tuple(rows), self.equivalence_declared)

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
            return x

        return {
            "preparations": list(self.preparations),
            "effects": list(self.effects),
            "rows": [[enc(x) for x in r] for r in self.rows],
            "equivalence": self.equivalence_declared,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "DataTable":
        if isinstance(data, str):
            data = json.loads(data)
        if list(data.get("preparations", PREPARATIONS)) != list(PREPARATIONS):
            raise TableError(f"preparations must be {list(PREPARATIONS)}")
        if list(data.get("effects", EFFECTS)) != list(EFFECTS):
            raise TableError(f"effects must be {list(EFFECTS)}")
        rows = data["rows"]

        def dec(x):
            if isinstance(x, str):
                return Fraction(x)
            return x

        return cls(tuple(tuple(dec(x) for x in r) for r in rows), bool(data.get("equivalence", True)))


def _check_unit(name, x):
    if not (0 <= x <= 1):
        raise TableError(f"{name} = {x} outside [0, 1]")


@dataclass(frozen=True)
class SymmetricSummary:
    """Success rate ``s``, confusability ``c`` and noise ``eps``."""

    s: object
    c: object
    eps: object

    def __post_init__(self):
        for f in fields(self):
            _check_unit(f.name, getattr(self, f.name))

    def as_dict(self) -> dict:
        return {"s": self.s, "c": self.c, "eps": self.eps}

    @property
    def nc_bound(self):
        """Largest success rate a noncontextual model allows for this (c, eps)."""
        return 1 - (self.c - self.eps) / 2

    @property
    def violation(self):
        return self.s - self.nc_bound


@dataclass(frozen=True)
class FullParameters:
    """The nine free parameters of a table without symmetries."""

    s_phi: object
    s_phibar: object
    s_psi: object
    c_phi: object
    c_phibar: object
    c_psi: object
    eps_phi: object
    eps_phibar: object
    eps_psi: object

    def __post_init__(self):
        for f in fields(self):
            _check_unit(f.name, getattr(self, f.name))
        values = self.as_dict()
        for i, row in enumerate(_FULL_TABLE):
            x = _evaluate(row[3], values)
            if not (0 <= x <= 1):
                raise TableError(f"derived entry ({EFFECTS[i]}, P_psibar) = {_expr_str(row[3])} = {x} outside [0, 1]")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def symmetric(cls, s, c, eps) -> "FullParameters":
        return cls(s, s, s, c, c, c, eps, eps, eps)


def _expr_str(expr) -> str:
    coeffs, const = expr
    out = str(const) if const else ""
    for k, q in coeffs.items():
        sign = "-" if q < 0 else ("+" if out else "")
        out += f"{sign}{k}"
    return out


def _build(mode: str, values: dict) -> DataTable:
    rows = tuple(tuple(_evaluate(e, values) for e in row) for row in symbolic_table(mode))
    return DataTable(rows, True)


def build_table_symmetric(summary: SymmetricSummary) -> DataTable:
    return _build("symmetric", summary.as_dict())


def build_table_full(p: FullParameters) -> DataTable:
    return _build("full", p.as_dict())


def check_labeling(summary: SymmetricSummary) -> bool:
    """Outcome-labeling convention ``eps <= c <= 1 - eps``."""
    return summary.eps <= summary.c <= 1 - summary.eps


def full_parameters(t: DataTable) -> FullParameters:
    """Read the nine free parameters off a table's first three columns."""
    r = t.rows
    return FullParameters(
        s_phi=r[2][0], s_phibar=1 - r[2][2], s_psi=1 - r[2][1],
        c_phi=r[1][0], c_phibar=1 - r[1][2], c_psi=r[0][1],
        eps_phi=1 - r[0][0], eps_phibar=r[0][2], eps_psi=1 - r[1][1],
    )


def _symmetry_checks(t: DataTable):
    """(name, residual) for every equality the symmetric form requires."""
    (f0, f1, f2, f3), (p0, p1, p2, p3), (g0, g1, g2, g3) = t.rows
    s, c, one_minus_eps = g0, f1, f0
    return [
        ("success-rate symmetry: 1 - p(g_phi|M_d,P_psi) = s", (1 - g1) - s),
        ("success-rate symmetry: 1 - p(g_phi|M_d,P_phibar) = s", (1 - g2) - s),
        ("success-rate symmetry: p(g_phi|M_d,P_psibar) = s", g3 - s),
        ("confusability symmetry: p(psi|M_psi,P_phi) = c", p0 - c),
        ("confusability symmetry: 1 - p(phi|M_phi,P_psibar) = c", (1 - f3) - c),
        ("confusability symmetry: 1 - p(psi|M_psi,P_phibar) = c", (1 - p2) - c),
        ("noise symmetry: p(psi|M_psi,P_psi) = 1 - eps", p1 - one_minus_eps),
        ("noise symmetry: 1 - p(psi|M_psi,P_psibar) = 1 - eps", (1 - p3) - one_minus_eps),
        ("noise symmetry: 1 - p(phi|M_phi,P_phibar) = 1 - eps", (1 - f2) - one_minus_eps),
    ]


def extract_symmetric(t: DataTable, tol: float | None = None) -> SymmetricSummary:
    """Recover (s, c, eps) from a symmetric table.

    Every symmetry equality must hold within ``tol`` (default: exact for
    exact tables, ``DEFAULT_TOL`` otherwise); the error names the worst one.
    """
    if not t.equivalence_declared:
        raise TableError("operational equivalence not declared for this table")
    if tol is None:
        tol = 0 if t.exact else DEFAULT_TOL
    name, res = max(_symmetry_checks(t), key=lambda x: abs(x[1]))
    if abs(res) > tol:
        raise TableError(f"symmetry violated: {name} (residual {res})")
    return SymmetricSummary(s=t.rows[2][0], c=t.rows[0][1], eps=1 - t.rows[0][0])


def is_symmetric(t: DataTable, tol: float | None = None) -> bool:
    try:
        extract_symmetric(t, tol)
    except TableError:
        return False
    return True


def table_entries(t: DataTable) -> Sequence:
    return [x for r in t.rows for x in r]
