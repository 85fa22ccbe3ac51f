"""Translation between the discrimination scenario and a two-party Bell scenario.

Party S has two binary measurements and party M three, all with outcomes
+1/-1.  A measurement S_i with outcome +1 (-1) steers M into the preparation
P_phi (P_phibar) for i = 1 or P_psi (P_psibar) for i = 2, and M_1, M_2, M_3 are
M_phi, M_psi and M_d.  With uniform S marginals the correlators are
``<s_i m_j> = p(+|P_i+) - p(+|P_i-)`` and the no-signalling condition on M is
the operational equivalence of the preparations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exactgeom import LE, ConstraintSystem, LinearConstraint
from .scenario import DEFAULT_TOL, FULL_VARS, SymmetricSummary, TableError, symbolic_table

PAIRINGS = ((1, 3), (2, 3), (1, 2))

# column index of the +1 / -1 outcome preparation for S_1 and S_2
_STEER = {1: (0, 2), 2: (1, 3)}


class BellError(ValueError):
    """Invalid or inconsistent correlators."""


@dataclass(frozen=True)
class BellCorrelators:
    """``e[i-1][j-1] = <s_i m_j>`` for i in {1, 2}, j in {1, 2, 3}."""

    e: tuple[tuple, tuple]

    def __post_init__(self):
        e = tuple(tuple(row) for row in self.e)
        if len(e) != 2 or any(len(r) != 3 for r in e):
            raise BellError("correlators form a 2 x 3 array")
        for i, r in enumerate(e):
            for j, x in enumerate(r):
                if not -1 <= x <= 1:
                    raise BellError(f"<s{i + 1} m{j + 1}> = {x} outside [-1, 1]")
        object.__setattr__(self, "e", e)

    def __call__(self, i: int, j: int):
        """``<s_i m_j>`` with 1-based indices."""
        return self.e[i - 1][j - 1]

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return str(x)
            return x

        return {"e": [[enc(x) for x in r] for r in self.e]}

    @classmethod
    def from_json(cls, data: dict | str) -> "BellCorrelators":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(tuple(Fraction(x) if isinstance(x, str) else x for x in r) for r in data["e"]))


def mesd_to_bell(x: SymmetricSummary) -> BellCorrelators:
    """Correlators of the Bell scenario equivalent to (s, c, eps)."""
    s, c, eps = x.s, x.c, x.eps
    return BellCorrelators(((1 - 2 * eps, 2 * c - 1, 2 * s - 1), (2 * c - 1, 1 - 2 * eps, 1 - 2 * s)))


def chsh_value(b: BellCorrelators, pairing: tuple[int, int] = (1, 3)):
    """``<s1 mj> + <s1 mk> + <s2 mj> - <s2 mk>`` for ``pairing = (j, k)``.

    Local models keep this at most 2.
    """
    pairing = tuple(pairing)
    if pairing not in PAIRINGS:
        raise BellError(f"pairing must be one of {PAIRINGS}, got {pairing}")
    j, k = pairing
    return b(1, j) + b(1, k) + b(2, j) - b(2, k)


@dataclass(frozen=True)
class BellReading:
    """(s, c, eps) recovered from correlators, with the residuals of the
    equalities the symmetric form imposes."""

    summary: SymmetricSummary
    residuals: dict


def bell_to_mesd(b: BellCorrelators, tol: float | None = None) -> BellReading:
    """Invert :func:`mesd_to_bell`.

    Fails when ``<s1 m3> + <s2 m3>``, ``<s1 m2> - <s2 m1>`` or
    ``<s1 m1> - <s2 m2>`` exceeds ``tol`` in magnitude (default: 0 for exact
    correlators, ``DEFAULT_TOL`` otherwise).
    """
    exact = all(isinstance(x, (int, Fraction)) for r in b.e for x in r)
    if tol is None:
        tol = 0 if exact else DEFAULT_TOL
    residuals = {
        "<s1 m3> + <s2 m3>": b(1, 3) + b(2, 3),
        "<s1 m2> - <s2 m1>": b(1, 2) - b(2, 1),
        "<s1 m1> - <s2 m2>": b(1, 1) - b(2, 2),
    }
    name, worst = max(residuals.items(), key=lambda kv: abs(kv[1]))
    if abs(worst) > tol:
        raise BellError(f"correlators lack the discrimination symmetries: {name} = {worst}")
    half = Fraction(1, 2) if exact else 0.5
    summary = SymmetricSummary(
        s=half * (1 + b(1, 3)),
        c=half * (1 + b(1, 2)),
        eps=half * (1 - b(1, 1)),
    )
    return BellReading(summary, residuals)


def chsh_family() -> list[tuple[tuple[int, int], int, dict]]:
    """Every CHSH inequality of the 2 x 3 scenario as
    ``(pairing, sign, weights)`` with ``sum weights[i, j] <s_i m_j> <= 2``.

    For each pairing of M settings the minus sign may sit on any of the four
    terms and the whole expression may be negated: eight per pairing.
    """
    out = []
    for j, k in PAIRINGS:
        terms = [(1, j), (1, k), (2, j), (2, k)]
        for minus in terms:
            for sign in (1, -1):
                w = {t: sign * (-1 if t == minus else 1) for t in terms}
                out.append(((j, k), sign, w))
    return out


def correlator_expressions(mode: str = "full") -> dict:
    """``<s_i m_j>`` as affine expressions in the table parameters."""
    table = symbolic_table(mode)
    out = {}
    for i, (plus, minus) in _STEER.items():
        for j in range(1, 4):
            (cp, kp), (cm, km) = table[j - 1][plus], table[j - 1][minus]
            coeffs = dict(cp)
            for n, q in cm.items():
                coeffs[n] = coeffs.get(n, 0) - q
            out[i, j] = ({n: q for n, q in coeffs.items() if q}, kp - km)
    return out


def local_polytope(mode: str = "full") -> ConstraintSystem:
    """The local (Bell) polytope pulled back to the table parameters:
    positivity of every joint probability plus every CHSH inequality."""
    if mode not in ("full", "symmetric"):
        raise TableError(f"unknown mode {mode!r}")
    table = symbolic_table(mode)
    cons = []
    # p(s, m | S_i M_j) = p(m | steered preparation) / 2 >= 0
    for row in table:
        for coeffs, const in row:
            cons.append(LinearConstraint.build({n: -q for n, q in coeffs.items()}, LE, const))
            cons.append(LinearConstraint.build(coeffs, LE, 1 - const))
    corr = correlator_expressions(mode)
    for _, _, w in chsh_family():
        coeffs, const = {}, 0
        for t, sign in w.items():
            c, k = corr[t]
            const += sign * k
            for n, q in c.items():
                coeffs[n] = coeffs.get(n, 0) + sign * q
        cons.append(LinearConstraint.build(coeffs, LE, 2 - const))
    variables = FULL_VARS if mode == "full" else ("s", "c", "eps")
    return ConstraintSystem.build(cons, variables)


def table_correlators(rows) -> BellCorrelators:
    """Correlators of a numeric data table (rows: effects, columns:
    preparations)."""
    return BellCorrelators(
        tuple(tuple(rows[j][plus] - rows[j][minus] for j in range(3)) for plus, minus in _STEER.values())
    )


def pairing_values(b: BellCorrelators) -> dict:
    return {p: chsh_value(b, p) for p in PAIRINGS}


def all_chsh_values(b: BellCorrelators) -> list:
    """Values of the whole CHSH family, in :func:`chsh_family` order."""
    return [sum(sign * b(*t) for t, sign in w.items()) for _, _, w in chsh_family()]


__all__ = [
    "PAIRINGS",
    "BellCorrelators",
    "BellError",
    "BellReading",
    "all_chsh_values",
    "bell_to_mesd",
    "chsh_family",
    "chsh_value",
    "correlator_expressions",
    "local_polytope",
    "mesd_to_bell",
    "pairing_values",
    "table_correlators",
]
