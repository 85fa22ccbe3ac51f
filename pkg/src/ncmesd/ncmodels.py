"""Noncontextual ontological models over the eight deterministic ontic vertices.

Every outcome-indeterministic model of the scenario can be rewritten over the
vertices of the cube of outcome assignments to the three binary measurements,
so an epistemic state is just a distribution over eight (or, in the pruned
mode, six) vertices.  Preparation noncontextuality becomes the linear equality
``mu_phi + mu_phibar == mu_psi + mu_psibar``, and the data table is reproduced
by dot products with the 0/1 response vectors.  Projecting this system onto
the observable parameters gives the noncontextuality inequalities.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import NamedTuple, Sequence

from .exactgeom import (
    EQ,
    LE,
    ConstraintSystem,
    LinearConstraint,
    fme_eliminate,
    lp_feasible,
    remove_redundant,
)
from .scenario import (
    EFFECTS,
    FULL_VARS,
    PREPARATIONS,
    SYMMETRIC_VARS,
    DataTable,
    TableError,
    extract_symmetric,
    full_parameters,
    is_symmetric,
    symbolic_table,
)

# weight-name prefix per preparation, in PREPARATIONS order
WEIGHT_PREFIX = {"P_phi": "a", "P_psi": "b", "P_phibar": "c", "P_psibar": "d"}
PRUNED_OUT = ((1, 0, 0), (0, 1, 1))


class OnticVertex(NamedTuple):
    """Deterministic outcome assignment (phi|M_phi, psi|M_psi, g_phi|M_d)."""

    phi: int
    psi: int
    g: int


@dataclass(frozen=True)
class ResponseMatrix:
    """0/1 response vectors of the three effects, indexed by vertex."""

    phi: tuple[int, ...]
    psi: tuple[int, ...]
    g: tuple[int, ...]

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return (self.phi, self.psi, self.g)

    def __len__(self) -> int:
        return len(self.phi)


def enumerate_vertices(pruned: bool = False) -> tuple[list[OnticVertex], ResponseMatrix]:
    """All eight assignments in lexicographic order, or the six that remain
    when the discriminating measurement is assumed optimal."""
    verts = [OnticVertex(*bits) for bits in itertools.product((0, 1), repeat=3)]
    if pruned:
        verts = [v for v in verts if tuple(v) not in PRUNED_OUT]
    resp = ResponseMatrix(*(tuple(v[k] for v in verts) for k in range(3)))
    return verts, resp


@dataclass(frozen=True)
class EpistemicVector:
    """A preparation's distribution over the ontic vertices."""

    weights: tuple[Fraction, ...]
    preparation: str = ""

    def __post_init__(self):
        w = tuple(Fraction(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if any(x < 0 for x in w):
            raise ValueError("epistemic weights must be nonnegative")
        if sum(w) != 1:
            raise ValueError(f"epistemic weights sum to {sum(w)}, not 1")

    def __len__(self) -> int:
        return len(self.weights)

    def probability(self, response: Sequence[int]) -> Fraction:
        """Outcome probability under a response vector (finite dot product)."""
        if len(response) != len(self.weights):
            raise ValueError("response vector and epistemic state differ in length")
        return sum((w * r for w, r in zip(self.weights, response)), Fraction(0))


def weight_names(pruned: bool = False) -> dict[str, list[str]]:
    n = 6 if pruned else 8
    return {p: [f"{WEIGHT_PREFIX[p]}{i}" for i in range(1, n + 1)] for p in PREPARATIONS}


def observable_names(mode: str) -> tuple[str, ...]:
    if mode == "symmetric":
        return SYMMETRIC_VARS
    if mode == "full":
        return FULL_VARS
    raise ValueError(f"unknown mode {mode!r}")


# (eps, c) pairs of the labeling convention as affine expressions.  In the
# full mode the P_psibar pair is read off the derived column:
# eps_psibar = p(psi|M_psi, P_psibar), c_psibar = 1 - p(phi|M_phi, P_psibar).
_LABEL_PAIRS = {
    "symmetric": [(({"eps": 1}, 0), ({"c": 1}, 0))],
    "full": [
        (({"eps_phi": 1}, 0), ({"c_phi": 1}, 0)),
        (({"eps_phibar": 1}, 0), ({"c_phibar": 1}, 0)),
        (({"eps_psi": 1}, 0), ({"c_psi": 1}, 0)),
        (({"c_phi": 1, "c_phibar": -1, "eps_psi": 1}, 0), ({"eps_phi": 1, "eps_phibar": -1, "c_psi": 1}, 0)),
    ],
}


def labeling_constraints(mode: str) -> list[LinearConstraint]:
    """``eps <= c <= 1 - eps`` for each (eps, c) pair of the mode.

    The full mode has four pairs, one per preparation.
    """
    if mode not in _LABEL_PAIRS:
        raise ValueError(f"unknown mode {mode!r}")
    out = []
    for (e, ke), (c, kc) in _LABEL_PAIRS[mode]:
        diff = dict(e)
        for k, q in c.items():
            diff[k] = diff.get(k, 0) - q
        total = dict(e)
        for k, q in c.items():
            total[k] = total.get(k, 0) + q
        out.append(LinearConstraint.build(diff, LE, kc - ke))
        out.append(LinearConstraint.build(total, LE, 1 - ke - kc))
    return out


def satisfies_labeling(mode: str, values: dict) -> bool:
    """Whether parameter values obey the labeling convention of ``mode``."""
    return all(c.satisfied_by(values) for c in labeling_constraints(mode))


def _model_constraints(pruned: bool) -> list[LinearConstraint]:
    names = weight_names(pruned)
    out = []
    for p in PREPARATIONS:
        for w in names[p]:
            out.append(LinearConstraint.build({w: -1}, LE, 0))
        out.append(LinearConstraint.build({w: 1 for w in names[p]}, EQ, 1))
    for a, b, c, d in zip(*(names[p] for p in PREPARATIONS)):
        # mu_phi + mu_phibar == mu_psi + mu_psibar, vertex by vertex
        out.append(LinearConstraint.build({a: 1, c: 1, b: -1, d: -1}, EQ, 0))
    return out


def _reproduction(pruned: bool, entry) -> list[LinearConstraint]:
    """``response_k . mu_P == entry(k, P)`` for every effect and preparation.

    ``entry(i, j)`` returns an affine expression ``(coeffs, const)``.
    """
    names = weight_names(pruned)
    _, resp = enumerate_vertices(pruned)
    out = []
    for i, r in enumerate(resp.rows()):
        for j, p in enumerate(PREPARATIONS):
            coeffs, const = entry(i, j)
            lhs = {w: 1 for w, bit in zip(names[p], r) if bit}
            for k, q in coeffs.items():
                lhs[k] = lhs.get(k, 0) - q
            out.append(LinearConstraint.build(lhs, EQ, const))
    return out


def build_nc_system(mode: str = "symmetric", labeling: bool = True, pruned: bool = False) -> ConstraintSystem:
    """Constraints over observables and epistemic weights for a noncontextual
    model reproducing the parametrized data table."""
    table = symbolic_table(mode)
    cons = _model_constraints(pruned)
    cons += _reproduction(pruned, lambda i, j: table[i][j])
    if labeling:
        cons += labeling_constraints(mode)
    names = weight_names(pruned)
    weights = [w for p in PREPARATIONS for w in names[p]]
    return ConstraintSystem.build(cons, observable_names(mode) + tuple(weights))


def elimination_order(pruned: bool = False) -> list[str]:
    """Epistemic weights block by block: d, c, b, then a."""
    names = weight_names(pruned)
    return [w for p in ("P_psibar", "P_phibar", "P_psi", "P_phi") for w in names[p]]


@functools.lru_cache(maxsize=None)
def derive_nc_inequalities(mode: str = "symmetric", labeling: bool = True, pruned: bool = False) -> ConstraintSystem:
    """Project the noncontextual-model system onto the observables.

    The result is irredundant and canonically ordered.
    """
    system = build_nc_system(mode, labeling, pruned)
    return remove_redundant(fme_eliminate(system, elimination_order(pruned)))


def load_golden(name: str = "appendixD") -> ConstraintSystem:
    """Vendored reference inequality sets (see ``ncmesd/data``)."""
    text = resources.files("ncmesd").joinpath("data", f"{name}.txt").read_text()
    return ConstraintSystem.from_text(text)


@dataclass(frozen=True)
class NCVerdict:
    """Outcome of :func:`nc_feasible`.

    ``witness`` maps each preparation to its epistemic state when a
    noncontextual model exists.  Otherwise ``violated`` lists the
    noncontextuality inequalities the data breaks and ``certificate`` holds
    the Farkas multipliers of the infeasible LP.
    """

    feasible: bool
    witness: dict[str, EpistemicVector] | None = None
    violated: tuple[LinearConstraint, ...] = ()
    certificate: dict | None = None

    def __bool__(self) -> bool:
        return self.feasible


def table_system(t: DataTable, pruned: bool = False) -> ConstraintSystem:
    """LP over epistemic weights with every table entry fixed."""
    rows = t.rows
    cons = _model_constraints(pruned)
    cons += _reproduction(pruned, lambda i, j: ({}, rows[i][j]))
    names = weight_names(pruned)
    return ConstraintSystem.build(cons, tuple(w for p in PREPARATIONS for w in names[p]))


@functools.lru_cache(maxsize=None)
def unlabeled_facets(mode: str) -> ConstraintSystem:
    """Irredundant noncontextuality inequalities without the labeling
    convention.

    The projection equals positivity plus every CHSH inequality of the
    equivalent Bell scenario (the test suite checks this against
    :func:`derive_nc_inequalities`), which is far cheaper to build.
    """
    from .bellmap import local_polytope

    return remove_redundant(local_polytope(mode)).sorted()


def violated_inequalities(t: DataTable) -> tuple[LinearConstraint, ...]:
    """Noncontextuality inequalities (without labeling) broken by ``t``.

    Symmetric tables are reported in (s, c, eps); others in the nine
    parameters.
    """
    tol = 0 if t.exact else t.tol
    if is_symmetric(t):
        x = extract_symmetric(t)
        return tuple(unlabeled_facets("symmetric").violated_by(x.as_dict(), tol))
    p = full_parameters(t)
    return tuple(unlabeled_facets("full").violated_by(p.as_dict(), tol))


def nc_feasible(t: DataTable, explain: bool = True) -> NCVerdict:
    """Decide exactly whether a noncontextual model reproduces ``t``.

    Real-valued tables are rationalized first.  With ``explain`` an
    infeasible verdict also lists the violated inequalities; a real table
    within tolerance of the symmetric form is reported in (s, c, eps).
    """
    if not t.equivalence_declared:
        raise TableError("table does not declare the operational equivalence")
    exact = t.rationalized()
    for i in range(3):
        if exact.equivalence_residual(i) != 0:
            raise TableError(f"row {EFFECTS[i]} violates the operational equivalence")
    res = lp_feasible(table_system(exact))
    if res.feasible:
        names = weight_names()
        witness = {
            p: EpistemicVector(tuple(res.witness[w] for w in names[p]), p) for p in PREPARATIONS
        }
        return NCVerdict(True, witness=witness)
    violated = violated_inequalities(t) if explain else ()
    return NCVerdict(False, violated=violated, certificate=res.certificate)


def reproduce_table(witness: dict[str, EpistemicVector], pruned: bool = False) -> tuple[tuple[Fraction, ...], ...]:
    """Data table generated by a set of epistemic states."""
    _, resp = enumerate_vertices(pruned)
    return tuple(tuple(witness[p].probability(r) for p in PREPARATIONS) for r in resp.rows())


def classical_overlap(mu_a: Sequence, mu_b: Sequence) -> Fraction:
    """``sum_k min(mu_a[k], mu_b[k])`` of two distributions on the same set."""
    a = mu_a.weights if isinstance(mu_a, EpistemicVector) else tuple(Fraction(x) for x in mu_a)
    b = mu_b.weights if isinstance(mu_b, EpistemicVector) else tuple(Fraction(x) for x in mu_b)
    if len(a) != len(b):
        raise ValueError("distributions are over different numbers of vertices")
    return sum((min(x, y) for x, y in zip(a, b)), Fraction(0))


def optimal_guess_success(mu_a: Sequence, mu_b: Sequence) -> Fraction:
    """Best probability of telling which of two equiprobable distributions a
    sample came from: ``1 - overlap / 2``."""
    return 1 - classical_overlap(mu_a, mu_b) / 2
