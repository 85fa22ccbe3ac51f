"""Qubit realizations of the discrimination scenario in one plane of the Bloch ball.

States are Bloch vectors ``(x, z)`` and effects are ``alpha * 1 + a . sigma``
restricted to the same plane, so the Born rule is ``alpha + a . n``.  The
ideal model uses pure states and projective measurements; the noisy model
attributes as much confusability as possible to noise in the test
measurements; depolarizing noise shrinks every vector uniformly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .scenario import DataTable, SymmetricSummary, TableError, check_labeling

TOL = 1e-9


class QuantumError(ValueError):
    """Invalid state, effect or model parameters."""


def _vec(v) -> np.ndarray:
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.shape != (2,):
        raise QuantumError(f"plane vectors have two components (x, z), got {a.shape[0]}")
    return a


def direction(angle: float) -> np.ndarray:
    """Unit Bloch vector rotated by ``angle`` from |0> towards +x."""
    return np.array([math.sin(angle), math.cos(angle)])


@dataclass(frozen=True, eq=False)
class PlaneState:
    """Qubit state with Bloch vector ``bloch = (x, z)``, ``|bloch| <= 1``."""

    bloch: np.ndarray

    def __post_init__(self):
        b = _vec(self.bloch)
        if np.linalg.norm(b) > 1 + TOL:
            raise QuantumError(f"Bloch vector {b} lies outside the unit disc")
        b.setflags(write=False)
        object.__setattr__(self, "bloch", b)

    @classmethod
    def pure(cls, angle: float) -> "PlaneState":
        return cls(direction(angle))

    @property
    def is_pure(self) -> bool:
        return abs(np.linalg.norm(self.bloch) - 1) <= TOL

    def __eq__(self, other):
        return isinstance(other, PlaneState) and np.array_equal(self.bloch, other.bloch)

    def __repr__(self):
        x, z = self.bloch
        return f"PlaneState(x={x:.6g}, z={z:.6g})"


@dataclass(frozen=True, eq=False)
class PlaneEffect:
    """Effect ``bias * 1 + bloch_part . sigma``, valid iff
    ``|a| <= bias <= 1 - |a|``."""

    bias: float
    bloch_part: np.ndarray

    def __post_init__(self):
        a = _vec(self.bloch_part)
        r = np.linalg.norm(a)
        alpha = float(self.bias)
        if not (r - TOL <= alpha <= 1 - r + TOL):
            raise QuantumError(f"effect (alpha={alpha}, |a|={r}) is not between 0 and the identity")
        a.setflags(write=False)
        object.__setattr__(self, "bloch_part", a)
        object.__setattr__(self, "bias", alpha)

    @classmethod
    def projector(cls, angle: float) -> "PlaneEffect":
        """Projector onto the pure state along ``direction(angle)``."""
        return cls(0.5, 0.5 * direction(angle))

    @classmethod
    def unit(cls) -> "PlaneEffect":
        return cls(1.0, np.zeros(2))

    @classmethod
    def zero(cls) -> "PlaneEffect":
        return cls(0.0, np.zeros(2))

    def complement(self) -> "PlaneEffect":
        """The other outcome of the binary measurement, ``1 - E``."""
        return PlaneEffect(1 - self.bias, -self.bloch_part)

    def as_vector(self) -> np.ndarray:
        return np.array([self.bias, *self.bloch_part])

    def __eq__(self, other):
        return (
            isinstance(other, PlaneEffect)
            and self.bias == other.bias
            and np.array_equal(self.bloch_part, other.bloch_part)
        )

    def __repr__(self):
        ax, az = self.bloch_part
        return f"PlaneEffect(alpha={self.bias:.6g}, ax={ax:.6g}, az={az:.6g})"


def born(e: PlaneEffect, rho: PlaneState) -> float:
    """Outcome probability ``Tr[E rho] = alpha + a . n``, clipped to [0, 1]
    against rounding."""
    p = e.bias + float(np.dot(e.bloch_part, rho.bloch))
    return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class QubitModel:
    """Four preparations and the first effects of the three measurements."""

    phi: PlaneState
    psi: PlaneState
    phibar: PlaneState
    psibar: PlaneState
    e_phi: PlaneEffect
    e_psi: PlaneEffect
    e_g: PlaneEffect
    tol: float = TOL

    def __post_init__(self):
        gap = 0.5 * (self.phi.bloch + self.phibar.bloch) - 0.5 * (self.psi.bloch + self.psibar.bloch)
        if np.linalg.norm(gap) > self.tol:
            raise QuantumError(f"preparations violate the operational equivalence (mismatch {gap})")

    @property
    def states(self) -> tuple[PlaneState, ...]:
        return (self.phi, self.psi, self.phibar, self.psibar)

    @property
    def effects(self) -> tuple[PlaneEffect, ...]:
        return (self.e_phi, self.e_psi, self.e_g)


def table_from_model(m: QubitModel) -> DataTable:
    """Born-rule data table (rows: effects, columns: preparations)."""
    rows = tuple(tuple(born(e, rho) for rho in m.states) for e in m.effects)
    return DataTable(rows, True)


def helstrom_measurement(rho1: PlaneState, rho2: PlaneState) -> PlaneEffect:
    """Effect guessing ``rho1``: the projector along ``n1 - n2``.

    Identical states have no preferred basis; the z-basis is used.
    """
    d = rho1.bloch - rho2.bloch
    norm = np.linalg.norm(d)
    if norm <= TOL:
        return PlaneEffect.projector(0.0)
    return PlaneEffect(0.5, 0.5 * d / norm)


def helstrom_success(rho1: PlaneState, rho2: PlaneState) -> float:
    """Optimal success probability for equiprobable states:
    ``(1 + |n1 - n2| / 2) / 2``."""
    return 0.5 * (1 + 0.5 * float(np.linalg.norm(rho1.bloch - rho2.bloch)))


def success_from_confusability(c_q: float) -> float:
    """Helstrom success for two pure states with overlap ``c_q``."""
    return 0.5 * (1 + math.sqrt(1 - c_q))


def angle_from_confusability(c_q: float) -> float:
    """Bloch angle theta with ``cos^2(theta/2) = c_q``."""
    if not 0 <= c_q <= 1:
        raise QuantumError(f"confusability {c_q} outside [0, 1]")
    return 2 * math.acos(math.sqrt(c_q))


def _symmetric_model(theta: float, chi: float) -> QubitModel:
    """|0> and |theta>, their antipodes, projective tests at ``chi`` and
    ``theta - chi``, and the Helstrom measurement.

    The Helstrom basis points along ``n_phi - n_psi``, i.e. at angle
    ``theta/2 - pi/2``; using the angle directly keeps the limit theta -> 0
    (identical states) in the symmetric form.
    """
    phi, psi = PlaneState.pure(0.0), PlaneState.pure(theta)
    return QubitModel(
        phi=phi,
        psi=psi,
        phibar=PlaneState(-phi.bloch),
        psibar=PlaneState(-psi.bloch),
        e_phi=PlaneEffect.projector(chi),
        e_psi=PlaneEffect.projector(theta - chi),
        e_g=PlaneEffect.projector(theta / 2 - math.pi / 2),
    )


def ideal_model(c_q: float) -> QubitModel:
    """Pure states with overlap ``c_q``, tests that project onto them and the
    Helstrom measurement that straddles them."""
    return _symmetric_model(angle_from_confusability(c_q), 0.0)


@dataclass(frozen=True)
class NoisyRealization:
    """Output of :func:`noisy_model`."""

    model: QubitModel
    s: float
    theta: float
    chi: float


def noisy_model(c: float, eps: float) -> NoisyRealization:
    """Qubit model with confusability ``c`` and test noise ``eps``.

    ``E_phi`` is the projector closest to |theta> among effects with
    ``<0|E_phi|0> = 1 - eps``: its Bloch direction sits at angle ``chi`` with
    ``cos^2(chi/2) = 1 - eps``.  The state angle then follows from
    ``<theta|E_phi|theta> = c``, i.e. ``theta = chi + 2 acos(sqrt(c))``, and
    ``s`` is the Helstrom success for |0> and |theta>.
    """
    if not (0 <= eps <= 1 and 0 <= c <= 1):
        raise QuantumError("c and eps must lie in [0, 1]")
    if not check_labeling(SymmetricSummary(s=0.5, c=c, eps=eps)):
        raise QuantumError(f"labeling convention eps <= c <= 1 - eps violated by c={c}, eps={eps}")
    chi = 2 * math.acos(math.sqrt(1 - eps))
    theta = min(math.pi, chi + 2 * math.acos(math.sqrt(c)))
    model = _symmetric_model(theta, chi)
    return NoisyRealization(model, helstrom_success(model.phi, model.psi), theta, chi)


def tradeoff_formula(c: float, eps: float, reading: str = "printed") -> complex | float:
    """Closed-form quantum tradeoff
    ``s = (1 + sqrt(1 - eps + 2 sqrt(R) + c (2 eps - 1))) / 2``.

    With ``reading="printed"`` the inner radicand is
    ``R = eps (1 - eps) c (c - 1)``, which is negative inside the unit square
    except on its edges, so the value is complex in general.  With
    ``reading="geometric"`` it is ``eps (1 - eps) c (1 - c)``, the form the
    explicit construction in :func:`noisy_model` produces.
    """
    if reading == "printed":
        inner = eps * (1 - eps) * c * (c - 1)
    elif reading == "geometric":
        inner = eps * (1 - eps) * c * (1 - c)
    else:
        raise ValueError(f"unknown reading {reading!r}")
    s = 0.5 * (1 + cmath.sqrt(1 - eps + 2 * cmath.sqrt(inner) + c * (2 * eps - 1)))
    return s.real if s.imag == 0 else s


def nc_bound(c: float, eps: float) -> float:
    """Largest noncontextual success rate for confusability ``c`` and noise ``eps``."""
    return 1 - (c - eps) / 2


def depolarize(m: QubitModel, v: float) -> QubitModel:
    """Apply the depolarizing channel with parameter ``v`` to every state and
    (in the Heisenberg picture) to every effect."""
    if not 0 <= v <= 1:
        raise QuantumError(f"noise parameter {v} outside [0, 1]")
    k = 1 - v

    def st(rho):
        return PlaneState(k * rho.bloch)

    def ef(e):
        return PlaneEffect(k * e.bias + v / 2, k * e.bloch_part)

    return QubitModel(
        st(m.phi), st(m.psi), st(m.phibar), st(m.psibar), ef(m.e_phi), ef(m.e_psi), ef(m.e_g), m.tol
    )


def depolarized_parameters(c_q: float, v: float) -> SymmetricSummary:
    """(s, c, eps) of the ideal model for ``c_q`` after depolarizing by ``v``."""
    k2 = (1 - v) ** 2
    return SymmetricSummary(
        s=0.5 + k2 * (success_from_confusability(c_q) - 0.5),
        c=0.5 + k2 * (c_q - 0.5),
        eps=0.5 * (1 - k2),
    )


def max_noise(theta: float) -> float:
    """Noise threshold ``1 - 1 / (cos^2(theta/2) + sin(theta/2))`` of the
    ideal model at Bloch angle ``theta``.

    This is the loss of contrast ``1 - (1 - v)^2`` of the data table at the
    point where it meets the noncontextual bound.  Since the channel acts on
    both states and effects, the channel parameter at that point is
    :func:`critical_depolarization`, which is smaller.
    """
    if not 0 <= theta <= math.pi:
        raise QuantumError(f"Bloch angle {theta} outside [0, pi]")
    return 1 - 1 / (math.cos(theta / 2) ** 2 + math.sin(theta / 2))


def critical_depolarization(theta: float) -> float:
    """Depolarizing parameter ``v`` at which the depolarized ideal model at
    Bloch angle ``theta`` meets the noncontextual bound:
    ``(1 - v)^2 = 1 - max_noise(theta)``."""
    return 1 - math.sqrt(1 - max_noise(theta))


def quantum_table(c: float, eps: float = 0.0, v: float = 0.0) -> DataTable:
    """Data table of the noisy model for (c, eps), optionally depolarized."""
    return table_from_model(depolarize(noisy_model(c, eps).model, v))


def tradeoff_curve(eps: float, steps: int) -> np.ndarray:
    """Rows ``(c, s_nc, s_q)`` for ``steps + 1`` values of ``c`` spanning
    ``[eps, 1 - eps]``."""
    if steps < 1:
        raise ValueError("steps must be positive")
    if not 0 <= eps <= 0.5:
        raise QuantumError("eps must lie in [0, 1/2] for the labeling range to be nonempty")
    cs = np.linspace(eps, 1 - eps, steps + 1)
    return np.array([(c, nc_bound(c, eps), noisy_model(c, eps).s) for c in cs])


def noise_curve(steps: int) -> np.ndarray:
    """Rows ``(theta, v_max)`` for ``steps + 1`` angles spanning ``[0, pi]``."""
    if steps < 1:
        raise ValueError("steps must be positive")
    thetas = np.linspace(0, math.pi, steps + 1)
    return np.array([(t, max_noise(t)) for t in thetas])


def summary_of(m: QubitModel, tol: float = TOL) -> SymmetricSummary:
    """(s, c, eps) of a model whose table has the symmetric form."""
    from .scenario import extract_symmetric

    try:
        return extract_symmetric(table_from_model(m), tol)
    except TableError as exc:
        raise QuantumError(str(exc)) from exc
