"""Physical parameters, the Yukawa/Coulomb potentials and the mass function.

Strengths are positive numbers; the attractive sign is applied here.  All
radial functions accept scalars or numpy arrays.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial node count ``n`` and orbital angular momentum ``l``."""

    n: int
    l: int

    def __post_init__(self):
        for name in ("n", "l"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 0:
                raise DomainError(f"{name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def principal(self) -> int:
        return self.n + self.l + 1

    @classmethod
    def from_label(cls, label: str) -> "QuantumNumbers":
        """Parse a spectroscopic label such as ``"2p"`` or ``"3d"``."""
        letters = "spdfghik"
        label = label.strip().lower()
        try:
            principal = int(label[:-1])
            l = letters.index(label[-1])
        except (ValueError, IndexError):
            raise DomainError(f"bad spectroscopic label {label!r}") from None
        if principal < l + 1:
            raise DomainError(f"label {label!r} needs principal number > l")
        return cls(principal - l - 1, l)


def _check_finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class CouplingSet:
    """Yukawa strengths and the screening parameter ``delta`` (> 0)."""

    delta: float
    v0: float = 0.0
    s0: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        _check_finite(delta=self.delta, v0=self.v0, s0=self.s0, lam=self.lam)
        if self.delta <= 0:
            raise DomainError(f"delta must be > 0, got {self.delta!r}")


@dataclass(frozen=True)
class MassModel:
    """Position-dependent mass ``m0 + m1 e^{-delta r} / (1 - e^{-delta r})``."""

    m0: float = 1.0
    m1: float = 0.0

    def __post_init__(self):
        _check_finite(m0=self.m0, m1=self.m1)
        if self.m0 < 0:
            raise DomainError(f"m0 must be >= 0, got {self.m0!r}")

    @property
    def constant(self) -> bool:
        return self.m1 == 0.0


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    mu: float = 1.0
    natural: bool = True

    def __post_init__(self):
        _check_finite(hbar=self.hbar, mu=self.mu)
        if self.hbar <= 0 or self.mu <= 0:
            raise DomainError("hbar and mu must be positive")


@dataclass(frozen=True)
class ProblemParams:
    """Everything that defines a spectral problem apart from the quantum numbers."""

    coupling: CouplingSet
    mass: MassModel = field(default_factory=MassModel)
    units: UnitSystem = field(default_factory=UnitSystem)

    @classmethod
    def make(cls, *, delta, v0=0.0, s0=0.0, lam=0.0, m0=1.0, m1=0.0, hbar=1.0, mu=1.0):
        return cls(
            CouplingSet(delta=delta, v0=v0, s0=s0, lam=lam),
            MassModel(m0=m0, m1=m1),
            UnitSystem(hbar=hbar, mu=mu),
        )

    # flat accessors keep the formula code readable
    @property
    def delta(self):
        return self.coupling.delta

    @property
    def v0(self):
        return self.coupling.v0

    @property
    def s0(self):
        return self.coupling.s0

    @property
    def lam(self):
        return self.coupling.lam

    @property
    def m0(self):
        return self.mass.m0

    @property
    def m1(self):
        return self.mass.m1

    def replace(self, **changes) -> "ProblemParams":
        flat = dict(
            delta=self.delta, v0=self.v0, s0=self.s0, lam=self.lam,
            m0=self.m0, m1=self.m1, hbar=self.units.hbar, mu=self.units.mu,
        )
        unknown = set(changes) - set(flat)
        if unknown:
            raise TypeError(f"unknown parameters: {sorted(unknown)}")
        flat.update(changes)
        return ProblemParams.make(**flat)


class Branch(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class EnergyLevel:
    """A root of one of the implicit energy equations."""

    value: float
    branch: Branch
    residual: float
    mode: str
    converged: bool = True
    iterations: int = 0


def _radial(r):
    arr = np.asarray(r, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("r must be finite")
    if np.any(arr <= 0):
        raise DomainError("r must be > 0")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def yukawa_value(strength, delta, r):
    """``-strength * exp(-delta r) / r``."""
    _check_finite(strength=strength, delta=delta)
    if delta <= 0:
        raise DomainError(f"delta must be > 0, got {delta!r}; use coulomb_value")
    x = _radial(r)
    return _out(-strength * np.exp(-delta * x) / x, r)


def coulomb_value(strength, r):
    _check_finite(strength=strength)
    x = _radial(r)
    return _out(-strength / x, r)


def mass_at(mass: MassModel, delta, r):
    """Mass function; diverges at the origin when ``m1 != 0``."""
    x = _radial(r)
    if mass.m1 == 0.0:
        return _out(np.full_like(x, mass.m0), r)
    # e^{-t}/(1-e^{-t}) = 1/expm1(t)
    return _out(mass.m0 + mass.m1 / np.expm1(delta * x), r)


class CentrifugalForm(str, enum.Enum):
    EXACT = "exact"
    APPROXIMATE = "approximate"


def centrifugal(l, delta, r, form="exact"):
    """``l(l+1)/r**2`` or its screened replacement ``l(l+1) delta**2 / (1 - e^{-delta r})**2``."""
    form = CentrifugalForm(form)
    x = _radial(r)
    ll = l * (l + 1)
    if form is CentrifugalForm.EXACT:
        return _out(ll / x**2, r)
    return _out(ll * delta**2 / (-np.expm1(-delta * x)) ** 2, r)
