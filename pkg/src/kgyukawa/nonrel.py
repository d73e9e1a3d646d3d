"""Closed-form nonrelativistic Yukawa levels and their Coulomb limit."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .model import QuantumNumbers, UnitSystem


@dataclass(frozen=True)
class NonrelLevel:
    value: float
    qn: QuantumNumbers
    lam: float
    delta: float
    units: UnitSystem


def _bracket_numerator(lam, delta, qn, units):
    ll = qn.l * (qn.l + 1)
    N = qn.principal
    return 2 * units.mu * lam / (delta * units.hbar**2) - ll - N * N


def nonrel_energy(lam, delta, qn: QuantumNumbers, units=UnitSystem()) -> float:
    """Screened-Coulomb energy in the approximate closed form.

    ``E = l(l+1) k - k [(2 mu lam/(delta hbar^2) - l(l+1) - N^2) / (2N)]^2``
    with ``k = delta^2 hbar^2 / (2 mu)`` and ``N = n + l + 1``.
    """
    if delta <= 0:
        raise DomainError("delta must be > 0; use coulomb_energy for the limit")
    k = delta**2 * units.hbar**2 / (2 * units.mu)
    b = _bracket_numerator(lam, delta, qn, units) / (2 * qn.principal)
    return qn.l * (qn.l + 1) * k - k * b * b


def nonrel_level(lam, delta, qn: QuantumNumbers, units=UnitSystem()) -> NonrelLevel:
    return NonrelLevel(nonrel_energy(lam, delta, qn, units), qn, lam, delta, units)


def coulomb_energy(lam, qn: QuantumNumbers, units=UnitSystem()) -> float:
    """Hydrogenic level ``-mu lam^2 / (2 hbar^2 N^2)``."""
    if lam <= 0:
        raise DomainError("lam must be > 0")
    return -units.mu * lam**2 / (2 * units.hbar**2 * qn.principal**2)


@dataclass(frozen=True)
class NonrelTransform:
    mu_eff: float
    e_nonrel: float


def nonrel_limit_transform(m, e_rel, units=UnitSystem()) -> NonrelTransform:
    """Map a relativistic level via ``M + E = 2 mu / hbar^2`` and ``M - E = -E_nr``."""
    return NonrelTransform(mu_eff=units.hbar**2 * (m + e_rel) / 2, e_nonrel=e_rel - m)


def bound_state_exists(lam, delta, qn: QuantumNumbers, units=UnitSystem()) -> bool:
    if delta <= 0:
        raise DomainError("delta must be > 0")
    return _bracket_numerator(lam, delta, qn, units) > 0 and nonrel_energy(lam, delta, qn, units) < 0


class DeltaConvention(str, enum.Enum):
    """How a dimensionless screening ``g`` is turned into ``delta``."""

    G_LAMBDA = "g*lambda"
    G_LAMBDA_HALF = "g*lambda/2"
    G_LAMBDA_SQ_HALF = "g*lambda^2/2"

    def delta(self, g, lam):
        if self is DeltaConvention.G_LAMBDA:
            return g * lam
        if self is DeltaConvention.G_LAMBDA_HALF:
            return g * lam / 2
        return g * lam * lam / 2


DEFAULT_CONVENTION = DeltaConvention.G_LAMBDA


def table5_delta(g, lam=math.sqrt(2), convention=DEFAULT_CONVENTION):
    return DeltaConvention(convention).delta(g, lam)
