"""Parametric Nikiforov-Uvarov machinery.

The template equation is::

    u'' + (a1 - a2 s) / (s (1 - a3 s)) u' + (-xi1 s**2 + xi2 s - xi3) / (s (1 - a3 s))**2 u = 0

and everything here is independent of the physical potential.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ComplexBranchError, DegenerateInputError, DomainError


@dataclass(frozen=True)
class NuInput:
    a1: float
    a2: float
    a3: float
    xi1: float
    xi2: float
    xi3: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "xi1", "xi2", "xi3"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")


@dataclass(frozen=True)
class NuDerived:
    a4: float
    a5: float
    a6: float
    a7: float
    a8: float
    a9: float
    a10: float
    a11: float
    a12: float
    a13: float
    source: NuInput

    def as_dict(self):
        return {f"a{i}": getattr(self, f"a{i}") for i in range(4, 14)}


@dataclass(frozen=True)
class SolutionParams:
    """Exponents and Jacobi indices of ``s^p (1 - a3 s)^q P_n^{(ja, jb)}(1 - 2 a3 s)``."""

    y_exponent: float
    one_minus_y_exponent: float
    jacobi_a: float
    jacobi_b: float


def derive(inp: NuInput) -> NuDerived:
    """Run the alpha_4 ... alpha_13 cascade.

    Raises
    ------
    ComplexBranchError
        If ``a8`` or ``a9`` is negative.
    """
    a1, a2, a3 = inp.a1, inp.a2, inp.a3
    a4 = (1.0 - a1) / 2.0
    a5 = (a2 - 2.0 * a3) / 2.0
    a6 = a5 * a5 + inp.xi1
    a7 = 2.0 * a4 * a5 - inp.xi2
    a8 = a4 * a4 + inp.xi3
    a9 = a3 * (a7 + a3 * a8) + a6
    if a8 < 0:
        raise ComplexBranchError("a8", a8)
    if a9 < 0:
        raise ComplexBranchError("a9", a9)
    r8, r9 = math.sqrt(a8), math.sqrt(a9)
    return NuDerived(
        a4=a4, a5=a5, a6=a6, a7=a7, a8=a8, a9=a9,
        a10=a1 + 2.0 * a4 + 2.0 * r8,
        a11=a2 - 2.0 * a5 + 2.0 * (r9 + a3 * r8),
        a12=a4 + r8,
        a13=a5 - (r9 + a3 * r8),
        source=inp,
    )


def quantization_residual(inp: NuInput, n: int, derived: NuDerived | None = None) -> float:
    """LHS minus RHS of the NU energy condition for radial number ``n``.

    Read term by term as
    ``n a2 - (2n+1) a5 + n(n-1) a3 + a7 + 2 a3 a8 + (2n+1) sqrt(a9)``
    on the left and ``-sqrt(a8) (a3 (2n+1) + 2 sqrt(a9))`` on the right.
    """
    d = derive(inp) if derived is None else derived
    a2, a3 = inp.a2, inp.a3
    r8, r9 = math.sqrt(d.a8), math.sqrt(d.a9)
    k = 2 * n + 1
    lhs = n * a2 - k * d.a5 + n * (n - 1) * a3 + d.a7 + 2.0 * a3 * d.a8 + k * r9
    rhs = -r8 * (a3 * k + 2.0 * r9)
    return lhs - rhs


def solution_params(derived: NuDerived) -> SolutionParams:
    a3 = derived.source.a3
    if a3 == 0:
        raise DegenerateInputError("a3 = 0 template is not supported")
    return SolutionParams(
        y_exponent=derived.a12,
        one_minus_y_exponent=-derived.a12 - derived.a13 / a3,
        jacobi_a=derived.a10 - 1.0,
        jacobi_b=(derived.a11 - derived.a10 - 1.0) / a3,
    )
