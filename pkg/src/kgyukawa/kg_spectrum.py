"""Klein-Gordon bound-state spectra for Yukawa scalar/vector couplings.

Each :class:`SpectrumMode` is one printed closed-form energy equation.  The
equations are implicit in ``E`` (it appears inside the squared bracket), so
levels are found as roots of ``E**2 - rhs(E)`` by a sign-change scan and
bisection.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import nu_engine
from .errors import ComplexBranchError, ConvergenceError, DomainError, NoRealStateError
from .model import Branch, EnergyLevel, ProblemParams, QuantumNumbers
from .nu_engine import NuDerived, NuInput


class SpectrumMode(str, enum.Enum):
    GENERAL_PDM = "general"
    VECTOR_ONLY_PDM = "vector-only"
    SCALAR_ONLY_PDM = "scalar-only"
    CONST_MASS_UNEQUAL = "const-mass-unequal"
    CONST_MASS_EQUAL_DOUBLED = "const-mass-equal-doubled"
    CONST_MASS_EQUAL_SINGLE = "const-mass-equal-single"

    @property
    def constant_mass(self) -> bool:
        return self in _CONST_MODES


_CONST_MODES = {
    SpectrumMode.CONST_MASS_UNEQUAL,
    SpectrumMode.CONST_MASS_EQUAL_DOUBLED,
    SpectrumMode.CONST_MASS_EQUAL_SINGLE,
}

BISECTION_MAX_STEPS = 200
ENERGY_TOL = 1e-12
RESIDUAL_TOL = 1e-10
WINDOW_MARGIN = 1e-9
DEFAULT_GRID_POINTS = 2048


@dataclass(frozen=True)
class RadialCoefficients:
    A1: float
    A2: float
    A3: float


@dataclass(frozen=True)
class BracketTerms:
    aleph: float
    aleph0: float
    disc: float


def effective_params(mode, params: ProblemParams) -> ProblemParams:
    """Parameters with the couplings a mode switches off set to zero.

    The equal-potential modes are mapped onto ``v0 = s0`` so that the
    appendix constants can be evaluated for them: strength ``lam`` for the
    doubled form and ``lam / 2`` for the single form.
    """
    mode = SpectrumMode(mode)
    if mode is SpectrumMode.VECTOR_ONLY_PDM:
        return params.replace(s0=0.0)
    if mode is SpectrumMode.SCALAR_ONLY_PDM:
        return params.replace(v0=0.0)
    if mode is SpectrumMode.CONST_MASS_EQUAL_DOUBLED:
        return params.replace(v0=params.lam, s0=params.lam)
    if mode is SpectrumMode.CONST_MASS_EQUAL_SINGLE:
        return params.replace(v0=params.lam / 2, s0=params.lam / 2)
    return params


def radial_coefficients(params: ProblemParams, qn: QuantumNumbers, E: float) -> RadialCoefficients:
    d, m0, m1, v0, s0 = params.delta, params.m0, params.m1, params.v0, params.s0
    A1 = (E * E - m0 * m0 + 2 * m0 * m1) / d**2 + (2 * m1 * s0 - 2 * m0 * s0 - 2 * v0 * E) / d + v0 * v0 - m1 * m1 * s0 * s0
    A2 = (2 * E * E - 2 * m0 * m0 + 2 * m0 * m1) / d**2 + (-2 * m0 * s0 - 2 * v0 * E) / d
    A3 = (E * E - m0 * m0) / d**2 + qn.l * (qn.l + 1)
    return RadialCoefficients(A1, A2, A3)


def corrected_a3(params: ProblemParams, qn: QuantumNumbers, E: float) -> float:
    """Bound-state sign of the constant coefficient: ``(E**2 - m0**2)/delta**2 - l(l+1)``.

    Its negative is the square of the decay exponent of the wavefunction.
    """
    return (E * E - params.m0**2) / params.delta**2 - qn.l * (qn.l + 1)


def appendix_alphas(params: ProblemParams, qn: QuantumNumbers, E: float, sign_corrected=False):
    """Closed-form alpha constants for the Klein-Gordon template.

    With ``sign_corrected`` the constant ``a8`` is taken as
    ``(m0**2 - E**2)/delta**2 + l(l+1)`` (real for bound states) and
    ``a10 ... a13`` follow from it; otherwise the literal expression
    ``(E**2 - m0**2)/delta**2 + l(l+1)`` is used, which is negative for
    ``l = 0`` bound states.

    Returns
    -------
    (NuInput, NuDerived)
    """
    d, m0, m1, v0, s0 = params.delta, params.m0, params.m1, params.v0, params.s0
    ll = qn.l * (qn.l + 1)
    a6 = 0.25 + (E * E - m0 * m0 + 2 * m0 * m1) / d**2 + (2 * m1 * s0 - 2 * m0 * s0 - 2 * v0 * E) / d + v0 * v0 - m1 * m1 * s0 * s0
    a7 = -((2 * E * E - 2 * m0 * m0 + 2 * m0 * m1) / d**2 + (-2 * m0 * s0 - 2 * v0 * E) / d)
    if sign_corrected:
        a8 = (m0 * m0 - E * E) / d**2 + ll
    else:
        a8 = (E * E - m0 * m0) / d**2 + ll
    a9 = 0.25 + 2 * m1 * s0 / d + ll + v0 * v0 - m1 * m1 * s0 * s0
    if a8 < 0:
        raise ComplexBranchError("a8", a8)
    if a9 < 0:
        raise ComplexBranchError("a9", a9)
    r8, r9 = math.sqrt(a8), math.sqrt(a9)
    A = radial_coefficients(params, qn, E)
    inp = NuInput(1.0, 1.0, 1.0, A.A1, A.A2, a8)
    derived = NuDerived(
        a4=0.0, a5=-0.5, a6=a6, a7=a7, a8=a8, a9=a9,
        a10=1 + 2 * r8,
        a11=2 * (1 + r8 + r9),
        a12=r8,
        a13=-0.5 - (r8 + r9),
        source=inp,
    )
    return inp, derived


def bracket_terms(params: ProblemParams, qn: QuantumNumbers, E: float) -> BracketTerms:
    """The aleph terms and square-root argument of the general PDM equation."""
    d, m0, m1, v0, s0 = params.delta, params.m0, params.m1, params.v0, params.s0
    n, l = qn.n, qn.l
    aleph = -n * (n + 1) - 2 * l * (l + 1) + (2 * m0 * s0 + 2 * v0 * E) / d - 2 * m0 * m1 / d**2
    aleph0 = -n * (n + 1) - 2 * l * (l + 1) + 2 * m0 * s0 / d - 2 * m0 * m1 / d**2
    disc = (1 + 2 * l) ** 2 + 4 * (v0 * v0 - m1 * m1 * s0 * s0) + 8 * m1 * s0 / d
    return BracketTerms(aleph, aleph0, disc)


def _sqrt_disc(disc):
    if disc < 0:
        raise NoRealStateError(f"square-root argument {disc!r} < 0")
    return math.sqrt(disc)


def _pdm_rhs(params, qn, aleph, disc):
    n, l, d = qn.n, qn.l, params.delta
    root = _sqrt_disc(disc)
    bracket = (aleph - 0.5 * (1 + (n + 1) * root)) / (2 * n + 1 + root)
    return params.m0**2 - l * (l + 1) * d**2 - d**2 * bracket**2


def _check_constant_mass(mode, params):
    if params.m1 != 0.0:
        raise DomainError(f"mode {mode.value} requires m1 = 0, got {params.m1!r}")


def energy_rhs(mode, params: ProblemParams, qn: QuantumNumbers, E: float) -> float:
    """Right-hand side of the selected energy equation, i.e. the candidate ``E**2``.

    ``E`` is the trial energy appearing inside the bracket.  For the
    scalar-only mode the result does not depend on it.
    """
    mode = SpectrumMode(mode)
    d, m0, m1 = params.delta, params.m0, params.m1
    n, l = qn.n, qn.l
    ll = l * (l + 1)

    if mode is SpectrumMode.GENERAL_PDM:
        t = bracket_terms(params, qn, E)
        return _pdm_rhs(params, qn, t.aleph, t.disc)

    if mode is SpectrumMode.VECTOR_ONLY_PDM:
        v0 = params.v0
        aleph = -n * (n + 1) - 2 * ll + 2 * v0 * E / d - 2 * m0 * m1 / d**2
        return _pdm_rhs(params, qn, aleph, (1 + 2 * l) ** 2 + 4 * v0 * v0)

    if mode is SpectrumMode.SCALAR_ONLY_PDM:
        s0 = params.s0
        aleph0 = -n * (n + 1) - 2 * ll + 2 * m0 * s0 / d - 2 * m0 * m1 / d**2
        # m1**2 s0**2 enters with the same sign as in the general equation
        disc = (1 + 2 * l) ** 2 - 4 * m1 * m1 * s0 * s0 + 8 * m1 * s0 / d
        return _pdm_rhs(params, qn, aleph0, disc)

    _check_constant_mass(mode, params)
    M = m0
    if mode is SpectrumMode.CONST_MASS_UNEQUAL:
        v0, s0 = params.v0, params.s0
        root = _sqrt_disc((1 + 2 * l) ** 2 + 4 * v0 * v0)
        num = -n * (n + 1) + (-2 * (ll * d - M * s0 - v0 * E)) / d - 0.5 * (1 + (n + 1) * root)
        bracket = num / (2 * n + 1 + root)
        return M * M - ll * d**2 - d**2 * bracket**2

    N = n + l + 1
    strength = 2 * params.lam if mode is SpectrumMode.CONST_MASS_EQUAL_DOUBLED else params.lam
    bracket = (strength * (M + E) / d - ll - N * N) / (2 * N)
    return M * M - ll * d**2 - d**2 * bracket**2


def residual(mode, params: ProblemParams, qn: QuantumNumbers, E: float) -> float:
    """``E**2 - energy_rhs(E)``; its roots are the levels."""
    return E * E - energy_rhs(mode, params, qn, E)


def default_window(params: ProblemParams):
    m0 = params.m0
    if m0 <= 0:
        raise DomainError("bound-state search needs m0 > 0")
    return (-m0 + WINDOW_MARGIN, m0 - WINDOW_MARGIN)


def _bisect(func, a, fa, b, fb):
    for step in range(1, BISECTION_MAX_STEPS + 1):
        mid = 0.5 * (a + b)
        fm = func(mid)
        if fm == 0.0:
            return mid, fm, step
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
        if b - a < ENERGY_TOL:
            mid = 0.5 * (a + b)
            fm = func(mid)
            if abs(fm) < RESIDUAL_TOL:
                return mid, fm, step
    raise ConvergenceError(
        f"bisection did not converge in {BISECTION_MAX_STEPS} steps", bracket=(a, b)
    )


def _golden_extremum(func, a, b, sign, iters=80):
    """Locate the minimum of ``sign * func`` on ``[a, b]``."""
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = sign * func(c), sign * func(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = sign * func(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = sign * func(d)
    x = 0.5 * (a + b)
    return x, func(x)


def _brackets(func, grid, values):
    out = []
    for i in range(len(grid) - 1):
        f0, f1 = values[i], values[i + 1]
        if f0 == 0.0:
            out.append((grid[i], grid[i]))
        elif f0 * f1 < 0:
            out.append((grid[i], grid[i + 1]))
    # a pair of roots inside one cell shows up as a dip of |residual| without a sign change
    for i in range(1, len(grid) - 1):
        f_prev, f, f_next = values[i - 1], values[i], values[i + 1]
        if f == 0.0 or f * f_prev <= 0 or f * f_next <= 0:
            continue
        if abs(f) < abs(f_prev) and abs(f) < abs(f_next):
            sign = 1.0 if f > 0 else -1.0
            x, fx = _golden_extremum(func, grid[i - 1], grid[i + 1], sign)
            if fx * f < 0:
                out.append((grid[i - 1], x))
                out.append((x, grid[i + 1]))
    return sorted(set(out))


def _branch_of(E):
    return Branch.POSITIVE if E >= 0 else Branch.NEGATIVE


def _keep(branch, E):
    return branch == "both" or Branch(branch) is _branch_of(E)


def solve_levels(
    mode,
    params: ProblemParams,
    qn: QuantumNumbers,
    search=None,
    branch="both",
    grid_points=DEFAULT_GRID_POINTS,
) -> list[EnergyLevel]:
    """All roots of the selected energy equation inside ``search``.

    Parameters
    ----------
    search : (float, float), optional
        Energy window, by default ``(-m0, m0)`` shrunk by 1e-9.
    branch : {"both", "positive", "negative"}
    grid_points : int
        Resolution of the sign-change scan (at least 64).

    Returns
    -------
    list of EnergyLevel
        Sorted ascending; empty when the equation has no root in the window.
    """
    mode = SpectrumMode(mode)
    if grid_points < 64:
        raise DomainError("grid_points must be >= 64")
    if branch != "both":
        Branch(branch)
    lo, hi = default_window(params) if search is None else search
    if not lo < hi:
        raise DomainError(f"empty search window ({lo}, {hi})")

    def func(E):
        return residual(mode, params, qn, E)

    if mode is SpectrumMode.SCALAR_ONLY_PDM:
        rhs = energy_rhs(mode, params, qn, 0.0)
        if rhs < 0:
            return []
        root = math.sqrt(rhs)
        levels = []
        for E in (-root, root):
            if lo <= E <= hi and _keep(branch, E):
                levels.append(EnergyLevel(E, _branch_of(E), abs(func(E)), mode.value, True, 0))
        return levels

    grid = np.linspace(lo, hi, grid_points)
    values = [func(float(E)) for E in grid]
    levels = []
    for a, b in _brackets(func, grid.tolist(), values):
        if a == b:
            E, fE, steps = a, func(a), 0
        else:
            E, fE, steps = _bisect(func, a, func(a), b, func(b))
        if _keep(branch, E):
            levels.append(EnergyLevel(E, _branch_of(E), abs(fE), mode.value, True, steps))
    levels.sort(key=lambda lev: lev.value)
    return levels


@dataclass(frozen=True)
class CrossCheck:
    """Consistency of a solved level with the NU quantization condition."""

    eq4_residual: float | None
    eq4_residual_corrected: float | None
    printed_formula_residual: float
    note: str = ""


def nu_cross_check(mode, params: ProblemParams, qn: QuantumNumbers, level: EnergyLevel) -> CrossCheck:
    """Evaluate the NU energy condition at a solved level.

    The literal appendix ``a8`` is negative for many bound states; that case
    is recorded in ``note`` rather than raised.
    """
    mode = SpectrumMode(mode)
    eff = effective_params(mode, params)
    E = level.value
    notes = []
    values = {}
    for key, corrected in (("verbatim", False), ("corrected", True)):
        try:
            inp, derived = appendix_alphas(eff, qn, E, sign_corrected=corrected)
            values[key] = nu_engine.quantization_residual(inp, qn.n, derived)
        except ComplexBranchError as exc:
            values[key] = None
            notes.append(f"{key}: {exc}")
    return CrossCheck(
        eq4_residual=values["verbatim"],
        eq4_residual_corrected=values["corrected"],
        printed_formula_residual=abs(residual(mode, params, qn, E)),
        note="; ".join(notes),
    )
