"""Independent checks on the closed forms.

* :func:`numerov_eigenvalue` solves the radial Schroedinger equation with the
  exact (unapproximated) Yukawa potential and exact centrifugal term.
* :func:`quadratic_roots` exploits that every energy equation is quadratic
  in ``E`` and solves it exactly, without any scan.
* :func:`approximation_gap` compares the closed-form nonrelativistic level
  with the Numerov value.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import AccuracyWarning, DomainError, InternalError, NotFoundError
from .kg_spectrum import SpectrumMode, default_window, residual
from .model import ProblemParams, QuantumNumbers, UnitSystem
from .nonrel import coulomb_energy, nonrel_energy

DEFAULT_COUNT = 20_000
DEFAULT_R_MIN = 1e-6
REFINEMENT_RTOL = 1e-6


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    count: int

    def __post_init__(self):
        if not (self.r_min > 0 and self.r_max > self.r_min):
            raise DomainError("need 0 < r_min < r_max")
        if self.count < 1000:
            raise DomainError("grid needs at least 1000 points")

    @property
    def spacing(self) -> float:
        return (self.r_max - self.r_min) / (self.count - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.count)

    def doubled(self) -> "RadialGrid":
        return RadialGrid(self.r_min, self.r_max, 2 * self.count)

    @classmethod
    def default(cls, lam, l, nodes, units=UnitSystem(), count=DEFAULT_COUNT) -> "RadialGrid":
        kappa = units.mu * lam / (units.hbar**2 * (nodes + l + 1))
        return cls(DEFAULT_R_MIN, max(50.0, 40.0 / kappa), count)


@dataclass(frozen=True)
class NumerovLevel:
    energy: float
    nodes: int
    grid: RadialGrid
    iterations: int
    refined_energy: float | None = None
    warning: str | None = None
    r: np.ndarray | None = field(default=None, repr=False, compare=False)
    u: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def value(self) -> float:
        return self.energy


def _start_values(r0, r1, lam, delta, l, E, units):
    # Frobenius series u = r^{l+1} (1 + c1 r + c2 r^2) of the Yukawa problem near the origin
    a = units.mu * lam / units.hbar**2
    b = 2 * units.mu * (lam * delta - E) / units.hbar**2
    c1 = -a / (l + 1)
    c2 = (-2 * a * c1 + b) / (2 * (2 * l + 3))
    return tuple(r ** (l + 1) * (1 + c1 * r + c2 * r * r) for r in (r0, r1))


class _Shooter:
    def __init__(self, lam, delta, l, grid: RadialGrid, units):
        self.lam, self.delta, self.l, self.units = lam, delta, l, units
        self.grid = grid
        self.r = grid.points()
        self.h = grid.spacing
        scale = 2 * units.mu / units.hbar**2
        self.v_term = scale * (-lam * np.exp(-delta * self.r) / self.r) + l * (l + 1) / self.r**2
        self.scale = scale

    def f(self, E):
        return self.v_term - self.scale * E

    def shoot(self, E):
        """Return (nodes, defect, match index, u_out, u_in) at trial energy ``E``."""
        f = self.f(E)
        m = len(f)
        allowed = np.nonzero(f < 0)[0]
        icl = int(allowed[-1]) if allowed.size else -1
        if icl < 2 or icl > m - 3:
            icl = m // 2
        u0, u1 = _start_values(self.r[0], self.r[1], self.lam, self.delta, self.l, E, self.units)
        out = kernels.numerov_propagate(f[: icl + 2], self.h, u0, u1)
        nodes = kernels.count_sign_changes(out[: icl + 1])
        kappa = math.sqrt(max(f[-1], 1e-12))
        tail = f[icl - 1:][::-1].copy()
        inn = kernels.numerov_propagate(tail, self.h, 1e-200, 1e-200 * math.exp(kappa * self.h))[::-1]
        # inn[k] lives at grid index icl - 1 + k
        uo_m, ui_m = out[icl], inn[1]
        if uo_m == 0.0 or ui_m == 0.0:
            return nodes, math.nan, icl, out, inn
        lo = (out[icl + 1] - out[icl - 1]) / (2 * self.h * uo_m)
        li = (inn[2] - inn[0]) / (2 * self.h * ui_m)
        return nodes, lo - li, icl, out, inn

    def eigenfunction(self, E):
        _, _, icl, out, inn = self.shoot(E)
        u = np.empty_like(self.r)
        u[: icl + 1] = out[: icl + 1]
        u[icl:] = inn[1:] * (out[icl] / inn[1])
        norm = math.sqrt(np.trapezoid(u * u, self.r))
        return u / norm


def _solve_on_grid(lam, delta, l, target, grid, units, tol_rel):
    shooter = _Shooter(lam, delta, l, grid, units)
    e_coul = coulomb_energy(lam, QuantumNumbers(target, l), units)
    e_lo, e_hi = 1.5 * e_coul, 0.0
    iterations = 0
    while e_hi - e_lo > tol_rel * max(1.0, abs(e_lo)):
        iterations += 1
        if iterations > 400:
            break
        E = 0.5 * (e_lo + e_hi)
        nodes, defect, _, _, _ = shooter.shoot(E)
        if nodes > target:
            e_hi = E
        elif nodes < target:
            e_lo = E
        elif not math.isfinite(defect) or defect < 0:
            e_hi = E
        else:
            e_lo = E
    E = 0.5 * (e_lo + e_hi)
    nodes, defect, icl, _, _ = shooter.shoot(E)
    kappa = math.sqrt(2 * units.mu * abs(E)) / units.hbar
    if (
        nodes != target
        or not math.isfinite(defect)
        or abs(defect) > 1e-4 * max(1.0, kappa)
        or E >= -tol_rel
        or e_lo <= 1.5 * e_coul
    ):
        raise NotFoundError(
            f"no bound state with {target} nodes for lam={lam}, delta={delta}, l={l}"
        )
    return E, iterations, shooter


def numerov_eigenvalue(
    lam,
    delta,
    l,
    target_nodes,
    grid: RadialGrid | None = None,
    units=UnitSystem(),
    check_refinement=True,
    keep_wavefunction=False,
    tol_rel=1e-9,
) -> NumerovLevel:
    """Bound level of ``-hbar^2/(2mu) u'' + [V(r) + hbar^2 l(l+1)/(2 mu r^2)] u = E u``.

    ``V`` is the exact Yukawa potential.  The energy is bracketed by node
    count and refined by bisection on the log-derivative mismatch at the
    outer classical turning point, to ``|dE| < tol_rel * max(1, |E|)``.  With
    ``check_refinement`` the solve is repeated on a grid with twice the
    points, and disagreement beyond 1e-6 relative attaches a warning.

    Raises
    ------
    NotFoundError
        If no level with ``target_nodes`` nodes is found.
    """
    if delta < 0 or lam <= 0:
        raise DomainError("need lam > 0 and delta >= 0")
    if grid is None:
        grid = RadialGrid.default(lam, l, target_nodes, units)
    E, iterations, shooter = _solve_on_grid(lam, delta, l, target_nodes, grid, units, tol_rel)
    warning = None
    kappa_max = math.sqrt(2 * units.mu * abs(1.5 * coulomb_energy(lam, QuantumNumbers(target_nodes, l), units))) / units.hbar
    if grid.spacing * kappa_max >= 0.1:
        warning = f"grid spacing {grid.spacing:.3g} too coarse for kappa {kappa_max:.3g}"
    refined = None
    if check_refinement:
        refined, _, _ = _solve_on_grid(lam, delta, l, target_nodes, grid.doubled(), units, tol_rel)
        if abs(refined - E) > REFINEMENT_RTOL * abs(E):
            warning = f"grid doubling changed E by {abs(refined - E) / abs(E):.2e} (relative)"
    if warning is not None:
        warnings.warn(warning, AccuracyWarning, stacklevel=2)
    r = u = None
    if keep_wavefunction:
        r, u = shooter.r, shooter.eigenfunction(E)
    return NumerovLevel(E, target_nodes, grid, iterations, refined, warning, r, u)


def kinetic_expectation(level: NumerovLevel, l, units=UnitSystem()) -> float:
    """``<T>`` from the stored eigenfunction, via ``u'^2`` and the centrifugal term."""
    if level.u is None:
        raise DomainError("level carries no wavefunction; solve with keep_wavefunction=True")
    r, u = level.r, level.u
    du = np.gradient(u, r, edge_order=2)
    integrand = du * du + l * (l + 1) * (u / r) ** 2
    return units.hbar**2 / (2 * units.mu) * float(np.trapezoid(integrand, r) / np.trapezoid(u * u, r))


@dataclass(frozen=True)
class QuadraticExpansion:
    c2: float
    c1: float
    c0: float

    def __call__(self, E):
        return (self.c2 * E + self.c1) * E + self.c0


def quadratic_expansion(mode, params: ProblemParams, qn: QuantumNumbers) -> QuadraticExpansion:
    """Coefficients of the residual ``c2 E^2 + c1 E + c0`` from three samples.

    A fourth sample must match the polynomial; otherwise the residual is
    not quadratic and :class:`InternalError` is raised.
    """
    m = max(params.m0, 1.0)
    e1, e2, e3 = -m, 0.0, m
    f1, f2, f3 = (residual(mode, params, qn, e) for e in (e1, e2, e3))
    # Lagrange form on the symmetric nodes -m, 0, m
    c0 = f2
    c1 = (f3 - f1) / (2 * m)
    c2 = (f3 + f1 - 2 * f2) / (2 * m * m)
    poly = QuadraticExpansion(c2, c1, c0)
    e4 = 0.37 * m
    f4 = residual(mode, params, qn, e4)
    tol = 1e-10 * max(1.0, abs(c0), abs(c1) * m, abs(c2) * m * m)
    if abs(poly(e4) - f4) > tol:
        raise InternalError(f"residual of mode {SpectrumMode(mode).value} is not quadratic in E")
    return poly


def quadratic_roots(mode, params: ProblemParams, qn: QuantumNumbers, window=None) -> list[float]:
    """Real roots of the quadratic residual that lie inside ``window``."""
    poly = quadratic_expansion(mode, params, qn)
    lo, hi = default_window(params) if window is None else window
    c2, c1, c0 = poly.c2, poly.c1, poly.c0
    if c2 == 0:
        roots = [] if c1 == 0 else [-c0 / c1]
    else:
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return []
        sq = math.sqrt(disc)
        if c1 == 0:
            roots = [-sq / (2 * c2), sq / (2 * c2)]
        else:
            q = -0.5 * (c1 + math.copysign(sq, c1))
            roots = [q / c2, c0 / q]
    return sorted(E for E in roots if lo <= E <= hi)


@dataclass(frozen=True)
class ApproximationGap:
    e_analytic: float
    e_numerov: float
    gap: float


def approximation_gap(lam, delta, qn: QuantumNumbers, units=UnitSystem(), grid=None) -> ApproximationGap:
    """Closed-form nonrelativistic level minus the exact Numerov level."""
    e_a = nonrel_energy(lam, delta, qn, units)
    e_n = numerov_eigenvalue(lam, delta, qn.l, qn.n, grid=grid, units=units, check_refinement=False).energy
    return ApproximationGap(e_a, e_n, e_a - e_n)
