"""Radial wavefunctions ``N y^p (1-y)^q P_n^{(2p, jb)}(1 - 2y)`` with ``y = exp(-delta r)``.

``p`` is taken as the decaying root ``sqrt((m0^2 - E^2)/delta^2 + l(l+1))``;
the Jacobi index ``jb`` and ``q = 1/2 + jb/2`` come straight from the
closed form and do not depend on ``E``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateInputError, DomainError, NonNormalizableError, NoRealStateError
from .kg_spectrum import corrected_a3, radial_coefficients
from .model import ProblemParams, QuantumNumbers


@dataclass(frozen=True)
class WaveParams:
    p: float
    q: float
    ja: float
    jb: float
    norm: float = 1.0


def jacobi_eval(n, a, b, x):
    """Jacobi polynomial ``P_n^{(a, b)}(x)`` by forward three-term recurrence."""
    if n < 0 or int(n) != n:
        raise DomainError("n must be a nonnegative integer")
    if a <= -1 or b <= -1:
        raise DomainError("Jacobi indices must exceed -1")
    xs = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(xs) > 1 + 1e-12):
        raise DomainError("x must lie in [-1, 1]")
    p_prev = np.ones_like(xs)
    if n == 0:
        return float(p_prev) if xs.ndim == 0 else p_prev
    p = (a + 1) + (a + b + 2) * (xs - 1) / 2
    for k in range(2, int(n) + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * xs + a * a - b * b)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        p_prev, p = p, (c2 * p - c3 * p_prev) / c1
    return float(p) if xs.ndim == 0 else p


def jb_index(params: ProblemParams, qn: QuantumNumbers) -> float:
    d, m1, v0, s0 = params.delta, params.m1, params.v0, params.s0
    arg = (1 + 2 * qn.l) ** 2 + 8 * m1 * s0 / d + 4 * (v0 * v0 - m1 * m1 * s0 * s0)
    if arg < 0:
        raise NoRealStateError(f"Jacobi index argument {arg!r} < 0")
    return math.sqrt(arg)


def wave_params(params: ProblemParams, qn: QuantumNumbers, E: float) -> WaveParams:
    if abs(E) > params.m0:
        raise DomainError(f"|E| = {abs(E)!r} outside the bound window (m0 = {params.m0!r})")
    p = math.sqrt(max(-corrected_a3(params, qn, E), 0.0))
    jb = jb_index(params, qn)
    return WaveParams(p=p, q=0.5 + 0.5 * jb, ja=2 * p, jb=jb)


def _u_of_y(wp: WaveParams, qn: QuantumNumbers, y, log_y, log_1my):
    poly = jacobi_eval(qn.n, wp.ja, wp.jb, 1 - 2 * y)
    return wp.norm * np.exp(wp.p * log_y + wp.q * log_1my) * poly


def radial_eval(wp: WaveParams, qn: QuantumNumbers, delta, r):
    """Wavefunction at radius ``r`` (scalar or array)."""
    rs = np.asarray(r, dtype=np.float64)
    if np.any(rs <= 0):
        raise DomainError("r must be > 0")
    t = delta * rs
    y = np.exp(-t)
    u = _u_of_y(wp, qn, y, -t, np.log(-np.expm1(-t)))
    return float(u) if rs.ndim == 0 else u


_GL_ORDER = 20
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)


def integrate(func, a, b, rtol=1e-8, start_panels=16, max_panels=1 << 15):
    """Composite Gauss-Legendre quadrature, doubling panels until converged."""
    panels = start_panels
    prev = None
    while True:
        edges = np.linspace(a, b, panels + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        x = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        total = float(np.sum(func(x).reshape(panels, _GL_ORDER) * _GL_W[None, :] * half[:, None]))
        if prev is not None and abs(total - prev) <= rtol * abs(total):
            return total
        if panels >= max_panels:
            return total
        prev = total
        panels *= 2


def _radial_range(wp: WaveParams, delta):
    if wp.p <= 0:
        raise NonNormalizableError(f"decay exponent p = {wp.p!r} <= 0")
    return 1e-6 / delta, 40.0 / (wp.p * delta)


def normalize(wp: WaveParams, qn: QuantumNumbers, delta) -> float:
    """Factor that makes ``radial_eval(wp)`` square-normalized on ``(0, inf)``.

    With ``wp.norm == 1`` this is the constant ``N_{nl}`` itself; scaling
    ``wp.norm`` scales the returned factor inversely.
    """
    a, b = _radial_range(wp, delta)
    total = integrate(lambda r: radial_eval(wp, qn, delta, r) ** 2, a, b)
    if total <= 0 or not math.isfinite(total):
        raise DegenerateInputError("wavefunction has zero or non-finite norm")
    return 1.0 / math.sqrt(total)


def normalized(wp: WaveParams, qn: QuantumNumbers, delta) -> WaveParams:
    return replace(wp, norm=wp.norm * normalize(wp, qn, delta))


def expectation_r(wp: WaveParams, qn: QuantumNumbers, delta) -> float:
    """``<r>`` of the (re)normalized state."""
    a, b = _radial_range(wp, delta)
    num = integrate(lambda r: r * radial_eval(wp, qn, delta, r) ** 2, a, b)
    den = integrate(lambda r: radial_eval(wp, qn, delta, r) ** 2, a, b)
    return num / den


def overlap(wp1: WaveParams, wp2: WaveParams, qn1, qn2, delta) -> float:
    """Flat-measure overlap ``int u1 u2 dr``."""
    a1, b1 = _radial_range(wp1, delta)
    a2, b2 = _radial_range(wp2, delta)
    return integrate(
        lambda r: radial_eval(wp1, qn1, delta, r) * radial_eval(wp2, qn2, delta, r),
        min(a1, a2), max(b1, b2),
    )


def default_grid(wp: WaveParams, delta, points=20000):
    a, b = _radial_range(wp, delta)
    return np.unique(np.concatenate([np.geomspace(a, b, points // 4), np.linspace(a, b, points)]))


def count_nodes(wp: WaveParams, qn: QuantumNumbers, delta, grid=None) -> int:
    """Strict sign changes of ``u`` on the interior of ``grid``."""
    from .kernels import count_sign_changes

    r = default_grid(wp, delta) if grid is None else np.asarray(grid, dtype=np.float64)
    u = radial_eval(wp, qn, delta, r[1:-1])
    return int(count_sign_changes(np.ascontiguousarray(u)))


@dataclass(frozen=True)
class OdeResidual:
    verbatim: float
    corrected: float


def _derivatives(wp, qn, y):
    h = 0.01 * np.minimum(y, 1 - y)

    def u(yy):
        return _u_of_y(wp, qn, yy, np.log(yy), np.log1p(-yy))

    um2, um1, u0, up1, up2 = (u(y + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (um2 - 8 * um1 + 8 * up1 - up2) / (12 * h)
    d2 = (-um2 + 16 * um1 - 30 * u0 + 16 * up1 - up2) / (12 * h * h)
    return u0, d1, d2


def ode_residual(params: ProblemParams, qn: QuantumNumbers, E, wp: WaveParams, y_grid=None) -> OdeResidual:
    """Scaled residual of ``u(y)`` in the transformed radial equation.

    The equation is ``u'' + (1-y)/(y(1-y)) u' + (A1 y^2 + A2 y + A3)/(y(1-y))^2 u``;
    it is evaluated once with the literal ``A3`` and once with the
    bound-state sign ``(E^2 - m0^2)/delta^2 - l(l+1)``.  Each number is
    ``max|residual|`` divided by the largest individual term on the grid.
    """
    if wp.norm == 0:
        raise DegenerateInputError("zero-amplitude wavefunction")
    y = np.linspace(1e-3, 1 - 1e-3, 10_000) if y_grid is None else np.asarray(y_grid, dtype=np.float64)
    if np.any(y <= 0) or np.any(y >= 1):
        raise DomainError("y_grid must lie inside (0, 1)")
    u, d1, d2 = _derivatives(wp, qn, y)
    A = radial_coefficients(params, qn, E)
    first = (1 - y) / (y * (1 - y)) * d1
    denom = (y * (1 - y)) ** 2
    out = []
    for a3 in (A.A3, corrected_a3(params, qn, E)):
        pot = (A.A1 * y * y + A.A2 * y + a3) / denom * u
        scale = np.max(np.maximum(np.maximum(np.abs(d2), np.abs(first)), np.abs(pot)))
        if scale == 0:
            raise DegenerateInputError("wavefunction vanishes on the grid")
        out.append(float(np.max(np.abs(d2 + first + pot)) / scale))
    return OdeResidual(*out)
