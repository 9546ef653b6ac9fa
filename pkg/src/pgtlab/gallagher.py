"""Gallagher-type smoothing: from psi_j down to psi_0 outside a small exceptional set.

The pieces are the forward difference operator, the exact exponent plan for
the step width ``d`` and split height ``Y``, the exceptional-set measurement
in logarithmic measure, and the unconditional smoothing pipeline.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np
from scipy import stats

from .chebyshev import psi_j as spectrum_psi_j
from .core import (Channel, ExceptionalReport, LengthSpectrum, ManifoldParams,
                   SingularityCatalog, SmoothingPlan)
from .explicit import critical_sum, explicit_psi_j

DEFAULT_EPSILON = 0.01
DEFAULT_GRID = 512


def forward_difference(f: Callable[[float], float], x: float, d: float, j: int) -> float:
    """``sum_k (-1)**(j-k) C(j, k) f(x + k d)``, the j-fold forward difference."""
    if d <= 0:
        raise ValueError("step d must be positive")
    if j < 0:
        raise ValueError("order j must be non-negative")
    return math.fsum((-1) ** (j - k) * math.comb(j, k) * f(x + k * d) for k in range(j + 1))


def solve_plan(params: ManifoldParams, j: int, epsilon: float = DEFAULT_EPSILON) -> SmoothingPlan:
    """Exact exponents balancing the three smoothing error terms for this ``j``.

    Valid for ``j >= n - 1``; the case ``j = n - 1`` rests on the conditional
    ``psi_{n-1}`` formula and is labelled accordingly.
    """
    n, rho = params.n, params.rho
    if j < 1:
        raise ValueError("j must be at least 1")
    if 2 * j + 3 - 2 * n <= 0 or j < n - 1:
        raise ValueError(f"plan needs j >= n - 1 = {n - 1}, got j = {j}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    den = 2 * n * j + 1
    gamma = Fraction(2 * (n - rho) * j * j + (4 * n - 3) * rho * j + rho + j) / den
    beta = Fraction((n - 1) * (j + 1), den)
    d_exp = (1 - rho * (2 * j + 1) / den, Fraction(n - 1, den), Fraction(n - 1, den))
    y_exp = (2 * rho * j / den, Fraction(1, den), Fraction(1, den))
    label = "conditional" if j == n - 1 else "unconditional"
    return SmoothingPlan(params, j, epsilon, gamma, beta, d_exp, y_exp, label)


def plan_residuals(plan: SmoothingPlan) -> tuple[Fraction, ...]:
    """Residuals of the defining equations; all are exactly zero for a solved plan.

    The first two are the balancing equations for ``gamma`` and ``beta``; the
    rest tie ``d`` and ``Y`` back to them.
    """
    n, rho, j = plan.params.n, plan.params.rho, plan.j
    g, b = plan.gamma_exp, plan.beta
    m = 2 * j + 3 - 2 * n
    return (
        (g - 2 * rho + 1) / (j + 1) - (1 - rho + (n - 1) * (2 * rho + 2 * j - 2 * g) / m),
        b / (j + 1) - (n - 1) * (1 - 2 * b) / m,
        plan.d_exponents[0] - (g - 2 * rho + 1) / (j + 1),
        plan.d_exponents[1] - b / (j + 1),
        plan.d_exponents[2] - b / (j + 1),
        plan.y_exponents[0] - (2 * rho + 2 * j - 2 * g) / m,
        plan.y_exponents[1] - (1 - 2 * b) / m,
        plan.y_exponents[2] - (1 - 2 * b) / m,
    )


def error_exponent(params: ManifoldParams, j: int) -> Fraction:
    """x-exponent ``2 rho - rho (2j + 1) / (2nj + 1)`` of the psi_0 / pi_Gamma error."""
    return params.two_rho - params.rho * Fraction(2 * j + 1, 2 * params.n * j + 1)


def exponent_sequence(params: ManifoldParams, j_range: Iterable[int]) -> list[Fraction]:
    return [error_exponent(params, j) for j in j_range]


def exponent_limit(params: ManifoldParams) -> Fraction:
    return params.two_rho - params.rho / params.n


def smooth_psi0_estimate(psi_j_eval: Callable[[float], float], plan: SmoothingPlan,
                         x: float, d_scale: float = 1.0) -> float:
    """``d**-j * Delta_j^+ psi_j(x)`` with the plan's step width ``d(x)``.

    For a non-decreasing psi_0 this lies between ``psi_0(x)`` and ``psi_0(x + j d)``.
    """
    if x <= math.e**math.e:
        raise ValueError("x must exceed e**e so that log log x is comfortably positive")
    d = plan.step_width(x, d_scale)
    if d > x:
        raise ValueError(f"step width d = {d:.4g} exceeds x = {x:.4g}")
    return forward_difference(psi_j_eval, x, d, plan.j) / d**plan.j


def threshold(plan: SmoothingPlan, x: float, level: str = "psi_j") -> float:
    """``x**g (log x)**b (log log x)**(b + eps)`` at the psi_j or psi_0 level."""
    if level == "psi_j":
        g, b = plan.gamma_exp, plan.beta
    elif level == "psi_0":
        g, b = plan.psi0_x_exponent, plan.psi0_log_exponent
    else:
        raise ValueError(f"unknown level {level!r}")
    lx = math.log(x)
    return math.exp(float(g) * lx + float(b) * math.log(lx)
                    + (float(b) + plan.epsilon) * math.log(math.log(lx)))


def exceptional_report(remainder: Callable[[float], float], plan: SmoothingPlan,
                       params: ManifoldParams, i_range: Iterable[int],
                       grid_density: int = DEFAULT_GRID, level: str = "psi_j") -> ExceptionalReport:
    """Logarithmic measure of ``{x in [e^i, e^{i+1}] : |remainder(x)| > threshold(x)}``.

    Each interval has logarithmic measure 1; it is sampled at ``grid_density``
    midpoints uniform in ``log x``, so the estimate is the exceeding fraction.
    """
    if params != plan.params:
        raise ValueError("plan was solved for different manifold parameters")
    i_values = sorted(set(int(i) for i in i_range))
    if not i_values:
        raise ValueError("empty interval range")
    if i_values[0] < 1:
        raise ValueError("intervals start at i = 1 (log log x must be positive)")
    if grid_density < 1:
        raise ValueError("grid_density must be positive")
    offsets = (np.arange(grid_density) + 0.5) / grid_density
    intervals = []
    for i in i_values:
        hits = 0
        for u in offsets:
            x = math.exp(i + u)
            if abs(remainder(x)) > threshold(plan, x, level):
                hits += 1
        intervals.append((i, hits / grid_density))
    total = math.fsum(m for _, m in intervals)
    return ExceptionalReport(tuple(intervals), total, plan.epsilon)


def converge_check(report: ExceptionalReport, min_points: int = 3) -> tuple[bool, float]:
    """Fit ``log mu_i`` against ``log(i (log i)**(1 + 2 eps))``.

    Returns ``(finite_trend, fitted_rate)``. The trend counts as finite when
    the fitted slope is at most -1 up to two standard errors. With fewer than
    ``min_points`` non-zero measures (the tail is empty) the trend is finite
    and the rate is reported as ``-inf``.
    """
    if len(report.intervals) < 5:
        raise ValueError("need at least 5 intervals")
    eps = report.epsilon
    pts = [(i, m) for i, m in report.intervals if m > 0 and i >= 2]
    if len(pts) < min_points:
        return True, -math.inf
    i = np.array([p[0] for p in pts], dtype=float)
    mu = np.array([p[1] for p in pts])
    fit = stats.linregress(np.log(i) + (1 + 2 * eps) * np.log(np.log(i)), np.log(mu))
    stderr = 0.0 if not np.isfinite(fit.stderr) else fit.stderr
    return bool(fit.slope <= -1 + 2 * stderr), float(fit.slope)


def critical_remainder(catalog: SingularityCatalog, plan: SmoothingPlan, x: float,
                       w_height: float | None = None, y_scale: float = 1.0) -> float:
    """Middle piece of the split critical sum: ``Y(x) < |Im alpha| <= W``."""
    w = catalog.critical_height if w_height is None else w_height
    y = plan.split_height(x, y_scale)
    return critical_sum(catalog, x, plan.j, lower=y, upper=w).real


def gallagher_majorant(channel: Channel, j: int, y: float, w: float = math.inf) -> float:
    """``int (sum_{t <= |Im a| <= t+1, y < |Im a| <= w} |o_a| / prod_k |a + k|)**2 dt``.

    The integrand is piecewise constant in ``t`` with jumps at ``h`` and
    ``h - 1`` for each height ``h``, so the integral is evaluated exactly.
    """
    h = np.abs(channel.critical_alpha.imag)
    keep = (h > y) & (h <= w)
    h = h[keep]
    if h.size == 0:
        return 0.0
    a = channel.critical_alpha[keep]
    logabs = np.log(np.abs(a[:, None] + np.arange(j + 1)[None, :])).sum(axis=1)
    wt = np.abs(channel.critical_order[keep]) * np.exp(-logabs)
    order = np.argsort(h, kind="stable")
    h, wt = h[order], wt[order]
    cum = np.concatenate([[0.0], np.cumsum(wt)])
    breaks = np.unique(np.concatenate([h, h - 1]))
    mid = 0.5 * (breaks[:-1] + breaks[1:])
    s = cum[np.searchsorted(h, mid + 1, side="right")] - cum[np.searchsorted(h, mid, side="left")]
    return float(np.sum(s * s * np.diff(breaks)))


def fit_loglog_slope(xs, ys) -> tuple[float, float]:
    fit = stats.linregress(np.log(xs), np.log(ys))
    return float(fit.slope), float(fit.stderr)


def unconditional_psi0(source: LengthSpectrum | SingularityCatalog, params: ManifoldParams,
                       j: int, x: float) -> tuple[float, Fraction]:
    """Smoothed psi_0 with ``d = x**(1 - rho/n)`` and truncation ``K = x**(rho/n)``.

    Returns the estimate and the predicted error exponent ``2 rho - rho / n``,
    which does not depend on ``j``.
    """
    if j < params.n:
        raise ValueError(f"unconditional pipeline needs j >= n = {params.n}")
    r = float(params.rho) / params.n
    d = x ** (1 - r)
    if isinstance(source, LengthSpectrum):
        f = lambda t: spectrum_psi_j(source, t, j)  # noqa: E731
    else:
        k = x**r
        f = lambda t: explicit_psi_j(source, t, j, height=k)  # noqa: E731
    estimate = forward_difference(f, x, d, j) / d**j
    return estimate, exponent_limit(params)
