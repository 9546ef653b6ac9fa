"""Explicit formulas for the integrated counting functions over singularity catalogs.

Every singularity ``alpha`` of a channel contributes
``sign * order * x**(alpha + j) / prod_{k=0}^{j} (alpha + k)``. For
``j >= n`` the real singularities in ``(rho, 2 rho]`` of every channel and the
critical-line singularities of the ``lambda = 2 rho`` channels give
``psi_j`` exactly. For ``j = n - 1`` the formula holds only conditionally,
up to a user-supplied polynomial part and a reported error bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import (Channel, ManifoldParams, SingularityCatalog, Theorem4Config,
                   ValidationError)

DEGENERATE = 1e-12
IMAG_RTOL = 1e-8


def _log_denominator(alpha: np.ndarray, j: int) -> np.ndarray:
    """``log prod_{k=0}^{j} (alpha + k)`` (complex), rejecting vanishing factors."""
    factors = np.asarray(alpha, dtype=complex)[:, None] + np.arange(j + 1)[None, :]
    if np.any(np.abs(factors) < DEGENERATE):
        bad = np.asarray(alpha)[np.any(np.abs(factors) < DEGENERATE, axis=1)]
        raise ValueError(f"denominator vanishes at alpha = {bad[:3].tolist()} for j = {j}")
    return np.log(factors).sum(axis=1)


@lru_cache(maxsize=16)
def _critical_coefficients(channel: Channel, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Complex log-denominators and signed orders of a channel's critical points."""
    return _log_denominator(channel.critical_alpha, j), channel.sign * channel.critical_order


def is_top_channel(channel: Channel, params: ManifoldParams) -> bool:
    return math.isclose(channel.lam, float(params.two_rho), rel_tol=0, abs_tol=1e-12)


def _terms(alpha: np.ndarray, weights: np.ndarray, logden: np.ndarray, x: float, j: int) -> np.ndarray:
    L = math.log(x)
    return weights * np.exp((alpha + j) * L - logden)


def _sum_complex(parts: list[np.ndarray]) -> tuple[complex, float]:
    """Accurately summed value and the sum of magnitudes (for rounding bounds)."""
    if not parts:
        return 0j, 0.0
    allp = np.concatenate(parts)
    return (complex(math.fsum(allp.real), math.fsum(allp.imag)),
            float(np.abs(allp).sum()))


def _real_value(value: complex, magnitude: float) -> float:
    # rounding in a conjugate-closed sum is bounded by a few ulps of sum|terms|
    if abs(value.imag) > IMAG_RTOL * abs(value.real) + 1e-12 * magnitude:
        raise ValueError(
            f"imaginary residue {value.imag:.3e} against value {value.real:.3e}: "
            "catalog is not conjugate-closed")
    return value.real


def critical_sum(catalog: SingularityCatalog, x: float, j: int,
                 lower: float = 0.0, upper: float = math.inf,
                 top_only: bool = True) -> complex:
    """Signed critical-line sum over ``lower < |Im alpha| <= upper``."""
    parts = []
    for ch in catalog.channels:
        if ch.critical_alpha.size == 0 or (top_only and not is_top_channel(ch, catalog.params)):
            continue
        logden, w = _critical_coefficients(ch, j)
        h = np.abs(ch.critical_alpha.imag)
        lo, hi = np.searchsorted(h, lower, side="right"), np.searchsorted(h, upper, side="right")
        if hi > lo:
            parts.append(_terms(ch.critical_alpha[lo:hi], w[lo:hi], logden[lo:hi], x, j))
    return _sum_complex(parts)[0]


def explicit_psi_j(catalog: SingularityCatalog, x: float, j: int,
                   height: float | None = None) -> float:
    """Evaluate the explicit formula for ``psi_j`` with ``j >= n``.

    ``height`` optionally truncates the critical-line sum to ``|Im alpha| <= height``.
    Real singularities count only on ``rho < alpha <= 2 rho`` (strict at rho).
    """
    params = catalog.params
    if j < params.n:
        raise ValueError(f"the explicit formula needs j >= n = {params.n}, got j = {j}")
    if x <= 1:
        raise ValueError("x must exceed 1")
    rho, two_rho = float(params.rho), float(params.two_rho)
    upper = math.inf if height is None else height
    parts = []
    for ch in catalog.channels:
        mask = (ch.real_alpha > rho) & (ch.real_alpha <= two_rho)
        if mask.any():
            a = ch.real_alpha[mask]
            parts.append(_terms(a.astype(complex), ch.sign * ch.real_order[mask],
                                _log_denominator(a, j), x, j))
        if ch.critical_alpha.size and is_top_channel(ch, params):
            logden, w = _critical_coefficients(ch, j)
            hi = np.searchsorted(np.abs(ch.critical_alpha.imag), upper, side="right")
            parts.append(_terms(ch.critical_alpha[:hi], w[:hi], logden[:hi], x, j))
    return _real_value(*_sum_complex(parts))


def explicit_psi_nminus1(catalog: SingularityCatalog, config: Theorem4Config,
                         x: float) -> tuple[float, float]:
    """Conditional formula for ``psi_{n-1}``; returns ``(value, reported_bound)``.

    All real singularities and all non-real singularities with
    ``|Im alpha| <= T`` enter, in every channel. The bound
    ``x**(2 rho + eps1 + n - 1) / (eps1 * T**(1 - delta))`` is reported, not added.
    """
    params = catalog.params
    n = params.n
    if len(config.poly_log_coeffs) != n or len(config.poly_coeffs) != n:
        raise ValidationError(f"conditional-formula coefficient lists must have length n = {n}")
    if x <= 1:
        raise ValueError("x must exceed 1")
    j = n - 1
    for ch in catalog.channels:
        if np.any(np.abs(ch.real_alpha[:, None] + np.arange(n)) < DEGENERATE):
            raise ValueError(f"real singularity at an excluded integer 0..-(n-1) in channel p={ch.p}")
    L = math.log(x)
    poly = [c * x ** (n - 1 - k) * L for k, c in enumerate(config.poly_log_coeffs)]
    poly += [c * x ** (n - 1 - k) for k, c in enumerate(config.poly_coeffs)]
    parts = [np.array(poly, dtype=complex)]
    for ch in catalog.channels:
        if ch.real_alpha.size:
            a = ch.real_alpha
            parts.append(_terms(a.astype(complex), ch.sign * ch.real_order, _log_denominator(a, j), x, j))
        if ch.critical_alpha.size:
            logden, w = _critical_coefficients(ch, j)
            hi = np.searchsorted(np.abs(ch.critical_alpha.imag), config.truncation_height, side="right")
            parts.append(_terms(ch.critical_alpha[:hi], w[:hi], logden[:hi], x, j))
    value = _real_value(*_sum_complex(parts))
    bound = conditional_bound(params, config, x)
    return value, bound


def conditional_bound(params: ManifoldParams, config: Theorem4Config, x: float) -> float:
    e = float(params.two_rho) + config.epsilon1 + params.n - 1
    return x**e / (config.epsilon1 * config.truncation_height ** (1 - config.delta))


def tail_majorant(catalog: SingularityCatalog, x: float, j: int, y: float,
                  w: float = math.inf) -> float:
    """``x**(rho + j) * sum_{y < |Im alpha| <= w} |order| / prod |alpha + k|`` over top channels."""
    total = 0.0
    for ch in catalog.channels:
        if ch.critical_alpha.size == 0 or not is_top_channel(ch, catalog.params):
            continue
        h = np.abs(ch.critical_alpha.imag)
        lo, hi = np.searchsorted(h, y, side="right"), np.searchsorted(h, w, side="right")
        logden, _ = _critical_coefficients(ch, j)
        total += float(np.sum(np.abs(ch.critical_order[lo:hi]) * np.exp(-logden[lo:hi].real)))
    return x ** (float(catalog.params.rho) + j) * total


def main_term(params: ManifoldParams, x: float) -> float:
    """Leading contribution ``x**(2 rho) / (2 rho)`` at the psi_0 level."""
    if x <= 1:
        raise ValueError("x must exceed 1")
    two_rho = float(params.two_rho)
    return x**two_rho / two_rho


# -- synthetic catalogs ----------------------------------------------------

@dataclass(frozen=True)
class ChannelSpec:
    """Shape of one synthetic channel; ``lam=None`` means ``2 rho``."""

    p: int = 1
    tau_id: str = "trivial"
    lam: float | None = None
    real_singularities: Sequence[tuple[float, int]] | None = None
    critical: bool = True


def weyl_heights(c1: float, height: float, n: int) -> np.ndarray:
    """Heights ``(k / c1)**(1/n)`` for ``k = 1 .. floor(c1 * height**n)``."""
    count = math.floor(c1 * height**n * (1 + 1e-12))
    return (np.arange(1, count + 1, dtype=float) / c1) ** (1.0 / n)


def weyl_sample(params: ManifoldParams, c1: float, height: float,
                channel_spec: Sequence[ChannelSpec] | None = None) -> SingularityCatalog:
    """Catalog whose critical counting function is ``floor(c1 * y**n)``.

    By default there is one channel with ``p = 1`` (sign +1), ``lambda = 2 rho``
    and the single real singularity ``alpha = 2 rho``.
    """
    if c1 <= 0 or height <= 0:
        raise ValueError("c1 and height must be positive")
    specs = list(channel_spec) if channel_spec is not None else [ChannelSpec()]
    rho, two_rho = float(params.rho), float(params.two_rho)
    gam = weyl_heights(c1, height, params.n)
    crit = np.concatenate([rho + 1j * gam, rho - 1j * gam])
    channels = []
    for spec in specs:
        real = spec.real_singularities if spec.real_singularities is not None else [(two_rho, 1)]
        lam = two_rho if spec.lam is None else spec.lam
        c = crit if spec.critical else np.empty(0, dtype=complex)
        channels.append(Channel(spec.p, spec.tau_id, lam,
                                [a for a, _ in real], [o for _, o in real],
                                c, np.ones(c.size, dtype=np.int64)))
    return SingularityCatalog(params, tuple(channels), c1)


def real_singularities_in(catalog: SingularityCatalog, lower: Fraction | float,
                          upper: Fraction | float) -> list[tuple[float, int]]:
    """``(alpha, signed order)`` for real singularities with ``lower < alpha <= upper``."""
    out = []
    for ch in catalog.channels:
        for a, o in zip(ch.real_alpha.tolist(), ch.real_order.tolist()):
            if float(lower) < a <= float(upper):
                out.append((a, ch.sign * o))
    return out
