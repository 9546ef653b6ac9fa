"""Chebyshev-type counting functions of a length spectrum and the logarithmic integral."""
from __future__ import annotations

import math

import numpy as np

from .core import IncompleteDataError, LengthSpectrum

EULER_GAMMA = 0.57721566490153286061


def _check(spectrum: LengthSpectrum, x: float) -> int:
    if x > spectrum.norm_bound:
        raise IncompleteDataError(f"x = {x} exceeds the spectrum bound {spectrum.norm_bound}")
    # norm-inclusive: records with N <= x
    return int(np.searchsorted(spectrum.norms, x, side="right"))


def psi0(spectrum: LengthSpectrum, x: float) -> float:
    """Sum of ``Lambda(gamma)`` over classes with ``N(gamma) <= x``."""
    k = _check(spectrum, x)
    return math.fsum(spectrum.weights[:k])


def psi_j(spectrum: LengthSpectrum, x: float, j: int) -> float:
    """``j``-fold integral of :func:`psi0`, in closed form.

    Integrating the step function ``j`` times gives
    ``sum Lambda(gamma) (x - N(gamma))**j / j!`` over ``N(gamma) <= x``.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    if j == 0:
        return psi0(spectrum, x)
    k = _check(spectrum, x)
    terms = spectrum.weights[:k] * (x - spectrum.norms[:k]) ** j
    return math.fsum(terms) / math.factorial(j)


def pi_gamma(spectrum: LengthSpectrum, x: float) -> int:
    """Number of primitive classes with ``N(gamma) <= x``."""
    k = _check(spectrum, x)
    return int(spectrum.primitive_counts[:k].sum())


def li(x: float, tol: float = 1e-12) -> float:
    """Principal-value logarithmic integral for ``x > 1``.

    Summed as ``gamma + log log x + sum (log x)**k / (k k!)``; every term is
    positive for ``x > 1`` so there is no cancellation. Summation stops once a
    term drops below ``tol * max(1, |partial sum|)`` past the peak term.
    """
    if x <= 1:
        raise ValueError("li is only defined here for x > 1")
    L = math.log(x)
    total = 0.0
    term = 1.0
    k = 0
    while True:
        k += 1
        term *= L / k
        contribution = term / k
        total += contribution
        if k > L and contribution <= tol * max(1.0, abs(total)):
            break
    return EULER_GAMMA + math.log(L) + total


def geometric_grid(x0: float, ratio: float, count: int) -> np.ndarray:
    """``x_k = x0 * ratio**k`` for ``k = 0 .. count-1``."""
    return x0 * ratio ** np.arange(count, dtype=float)


def parse_grid(spec: str) -> np.ndarray:
    """Parse ``"x0:r:count"``."""
    try:
        x0, r, count = spec.split(":")
        return geometric_grid(float(x0), float(r), int(count))
    except ValueError as exc:
        raise ValueError(f"grid spec must look like 'x0:r:count', got {spec!r}") from exc


def counting_table(spectrum: LengthSpectrum, xs, j: int) -> list[dict]:
    """Rows ``x, psi0, psi_j, pi_gamma`` for each grid point."""
    return [{"x": float(x), "psi0": psi0(spectrum, x), "psi_j": psi_j(spectrum, x, j),
             "pi_gamma": pi_gamma(spectrum, x)} for x in xs]
