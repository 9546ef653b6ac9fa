"""Prime geodesic theorem comparisons and exponent regression."""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .chebyshev import li, pi_gamma
from .core import Channel, LengthSpectrum, ManifoldParams, SingularityCatalog
from .explicit import real_singularities_in
from .gallagher import DEFAULT_EPSILON, error_exponent, exponent_limit

MODES = ("gallagher", "unconditional")
COMPARE_COLUMNS = ["x", "pi_gamma", "li_sum", "remainder", "bound"]


def main_catalog(params: ManifoldParams) -> SingularityCatalog:
    """Catalog holding only the leading real singularity ``alpha = 2 rho``."""
    ch = Channel(1, "trivial", float(params.two_rho), [float(params.two_rho)], [1], [], [])
    return SingularityCatalog(params, (ch,), 1.0)


def cutoff(params: ManifoldParams, mode: str, j: int):
    """Real singularities above this exponent enter the li-sum."""
    if mode == "gallagher":
        return error_exponent(params, j)
    if mode == "unconditional":
        return exponent_limit(params)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def error_bound(params: ManifoldParams, mode: str, j: int, x: float,
                epsilon: float = DEFAULT_EPSILON) -> float:
    """Size of the error term, with all implied constants set to 1."""
    lx = math.log(x)
    if mode == "gallagher":
        ell = float(params.n - 1) / (2 * params.n * j + 1)
        return x ** float(error_exponent(params, j)) * lx ** (ell - 1) * math.log(lx) ** (ell + epsilon)
    cutoff(params, mode, j)
    return x ** float(exponent_limit(params)) / lx


def pgt_compare(spectrum: LengthSpectrum, params: ManifoldParams, mode: str, j: int,
                grid: Iterable[float], catalog: SingularityCatalog | None = None,
                epsilon: float = DEFAULT_EPSILON) -> list[dict]:
    """Rows ``x, pi_gamma, li_sum, remainder, bound`` comparing the count with ``sum li(x**alpha)``."""
    xs = [float(x) for x in grid]
    lower = cutoff(params, mode, j)
    if mode == "unconditional" and j < params.n:
        raise ValueError(f"unconditional mode needs j >= n = {params.n}")
    if not xs:
        return []
    if min(xs) <= math.e:
        raise ValueError("grid points must exceed e")
    cat = catalog if catalog is not None else main_catalog(params)
    alphas = real_singularities_in(cat, lower, params.two_rho)
    rows = []
    for x in xs:
        count = pi_gamma(spectrum, x)
        s = math.fsum(o * li(x**a) for a, o in alphas)
        rows.append({"x": x, "pi_gamma": count, "li_sum": s, "remainder": count - s,
                     "bound": error_bound(params, mode, j, x, epsilon)})
    return rows


def fit_exponent(series: Sequence[tuple[float, float]], min_points: int = 10,
                 min_decades: float = 2.0) -> tuple[float, float]:
    """Least-squares slope of ``log|remainder|`` against ``log x``, zeros ignored."""
    pts = np.array([(x, abs(r)) for x, r in series if r != 0 and x > 0], dtype=float).reshape(-1, 2)
    if len(pts) < min_points:
        raise ValueError(f"need at least {min_points} non-zero points, got {len(pts)}")
    span = math.log10(pts[:, 0].max() / pts[:, 0].min())
    if span < min_decades:
        raise ValueError(f"x spans {span:.2f} decades, need {min_decades}")
    fit = stats.linregress(np.log(pts[:, 0]), np.log(pts[:, 1]))
    return float(fit.slope), float(fit.stderr)
