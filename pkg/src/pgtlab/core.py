"""Domain types shared across the package.

Everything here is immutable after construction. Singularity positions of a
channel are held as numpy arrays rather than one object per singularity, since
synthetic Weyl catalogs routinely carry millions of critical-line points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class ValidationError(ValueError):
    """Input data violates a documented invariant."""


class IncompleteDataError(ValueError):
    """A query reaches beyond the range where the data are known to be complete."""


def as_fraction(value) -> Fraction:
    """Parse ``"p/q"``, ints, Fractions or (exactly representable) floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**9)
    return Fraction(value)


@dataclass(frozen=True)
class ManifoldParams:
    n: int
    rho: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rho", as_fraction(self.rho))
        if int(self.n) != self.n or self.n < 2:
            raise ValidationError(f"n must be an integer >= 2, got {self.n}")
        if self.rho <= 0:
            raise ValidationError(f"rho must be positive, got {self.rho}")

    @classmethod
    def real_hyperbolic(cls, n: int) -> "ManifoldParams":
        return cls(n, Fraction(n - 1, 2))

    @property
    def two_rho(self) -> Fraction:
        return 2 * self.rho


MODULAR_SURFACE = ManifoldParams(2, Fraction(1, 2))


@dataclass(frozen=True)
class GeodesicRecord:
    norm: float
    length: float
    weight: float
    primitive: bool
    multiplicity: int = 1


@dataclass(frozen=True, eq=False)
class LengthSpectrum:
    """Geodesic records sorted by norm, complete up to ``norm_bound``.

    The flat arrays ``norms``, ``weights`` (weight times multiplicity) and
    ``primitive_counts`` are precomputed for the counting functions.
    """

    records: tuple[GeodesicRecord, ...]
    norm_bound: float
    norms: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)
    primitive_counts: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        recs = tuple(sorted(self.records, key=lambda r: (r.norm, not r.primitive, r.weight)))
        object.__setattr__(self, "records", recs)
        norms = np.array([r.norm for r in recs], dtype=float)
        weights = np.array([r.weight * r.multiplicity for r in recs], dtype=float)
        prim = np.array([r.multiplicity if r.primitive else 0 for r in recs], dtype=np.int64)
        for arr in (norms, weights, prim):
            arr.setflags(write=False)
        object.__setattr__(self, "norms", norms)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "primitive_counts", prim)

    def __len__(self) -> int:
        return len(self.records)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LengthSpectrum):
            return NotImplemented
        return self.norm_bound == other.norm_bound and self.records == other.records

    def multiset(self, digits: int = 9) -> dict[tuple[float, float, bool], int]:
        """(norm, weight, primitive) -> total multiplicity, rounded for comparison."""
        out: dict[tuple[float, float, bool], int] = {}
        for r in self.records:
            key = (round(r.norm, digits), round(r.weight, digits), r.primitive)
            out[key] = out.get(key, 0) + r.multiplicity
        return out

    def restrict(self, norm_bound: float) -> "LengthSpectrum":
        if norm_bound > self.norm_bound:
            raise IncompleteDataError(
                f"cannot extend spectrum complete to {self.norm_bound} up to {norm_bound}")
        return LengthSpectrum(tuple(r for r in self.records if r.norm <= norm_bound), norm_bound)


@dataclass(frozen=True)
class Singularity:
    alpha: complex
    order: int = 1


@dataclass(frozen=True, eq=False)
class Channel:
    """One factor ``(p, tau, lambda)`` of the Ruelle zeta function.

    ``real_alpha``/``real_order`` hold the real singularities; ``critical_alpha``
    and ``critical_order`` hold the non-real ones, which are expected to sit on
    ``Re = rho`` and be conjugate-closed (see :func:`validate_catalog`).
    """

    p: int
    tau_id: str
    lam: float
    real_alpha: np.ndarray
    real_order: np.ndarray
    critical_alpha: np.ndarray
    critical_order: np.ndarray
    sign: int | None = None

    def __post_init__(self):
        ra = np.asarray(self.real_alpha, dtype=float).ravel()
        ro = _orders(self.real_order, len(ra))
        ca = np.asarray(self.critical_alpha, dtype=complex).ravel()
        co = _orders(self.critical_order, len(ca))
        # deterministic accumulation order: by |Im|, then Im
        idx = np.lexsort((ca.imag, np.abs(ca.imag)))
        ca, co = ca[idx], co[idx]
        for arr in (ra, ro, ca, co):
            arr.setflags(write=False)
        object.__setattr__(self, "real_alpha", ra)
        object.__setattr__(self, "real_order", ro)
        object.__setattr__(self, "critical_alpha", ca)
        object.__setattr__(self, "critical_order", co)
        object.__setattr__(self, "lam", float(self.lam))
        if self.sign is None:
            object.__setattr__(self, "sign", (-1) ** (self.p + 1))

    @classmethod
    def from_singularities(cls, p: int, tau_id: str, lam: float,
                           real: Iterable[Singularity] = (),
                           critical: Iterable[Singularity] = (),
                           sign: int | None = None) -> "Channel":
        real = list(real)
        critical = list(critical)
        return cls(p, tau_id, lam,
                   [complex(s.alpha).real for s in real], [s.order for s in real],
                   [complex(s.alpha) for s in critical], [s.order for s in critical],
                   sign)

    def singularities(self) -> list[Singularity]:
        out = [Singularity(complex(a), int(o)) for a, o in zip(self.real_alpha, self.real_order)]
        out += [Singularity(complex(a), int(o)) for a, o in zip(self.critical_alpha, self.critical_order)]
        return out

    def negated(self) -> "Channel":
        return Channel(self.p, self.tau_id, self.lam, self.real_alpha, self.real_order,
                       self.critical_alpha, self.critical_order, -self.sign)


def _orders(orders, size: int) -> np.ndarray:
    if orders is None:
        return np.ones(size, dtype=np.int64)
    arr = np.asarray(orders, dtype=np.int64).ravel()
    if arr.size != size:
        raise ValidationError(f"{arr.size} orders given for {size} singularities")
    return arr.copy()


@dataclass(frozen=True, eq=False)
class SingularityCatalog:
    params: ManifoldParams
    channels: tuple[Channel, ...]
    weyl_constant: float

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))

    @property
    def critical_height(self) -> float:
        """Largest |Im alpha| present (0 for catalogs without critical points)."""
        heights = [np.abs(c.critical_alpha.imag).max() for c in self.channels if c.critical_alpha.size]
        return float(max(heights)) if heights else 0.0

    def negated(self) -> "SingularityCatalog":
        return SingularityCatalog(self.params, tuple(c.negated() for c in self.channels),
                                  self.weyl_constant)


@dataclass(frozen=True)
class SmoothingPlan:
    """Exponents of the Gallagher smoothing step for one choice of ``j``.

    ``d_exponents`` and ``y_exponents`` are the powers of ``(x, log x, log log x)``
    in the step width ``d`` and the split height ``Y``.
    """

    params: ManifoldParams
    j: int
    epsilon: float
    gamma_exp: Fraction
    beta: Fraction
    d_exponents: tuple[Fraction, Fraction, Fraction]
    y_exponents: tuple[Fraction, Fraction, Fraction]
    label: str = "unconditional"

    @property
    def psi0_x_exponent(self) -> Fraction:
        return self.params.two_rho - 1 + self.d_exponents[0]

    @property
    def psi0_log_exponent(self) -> Fraction:
        return self.d_exponents[1]

    def step_width(self, x: float, scale: float = 1.0) -> float:
        return scale * _log_power_law(x, self.d_exponents)

    def split_height(self, x: float, scale: float = 1.0) -> float:
        return scale * _log_power_law(x, self.y_exponents)


def _log_power_law(x: float, exps: Sequence[Fraction]) -> float:
    lx = math.log(x)
    return math.exp(float(exps[0]) * lx + float(exps[1]) * math.log(lx)
                    + float(exps[2]) * math.log(math.log(lx)))


@dataclass(frozen=True)
class ExceptionalReport:
    intervals: tuple[tuple[int, float], ...]
    total_measure: float
    epsilon: float = 0.01


@dataclass(frozen=True)
class Theorem4Config:
    """Inputs of the conditional ``psi_{n-1}`` formula.

    ``poly_log_coeffs[k]`` multiplies ``x**(n-1-k) * log x`` and
    ``poly_coeffs[k]`` multiplies ``x**(n-1-k)``.
    """

    poly_log_coeffs: tuple[float, ...]
    poly_coeffs: tuple[float, ...]
    truncation_height: float
    epsilon1: float = 0.1
    delta: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "poly_log_coeffs", tuple(float(c) for c in self.poly_log_coeffs))
        object.__setattr__(self, "poly_coeffs", tuple(float(c) for c in self.poly_coeffs))
        if self.truncation_height <= 0:
            raise ValidationError("truncation_height must be positive")
        if self.epsilon1 <= 0 or self.delta <= 0:
            raise ValidationError("epsilon1 and delta must be positive")

    @classmethod
    def zeros(cls, n: int, truncation_height: float, epsilon1: float = 0.1,
              delta: float = 0.1) -> "Theorem4Config":
        return cls((0.0,) * n, (0.0,) * n, truncation_height, epsilon1, delta)


def validate_catalog(catalog: SingularityCatalog, weyl_tolerance: float | None = 1.0) -> list[str]:
    """Check channel and catalog invariants; returns human-readable violations.

    The Weyl check compares the counting function ``N(y)`` of critical points
    with ``0 < Im <= y`` against ``C1 * y**n`` and flags channels where the gap
    exceeds ``weyl_tolerance * max(1, y**(n-1))``. Pass ``None`` to skip it.
    """
    params = catalog.params
    rho = float(params.rho)
    two_rho = float(params.two_rho)
    out: list[str] = []
    if not catalog.channels:
        out.append("catalog: no channels")
    if not catalog.weyl_constant > 0:
        out.append("catalog: weyl constant must be positive")
    for idx, ch in enumerate(catalog.channels):
        name = f"channel {idx} (p={ch.p}, tau={ch.tau_id}, lambda={ch.lam})"
        if not 0 <= ch.p <= params.n - 1:
            out.append(f"{name}: p outside [0, n-1]")
        if ch.sign != (-1) ** (ch.p + 1):
            out.append(f"{name}: sign {ch.sign} differs from (-1)^(p+1)")
        if np.any(ch.real_order == 0) or np.any(ch.critical_order == 0):
            out.append(f"{name}: zero singularity order")
        if np.any(ch.real_alpha > two_rho):
            out.append(f"{name}: real singularity above 2*rho")
        crit = ch.critical_alpha
        if crit.size == 0:
            continue
        if np.any(crit.real != rho):
            out.append(f"{name}: singularity off the critical line Re = rho")
        if np.any(crit.imag == 0):
            out.append(f"{name}: real value stored as critical singularity")
        if not _conjugate_closed(crit.imag, ch.critical_order):
            out.append(f"{name}: critical singularities not conjugate-closed")
        if weyl_tolerance is not None and catalog.weyl_constant > 0:
            gap = _weyl_gap(crit.imag, ch.critical_order, catalog.weyl_constant, params.n)
            if gap > weyl_tolerance:
                out.append(f"{name}: Weyl-law envelope exceeded (relative gap {gap:.3g})")
    return out


def _conjugate_closed(im: np.ndarray, orders: np.ndarray) -> bool:
    pos = im > 0
    up = sorted(zip(im[pos].tolist(), orders[pos].tolist()))
    down = sorted(zip((-im[~pos]).tolist(), orders[~pos].tolist()))
    return up == down


def _weyl_gap(im: np.ndarray, orders: np.ndarray, c1: float, n: int) -> float:
    """max over jump points of |N(y) - C1 y^n| / max(1, y^(n-1)), both one-sided limits."""
    pos = im > 0
    h = im[pos]
    w = np.abs(orders[pos])
    if h.size == 0:
        return 0.0
    idx = np.argsort(h, kind="stable")
    h, w = h[idx], w[idx]
    upper = np.cumsum(w)
    lower = upper - w
    model = c1 * h**n
    env = np.maximum(1.0, h ** (n - 1))
    return float(max(np.max(np.abs(upper - model) / env), np.max(np.abs(lower - model) / env)))
