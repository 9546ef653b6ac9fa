"""Length spectrum of the modular surface PSL(2, Z) \\ H.

Primitive hyperbolic conjugacy classes of trace ``t`` are counted through
indefinite binary quadratic forms: writing ``t^2 - 4 = u^2 D`` with ``D`` a
discriminant, every proper class of primitive forms of discriminant ``D``
contributes one primitive conjugacy class of trace ``t`` exactly when
``(t + u sqrt(D)) / 2`` is the fundamental solution of ``T^2 - D U^2 = 4``.
Hence the count is a sum of narrow class numbers over those ``D``.

:func:`brute_force_spectrum` is an independent check that enumerates integer
matrices directly and never touches quadratic forms.

The modular surface is non-compact and has torsion, so it lies outside the
compact torsion-free setting of the explicit formulas; only the counting side
(n = 2, rho = 1/2) is used from it.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np

from .core import GeodesicRecord, LengthSpectrum


@dataclass(frozen=True)
class TraceClass:
    trace: int
    discriminant: int
    class_count: int
    eigenvalue: float

    @property
    def norm(self) -> float:
        return self.eigenvalue**2


def eigenvalue(t: int) -> float:
    """Larger eigenvalue of a determinant-one matrix of trace ``t >= 3``."""
    return (t + math.sqrt(t * t - 4)) / 2


def trace_norm(t: int) -> float:
    return eigenvalue(t) ** 2


def power_trace(t: int, k: int) -> int:
    """Trace of ``M**k`` for ``det M = 1``, ``tr M = t`` (Chebyshev recurrence)."""
    prev, cur = 2, t
    for _ in range(k - 1):
        prev, cur = cur, t * cur - prev
    return cur if k >= 1 else 2


def _is_square(m: int) -> bool:
    return m >= 0 and isqrt(m) ** 2 == m


def is_discriminant(d: int) -> bool:
    return d % 4 in (0, 1) and not _is_square(d)


# -- indefinite forms ------------------------------------------------------

def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Primitive reduced forms ``(a, b, c)`` of discriminant ``D > 0``.

    Reduced means ``0 < b < sqrt(D)`` and ``sqrt(D) - b < 2|a| < sqrt(D) + b``.
    """
    if not is_discriminant(D) or D <= 0:
        raise ValueError(f"{D} is not a positive non-square discriminant")
    s = isqrt(D)
    sq = math.sqrt(D)
    b = np.arange(2 - D % 2, s + 1, 2, dtype=np.int64)
    b = b[b * b < D]
    m = (D - b * b) // 4
    a = np.arange(1, s + 1, dtype=np.int64)
    bi, ai = np.nonzero(m[:, None] % a[None, :] == 0)
    B, A = b[bi], a[ai]
    C = m[bi] // A
    keep = (sq - B < 2 * A) & (2 * A < sq + B)
    B, A, C = B[keep], A[keep], C[keep]
    keep = np.gcd(np.gcd(A, B), C) == 1
    B, A, C = B[keep].tolist(), A[keep].tolist(), C[keep].tolist()
    # ac = (b^2 - D)/4 < 0: both sign patterns (a, -c) and (-a, c) occur
    return [(x, y, -z) for x, y, z in zip(A, B, C)] + [(-x, y, z) for x, y, z in zip(A, B, C)]


def reduction_step(form: tuple[int, int, int], D: int) -> tuple[int, int, int]:
    """Proper neighbour ``(c, b', (b'^2 - D) / 4c)`` with ``b' = -b mod 2|c|`` maximal below sqrt(D)."""
    _, b, c = form
    m = 2 * abs(c)
    s = isqrt(D)
    top = s if s * s < D else s - 1
    bp = top - ((top + b) % m)
    return (c, bp, (bp * bp - D) // (4 * c))


@lru_cache(maxsize=None)
def narrow_class_number(D: int) -> int:
    """Number of SL(2, Z)-classes of primitive forms of discriminant ``D``.

    Each proper class owns one cycle of reduced forms under :func:`reduction_step`.
    """
    forms = set(reduced_forms(D))
    seen: set[tuple[int, int, int]] = set()
    cycles = 0
    for f in forms:
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = reduction_step(g, D)
    return cycles


def pell_fundamental(D: int, limit: int | None = None) -> tuple[int, int] | None:
    """Smallest solution ``(T, U)``, ``U > 0`` of ``T^2 - D U^2 = 4``.

    Uses the continued fraction of ``sqrt(D)``: for ``D > 16`` every solution has
    ``T/U`` (or half of it) among the convergents. Returns ``None`` if the
    fundamental ``U`` exceeds ``limit``.
    """
    if not is_discriminant(D) or D <= 0:
        raise ValueError(f"{D} is not a positive non-square discriminant")
    if D <= 16:
        u = 1
        while not _is_square(D * u * u + 4):
            u += 1
        return (isqrt(D * u * u + 4), u)
    a0 = isqrt(D)
    P, Q, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    best: tuple[int, int] | None = None
    while best is None or q <= best[1]:
        if limit is not None and q > limit:
            break
        norm = p * p - D * q * q
        cand = (p, q) if norm == 4 else (2 * p, 2 * q) if norm == 1 else None
        if cand and (best is None or cand[1] < best[1]):
            best = cand
        P = a * Q - P
        Q = (D - P * P) // Q
        a = (a0 + P) // Q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    if best is not None and limit is not None and best[1] > limit:
        return None
    return best


def class_count_for_trace(t: int) -> int:
    """Number of primitive hyperbolic conjugacy classes of PSL(2, Z) with trace ``t``."""
    if t < 3:
        raise ValueError(f"trace {t} is not hyperbolic (need t >= 3)")
    N = t * t - 4
    total = 0
    u = 1
    while u * u <= N:
        if N % (u * u) == 0:
            D = N // (u * u)
            if is_discriminant(D) and pell_fundamental(D, limit=u) == (t, u):
                total += narrow_class_number(D)
        u += 1
    return total


def max_trace(norm_bound: float) -> int:
    if norm_bound <= 1:
        return 2
    r = math.sqrt(norm_bound)
    t = int(math.floor(r + 1 / r)) + 1
    while t >= 3 and trace_norm(t) > norm_bound:
        t -= 1
    return t


def trace_classes(norm_bound: float, workers: int = 1) -> list[TraceClass]:
    traces = range(3, max_trace(norm_bound) + 1)
    if workers > 1 and len(traces) > 64:
        with ProcessPoolExecutor(workers) as pool:
            counts = list(pool.map(class_count_for_trace, traces, chunksize=32))
    else:
        counts = [class_count_for_trace(t) for t in traces]
    return [TraceClass(t, t * t - 4, h, eigenvalue(t)) for t, h in zip(traces, counts) if h]


def enumerate_spectrum(norm_bound: float, workers: int = 1) -> LengthSpectrum:
    """All primitive classes with norm <= bound plus their powers.

    Norms are derived from exact integer traces, so a k-th power carries the
    norm of trace ``power_trace(t, k)``.
    """
    if norm_bound <= 1:
        raise ValueError("norm_bound must exceed 1")
    records = []
    for tc in trace_classes(norm_bound, workers):
        weight = math.log(tc.norm)
        k = 1
        tk = tc.trace
        while trace_norm(tk) <= norm_bound:
            norm = trace_norm(tk)
            records.append(GeodesicRecord(norm, math.log(norm), weight, k == 1, tc.class_count))
            k += 1
            tk = power_trace(tc.trace, k)
    return LengthSpectrum(tuple(records), float(norm_bound))


# -- brute-force oracle ----------------------------------------------------

def _matrices_with_trace(t: int, bound: int) -> list[tuple[int, int, int, int]]:
    mats = []
    for a in range(max(-bound, t - bound), min(bound, t + bound) + 1):
        d = t - a
        m = a * d - 1  # = bc
        r = isqrt(abs(m))
        pairs = set()
        for x in range(1, r + 1):
            if m % x == 0:
                y = m // x
                pairs.update(((x, y), (y, x), (-x, -y), (-y, -x)))
        for b, c in pairs:
            if abs(b) <= bound and abs(c) <= bound:
                mats.append((a, b, c, d))
    return mats


def _conjugacy_classes(t: int, bound: int) -> list[tuple[int, int, int, int]]:
    """One representative per component of the conjugation graph inside the box.

    Edges join M to S M S^-1, T M T^-1 and T^-1 M T when both ends lie in the
    box; classes that only connect through larger matrices get split, which is
    why the entry bound has to be generous.
    """
    mats = _matrices_with_trace(t, bound)
    index = {m: i for i, m in enumerate(mats)}
    parent = list(range(len(mats)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (a, b, c, d) in enumerate(mats):
        for nb in ((d, -c, -b, a), (a + c, b + d - a - c, c, d - c), (a - c, b - d + a - c, c, d + c)):
            j = index.get(nb)
            if j is not None:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    reps = {}
    for i, m in enumerate(mats):
        reps.setdefault(find(i), m)
    return list(reps.values())


def _chebyshev_u(k: int, s: int) -> int:
    if k < 0:
        return 0
    prev, cur = 0, 1
    for _ in range(k):
        prev, cur = cur, s * cur - prev
    return cur


def root_trace(m: tuple[int, int, int, int]) -> int:
    """Trace of the primitive root of a hyperbolic matrix with positive trace.

    ``P**k = U_{k-1}(s) P - U_{k-2}(s) I`` for ``tr P = s``, so a root of trace
    ``s`` exists iff ``(M + U_{k-2} I) / U_{k-1}`` is integral.
    """
    a, b, c, d = m
    t = a + d
    for s in range(3, t):
        k = 2
        while True:
            tk = _chebyshev_u(k, s) - _chebyshev_u(k - 2, s)
            if tk > t:
                break
            if tk == t:
                u1, u2 = _chebyshev_u(k - 1, s), _chebyshev_u(k - 2, s)
                if all(v % u1 == 0 for v in (a + u2, b, c, d + u2)):
                    return s
            k += 1
    return t


def brute_force_spectrum(norm_bound: float, entry_bound: int) -> LengthSpectrum:
    """Spectrum from explicit enumeration of SL(2, Z) matrices with bounded entries.

    May undercount (or split classes) if ``entry_bound`` is too small; taking
    ``entry_bound >= norm_bound`` has been sufficient in practice.
    """
    counts: Counter[tuple[int, int]] = Counter()
    for t in range(3, max_trace(norm_bound) + 1):
        for m in _conjugacy_classes(t, entry_bound):
            counts[(t, root_trace(m))] += 1
    records = []
    for (t, t0), mult in counts.items():
        norm = trace_norm(t)
        records.append(GeodesicRecord(norm, math.log(norm), math.log(trace_norm(t0)), t == t0, mult))
    return LengthSpectrum(tuple(records), float(norm_bound))
