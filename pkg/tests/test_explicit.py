import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgtlab.core import (MODULAR_SURFACE, Channel, ManifoldParams, SingularityCatalog,
                         Theorem4Config, ValidationError, validate_catalog)
from pgtlab.explicit import (ChannelSpec, critical_sum, explicit_psi_j, explicit_psi_nminus1,
                             main_term, real_singularities_in, tail_majorant, weyl_heights,
                             weyl_sample)
from pgtlab.gallagher import fit_loglog_slope

P = MODULAR_SURFACE


def single_real(alpha=1.0, p=1, params=P, lam=None):
    lam = float(params.two_rho) if lam is None else lam
    return SingularityCatalog(params, (Channel(p, "t", lam, [alpha], [1], [], []),), 1.0)


def pair(t, params=P):
    rho = float(params.rho)
    ch = Channel(1, "t", float(params.two_rho), [], [], [complex(rho, t), complex(rho, -t)], [1, 1])
    return SingularityCatalog(params, (ch,), 1.0)


def test_single_real_alpha():
    x = 7.3
    assert explicit_psi_j(single_real(), x, 2) == pytest.approx(x**3 / 6, rel=1e-14)


def test_conjugate_pair():
    x, t, j = 50.0, 3.7, 2
    a = complex(0.5, t)
    expect = 2 * (x ** (a + j) / (a * (a + 1) * (a + 2))).real
    assert explicit_psi_j(pair(t), x, j) == pytest.approx(expect, rel=1e-13)


def test_rejects_small_j_and_degenerate():
    with pytest.raises(ValueError):
        explicit_psi_j(single_real(), 10.0, 1)
    # excluded integers 0, -1 make a denominator factor vanish
    with pytest.raises(ValueError):
        explicit_psi_nminus1(single_real(-1.0), Theorem4Config.zeros(2, 10.0), 10.0)
    with pytest.raises(ValueError):
        explicit_psi_nminus1(single_real(0.0), Theorem4Config.zeros(2, 10.0), 10.0)


def test_real_range_strict_at_rho():
    # alpha = rho exactly is excluded, alpha just above is included
    assert explicit_psi_j(single_real(0.5), 10.0, 2) == 0.0
    assert explicit_psi_j(single_real(0.5000001), 10.0, 2) != 0.0


def test_critical_sum_only_top_channels():
    cat = weyl_sample(P, 1.0, 5.0, [ChannelSpec(lam=0.7, real_singularities=[])])
    assert explicit_psi_j(cat, 20.0, 2) == 0.0
    assert critical_sum(cat, 20.0, 2, top_only=False) != 0


def test_main_term():
    assert main_term(P, 100.0) == pytest.approx(100.0)
    assert main_term(ManifoldParams(3, 1), 10.0) == pytest.approx(50.0)
    assert main_term(ManifoldParams(4, "3/2"), math.e**2) == pytest.approx(math.e**6 / 3)


def test_weyl_sample_examples():
    assert np.allclose(weyl_heights(1.0, 3.0, 2), np.sqrt(np.arange(1, 10)))
    assert weyl_heights(1.0, 10.0, 2).size == 100
    assert np.sum(weyl_heights(2.0, 5.0, 2) <= 5.0) == 50
    cat = weyl_sample(P, 1.0, 10.0)
    assert cat.channels[0].critical_alpha.size == 200
    assert validate_catalog(cat) == []


def test_high_precision_resummation():
    cat = weyl_sample(P, 1.0, 100.0)
    x, j = math.exp(10), 2
    mpmath.mp.dps = 40
    total = mpmath.mpf(0)
    X = mpmath.mpf(x)
    for ch in cat.channels:
        for a, o in zip(ch.real_alpha, ch.real_order):
            if 0.5 < a <= 1.0:
                total += ch.sign * int(o) * X ** (a + j) / mpmath.fprod(mpmath.mpf(a) + k for k in range(j + 1))
        for a, o in zip(ch.critical_alpha, ch.critical_order):
            s = mpmath.mpc(a.real, a.imag)
            total += ch.sign * int(o) * (X ** (s + j) / mpmath.fprod(s + k for k in range(j + 1))).real
    assert explicit_psi_j(cat, x, j) == pytest.approx(float(total), rel=1e-8)


def test_scaling_in_j():
    alpha, x = 0.8, 12.5
    cat = single_real(alpha)
    for j in (2, 3, 4):
        ratio = explicit_psi_j(cat, x, j) / explicit_psi_j(cat, x, j + 1)
        assert ratio == pytest.approx((alpha + j + 1) / x, rel=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.5, 1e4), st.integers(2, 5))
def test_negation_is_exact(x, j):
    cat = weyl_sample(P, 1.0, 8.0, [ChannelSpec(p=1), ChannelSpec(p=0, real_singularities=[(0.7, 2)])])
    assert explicit_psi_j(cat.negated(), x, j) == -explicit_psi_j(cat, x, j)


@settings(max_examples=30, deadline=None)
@given(st.floats(2.0, 1e5), st.integers(2, 4), st.floats(0.5, 3.0))
def test_real_output_on_conjugate_closed(x, j, c1):
    cat = weyl_sample(P, c1, 20.0)
    z = critical_sum(cat, x, j)
    mag = x ** (0.5 + j) * tail_majorant(cat, 1.0, j, 0.0)
    assert abs(z.imag) <= 1e-10 * max(abs(z.real), 1e-300) + 1e-13 * mag


def test_open_pair_rejected():
    ch = Channel(1, "t", 1.0, [], [], [complex(0.5, 2.0)], [1])
    with pytest.raises(ValueError, match="conjugate"):
        explicit_psi_j(SingularityCatalog(P, (ch,), 1.0), 10.0, 2)


@pytest.mark.parametrize("j", [2, 3])
def test_truncation_controlled_by_tail_majorant(j):
    cat = weyl_sample(P, 1.0, 200.0)
    x = 1e3
    full = explicit_psi_j(cat, x, j)
    for y in (10.0, 30.0, 100.0):
        assert abs(full - explicit_psi_j(cat, x, j, height=y)) <= tail_majorant(cat, x, j, y)


@pytest.mark.parametrize("j", [2, 3, 4])
def test_tail_majorant_decay(j):
    # sum_{|Im| > Y} |alpha|^-(j+1) against N'(y) ~ 2 C1 n y^(n-1) decays like Y^-(j+1-n)
    cat = weyl_sample(P, 1.0, 1000.0)
    ys = np.geomspace(10, 100, 10)
    slope, _ = fit_loglog_slope(ys, [tail_majorant(cat, 100.0, j, y) for y in ys])
    assert slope == pytest.approx(-(j + 1 - P.n), abs=0.3)


def test_conditional_examples():
    x = 9.0
    value, bound = explicit_psi_nminus1(SingularityCatalog(P, (), 1.0), Theorem4Config.zeros(2, 10.0), x)
    assert value == 0.0
    assert bound == pytest.approx(x ** (1 + 0.1 + 1) / (0.1 * 10.0**0.9))
    value, _ = explicit_psi_nminus1(single_real(1.0), Theorem4Config.zeros(2, 10.0), x)
    assert value == pytest.approx(x**2 / 2, rel=1e-14)


def test_conditional_polynomial_part():
    cfg = Theorem4Config((2.0, 3.0), (5.0, 7.0), 10.0)
    x = 4.0
    value, _ = explicit_psi_nminus1(SingularityCatalog(P, (), 1.0), cfg, x)
    L = math.log(x)
    assert value == pytest.approx(2 * x * L + 3 * L + 5 * x + 7, rel=1e-14)
    with pytest.raises(ValidationError):
        explicit_psi_nminus1(SingularityCatalog(P, (), 1.0), Theorem4Config((1.0,), (1.0,), 10.0), x)


def test_conditional_includes_all_real_and_channels():
    # negative real singularities and lambda != 2 rho channels both enter the conditional formula
    ch = Channel(1, "t", 0.3, [-0.5, 0.2], [1, 1], [0.5 + 2j, 0.5 - 2j], [1, 1])
    cat = SingularityCatalog(P, (ch,), 1.0)
    x = 5.0
    value, _ = explicit_psi_nminus1(cat, Theorem4Config.zeros(2, 10.0), x)
    a = 0.5 + 2j
    expect = sum(x ** (b + 1) / (b * (b + 1)) for b in (-0.5, 0.2)) + 2 * (x ** (a + 1) / (a * (a + 1))).real
    assert value == pytest.approx(expect, rel=1e-13)


def test_conditional_truncation_sweep():
    cat = weyl_sample(P, 0.01, 1e4)
    x = math.exp(8)
    lo, bound = explicit_psi_nminus1(cat, Theorem4Config.zeros(2, 1e3), x)
    hi, _ = explicit_psi_nminus1(cat, Theorem4Config.zeros(2, 1e4), x)
    assert abs(hi - lo) < bound


def test_real_singularities_in():
    cat = weyl_sample(P, 1.0, 2.0, [ChannelSpec(p=0, real_singularities=[(1.0, 1), (0.6, 2), (0.2, 1)])])
    assert real_singularities_in(cat, 0.5, 1.0) == [(1.0, -1), (0.6, -2)]
