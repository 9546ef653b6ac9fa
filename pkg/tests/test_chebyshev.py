import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgtlab.chebyshev import counting_table, li, parse_grid, pi_gamma, psi0, psi_j
from oracles import iterated_quadrature, li_oracle, random_spectrum
from pgtlab.core import GeodesicRecord, IncompleteDataError, LengthSpectrum
from pgtlab.spectrum import class_count_for_trace, enumerate_spectrum

EMPTY = LengthSpectrum((), 100.0)


def test_empty_spectrum():
    assert psi0(EMPTY, 10) == 0
    assert psi_j(EMPTY, 10, 3) == 0
    assert pi_gamma(EMPTY, 10) == 0


def test_hand_examples():
    recs = tuple(GeodesicRecord(math.e**k, float(k), 1.0, k == 1) for k in (1, 2, 3))
    s = LengthSpectrum(recs, 100.0)
    assert psi0(s, math.e**2.5) == 2
    single = LengthSpectrum((GeodesicRecord(2.0, math.log(2), math.log(2), True),), 10.0)
    assert psi_j(single, 5.0, 1) == pytest.approx(3 * math.log(2), rel=1e-15)


def test_modular_small_x():
    s = enumerate_spectrum(100)
    h3 = class_count_for_trace(3)
    assert pi_gamma(s, 6) == 0
    assert pi_gamma(s, 7) == h3
    assert psi0(s, 7) == pytest.approx(h3 * 2 * math.log((3 + math.sqrt(5)) / 2), rel=1e-15)


def test_modular_psi2_quadrature():
    s = enumerate_spectrum(100)
    assert psi_j(s, 100.0, 2) == pytest.approx(iterated_quadrature(s, 100.0, 2), rel=1e-6)


def test_incomplete_data_rejected():
    s = enumerate_spectrum(100)
    for f in (psi0, pi_gamma):
        with pytest.raises(IncompleteDataError):
            f(s, 101.0)
    with pytest.raises(IncompleteDataError):
        psi_j(s, 101.0, 2)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("j", [1, 2, 3])
def test_closed_form_matches_quadrature(seed, j):
    rng = np.random.default_rng(seed)
    s = random_spectrum(rng, 30)
    x = float(rng.uniform(10, 59))
    assert psi_j(s, x, j) == pytest.approx(iterated_quadrature(s, x, j), rel=1e-6)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_derivative_chain(j):
    s = random_spectrum(np.random.default_rng(7), 40)
    x = 33.3
    assert np.all(np.abs(s.norms - x) > 1e-2)
    target = psi_j(s, x, j - 1)
    est = {}
    for h in (1e-3, 1e-4):
        est[h] = (psi_j(s, x + h, j) - psi_j(s, x, j)) / h
        assert est[h] == pytest.approx(target, rel=5e-2 if j > 1 else 1e-9)
    # error shrinks roughly tenfold, as for a first-order difference
    if j > 1:
        assert abs(est[1e-4] - target) < abs(est[1e-3] - target) / 5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.floats(1.0, 59.0), st.floats(0.0, 1.0))
def test_monotone_in_x(j, x, dx):
    s = random_spectrum(np.random.default_rng(3), 25)
    assert psi_j(s, x, j) <= psi_j(s, min(x + dx, 60.0), j)


@pytest.mark.parametrize("x", [1.5, 2.0, math.e, 10.0, 1e3, 1e6])
def test_li_against_quadrature(x):
    assert li(x) == pytest.approx(li_oracle(x), rel=1e-10)


def test_li_values():
    assert li(2.0) == pytest.approx(1.04516, abs=1e-5)
    assert li(math.e) == pytest.approx(1.89512, abs=1e-5)
    with pytest.raises(ValueError):
        li(1.0)


def test_li_excess_grows():
    xs = np.geomspace(10, 1e8, 30)
    gaps = [li(x) - x / math.log(x) for x in xs]
    assert all(g > 0 for g in gaps)
    assert all(b > a for a, b in zip(gaps, gaps[1:]))


@settings(max_examples=50, deadline=None)
@given(st.floats(1.0001, 1e12), st.floats(1e-6, 1.0))
def test_li_increasing(x, rel):
    assert li(x * (1 + rel)) > li(x)


def test_grid_and_table():
    xs = parse_grid("10:2:4")
    assert list(xs) == [10.0, 20.0, 40.0, 80.0]
    with pytest.raises(ValueError):
        parse_grid("10:2")
    rows = counting_table(enumerate_spectrum(100), xs, 2)
    assert [r["pi_gamma"] for r in rows] == sorted(r["pi_gamma"] for r in rows)
