from __future__ import annotations

import math

import numpy as np
import pytest

from mellinzeta import calibration, mean_square as ms
from mellinzeta.arith import divisor_sieve
from mellinzeta.errors import CapacityError, DomainError, NoSignChangeError
from mellinzeta.zeta_core import EULER_GAMMA, TWO_PI

from . import oracle_values as ov


def test_main_term_values():
    assert ms.main_term(TWO_PI) == pytest.approx(TWO_PI * (2 * EULER_GAMMA - 1), rel=1e-15)
    assert ms.main_term(0.0) == 0.0
    assert abs(ms.main_term(1e-12)) < 1e-10
    assert ms.main_term(100.0) == pytest.approx(ov.MAIN_TERM_100, rel=1e-14)
    with pytest.raises(DomainError):
        ms.main_term(-1.0)


def test_E_oracles():
    assert ms.E(0.0).value == 0.0
    for T, ref in [(10.0, ov.E_10), (1000.0, ov.E_1000)]:
        r = ms.E(T)
        assert abs(r.value - ref) <= r.abs_err
        assert r.abs_err <= 1e-4


def test_E_off_grid_uses_partial_cell():
    a, b = ms.E(1000.0).value, ms.E(1000.1).value
    # E' = Z^2 - log(T/2pi) - 2 gamma is bounded by a few units near 1000
    assert abs(b - a) <= 0.1 * 20


def test_E_mean_square_scaling():
    vals = []
    for T in (1e3, 1e4):
        ts = np.arange(1.0, T, 0.5)
        e = np.array([ms.E(t).value for t in ts])
        vals.append(float(np.mean(e * e)) / math.sqrt(T))
    assert all(0.05 < v < 20 for v in vals)
    assert 0.3 < vals[1] / vals[0] < 3


@pytest.mark.parametrize("T", [100.0, 500.0])
def test_find_E_zero_bracket(T):
    rec = ms.find_E_zero(T, 10.0)
    assert T <= rec.x_lo <= rec.x_star <= rec.x_hi <= T + 10 * math.sqrt(T)
    assert rec.x_hi - rec.x_lo <= 1e-8 or rec.x_lo == rec.x_hi
    e_lo, e_hi = ms.E(rec.x_lo).value, ms.E(rec.x_hi).value
    assert e_lo * e_hi <= 0
    assert rec.residual <= 1e-6


def test_find_E_zero_fresh_table_halved_step():
    fine = ms.ZetaSquareTable(step=0.125)
    for T in (100.0, 500.0):
        rec = ms.find_E_zero(T, 10.0)
        again = abs(ms.E(rec.x_star, fine).value)
        assert again <= 10 * max(rec.residual, ms.E(rec.x_star, fine).abs_err)


class ZeroAt100:
    """Stand-in table on which E(T) = T - 100, exactly 0 at the anchor."""

    step = 0.25

    def integral(self, T):
        return ms.EvalResult(ms.main_term(T) + (T - 100.0), 0.0)

    def E_on_grid(self, i_lo, i_hi):
        xs = self.step * np.arange(i_lo, i_hi + 1)
        return xs, xs - 100.0


def test_find_E_zero_degenerate_anchor():
    rec = ms.find_E_zero(100.0, 10.0, ZeroAt100())
    assert (rec.x_lo, rec.x_hi, rec.x_star, rec.residual) == (100.0, 100.0, 100.0, 0.0)


class ConstantE:
    """Stand-in table on which E is identically 1."""

    step = 0.25

    def integral(self, T):
        return ms.EvalResult(ms.main_term(T) + 1.0, 0.0)

    def E_on_grid(self, i_lo, i_hi):
        xs = self.step * np.arange(i_lo, i_hi + 1)
        return xs, np.ones(xs.size)


def test_find_E_zero_no_sign_change():
    with pytest.raises(NoSignChangeError):
        ms.find_E_zero(100.0, 10.0, ConstantE())
    with pytest.raises(DomainError):
        ms.find_E_zero(100.0, 0.5)


def test_zero_cache_roundtrip(tmp_path):
    cache = ms.EZeroCache(tmp_path / "z.csv")
    x = ms.E_zero(500.0, 10.0, cache=cache)
    assert cache.lookup(500.0, 10.0) == x
    assert (tmp_path / "z.csv").read_text().splitlines()[0] == "T_anchor,C,x_star,residual"
    assert ms.E_zero(500.0, 10.0, cache=cache) == x
    assert len(cache.entries()) == 1


def test_G_and_G1_at_zero():
    assert ms.G_quad(0.0).value == 0.0
    assert ms.G1_quad(0.0).value == 0.0


def test_G1_derivative_is_G():
    T, h = 2000.0, 0.5
    d = (ms.G1_quad(T + h).value - ms.G1_quad(T - h).value) / (2 * h)
    # the central difference error is h^2/6 * |G''| and G'' = E' is a few units
    assert abs(d - ms.G_quad(T).value) <= 1.0


def test_G_derivative_is_E_minus_pi():
    T, h = 3000.0, 0.01
    d = (ms.G_quad(T + h).value - ms.G_quad(T - h).value) / (2 * h)
    assert abs(d - (ms.E(T).value - math.pi)) <= 0.05


def test_phases():
    T = 1000.0
    n = T / TWO_PI
    assert ms.g_phase(T, n) == pytest.approx(-T + math.pi / 4, rel=1e-14)
    diff = ms.f_phase(1e6, 1) - (math.sqrt(8 * math.pi * 1e6) - math.pi / 4)
    assert abs(diff) < 1e-2
    assert np.all(np.diff(ms.f_phase(500.0, np.arange(1, 101))) > 0)
    with pytest.raises(DomainError):
        ms.g_phase(10.0, 2)


def test_f_phase_against_high_precision():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    for T, n in [(1e14, 1), (1e6, 1), (1000.0, 7), (50.0, 300)]:
        ref = (2 * T * mp.asinh(mp.sqrt(mp.pi * n / (2 * T))) + mp.sqrt(2 * mp.pi * n * T + mp.pi**2 * n**2)
               - mp.pi / 4)
        assert ms.f_phase(T, n) == pytest.approx(float(ref), rel=1e-14)


def test_explicit_params():
    p = ms.GExplicitParams(1000.0)
    assert p.N == 1000
    assert p.N_prime < 1000 / TWO_PI
    with pytest.raises(DomainError):
        ms.GExplicitParams(1000.0, 400)
    with pytest.raises(DomainError):
        ms.GExplicitParams(1000.0, 2000)


def test_S2_empty_below_one():
    p = ms.GExplicitParams(2.0, 2)
    assert p.N_prime < 1
    assert ms.S2(2.0, p.N_prime, None) == 0.0


def test_G_explicit_N_stability(dtable):
    for T in (1000.0, 10_000.0):
        a = ms.G_explicit(ms.GExplicitParams(T), dtable)
        b = ms.G_explicit(ms.GExplicitParams(T, int(1.5 * T)), dtable)
        assert abs(a.value - b.value) <= a.abs_err + b.abs_err


def test_G_explicit_needs_table(dtable):
    with pytest.raises(CapacityError):
        ms.G_explicit(ms.GExplicitParams(1000.0), divisor_sieve(10))


def test_G_series_single_term(dtable):
    T = 777.0
    r = ms.G_series(T, 1, dtable)
    exact = -(2**-0.25) * math.pi**-0.75 * T**0.75 * math.sin(math.sqrt(8 * math.pi * T) - math.pi / 4)
    assert r.value == pytest.approx(exact, rel=1e-13)


def test_G_series_M_convergence(dtable):
    T = 1000.0
    for M in (1000, 10_000, 50_000):
        a = ms.G_series(T, M, dtable, c_series=0.0)
        b = ms.G_series(T, 2 * M, dtable, c_series=0.0)
        assert abs(a.value - b.value) <= a.abs_err


def test_three_way_consistency(dtable):
    for T in (200.0, 1000.0, 5000.0):
        q = ms.G_quad(T)
        e = ms.G_explicit(ms.GExplicitParams(T), dtable)
        s = ms.G_series(T, 100_000, dtable)
        assert abs(q.value - e.value) <= q.abs_err + e.abs_err
        assert abs(q.value - s.value) <= q.abs_err + s.abs_err
        assert abs(e.value - s.value) <= e.abs_err + s.abs_err


def test_G_growth_bounds():
    Ts = np.geomspace(10, 1e4, 400)
    g = np.array([ms.G_quad(T).value for T in Ts])
    g1 = np.array([ms.G1_quad(T).value for T in Ts])
    assert np.max(np.abs(g) / Ts**0.75) <= calibration.C_G
    assert np.max(np.abs(g1) / Ts**1.25) <= calibration.C_G1
    assert np.any(g > 0) and np.any(g < 0)
