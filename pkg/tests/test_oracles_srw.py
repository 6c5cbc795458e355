"""SRW kernel oracles: convolution, on-axis evaluator, Green function."""

from __future__ import annotations

import math
from math import comb

import numpy as np
import pytest

from toruswalks.lattice import TorusSpec
from toruswalks.oracles import (
    exact_kernel_series,
    lattice_green_fourier,
    oracle_rlrw_two_point,
    oracle_rlrw_two_point_map,
    srw_convolve,
    srw_onaxis_pn,
    srw_return_probs,
)
from toruswalks.samplers import Deterministic, Geometric, ScaledHalfNormal


class TestConvolution:
    def test_single_step(self):
        for d in (1, 2, 3):
            tab = srw_convolve(d, 1, 2)
            e1 = (1,) + (0,) * (d - 1)
            assert tab.p(1, e1) == pytest.approx(1 / (2 * d))

    def test_two_step_return(self):
        for d in (1, 2, 4):
            tab = srw_convolve(d, 2, 2)
            assert tab.p(2, (0,) * d) == pytest.approx(1 / (2 * d))

    def test_d1_binomial_closed_form(self):
        tab = srw_convolve(1, 30, 30)
        for n in range(31):
            for z in range(-n, n + 1):
                expect = comb(n, (n + z) // 2) / 2**n if (n + z) % 2 == 0 else 0.0
                assert tab.p(n, (z,)) == pytest.approx(expect, abs=1e-14)

    def test_probability_conserved_without_truncation(self):
        tab = srw_convolve(2, 12, 12)
        assert np.all(tab.leaked == 0.0)
        for n in range(13):
            assert tab.tables[n].sum() == pytest.approx(1.0, abs=1e-13)

    def test_leak_tracked_with_truncation(self):
        tab = srw_convolve(1, 10, 3)
        assert tab.leaked[10] > 0
        # deficit at any site is bounded by the leaked mass
        full = srw_convolve(1, 10, 10)
        for z in range(-3, 4):
            assert full.p(10, (z,)) - tab.p(10, (z,)) <= tab.leaked[10] + 1e-15

    def test_parity_zeros(self):
        tab = srw_convolve(2, 7, 7)
        assert tab.p(4, (1, 0)) == 0.0
        assert tab.p(5, (1, 1)) == 0.0

    def test_memory_guard(self):
        with pytest.raises(ValueError, match="GB"):
            srw_convolve(3, 400, 100)


class TestOnAxis:
    def test_matches_convolution_d3(self):
        tab = srw_convolve(3, 24, 24)
        for m in (0, 1, 2, 5):
            pn = srw_onaxis_pn(3, m, 24)
            for n in range(25):
                assert pn[n] == pytest.approx(tab.p(n, (m, 0, 0)), rel=1e-12, abs=1e-300)

    def test_matches_convolution_d5(self):
        tab = srw_convolve(5, 8, 8)
        pn = srw_onaxis_pn(5, 2, 8)
        for n in range(9):
            assert pn[n] == pytest.approx(tab.p(n, (2, 0, 0, 0, 0)), rel=1e-12, abs=1e-300)

    def test_d1_binomial(self):
        pn = srw_onaxis_pn(1, 3, 15)
        for n in range(16):
            expect = comb(n, (n + 3) // 2) / 2**n if (n + 3) % 2 == 0 and n >= 3 else 0.0
            assert pn[n] == pytest.approx(expect, rel=1e-13, abs=1e-300)

    def test_return_probs_match(self):
        q = srw_return_probs(4, 16)
        tab = srw_convolve(4, 16, 16)
        for n in range(0, 17, 2):
            assert q[n] == pytest.approx(tab.p(n, (0, 0, 0, 0)), rel=1e-12)


class TestRlrwOracle:
    def test_deterministic_zero(self):
        tab = srw_convolve(2, 4, 4)
        v = oracle_rlrw_two_point(Deterministic(0), (0, 0), tab)
        assert v.value == 1.0 and v.truncation_bound == 0.0
        assert oracle_rlrw_two_point(Deterministic(0), (1, 0), tab).value == 0.0

    def test_deterministic_two_d1(self):
        # visits to the origin of a 2-step walk: 1 + 0 + 1/2
        tab = srw_convolve(1, 4, 4)
        v = oracle_rlrw_two_point(Deterministic(2), (0,), tab)
        assert v.value == pytest.approx(1.5)

    def test_geometric_matches_green_function(self):
        law = Geometric(0.6)
        got, bound = oracle_rlrw_two_point_map(law, 3, 220, 30)
        assert bound < 1e-12
        for z in [(0, 0, 0), (1, 0, 0), (1, 2, 0), (2, 1, 1)]:
            ref = lattice_green_fourier(3, 0.6, z, grid=64)
            assert got[z] == pytest.approx(ref, abs=1e-6)

    def test_half_normal_bound_below_target(self):
        law = ScaledHalfNormal(scale=math.sqrt(32), cap=32)
        _, bound = oracle_rlrw_two_point_map(law, 5, 120, 11)
        assert bound < 1e-6

    def test_unbounded_tail_reported(self):
        tab = srw_convolve(1, 10, 10)
        v = oracle_rlrw_two_point(Geometric(0.9), (0,), tab)
        assert v.truncation_bound == pytest.approx(0.9**11 / 0.1)
        assert v.truncation_bound > 1e-2  # clearly flagged as too short


def test_exact_kernel_series_matches_float():
    series = exact_kernel_series(2, 4)
    tab = srw_convolve(2, 4, 4)
    for n in range(5):
        for z, frac in series[n].items():
            assert float(frac) == pytest.approx(tab.p(n, z), abs=1e-15)


def test_exact_kernel_series_torus_wraps():
    spec = TorusSpec(2, 2)
    series = exact_kernel_series(2, 2, spec)
    # one step from the origin on the 2x2 torus: both x-directions reach (-1, 0)
    assert series[1][(-1, 0)] == pytest.approx(0.5)
    assert series[1][(0, -1)] == pytest.approx(0.5)
    assert sum(series[2].values()) == 1
