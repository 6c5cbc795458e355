"""Exhaustive SAW and high-temperature enumerations on tiny instances."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from toruswalks.lattice import TorusSpec
from toruswalks.oracles import (
    enumerate_high_temperature,
    enumerate_saw,
    exact_ising_correlation,
    four_cycle_reference,
)
from toruswalks.samplers.worm import WormGraph, compute_sources, extract_ising_walk


class TestSawEnumeration:
    def test_d1_l4_hand_count(self):
        # left/right segments of length <= 3: law proportional to 1, 2J, 2J^2, 2J^3
        ens = enumerate_saw(TorusSpec(1, 4))
        assert ens.length_counts == {0: 1, 1: 2, 2: 2, 3: 2}
        law = ens.length_law(Fraction(1, 2))
        z = 1 + 2 * Fraction(1, 2) + 2 * Fraction(1, 4) + 2 * Fraction(1, 8)
        assert law[3] == 2 * Fraction(1, 8) / z

    def test_zero_fugacity_keeps_only_trivial_walk(self):
        ens = enumerate_saw(TorusSpec(2, 3))
        law = ens.length_law(Fraction(0))
        assert law[0] == 1 and all(v == 0 for n, v in law.items() if n > 0)

    def test_walk_level_data_consistent(self):
        ens = enumerate_saw(TorusSpec(2, 3), collect_walks=True)
        assert len(ens.walks) == ens.n_walks
        assert sum(ens.torus_end_counts.values()) == ens.n_walks
        assert sum(ens.z_end_counts.values()) == ens.n_walks

    def test_fine_graining_identity_exact(self):
        # sum over lattice translates of the unwrapped function recovers g
        spec = TorusSpec(2, 3)
        ens = enumerate_saw(spec)
        J = Fraction(3, 10)
        g = ens.g_torus(J)
        gt = ens.g_tilde(J)
        folded: dict = {}
        for z, w in gt.items():
            x = spec.wrap_site(z)
            folded[x] = folded.get(x, Fraction(0)) + w
        assert folded == g

    def test_guard_refuses_large(self):
        with pytest.raises(ValueError, match="guard"):
            enumerate_saw(TorusSpec(3, 3))
        with pytest.raises(ValueError, match="guard"):
            enumerate_saw(TorusSpec(2, 2))


class TestHighTemperature:
    def test_four_cycle_hand_polynomials(self):
        ht = enumerate_high_temperature(WormGraph.cycle(4))
        t = Fraction(3, 10)
        lam0, lam_adj, lam_opp = four_cycle_reference(t)
        assert ht.lambda_c0(t) == lam0
        assert ht.lambda_cv(1, t) == lam_adj and ht.lambda_cv(3, t) == lam_adj
        assert ht.lambda_cv(2, t) == lam_opp

    def test_vanishing_coupling(self):
        ht = enumerate_high_temperature(WormGraph.from_torus(TorusSpec(2, 2)))
        assert ht.lambda_c0(Fraction(0)) == 1
        for v in ht.cv_counts:
            assert ht.sigma_correlation(v, Fraction(0)) == 0

    def test_multigraph_matches_spin_sums(self):
        # independent route: direct summation over all spin configurations
        g = WormGraph.from_torus(TorusSpec(2, 2))
        ht = enumerate_high_temperature(g)
        t = 0.3
        spins = exact_ising_correlation(g, math.atanh(t))
        for v in g.vertices:
            assert float(ht.sigma_correlation(v, t)) == pytest.approx(spins[v], abs=1e-13)

    def test_d1_l2_two_cycle(self):
        # two parallel edges: lambda(C0) = 1 + t^2, lambda(C_v) = 2t
        ht = enumerate_high_temperature(WormGraph.from_torus(TorusSpec(1, 2)))
        t = Fraction(1, 4)
        assert ht.lambda_c0(t) == 1 + t**2
        assert ht.lambda_cv((-1,), t) == 2 * t

    def test_trail_law_normalized_and_zero_iff_sourceless(self):
        ht = enumerate_high_temperature(WormGraph.from_torus(TorusSpec(2, 2)))
        t = Fraction(3, 10)
        law = ht.trail_length_law(t)
        assert sum(law.values()) == 1
        assert law[0] == ht.lambda_c0(t) / ht.total_weight(t)

    def test_guard_refuses_large(self):
        with pytest.raises(ValueError, match="guard"):
            enumerate_high_temperature(WormGraph.from_torus(TorusSpec(2, 4)))


class TestTrailExtraction:
    def test_sourceless_config_gives_zero_walk(self):
        g = WormGraph.from_torus(TorusSpec(2, 3))
        walk = extract_ising_walk(set(), g, None)
        assert walk.length == 0

    def test_simple_path(self):
        spec = TorusSpec(2, 3)
        g = WormGraph.from_torus(spec)
        occ = {((0, 0), 0), ((1, 0), 1)}  # (0,0)-(1,0) then (1,0)-(1,1)
        walk = extract_ising_walk(occ, g, (1, 1))
        assert walk.sites() == [(0, 0), (1, 0), (1, 1)]

    def test_disjoint_cycle_ignored(self):
        spec = TorusSpec(2, 3)
        g = WormGraph.from_torus(spec)
        occ = {((0, 0), 0), ((1, 0), 1)}
        # closed loop around the x = -1 column, sharing no vertex with the trail
        cycle = {((-1, -1), 1), ((-1, 0), 1), ((-1, 1), 1)}
        walk = extract_ising_walk(occ | cycle, g, (1, 1))
        assert walk.sites() == [(0, 0), (1, 0), (1, 1)]

    def test_greedy_picks_lexicographic_smallest(self):
        spec = TorusSpec(2, 3)
        g = WormGraph.from_torus(spec)
        # trail 0 -> (1,0) -> (1,1) plus a 4-cycle through the origin; the
        # greedy must enter the cycle first, via the smallest neighbour (-1,0)
        trail = {((0, 0), 0), ((1, 0), 1)}
        cycle = {((0, 0), 1), ((-1, 1), 0), ((-1, 0), 1), ((-1, 0), 0)}
        walk = extract_ising_walk(trail | cycle, g, (1, 1))
        assert walk.sites() == [
            (0, 0),
            (-1, 0),
            (-1, 1),
            (0, 1),
            (0, 0),
            (1, 0),
            (1, 1),
        ]
        assert walk.length == 6

    def test_every_enumerated_config_extracts_cleanly(self):
        g = WormGraph.from_torus(TorusSpec(2, 2))
        edges = g.edges
        for mask in range(1 << len(edges)):
            occ = {edges[i] for i in range(len(edges)) if mask >> i & 1}
            odd = compute_sources(occ, g)
            if odd == set():
                assert extract_ising_walk(occ, g, None).length == 0
            elif len(odd) == 2 and g.root in odd:
                (src,) = odd - {g.root}
                walk = extract_ising_walk(occ, g, src)
                assert walk.end_torus == src
                assert walk.length >= 1
