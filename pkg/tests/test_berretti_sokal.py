"""Berretti-Sokal chain: exact stationarity, detailed balance, sampling."""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from toruswalks.lattice import LatticeWalk, TorusSpec
from toruswalks.oracles import enumerate_saw
from toruswalks.rng import chain_rng
from toruswalks.samplers import (
    BerrettiSokalChain,
    append_accept_prob,
    delete_accept_prob,
)


def saw_states(spec: TorusSpec) -> list[tuple[tuple[int, int], ...]]:
    return enumerate_saw(spec, collect_walks=True).walks


def walk_sites(steps, spec):
    return LatticeWalk.from_steps(steps, spec=spec).sites()


def reversible_matrix(spec: TorusSpec, J: float) -> tuple[np.ndarray, list]:
    """Exact transition matrix of the reversible chain over all

    torus SAWs (as step sequences)."""
    states = saw_states(spec)
    index = {s: i for i, s in enumerate(states)}
    d = spec.d
    a_app = float(append_accept_prob(J, d))
    a_del = float(delete_accept_prob(J, d))
    n = len(states)
    P = np.zeros((n, n))
    for s, i in index.items():
        sites = walk_sites(s, spec)
        occupied = set(sites)
        move = 0.0
        for axis in range(d):
            for sign in (1, -1):
                ext = s + ((axis, sign),)
                tail = walk_sites(ext, spec)[-1]
                if tail not in occupied:
                    p = 0.5 / (2 * d) * a_app
                    P[i, index[ext]] += p
                    move += p
        if s:
            p = 0.5 * a_del
            P[i, index[s[:-1]]] += p
            move += p
        P[i, i] += 1.0 - move
    return P, states

def lifted_matrix(spec: TorusSpec, J: float) -> tuple[np.ndarray, list]:
    states = saw_states(spec)
    d = spec.d
    a_app = float(append_accept_prob(J, d))
    a_del = float(delete_accept_prob(J, d))
    idx = {(s, m): 2 * i + (m == -1) for i, s in enumerate(states) for m in (1, -1)}
    n = len(idx)
    P = np.zeros((n, n))
    index = {s: i for i, s in enumerate(states)}
    for s in states:
        sites = walk_sites(s, spec)
        occupied = set(sites)
        i_grow = idx[(s, 1)]
        move = 0.0
        for axis in range(d):
            for sign in (1, -1):
                ext = s + ((axis, sign),)
                tail = walk_sites(ext, spec)[-1]
                if tail not in occupied:
                    p = a_app / (2 * d)
                    P[i_grow, idx[(ext, 1)]] += p
                    move += p
        P[i_grow, idx[(s, -1)]] += 1.0 - move
        i_shrink = idx[(s, -1)]
        if s:
            P[i_shrink, idx[(s[:-1], -1)]] += a_del
            P[i_shrink, idx[(s, 1)]] += 1.0 - a_del
        else:
            P[i_shrink, idx[(s, 1)]] += 1.0
    return P, states


def stationary(P: np.ndarray) -> np.ndarray:
    n = len(P)
    A = np.vstack([P.T - np.eye(n), np.ones(n)])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    return pi


class TestExactStationarity:
    @pytest.mark.parametrize("J", [0.2, 0.4])
    def test_reversible_chain_d1(self, J):
        spec = TorusSpec(1, 4)
        P, states = reversible_matrix(spec, J)
        pi = stationary(P)
        weights = np.array([J ** len(s) for s in states])
        expect = weights / weights.sum()
        assert np.max(np.abs(pi - expect)) < 1e-12

    def test_reversible_chain_d2(self):
        spec = TorusSpec(2, 3)
        J = 0.3
        P, states = reversible_matrix(spec, J)
        pi = stationary(P)
        weights = np.array([J ** len(s) for s in states])
        expect = weights / weights.sum()
        assert np.max(np.abs(pi - expect)) < 1e-11

    @pytest.mark.parametrize("J", [0.2, 0.35])
    def test_lifted_chain_same_marginal(self, J):
        spec = TorusSpec(1, 4)
        P, states = lifted_matrix(spec, J)
        pi = stationary(P)
        marginal = pi[0::2] + pi[1::2]
        weights = np.array([J ** len(s) for s in states])
        expect = weights / weights.sum()
        assert np.max(np.abs(marginal - expect)) < 1e-12

    def test_lifted_chain_same_marginal_d2(self):
        spec = TorusSpec(2, 3)
        P, states = lifted_matrix(spec, 0.3)
        pi = stationary(P)
        marginal = pi[0::2] + pi[1::2]
        weights = np.array([0.3 ** len(s) for s in states])
        expect = weights / weights.sum()
        assert np.max(np.abs(marginal - expect)) < 1e-11


def test_detailed_balance_residual_exact():
    """pi(w) q(w->w') a(w->w') equals pi(w') q(w'->w) a(w'->w), in Fractions."""
    J = Fraction(3, 10)
    for d in (1, 2, 5):
        pi_ratio = J  # pi(w')/pi(w) for one appended step
        forward = Fraction(1, 2) * Fraction(1, 2 * d) * append_accept_prob(J, d)
        backward = pi_ratio * Fraction(1, 2) * delete_accept_prob(J, d)
        assert forward == backward


class TestChainBehaviour:
    def test_empty_walk_delete_is_valid_stay(self):
        spec = TorusSpec(2, 3)
        chain = BerrettiSokalChain(spec, 0.3, chain_rng(1))
        chain.advance(10)
        assert chain.length >= 0  # no exception; chain simply rejects deletes at 0

    def test_walk_stays_self_avoiding(self):
        spec = TorusSpec(2, 3)
        chain = BerrettiSokalChain(spec, 0.4, chain_rng(2))
        for _ in range(200):
            chain.advance(50)
            sites = chain.walk().sites()
            assert len(set(sites)) == len(sites)

    def test_sampled_length_law_matches_enumeration_d1(self):
        spec = TorusSpec(1, 4)
        J = 0.35
        exact = enumerate_saw(spec).length_law(J)
        chain = BerrettiSokalChain(spec, J, chain_rng(3))
        chain.advance(2000)
        counts = Counter()
        n = 200_000
        for _ in range(n):
            chain.advance(5)
            counts[chain.length] += 1
        tv = 0.5 * sum(abs(counts.get(k, 0) / n - float(p)) for k, p in exact.items())
        assert tv < 0.01

    def test_lifted_sampler_runs_and_matches(self):
        spec = TorusSpec(1, 4)
        J = 0.35
        exact = enumerate_saw(spec).length_law(J)
        chain = BerrettiSokalChain(spec, J, chain_rng(4), lifted=True)
        chain.advance(2000)
        counts = Counter()
        n = 200_000
        for _ in range(n):
            chain.advance(5)
            counts[chain.length] += 1
        tv = 0.5 * sum(abs(counts.get(k, 0) / n - float(p)) for k, p in exact.items())
        assert tv < 0.01

    def test_stationarity_ratio_matches_extension_count(self):
        # P(n+1)/P(n) = J * (number of SAW extensions averaged over length-n walks)
        spec = TorusSpec(2, 3)
        ens = enumerate_saw(spec)
        J = Fraction(3, 10)
        law = ens.length_law(J)
        counts = ens.length_counts
        for n in range(0, 4):
            avg_ext = Fraction(counts[n + 1], counts[n])
            assert law[n + 1] / law[n] == J * avg_ext