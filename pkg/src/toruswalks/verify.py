"""Desk-scale verification scorecard: samplers against exact oracles.

Each check returns (ok, detail); `run_verify` prints one line per check and
fails if any check fails.  Checks accept injectable pieces so a deliberately
broken implementation turns the corresponding line red.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from .lattice import LatticeWalk, TorusSpec, unwrap, winding_number, wrap
from .observables import ratio_jackknife
from .oracles import (
    RllerwExact,
    enumerate_high_temperature,
    enumerate_saw,
    exact_visit_counts,
    iter_walks,
    lattice_green_fourier,
    oracle_rlrw_two_point_map,
)
from .rng import RandomBlocks, chain_rng
from .samplers import (
    BerrettiSokalChain,
    Geometric,
    WormChain,
    WormGraph,
    append_accept_prob,
    delete_accept_prob,
    extract_ising_walk,
    rlrw_sample,
)
from .theory import prop1_rhs, srw_green_constant, standardized_F

Check = tuple[bool, str]


def check_wrap_paper_example(wrap_fn: Callable = wrap) -> Check:
    """d=1, L=4, seven left steps: lift ends at -7 and winds once."""
    spec = TorusSpec(1, 4)
    t = wrap_fn(LatticeWalk.from_steps([(0, -1)] * 7, d=1), spec)
    sites = t.sites()
    ok = (
        sites == [(0,), (-1,), (-2,), (1,), (0,), (-1,), (-2,), (1,)]
        and unwrap(t).end_z == (-7,)
        and winding_number(t, 0) == 1
    )
    return ok, f"sites={sites}, end_z={unwrap(t).end_z}, winding={winding_number(t, 0)}"


def check_round_trips(n_walks: int = 2000) -> Check:
    rng = chain_rng(2024)
    for d, L in ((1, 4), (2, 3), (3, 5), (5, 4)):
        spec = TorusSpec(d, L)
        for _ in range(n_walks // 4):
            w = LatticeWalk(d=d)
            for _ in range(int(rng.integers(0, 40))):
                r = int(rng.integers(0, 2 * d))
                w.append(r >> 1, 1 - ((r & 1) << 1))
            t = wrap(w, spec)
            if unwrap(t).sites() != w.sites():
                return False, f"round trip failed: d={d}, L={L}"
            if LatticeWalk.from_sites(t.sites(), spec=spec).steps != w.steps:
                return False, f"site-level inversion failed: d={d}, L={L}"
    return True, f"{n_walks} randomized round trips, d in (1,2,3,5)"


def check_rlrw_weight_identity() -> Check:
    survivals = [Fraction(1), Fraction(7, 8), Fraction(5, 8), Fraction(3, 8), Fraction(1, 8)]
    for L in (2, 3):
        spec = TorusSpec(2, L)
        lhs: dict = {}
        for steps in iter_walks(2, 4):
            w = LatticeWalk.from_steps(steps, spec=spec)
            weight = survivals[len(steps)] / Fraction(4) ** len(steps)
            lhs[w.end_torus] = lhs.get(w.end_torus, Fraction(0)) + weight
        if lhs != exact_visit_counts(survivals, 2, spec):
            return False, f"walk-sum vs visit expectation differ on L={L}"
    return True, "exact on 2d tori with L in (2,3), lengths <= 4"


def check_rllerw_identities() -> Check:
    from .oracles import enumerate_sa_paths

    spec = TorusSpec(2, 3)
    exact = RllerwExact.fixed_length(spec, 2)
    lhs: dict = {}
    for tpath, _ in enumerate_sa_paths(spec, 2):
        lhs[tpath[-1]] = lhs.get(tpath[-1], Fraction(0)) + exact.prefix_prob(tpath)
    lhs = {k: v for k, v in lhs.items() if v != 0}
    if lhs != exact.visit_prob_torus():
        return False, "prefix-weight sum differs from visit expectation"
    return True, "loop-erased weight/visit identity exact at N=2, L=3"


def check_worm_visit_ratio(chain_factory: Callable | None = None) -> Check:
    spec = TorusSpec(2, 2)
    graph = WormGraph.from_torus(spec)
    t = 0.3
    expect = float(enumerate_high_temperature(graph).sigma_correlation((0, -1), t))
    chain = (chain_factory or WormChain)(graph, t, chain_rng(17))
    chain.advance(20_000)
    num, den = [], []
    for _ in range(64):
        nb = db = 0
        for _ in range(2500):
            chain.advance(4)
            if chain.head == (0, -1):
                nb += 1
            elif chain.head == graph.root:
                db += 1
        num.append(nb)
        den.append(db)
    est, err = ratio_jackknife(num, den)
    ok = abs(est - expect) < 4 * err and err < 0.05 * expect
    return ok, f"sigma-ratio {est:.4f} +- {err:.4f} vs exact {expect:.4f}"


def check_bs_stationarity(
    accept_append: Callable = append_accept_prob,
    accept_delete: Callable = delete_accept_prob,
) -> Check:
    """Exact stationary law of the chain's transition matrix on d=1, L=4."""
    spec = TorusSpec(1, 4)
    J = 0.3
    walks = enumerate_saw(spec, collect_walks=True).walks
    index = {w: i for i, w in enumerate(walks)}
    a_app = float(accept_append(J, 1))
    a_del = float(accept_delete(J, 1))
    P = np.zeros((len(walks), len(walks)))
    for s, i in index.items():
        sites = LatticeWalk.from_steps(s, spec=spec).sites()
        occupied = set(sites)
        move = 0.0
        for step in ((0, 1), (0, -1)):
            ext = s + (step,)
            if LatticeWalk.from_steps(ext, spec=spec).sites()[-1] not in occupied:
                p = 0.5 / 2 * a_app
                P[i, index[ext]] += p
                move += p
        if s:
            p = 0.5 * a_del
            P[i, index[s[:-1]]] += p
            move += p
        P[i, i] += 1.0 - move
    A = np.vstack([P.T - np.eye(len(walks)), np.ones(len(walks))])
    b = np.zeros(len(walks) + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    weights = np.array([J ** len(s) for s in walks])
    dev = float(np.max(np.abs(pi - weights / weights.sum())))
    return dev < 1e-10, f"max deviation from J^n law: {dev:.2e}"


def check_rlrw_oracle_mc() -> Check:
    spec = TorusSpec(3, 5)
    law = Geometric(0.6)
    oracle, bound = oracle_rlrw_two_point_map(law, 3, 120, 16)
    blocks = RandomBlocks(chain_rng(31))
    n = 150_000
    tallies: dict = {}
    for _ in range(n):
        _, z = rlrw_sample(law, spec, blocks)
        for site in z.z_sites:
            if all(abs(c) <= 2 for c in site):
                tallies[site] = tallies.get(site, 0) + 1
    worst = 0.0
    for z in [(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 0, 0)]:
        emp = tallies.get(z, 0) / n
        se = math.sqrt(max(emp, 1e-12) / n) * 2  # visits are near-Bernoulli here
        worst = max(worst, abs(emp - oracle[z]) / se)
    ok = worst < 4.0 and bound < 1e-6
    return ok, f"worst visit-count z-score {worst:.2f}, truncation bound {bound:.1e}"


def check_green_function_routes() -> Check:
    law = Geometric(0.6)
    got, _ = oracle_rlrw_two_point_map(law, 3, 150, 20)
    for z in [(1, 0, 0), (1, 2, 0)]:
        ref = lattice_green_fourier(3, 0.6, z, grid=48)
        if abs(got[z] - ref) > 1e-8:
            return False, f"convolution vs Fourier differ at {z}"
    return True, "convolution and Fourier Green function agree to 1e-8"


def check_quadrature_constants() -> Check:
    worst = 0.0
    for d in (3, 5, 6):
        val = prop1_rhs(lambda u: 0.0, d, 1.0)
        worst = max(worst, abs(val / srw_green_constant(d) - 1.0))
    return worst < 1e-8, f"worst relative error {worst:.1e} over d in (3,5,6)"


def check_half_normal_ks() -> Check:
    n = 10**6
    draws = np.abs(chain_rng(47).standard_normal(n))
    mean = math.sqrt(2 / math.pi)
    sd = math.sqrt(1 - 2 / math.pi)
    std = np.sort((draws - mean) / sd)
    ref = standardized_F(std)
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    ks = float(max(np.max(np.abs(ref - hi)), np.max(np.abs(ref - lo))))
    return ks < 0.0035, f"KS distance {ks:.5f} over {n:.0e} draws"


def check_trail_extraction() -> Check:
    spec = TorusSpec(2, 3)
    graph = WormGraph.from_torus(spec)
    occ = {((0, 0), 0), ((1, 0), 1)}
    walk = extract_ising_walk(occ, graph, (1, 1))
    if walk.sites() != [(0, 0), (1, 0), (1, 1)]:
        return False, f"path trail wrong: {walk.sites()}"
    if extract_ising_walk(set(), graph, None).length != 0:
        return False, "sourceless trail not empty"
    return True, "greedy trail matches hand cases"


ALL_CHECKS: list[tuple[str, Callable[[], Check]]] = [
    ("wrap paper example (d=1, L=4)", check_wrap_paper_example),
    ("wrap/unwrap round trips", check_round_trips),
    ("random-length weight identity", check_rlrw_weight_identity),
    ("loop-erased weight identity", check_rllerw_identities),
    ("worm visit-ratio vs enumeration", check_worm_visit_ratio),
    ("saw chain exact stationarity", check_bs_stationarity),
    ("random-length sampler vs oracle", check_rlrw_oracle_mc),
    ("green function: two routes", check_green_function_routes),
    ("quadrature gamma constants", check_quadrature_constants),
    ("half-normal ECDF", check_half_normal_ks),
    ("ising-walk trail extraction", check_trail_extraction),
]


def run_verify() -> bool:
    all_ok = True
    for name, fn in ALL_CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        print(f"[{'ok' if ok else 'FAIL'}] {name}: {detail}")
    print("verification " + ("PASSED" if all_ok else "FAILED"))
    return all_ok
