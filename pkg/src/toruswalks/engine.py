"""Simulation driver: chains to accumulators to on-disk tables.

Each chain draws its own counter-based stream keyed by (seed, chain index),
runs single-threaded, and hands back an accumulator snapshot; snapshots are
merged in chain order, so outputs are bit-identical for a fixed (config,
seed, build) regardless of worker scheduling.
"""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .constants import default_coupling
from .lattice import TorusSpec
from .observables import InsufficientData, RunAccumulators
from .rng import RandomBlocks, chain_rng
from .runconfig import RunConfig, parse_config, serialize_config
from .samplers import (
    BerrettiSokalChain,
    Deterministic,
    Empirical,
    Geometric,
    WormChain,
    WormGraph,
    complete_graph_law,
    extract_ising_walk,
    rllerw_sample,
    rlrw_sample,
)
from .writers import build_id, site_key, write_rows, write_summary

_SITE_UPDATE_WARN = 10**9


def build_length_law(law_text: str, spec: TorusSpec):
    kind, _, arg = law_text.partition(":")
    if kind == "halfnormal":
        return complete_graph_law(spec)
    if kind == "deterministic":
        return Deterministic(int(arg))
    if kind == "geometric":
        return Geometric(float(arg))
    if kind == "empirical":
        pmf = {}
        for tok in arg.split(","):
            n, _, p = tok.partition("=")
            pmf[int(n)] = float(p)
        return Empirical.from_dict(pmf)
    raise ValueError(f"unknown length law {law_text!r}")


def resolve_coupling(cfg: RunConfig) -> tuple[float | None, dict]:
    if cfg.model in ("rlrw", "rllerw"):
        return None, {"length_law": cfg.length_law}
    if cfg.coupling is not None:
        return cfg.coupling, {"value": cfg.coupling, "source": "config"}
    cp = default_coupling(cfg.model, cfg.d)
    return cp.value, {
        "value": cp.value,
        "uncertainty": cp.uncertainty,
        "parameter": cp.parameter,
        "source": f"shipped default ({cp.note})",
    }


def run_chain(cfg: RunConfig, L: int, chain_index: int) -> tuple[RunAccumulators, dict]:
    """One chain's worth of measurements for a single system size."""
    spec = TorusSpec(cfg.d, L)
    rng = RandomBlocks(chain_rng(cfg.seed, chain_index))
    cadence = cfg.cadence_steps if cfg.cadence_steps > 0 else spec.volume
    coupling, _ = resolve_coupling(cfg)
    accs = RunAccumulators(
        winding_axis=cfg.winding_axis,
        block_size=cfg.block_size,
        visit_radius=cfg.twopoint_radius,
        track_visits=cfg.model in ("rlrw", "rllerw"),
    )

    stats: dict = {"chain": chain_index, "L": L}
    if cfg.model == "saw":
        chain = BerrettiSokalChain(spec, coupling, rng, lifted=cfg.lifted)
        chain.advance(cfg.burnin_sweeps * cadence)
        for _ in range(cfg.sweeps):
            chain.advance(cadence)
            accs.record_walk(chain.walk())
        stats["acceptance"] = chain.accept_fraction
        stats["steps"] = chain.n_steps
    elif cfg.model == "ising":
        graph = WormGraph.from_torus(spec)
        chain = WormChain(graph, coupling, rng)
        chain.advance(cfg.burnin_sweeps * cadence)
        for _ in range(cfg.sweeps):
            chain.advance(cadence)
            source = None if chain.head == graph.root else chain.head
            accs.record_walk(extract_ising_walk(chain.occupied, graph, source))
        stats["acceptance"] = chain.accept_fraction
        stats["steps"] = chain.n_steps
    elif cfg.model == "rlrw":
        law = build_length_law(cfg.length_law, spec)
        for _ in range(cfg.sweeps):
            walk, _ = rlrw_sample(law, spec, rng)
            accs.record_walk(walk)
    elif cfg.model == "rllerw":
        law = build_length_law(cfg.length_law, spec)
        for _ in range(cfg.sweeps):
            accs.record_walk(rllerw_sample(law, spec, rng))
    else:  # pragma: no cover - validate() guards this
        raise ValueError(f"unknown model {cfg.model}")
    return accs, stats


def _chain_worker(cfg_text: str, L: int, chain_index: int):
    return run_chain(parse_config(cfg_text), L, chain_index)


def moment_rows(accs: RunAccumulators, L: int) -> list[tuple]:
    rows: list[tuple] = []
    for name, acc in (("length", accs.length), ("winding", accs.winding)):
        n = acc.count
        try:
            blk = acc.blocking()
            rows.append((name, L, "mean", blk.mean, blk.stderr, n))
            rows.append((name, L, "tau_int", blk.tau_int, None, n))
        except InsufficientData:
            rows.append((name, L, "mean", acc.mean(), None, n))
        rows.append((name, L, "var", acc.variance(), None, n))
        rows.append((name, L, "std", acc.std(), None, n))
        if name == "length" and acc.std() > 0:
            est, err = acc.mean_over_std_jackknife()
            rows.append((name, L, "mean_over_std", est, err, n))
    return rows


def twopoint_rows(accs: RunAccumulators, L: int) -> list[tuple]:
    rows: list[tuple] = []
    n = accs.n_samples
    for z, (est, err) in accs.torus_end.endpoint_law().items():
        rows.append(("torus_endpoint", L, site_key(z), est, err, n))
    try:
        for z, (est, err) in accs.unwrapped_end.estimates().items():
            rows.append(("unwrapped_twopoint", L, site_key(z), est, err, n))
    except InsufficientData:
        pass
    if accs.visits is not None:
        for z, (est, err) in accs.visits.estimates().items():
            rows.append(("visit_twopoint", L, site_key(z), est, err, n))
    return rows


def ecdf_rows(accs: RunAccumulators, L: int) -> list[tuple]:
    rows: list[tuple] = []
    n = accs.ecdf.count
    xs, cum = accs.ecdf.support()
    for x, c in zip(xs.tolist(), cum.tolist()):
        rows.append(("length_ecdf_raw", L, x, c, None, n))
    try:
        std_xs, std_cum = accs.ecdf.standardized_support()
    except InsufficientData:
        return rows
    for x, c in zip(std_xs.tolist(), std_cum.tolist()):
        rows.append(("length_ecdf_std", L, repr(x), c, None, n))
    return rows


def simulate(cfg: RunConfig, workers: int = 1) -> dict[int, Path]:
    """Run every system size in the config; returns {L: output directory}."""
    cfg.validate()
    coupling, coupling_meta = resolve_coupling(cfg)
    out_root = Path(cfg.out)
    out_root.mkdir(parents=True, exist_ok=True)
    cfg_text = serialize_config(cfg)

    total_updates = sum(
        (cfg.sweeps + cfg.burnin_sweeps)
        * (cfg.cadence_steps if cfg.cadence_steps > 0 else L**cfg.d)
        * cfg.chains
        for L in cfg.L
    )
    if cfg.model in ("saw", "ising") and total_updates > _SITE_UPDATE_WARN:
        warnings.warn(
            f"configured run needs ~{total_updates:.2e} chain steps; "
            "this is cluster-scale, not desk-scale"
        )

    outputs: dict[int, Path] = {}
    written: list[str] = []
    try:
        for L in cfg.L:
            t0 = time.monotonic()
            jobs = [(cfg_text, L, c) for c in range(cfg.chains)]
            if workers > 1 and cfg.chains > 1:
                with ProcessPoolExecutor(max_workers=min(workers, cfg.chains)) as pool:
                    results = list(pool.map(_chain_worker, *zip(*jobs)))
            else:
                results = [run_chain(cfg, L, c) for _, _, c in jobs]
            merged, all_stats = results[0][0], [results[0][1]]
            for accs, stats in results[1:]:
                merged = merged.merge(accs)
                all_stats.append(stats)

            out_dir = out_root / f"L{L:04d}"
            out_dir.mkdir(exist_ok=True)
            write_rows(out_dir / "moments.csv", moment_rows(merged, L))
            written.append(str(out_dir / "moments.csv"))
            write_rows(out_dir / "twopoint.csv", twopoint_rows(merged, L))
            written.append(str(out_dir / "twopoint.csv"))
            write_rows(out_dir / "ecdf.csv", ecdf_rows(merged, L))
            written.append(str(out_dir / "ecdf.csv"))
            write_summary(
                out_dir / "summary.json",
                {
                    "model": cfg.model,
                    "d": cfg.d,
                    "L": L,
                    "coupling": coupling_meta,
                    "seed": cfg.seed,
                    "chains": cfg.chains,
                    "sweeps": cfg.sweeps,
                    "n_measurements": merged.n_samples,
                    "chain_stats": all_stats,
                    "wall_time_s": time.monotonic() - t0,
                    "build_id": build_id(),
                    "version": __version__,
                    "config_echo": cfg_text,
                },
            )
            written.append(str(out_dir / "summary.json"))
            outputs[L] = out_dir
    except OSError:
        write_summary(out_root / "partial_manifest.json", {"completed_files": written})
        raise
    return outputs
