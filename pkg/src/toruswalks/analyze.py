"""Post-processing: scaling fits, moment ratios, profiles, winding collapse.

Consumes the CSV/JSON artifacts written by `simulate`; never recomputes
statistics from raw samples.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .observables import fit_power_law
from .theory import phi_constant
from .writers import parse_site_key, read_rows


class AnalyzeError(ValueError):
    pass


@dataclass
class RunData:
    path: Path
    model: str
    d: int
    L: int
    moments: dict[tuple[str, str], tuple[float, float | None, int]]
    twopoint: list[dict[str, str]]


def _get(row: dict[str, str], col: str) -> str:
    if col not in row:
        raise AnalyzeError(f"missing column {col!r}")
    return row[col]


def load_run(path: Path) -> RunData:
    summary = json.loads((path / "summary.json").read_text())
    moments: dict[tuple[str, str], tuple[float, float | None, int]] = {}
    for row in read_rows(path / "moments.csv"):
        err = float(row["stderr"]) if row["stderr"] else None
        moments[(row["observable"], row["key"])] = (
            float(row["estimate"]),
            err,
            int(row["n_samples"]),
        )
    twopoint = read_rows(path / "twopoint.csv")
    return RunData(
        path=path,
        model=summary["model"],
        d=summary["d"],
        L=summary["L"],
        moments=moments,
        twopoint=twopoint,
    )


def discover_runs(paths: list[Path]) -> list[RunData]:
    found = []
    for p in paths:
        for summary in sorted(p.rglob("summary.json")):
            found.append(load_run(summary.parent))
    if not found:
        raise AnalyzeError(f"no completed runs under {[str(p) for p in paths]}")
    return found


def _series(runs: list[RunData], observable: str) -> list[tuple[float, float, float]]:
    series = []
    for run in runs:
        key = (observable, "mean")
        if key not in run.moments:
            raise AnalyzeError(f"run {run.path} lacks the {observable!r} observable")
        est, err, _ = run.moments[key]
        if err is None:
            raise AnalyzeError(f"run {run.path}: {observable} mean carries no stderr")
        series.append((float(run.L), est, err))
    return sorted(series)


def fit_rows(groups: dict[tuple[str, int], list[RunData]]) -> list[tuple]:
    """Power-law fits of mean length and mean winding against L."""
    rows: list[tuple] = []
    for (model, d), runs in sorted(groups.items()):
        if len({r.L for r in runs}) < 3:
            print(f"[analyze] {model} d={d}: fewer than 3 sizes, fits skipped")
            continue
        for observable in ("length", "winding"):
            try:
                fit = fit_power_law(_series(runs, observable))
            except ValueError as exc:
                print(f"[analyze] {model} d={d} {observable}: fit skipped ({exc})")
                continue
            rows.append(
                (
                    f"{observable}_exponent",
                    f"{model}:d={d}",
                    f"Lmin={fit.l_min:g}",
                    fit.exponent,
                    fit.exponent_err,
                    fit.n_points,
                )
            )
            rows.append(
                (
                    f"{observable}_amplitude",
                    f"{model}:d={d}",
                    f"chi2_dof={fit.chi2_dof:.3g}",
                    fit.amplitude,
                    fit.amplitude_err,
                    fit.n_points,
                )
            )
    return rows


def ratio_rows(runs: list[RunData]) -> list[tuple]:
    """Walk-length mean/sd per size, with the complete-graph limit alongside."""
    rows: list[tuple] = []
    phi = phi_constant()
    for run in sorted(runs, key=lambda r: (r.model, r.d, r.L)):
        key = ("length", "mean_over_std")
        if key not in run.moments:
            continue
        est, err, n = run.moments[key]
        rows.append(("length_mean_over_std", run.L, f"{run.model}:d={run.d}", est, err, n))
        rows.append(("phi_reference", run.L, f"{run.model}:d={run.d}", phi, None, n))
    return rows


def profile_rows(runs: list[RunData]) -> list[tuple]:
    """On-axis scaled profile (xi, ||z||^(d-2) g~) from the two-point tables."""
    rows: list[tuple] = []
    for run in sorted(runs, key=lambda r: (r.model, r.d, r.L)):
        observable = (
            "visit_twopoint"
            if any(r["observable"] == "visit_twopoint" for r in run.twopoint)
            else "unwrapped_twopoint"
        )
        d, L = run.d, run.L
        if d < 3:
            continue
        scale = L ** (d / 4.0)
        for row in run.twopoint:
            if row["observable"] != observable:
                continue
            z = parse_site_key(_get(row, "key"))
            if z[0] <= 0 or any(c != 0 for c in z[1:]):
                continue
            r = float(z[0])
            est = float(row["estimate"])
            err = float(row["stderr"]) if row["stderr"] else 0.0
            rows.append(
                (
                    "scaled_profile",
                    L,
                    f"{run.model}:d={d}:xi={r / scale!r}",
                    r ** (d - 2) * est,
                    r ** (d - 2) * err,
                    int(row["n_samples"]),
                )
            )
    return rows


def collapse_rows(groups: dict[tuple[str, int], list[RunData]]) -> list[tuple]:
    """Winding curves rescaled by per-model constants onto a common curve.

    Within each dimension the first model (alphabetically) is the reference;
    every other model is multiplied by exp(mean log-offset) over shared sizes.
    """
    rows: list[tuple] = []
    by_d: dict[int, dict[str, dict[int, tuple[float, float | None]]]] = {}
    for (model, d), runs in groups.items():
        series = by_d.setdefault(d, {}).setdefault(model, {})
        for run in runs:
            if ("winding", "mean") in run.moments:
                est, err, _ = run.moments[("winding", "mean")]
                series[run.L] = (est, err)
    for d, models in sorted(by_d.items()):
        ref_model = sorted(models)[0]
        ref = models[ref_model]
        for model, series in sorted(models.items()):
            shared = [L for L in series if L in ref and series[L][0] > 0 and ref[L][0] > 0]
            if model == ref_model or not shared:
                scale = 1.0
            else:
                scale = math.exp(
                    sum(math.log(ref[L][0] / series[L][0]) for L in shared) / len(shared)
                )
            for L, (est, err) in sorted(series.items()):
                rows.append(
                    (
                        "winding_collapse",
                        L,
                        f"{model}:d={d}:scale={scale!r}",
                        est * scale,
                        (err or 0.0) * scale,
                        0,
                    )
                )
    return rows


def analyze(in_paths: list[Path], out_dir: Path) -> dict[str, Path]:
    from .writers import write_rows

    runs = discover_runs(in_paths)
    groups: dict[tuple[str, int], list[RunData]] = {}
    for run in runs:
        groups.setdefault((run.model, run.d), []).append(run)

    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = {}
    for name, rows in (
        ("fits", fit_rows(groups)),
        ("ratio", ratio_rows(runs)),
        ("profile", profile_rows(runs)),
        ("collapse", collapse_rows(groups)),
    ):
        path = out_dir / f"{name}.csv"
        write_rows(path, rows)
        outputs[name] = path
    return outputs
