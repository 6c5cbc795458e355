"""Config round-trips, engine determinism, CLI surfaces and exit codes."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from toruswalks.analyze import analyze
from toruswalks.engine import simulate
from toruswalks.runconfig import (
    ConfigError,
    RunConfig,
    apply_overrides,
    parse_config,
    serialize_config,
)
from toruswalks.writers import read_rows

BASE_CONFIG = """
# random-length walk smoke configuration
model = rlrw
d = 3
L = 4
length_law = geometric:0.7
sweeps = 400
burnin_sweeps = 0
chains = 2
seed = 7
twopoint_radius = 3
block_size = 20
out = {out}
"""


class TestConfig:
    def test_round_trip_lossless(self):
        cfg = parse_config(BASE_CONFIG.format(out="/tmp/x"))
        assert parse_config(serialize_config(cfg)) == cfg

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config("model = rlrw\nbogus = 1\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("model = rlrw\nmodel = saw\n")

    def test_missing_required(self):
        with pytest.raises(ConfigError, match="missing required"):
            parse_config("model = rlrw\n")

    def test_coupling_vs_law_exclusive(self):
        with pytest.raises(ConfigError, match="length law"):
            parse_config(
                "model = rlrw\nd = 2\nL = 4\nsweeps = 10\nseed = 1\nout = /tmp/x\ncoupling = 0.3\nlength_law = geometric:0.5\n"
            )
        with pytest.raises(ConfigError, match="coupling"):
            parse_config(
                "model = saw\nd = 2\nL = 4\nsweeps = 10\nseed = 1\nout = /tmp/x\nlength_law = geometric:0.5\n"
            )

    def test_validation_bounds(self):
        good = parse_config(BASE_CONFIG.format(out="/tmp/x"))
        with pytest.raises(ConfigError):
            apply_overrides(good, ["L=1"])
        with pytest.raises(ConfigError):
            apply_overrides(good, ["chains=0"])
        with pytest.raises(ConfigError, match="unknown override"):
            apply_overrides(good, ["nope=3"])

    def test_overrides_apply(self):
        cfg = parse_config(BASE_CONFIG.format(out="/tmp/x"))
        cfg2 = apply_overrides(cfg, ["seed=123", "L=4,6"])
        assert cfg2.seed == 123 and cfg2.L == (4, 6)


def _tree_bytes(root: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*.csv"))
    }


class TestEngine:
    def test_deterministic_rerun(self, tmp_path):
        cfg = parse_config(BASE_CONFIG.format(out=tmp_path / "a"))
        simulate(cfg)
        cfg2 = apply_overrides(cfg, [f"out={tmp_path / 'b'}"])
        simulate(cfg2)
        a, b = _tree_bytes(tmp_path / "a"), _tree_bytes(tmp_path / "b")
        assert a and a == b

    def test_config_echo_closure(self, tmp_path):
        # re-running from the summary's own config echo reproduces the run
        cfg = parse_config(BASE_CONFIG.format(out=tmp_path / "a"))
        out = simulate(cfg)
        echo = json.loads((out[4] / "summary.json").read_text())["config_echo"]
        cfg2 = apply_overrides(parse_config(echo), [f"out={tmp_path / 'b'}"])
        simulate(cfg2)
        assert _tree_bytes(tmp_path / "a") == _tree_bytes(tmp_path / "b")

    def test_rlrw_deterministic_zero_law(self, tmp_path):
        cfg = parse_config(
            f"model = rlrw\nd = 2\nL = 3\nlength_law = deterministic:0\nsweeps = 50\n"
            f"burnin_sweeps = 0\nseed = 3\nblock_size = 10\nout = {tmp_path}\n"
        )
        out = simulate(cfg)
        rows = read_rows(out[3] / "twopoint.csv")
        visits = [r for r in rows if r["observable"] == "visit_twopoint"]
        assert len(visits) == 1
        assert visits[0]["key"] == "0,0" and float(visits[0]["estimate"]) == 1.0

    def test_worm_and_saw_paths_run(self, tmp_path):
        for model, coupling in (("saw", "coupling = 0.3\n"), ("ising", "coupling = 0.3\n")):
            cfg = parse_config(
                f"model = {model}\nd = 2\nL = 3\n{coupling}sweeps = 60\nburnin_sweeps = 5\n"
                f"cadence_steps = 9\nseed = 5\nblock_size = 10\nout = {tmp_path / model}\n"
            )
            out = simulate(cfg)
            summary = json.loads((out[3] / "summary.json").read_text())
            assert summary["n_measurements"] == 60
            assert 0 < summary["chain_stats"][0]["acceptance"] <= 1

    def test_multi_size_and_analyze(self, tmp_path):
        cfg = parse_config(
            f"model = rlrw\nd = 3\nL = 3,4,5\nlength_law = halfnormal\nsweeps = 600\n"
            f"burnin_sweeps = 0\nseed = 11\nblock_size = 30\ntwopoint_radius = 3\nout = {tmp_path / 'runs'}\n"
        )
        simulate(cfg)
        outputs = analyze([tmp_path / "runs"], tmp_path / "analysis")
        fits = read_rows(outputs["fits"])
        assert any(r["observable"] == "length_exponent" for r in fits)
        ratio = read_rows(outputs["ratio"])
        assert any(r["observable"] == "phi_reference" for r in ratio)
        profile = read_rows(outputs["profile"])
        assert all(r["observable"] == "scaled_profile" for r in profile)

    def test_parallel_workers_match_serial(self, tmp_path):
        cfg = parse_config(BASE_CONFIG.format(out=tmp_path / "serial"))
        simulate(cfg, workers=1)
        cfg2 = apply_overrides(cfg, [f"out={tmp_path / 'par'}"])
        simulate(cfg2, workers=2)
        assert _tree_bytes(tmp_path / "serial") == _tree_bytes(tmp_path / "par")


def run_cli(*argv: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "toruswalks.cli", *argv],
        capture_output=True,
        text=True,
    )


class TestCli:
    def test_usage_error_exit_2(self):
        proc = run_cli("simulate")  # missing --config
        assert proc.returncode == 2

    def test_bad_config_exit_2(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("model = rlrw\nmystery = 7\n")
        proc = run_cli("simulate", "--config", str(bad))
        assert proc.returncode == 2
        assert "unknown key" in proc.stderr

    def test_simulate_and_override(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text(BASE_CONFIG.format(out=tmp_path / "out"))
        proc = run_cli(
            "simulate", "--config", str(cfgfile), "--override", "sweeps=50", "--seed", "21"
        )
        assert proc.returncode == 0, proc.stderr
        summary = json.loads((tmp_path / "out" / "L0004" / "summary.json").read_text())
        assert summary["seed"] == 21 and summary["sweeps"] == 50

    def test_theory_eval_grid(self, tmp_path):
        out = tmp_path / "hd.csv"
        proc = run_cli(
            "theory-eval", "--kind", "hd", "--d", "5",
            "--alpha", "0.75", "--beta", "1.9", "--gamma", "1.32",
            "--points", "12", "--out", str(out),
        )
        assert proc.returncode == 0, proc.stderr
        rows = read_rows(out)
        assert len(rows) == 12
        vals = [float(r["estimate"]) for r in rows]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))  # decreasing in xi

    def test_oracle_saw_table(self, tmp_path):
        out = tmp_path / "saw.csv"
        proc = run_cli(
            "oracle", "--kind", "saw", "--d", "1", "--L", "4", "--coupling", "0.5",
            "--out", str(out),
        )
        assert proc.returncode == 0, proc.stderr
        rows = read_rows(out)
        law = {r["key"]: float(r["estimate"]) for r in rows if r["observable"] == "saw_length_law"}
        z = 1 + 2 * 0.5 + 2 * 0.25 + 2 * 0.125
        assert law["0"] == pytest.approx(1 / z)
        assert law["3"] == pytest.approx(0.25 / z)

    def test_oracle_lemma_table(self, tmp_path):
        out = tmp_path / "lemma.csv"
        proc = run_cli(
            "oracle", "--kind", "lemma", "--d", "3", "--z-list", "4,8",
            "--nmax-factor", "12", "--out", str(out),
        )
        assert proc.returncode == 0, proc.stderr
        rows = read_rows(out)
        sums = {
            (r["observable"], r["L"]): float(r["estimate"])
            for r in rows
            if r["observable"] == "sum_p_pbar"
        }
        assert sums[("sum_p_pbar", "8")] < sums[("sum_p_pbar", "4")]
