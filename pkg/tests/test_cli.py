"""End-to-end command checks: outputs, determinism and exit codes."""

import json

import pandas as pd
import pytest

from adr_planner.api import commands
from adr_planner.api.models import AgentConfig, MissionConfig, Verdict
from adr_planner.core.errors import TrainingError
from adr_planner.core.pipeline import ValidationPipeline
from adr_planner.main import main

from conftest import make_catalog, unit_cost


def _config_file(tmp_path, **agent):
    base = dict(episodes=30, batch_size=8, warmup=16, buffer_capacity=500,
                target_sync_period=20, hidden_sizes=[8, 8], eval_episodes=2)
    base.update(agent)
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps({"mission": {"delta_v_max": 1.0, "delta_t_max": 1e12}, "agent": base}),
        encoding="utf-8",
    )
    return str(path)


def _run_args(tmp_path, out, *extra):
    return ["--config", _config_file(tmp_path), "--generate-n", "4", "--output-dir", str(out), "--no-plots", *extra]


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def test_generate_writes_reproducible_csv(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["generate", "--n", "320", "--seed", "7", "--out", str(a)]) == 0
    assert main(["generate", "--n", "320", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 321
    assert str(a) in capsys.readouterr().out


def test_generate_rejects_empty_cloud(tmp_path):
    assert main(["generate", "--n", "0", "--out", str(tmp_path / "x.csv")]) == 2


def test_usage_error_exit_code():
    assert main(["generate"]) == 2
    assert main(["no-such-command"]) == 2


# ---------------------------------------------------------------------------
# transfer
# ---------------------------------------------------------------------------

def _transfer(capsys, origin, target):
    code = main(["transfer", "--from", origin, "--to", target])
    out = capsys.readouterr().out.splitlines()
    return code, out


def test_transfer_identical_elements_costs_no_delta_v(capsys):
    code, out = _transfer(capsys, "7000,86,0,10", "7000,86,0,10")
    assert code == 0
    assert out[0] == "delta_v: 0.000000 km/s"


def test_transfer_leo_to_geo(capsys):
    code, out = _transfer(capsys, "6678,0,0,0", "42164,0,0,0")
    assert code == 0
    assert float(out[0].split()[1]) == pytest.approx(3.892, abs=2e-3)


def test_transfer_sixty_degree_plane_change(capsys):
    # circular speed 7.5 km/s
    code, out = _transfer(capsys, "7086.230076,0,0,0", "7086.230076,60,0,0")
    assert code == 0
    assert float(out[0].split()[1]) == pytest.approx(7.5, abs=1e-6)


@pytest.mark.parametrize("origin", ["7000,0,0", "7000,abc,0,0", "6000,0,0,0"])
def test_transfer_rejects_bad_elements(capsys, origin):
    code, _ = _transfer(capsys, origin, "7100,0,0,0")
    assert code == 2


# ---------------------------------------------------------------------------
# train / eval
# ---------------------------------------------------------------------------

def test_train_writes_per_seed_outputs(tmp_path):
    out = tmp_path / "run"
    assert main(["train", *_run_args(tmp_path, out, "--seeds", "0", "1")]) == 0
    for seed in (0, 1):
        assert (out / f"metrics_seed{seed}.csv").is_file()
        assert (out / f"checkpoint_seed{seed}.npz").is_file()
    assert not list(out.glob("*.svg"))
    frame = pd.read_csv(out / "aggregate.csv")
    assert set(frame["n_seeds"]) == {2}
    effective = json.loads((out / "effective_config.json").read_text())
    assert effective["mission"]["n_debris"] == 4
    assert effective["seeds"] == [0, 1]


def test_train_is_byte_identical_across_runs(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["train", *_run_args(tmp_path, first, "--seed", "3")]) == 0
    assert main(["train", *_run_args(tmp_path, second, "--seed", "3")]) == 0
    assert (first / "metrics_seed3.csv").read_bytes() == (second / "metrics_seed3.csv").read_bytes()
    assert (first / "aggregate.csv").read_bytes() == (second / "aggregate.csv").read_bytes()


def test_eval_reads_checkpoint(tmp_path):
    out = tmp_path / "run"
    assert main(["train", *_run_args(tmp_path, out, "--seed", "0")]) == 0
    code = main(["eval", *_run_args(tmp_path, out), "--checkpoint", str(out / "checkpoint_seed0.npz")])
    assert code == 0
    report = json.loads((out / "eval.json").read_text())
    assert report["episodes"] == 2


def test_eval_dimension_mismatch_is_runtime_failure(tmp_path):
    out = tmp_path / "run"
    assert main(["train", *_run_args(tmp_path, out, "--seed", "0")]) == 0
    args = ["eval", "--config", _config_file(tmp_path), "--generate-n", "5", "--output-dir", str(out),
            "--checkpoint", str(out / "checkpoint_seed0.npz")]
    assert main(args) == 3


def test_eval_missing_checkpoint(tmp_path):
    assert main(["eval", *_run_args(tmp_path, tmp_path / "o"), "--checkpoint", str(tmp_path / "nope.npz")]) == 2


def test_missing_catalog_source(tmp_path):
    assert main(["train", "--config", _config_file(tmp_path), "--output-dir", str(tmp_path / "o")]) == 2


def test_n_debris_mismatch(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"mission": {"n_debris": 9, "delta_v_max": 1.0, "delta_t_max": 1e6}}))
    assert main(["train", "--config", str(path), "--generate-n", "4", "--output-dir", str(tmp_path / "o")]) == 2


def test_invalid_config_value(tmp_path):
    assert main(["train", *_run_args(tmp_path, tmp_path / "o", "--gamma", "1.5")]) == 2


def test_training_failure_exit_code(tmp_path, monkeypatch):
    def broken(*args, **kwargs):
        raise TrainingError("seed 0 diverged")

    monkeypatch.setattr(commands, "run_training", broken)
    assert main(["train", *_run_args(tmp_path, tmp_path / "o")]) == 3


def test_unexpected_exception_exit_code(tmp_path, monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise OSError("disk full")

    monkeypatch.setattr(commands, "run_training", broken)
    assert main(["train", *_run_args(tmp_path, tmp_path / "o")]) == 3
    assert "disk full" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def test_validation_pipeline_matches_with_unit_costs(tmp_path):
    catalog = make_catalog([7000.0, 7100.0, 7200.0])
    mission = MissionConfig(n_debris=3, delta_v_max=1.0, delta_t_max=1e6)
    agent = AgentConfig(episodes=20, batch_size=4, warmup=8, hidden_sizes=[8, 8], eval_episodes=2)
    verdict = ValidationPipeline(
        mission, agent, catalog, [0], tmp_path, k=3, cost_provider=unit_cost, render=False
    ).process()
    assert verdict.dv_optimal == 2.0
    assert verdict.oracle_best_reward == 3.0
    # masked greedy rollouts always finish three equal-cost removals
    assert verdict.agent_best_reward == 3.0
    assert verdict.match is True and verdict.discrepancy is None
    on_disk = Verdict.model_validate_json((tmp_path / "verdict.json").read_text())
    assert on_disk == verdict


def test_validate_half_budget_reports_discrepancy(tmp_path, capsys):
    out = tmp_path / "val"
    code = main(["validate", *_run_args(tmp_path, out), "--k", "3", "--budget-scale", "0.5"])
    assert code == 2
    verdict = Verdict.model_validate_json((out / "verdict.json").read_text())
    assert verdict.discrepancy is not None
    assert verdict.match is False
    assert verdict.agent_best_reward is None
    assert not (out / "metrics_seed0.csv").exists()
    assert "discrepancy" in capsys.readouterr().err


def test_validate_small_run_writes_verdict(tmp_path):
    out = tmp_path / "val"
    code = main(["validate", *_run_args(tmp_path, out), "--k", "2"])
    assert code == 0
    verdict = Verdict.model_validate_json((out / "verdict.json").read_text())
    assert verdict.oracle_best_reward == 2.0
    assert len(verdict.optimal_sequence) == 2


def test_validate_refuses_large_catalog(tmp_path):
    args = ["validate", "--config", _config_file(tmp_path), "--generate-n", "13", "--output-dir", str(tmp_path / "v")]
    assert main(args) == 2


# ---------------------------------------------------------------------------
# compare / sweep
# ---------------------------------------------------------------------------

def test_compare_small_run(tmp_path):
    out = tmp_path / "cmp"
    assert main(["compare", *_run_args(tmp_path, out, "--seeds", "0", "1")]) == 0
    report = json.loads((out / "comparison.json").read_text())
    assert 0.0 <= report["p_value"] <= 1.0
    assert len(report["visible_rewards"]) == len(report["masked_rewards"]) == 2
    assert (out / "visible" / "metrics_seed0.csv").is_file()
    assert (out / "masked" / "metrics_seed1.csv").is_file()


def test_sweep_grid(tmp_path):
    out = tmp_path / "sw"
    code = main(["sweep", *_run_args(tmp_path, out), "--learning-rates", "0.001,0.01", "--gammas", "0.9"])
    assert code == 0
    frame = pd.read_csv(out / "sweep.csv")
    assert list(frame["learning_rate"]) == [0.001, 0.01]
    best = json.loads((out / "sweep_best.json").read_text())
    assert best["gamma"] == 0.9


def test_sweep_rejects_bad_grid(tmp_path):
    assert main(["sweep", *_run_args(tmp_path, tmp_path / "sw"), "--learning-rates", "x", "--gammas", "0.9"]) == 2


# ---------------------------------------------------------------------------
# Long acceptance runs
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_validation_protocol_reproduction(tmp_path):
    out = tmp_path / "acceptance"
    config = tmp_path / "acc.json"
    config.write_text(json.dumps({
        "mission": {"delta_v_max": 1.0, "delta_t_max": 1e12, "risk_threshold": 0.0},
        "agent": {"episodes": 20000, "target_sync_period": 500, "eval_episodes": 5},
    }))
    args = ["validate", "--config", str(config), "--generate-n", "8", "--k", "4",
            "--seeds", "0", "1", "2", "--output-dir", str(out), "--no-plots"]
    assert main(args) == 0
    verdict = Verdict.model_validate_json((out / "verdict.json").read_text())
    hits = sum(reward == verdict.oracle_best_reward for reward in verdict.seed_rewards.values())
    assert hits >= 2


@pytest.mark.slow
def test_risk_visible_agent_beats_masked_baseline(tmp_path):
    out = tmp_path / "risk"
    config = tmp_path / "risk.json"
    config.write_text(json.dumps({
        "mission": {"delta_v_max": 1.5, "delta_t_max": 1e9, "risk_threshold": 0.5},
        "agent": {"episodes": 5000, "eval_episodes": 50},
    }))
    args = ["compare", "--config", str(config), "--generate-n", "10",
            "--seeds", "0", "1", "2", "3", "4", "--output-dir", str(out), "--no-plots"]
    assert main(args) == 0
    report = json.loads((out / "comparison.json").read_text())
    assert report["visible_better"] is True
    assert report["p_value"] < 0.05
