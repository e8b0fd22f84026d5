import json

import pandas as pd
import pytest

from normdescent.core.config import Settings
from normdescent.core.exceptions import ConfigError, NumericalAbort
from normdescent.schemas import experiment
from normdescent.schemas.experiment import ExperimentConfig, RunRecord, RunStatus
from normdescent.services import training
from normdescent.services.training import (
    checkpoint_path,
    load_experiment_configs,
    parse_experiment_configs,
    run_experiment,
    run_many,
    with_seed,
)


def make_config(output_dir, name="run", optimizer=None, **fields):
    payload = {
        "name": name,
        "optimizer": optimizer or {"name": "steepest"},
        "dataset": {"d_in": 4, "d_out": 2, "n": 16, "noise": 0.05},
        "steps": 12,
        "seed": 3,
        "output_path": str(output_dir / f"{name}.csv"),
        "checkpoint_every": 5,
    }
    payload.update(fields)
    return ExperimentConfig.model_validate(payload)


class TestRunExperiment:
    def test_same_seed_same_bytes(self, output_dir):
        config = make_config(output_dir)
        run_experiment(config, str(output_dir / "a.csv"))
        run_experiment(config, str(output_dir / "b.csv"))
        assert (output_dir / "a.csv").read_bytes() == (output_dir / "b.csv").read_bytes()

    def test_csv_columns_and_json_record(self, output_dir):
        config = make_config(output_dir)
        record = run_experiment(config)
        df = pd.read_csv(record.csv_path)
        assert list(df.columns) == [
            "step", "loss", "step_size", "dual_0", "cos_theta", "norm_ratio", "displacement_rms",
        ]
        assert list(df["step"]) == list(range(12))

        saved = RunRecord.model_validate_json((output_dir / "run.json").read_text())
        assert saved.status is RunStatus.COMPLETED
        assert saved.steps_completed == 12
        assert saved.final_loss == record.final_loss
        assert saved.config == config

    def test_two_layer_has_a_dual_column_per_layer(self, output_dir):
        config = make_config(output_dir, task="two_layer", hidden=5)
        df = pd.read_csv(run_experiment(config).csv_path)
        assert {"dual_0", "dual_1"} <= set(df.columns)

    def test_different_seed_changes_the_run(self, output_dir):
        config = make_config(output_dir)
        a = run_experiment(config, str(output_dir / "a.csv"))
        b = run_experiment(with_seed(config, 4), str(output_dir / "b.csv"))
        assert a.rows[0].loss != b.rows[0].loss

    def test_sign_prodigy_step_size_never_shrinks(self, output_dir):
        config = make_config(
            output_dir, name="prodigy", steps=40,
            optimizer={"name": "prodigy", "beta1": 0.0, "beta2": 0.0, "epsilon": 0.0},
        )
        sizes = [row.step_size for row in run_experiment(config).rows]
        assert all(b >= a for a, b in zip(sizes, sizes[1:]))

    def test_spectral_steepest_descends(self, output_dir):
        record = run_experiment(make_config(output_dir, steps=30))
        losses = [row.loss for row in record.rows] + [record.final_loss]
        assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))
        assert losses[-1] < losses[0]

    def test_divergence_aborts_with_a_partial_record(self, output_dir):
        config = make_config(output_dir, name="boom", optimizer={"name": "sign_descent", "lr": 1e200})
        with pytest.raises(NumericalAbort) as info:
            run_experiment(config)
        assert info.value.exit_code == 3
        record = info.value.record
        assert record.status is RunStatus.ABORTED
        assert record.steps_completed == info.value.step
        saved = json.loads((output_dir / "boom.json").read_text())
        assert saved["status"] == "aborted"
        assert saved["final_loss"] is None


class TestCheckpoints:
    def test_resume_matches_an_uninterrupted_run(self, output_dir, monkeypatch):
        config = make_config(output_dir)
        fresh = run_experiment(config, str(output_dir / "fresh.csv"))

        with monkeypatch.context() as m:
            m.setattr(training, "remove_quietly", lambda paths: None)
            run_experiment(config)
        ckpt = checkpoint_path(output_dir / "run.csv")
        assert json.loads(ckpt.read_text())["step"] == 10

        resumed = run_experiment(config)
        assert not ckpt.exists()
        assert (output_dir / "run.csv").read_bytes() == (output_dir / "fresh.csv").read_bytes()
        assert resumed.final_loss == fresh.final_loss

    def test_checkpoint_for_another_config_is_ignored(self, output_dir, monkeypatch):
        config = make_config(output_dir)
        with monkeypatch.context() as m:
            m.setattr(training, "remove_quietly", lambda paths: None)
            run_experiment(config)

        longer = config.model_copy(update={"steps": 13})
        record = run_experiment(longer)
        assert [row.step for row in record.rows] == list(range(13))

    def test_unreadable_checkpoint_is_ignored(self, output_dir):
        config = make_config(output_dir)
        checkpoint_path(output_dir / "run.csv").write_text("{not json")
        assert run_experiment(config).steps_completed == 12


class TestConfigs:
    def test_invalid_field_is_named(self, output_dir):
        payload = make_config(output_dir).model_dump(mode="json", by_alias=True)
        payload["steps"] = 0
        with pytest.raises(ConfigError, match="steps"):
            parse_experiment_configs(payload)

    def test_list_errors_name_the_entry(self, output_dir):
        good = make_config(output_dir).model_dump(mode="json", by_alias=True)
        bad = dict(good, optimizer={"name": "lion"})
        with pytest.raises(ConfigError, match=r"config\[1\]"):
            parse_experiment_configs([good, bad])

    def test_empty_list(self):
        with pytest.raises(ConfigError, match="empty"):
            parse_experiment_configs([])

    def test_layer_lists_must_match_the_task(self, output_dir):
        payload = make_config(output_dir).model_dump(mode="json", by_alias=True)
        payload["optimizer"]["scales"] = [1.0, 2.0]
        with pytest.raises(ConfigError, match="scales"):
            parse_experiment_configs(payload)

    def test_output_path_defaults_to_the_output_dir(self, monkeypatch, tmp_path):
        monkeypatch.setattr(experiment, "get_settings", lambda: Settings(OUTPUT_DIR=str(tmp_path)))
        config = ExperimentConfig.model_validate(
            {"name": "plain", "optimizer": {"name": "adam"}, "dataset": {"d_in": 2, "d_out": 1, "n": 4}, "steps": 1}
        )
        assert config.output_path == str(tmp_path / "plain.csv")

    def test_missing_and_malformed_files(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_experiment_configs(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_experiment_configs(bad)

    def test_shipped_configs_parse(self):
        from pathlib import Path

        root = Path(__file__).resolve().parent.parent / "configs"
        for path in sorted(root.glob("*.json")):
            assert load_experiment_configs(path)

    def test_lambda_alias_roundtrips(self, output_dir):
        config = make_config(output_dir, optimizer={"name": "steepest", "lambda": 4.0})
        assert config.optimizer.sharpness == 4.0
        dumped = config.model_dump(mode="json", by_alias=True)
        assert dumped["optimizer"]["lambda"] == 4.0
        assert ExperimentConfig.model_validate(dumped) == config


class TestRunMany:
    def test_results_keep_config_order(self, output_dir):
        configs = [
            make_config(output_dir, name="first"),
            make_config(output_dir, name="boom", optimizer={"name": "sign_descent", "lr": 1e200}),
            make_config(output_dir, name="third", optimizer={"name": "adam"}),
        ]
        results = run_many(configs, threads=2)
        assert isinstance(results[0], RunRecord) and results[0].name == "first"
        assert isinstance(results[1], NumericalAbort)
        assert isinstance(results[2], RunRecord) and results[2].name == "third"

    def test_threads_do_not_change_outputs(self, output_dir):
        configs = [make_config(output_dir / "serial", name=f"r{i}") for i in range(3)]
        parallel = [make_config(output_dir / "parallel", name=f"r{i}") for i in range(3)]
        run_many(configs, threads=1)
        run_many(parallel, threads=3)
        for i in range(3):
            assert (output_dir / "serial" / f"r{i}.csv").read_bytes() == (
                output_dir / "parallel" / f"r{i}.csv"
            ).read_bytes()
