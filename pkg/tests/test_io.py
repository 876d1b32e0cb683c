"""Serialization, CSV round-trips, manifests, and the command line."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from spinchain import (
    ChainConfig,
    DisorderSpec,
    EnsembleStats,
    ExperimentConfig,
    PropagationSettings,
    ProtocolSpec,
    SweepRow,
)
from spinchain.cli import main
from spinchain.io import (
    STATS_COLUMNS,
    experiment_from_dict,
    experiment_to_dict,
    format_float,
    load_config,
    read_stats_csv,
    sweep_grid_from_dict,
    write_manifest,
    write_stats_csv,
)


def test_format_float_round_trips():
    values = [0.1, 1 / 3, 2 / 3, 1e-300, 123456.789012345678, math.pi, -0.0]
    for x in values:
        assert float(format_float(x)) == x


def test_experiment_dict_round_trip():
    config = ExperimentConfig(
        chain=ChainConfig(n_sites=31, j_max=1.5),
        protocol=ProtocolSpec(
            kind="adiabatic", adiabatic_c=12.0, adiabatic_sigma_ratio=0.1
        ),
        disorder=DisorderSpec(sigma_h=0.12, sigma_j=0.07),
        realizations=222,
        seed=987654321,
        settings=PropagationSettings(dt_max=0.02, step_method="chebyshev"),
    )
    assert experiment_from_dict(experiment_to_dict(config)) == config


def test_experiment_from_dict_ignores_extra_keys():
    data = experiment_to_dict(
        ExperimentConfig(chain=ChainConfig(n_sites=15), protocol=ProtocolSpec(kind="swap"))
    )
    data["_meta"] = {"tool_version": "x"}
    data["sigma_h_values"] = [0.0, 0.1]
    config = experiment_from_dict(data)
    assert config.chain.n_sites == 15
    assert config.protocol.kind == "swap"


def test_load_config_rejects_non_object(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2, 3]\n")
    with pytest.raises(ValueError):
        load_config(path)


def test_manifest_contains_meta_and_replays(tmp_path):
    config = ExperimentConfig(
        chain=ChainConfig(n_sites=15), protocol=ProtocolSpec(kind="spin-coupling")
    )
    path = tmp_path / "m.json"
    write_manifest(path, experiment_to_dict(config))
    data = json.loads(path.read_text())
    assert "tool_version" in data["_meta"]
    assert "created" in data["_meta"]
    assert experiment_from_dict(load_config(path)) == config


def _sample_rows() -> list[SweepRow]:
    stats = EnsembleStats(
        mean_probability=1 / 3,
        mean_fidelity=2 / 3 + 1e-16,
        std_probability=0.1,
        std_fidelity=0.2,
        stderr_probability=0.1 / math.sqrt(7),
        stderr_fidelity=0.2 / math.sqrt(7),
        count=7,
    )
    return [
        SweepRow(
            protocol="swap",
            n_sites=25,
            sigma_h=0.02 * 3,  # 0.060000000000000005, not representable as 0.06
            sigma_j=0.1,
            realizations=7,
            seed=1234567890123456789,
            stats=stats,
        )
    ]


def test_stats_csv_round_trip_is_exact(tmp_path):
    rows = _sample_rows()
    path = tmp_path / "stats.csv"
    write_stats_csv(rows, path)
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(STATS_COLUMNS)
    parsed = read_stats_csv(path)
    assert len(parsed) == 1
    rec = parsed[0]
    row = rows[0]
    assert rec["protocol"] == "swap"
    assert rec["N"] == 25
    assert rec["sigma_h"] == row.sigma_h
    assert rec["mean_prob"] == row.stats.mean_probability
    assert rec["mean_fid"] == row.stats.mean_fidelity
    assert rec["stderr_fid"] == row.stats.stderr_fidelity
    assert rec["seed"] == row.seed


def test_sweep_grid_defaults():
    grid = sweep_grid_from_dict({})
    assert [s.kind for s in grid.protocols] == ["swap", "spin-coupling", "adiabatic"]
    assert grid.n_values == (25,)
    assert len(grid.sigma_h_values) == 16
    assert grid.sigma_h_values[0] == 0.0
    assert grid.sigma_h_values[-1] == pytest.approx(0.3)
    assert grid.sigma_j_values == grid.sigma_h_values


def test_sweep_grid_singular_keys_pin_axes():
    grid = sweep_grid_from_dict(
        {"protocol": "swap", "n": 15, "sigma_h": 0.1, "adiabatic_c": 10.0}
    )
    assert len(grid.protocols) == 1
    assert grid.protocols[0].kind == "swap"
    assert grid.protocols[0].adiabatic_c == 10.0
    assert grid.n_values == (15,)
    assert grid.sigma_h_values == (0.1,)
    assert len(grid.sigma_j_values) == 16


def test_sweep_grid_plural_keys_override():
    grid = sweep_grid_from_dict(
        {
            "protocols": ["swap", "spin-coupling"],
            "n_values": [15, 25],
            "sigma_h_values": [0.0, 0.2],
            "sigma_j_values": [0.05],
        }
    )
    assert len(grid.protocols) == 2
    assert grid.n_values == (15, 25)
    assert grid.sigma_h_values == (0.0, 0.2)
    assert grid.sigma_j_values == (0.05,)


def test_cli_run_writes_stats(capsys):
    code = main(
        [
            "run",
            "--protocol",
            "spin-coupling",
            "--n",
            "15",
            "--sigma-h",
            "0.1",
            "--sigma-j",
            "0.1",
            "--realizations",
            "8",
            "--seed",
            "5",
            "--workers",
            "1",
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(STATS_COLUMNS)
    assert lines[1].startswith("spin-coupling,15,")


def test_cli_run_manifest_replay(tmp_path, capsys):
    first = tmp_path / "a.csv"
    args = [
        "run",
        "--protocol",
        "spin-coupling",
        "--n",
        "15",
        "--sigma-h",
        "0.15",
        "--sigma-j",
        "0.15",
        "--realizations",
        "16",
        "--seed",
        "99",
        "--workers",
        "1",
    ]
    assert main(args + ["--output", str(first)]) == 0
    manifest = tmp_path / "a.csv.manifest.json"
    assert manifest.exists()
    second = tmp_path / "b.csv"
    assert (
        main(
            [
                "run",
                "--config",
                str(manifest),
                "--workers",
                "1",
                "--output",
                str(second),
            ]
        )
        == 0
    )
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()


def test_cli_sweep_single_point(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main(
        [
            "sweep",
            "--protocol",
            "spin-coupling",
            "--n",
            "15",
            "--sigma-h",
            "0.1",
            "--sigma-j",
            "0.1",
            "--realizations",
            "4",
            "--seed",
            "3",
            "--workers",
            "1",
            "--output",
            str(out),
        ]
    )
    capsys.readouterr()
    assert code == 0
    parsed = read_stats_csv(out)
    assert len(parsed) == 1
    assert parsed[0]["protocol"] == "spin-coupling"
    assert parsed[0]["realizations"] == 4
    axes = json.loads((tmp_path / "sweep.csv.manifest.json").read_text())
    assert axes["sigma_h_values"] == [0.1]


def test_cli_trajectory_csv(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = main(
        [
            "trajectory",
            "--protocol",
            "adiabatic",
            "--n",
            "5",
            "--adiabatic-c",
            "8",
            "--noiseless",
            "--points",
            "40",
            "--output",
            str(out),
        ]
    )
    capsys.readouterr()
    assert code == 0
    lines = out.read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header == ["t", "p1", "p2", "p3", "p4", "p5", "j_odd", "j_even"]
    first = [float(x) for x in lines[1].split(",")]
    assert first[0] == 0.0
    assert first[1] == 1.0
    # The ramp starts on its finite erf tails.
    assert first[-2] == pytest.approx(math.erfc(math.sqrt(2)) / 2, abs=1e-12)
    assert first[-1] == pytest.approx(1.0, abs=1e-6)
    last = [float(x) for x in lines[-1].split(",")]
    assert last[0] == pytest.approx(40.0, abs=1e-9)
    assert last[5] > 0.99  # population arrived on site 5


def test_cli_swap_trajectory_has_no_ramp_columns(capsys):
    code = main(
        ["trajectory", "--protocol", "swap", "--n", "4", "--noiseless", "--points", "20"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == "t,p1,p2,p3,p4"


def test_cli_even_n_adiabatic_fails_cleanly(capsys):
    code = main(["trajectory", "--protocol", "adiabatic", "--n", "24", "--noiseless"])
    captured = capsys.readouterr()
    assert code == 2
    assert "error:" in captured.err
    assert "odd" in captured.err


def test_cli_verify_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "FAIL" not in out
    assert "all checks passed" in out
