"""Ensemble statistics, seeding, sweeps, and scheduling invariance."""

from __future__ import annotations

import numpy as np
import pytest

from spinchain import (
    ChainConfig,
    DisorderSpec,
    EnsembleStats,
    ExperimentConfig,
    ProtocolSpec,
    SweepGrid,
    derive_point_seed,
    point_samples,
    resolve_workers,
    run_point,
    run_sweep,
)

SC = ProtocolSpec(kind="spin-coupling")


def _config(**kwargs) -> ExperimentConfig:
    defaults = dict(
        chain=ChainConfig(n_sites=15),
        protocol=SC,
        disorder=DisorderSpec(sigma_h=0.15, sigma_j=0.15),
        realizations=64,
        seed=11,
    )
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


def test_config_validation():
    with pytest.raises(ValueError):
        _config(realizations=0)


def test_noiseless_point_is_deterministic():
    stats = run_point(_config(disorder=DisorderSpec(), realizations=3), workers=1)
    assert stats.count == 3
    assert stats.mean_probability == pytest.approx(1.0, abs=1e-9)
    assert stats.mean_fidelity == pytest.approx(1.0, abs=1e-9)
    assert stats.std_probability == 0.0
    assert stats.std_fidelity == 0.0
    assert stats.stderr_probability == 0.0


def test_point_samples_ranges():
    prob, fid = point_samples(_config(realizations=40), workers=1)
    assert prob.shape == (40,) and fid.shape == (40,)
    assert np.all((prob >= 0) & (prob <= 1))
    assert np.all((fid >= 0) & (fid <= 1))


def test_stats_consistency():
    config = _config(realizations=100)
    prob, fid = point_samples(config, workers=1)
    stats = run_point(config, workers=1)
    assert stats.mean_probability == pytest.approx(float(prob.mean()), abs=1e-15)
    assert stats.std_fidelity == pytest.approx(float(np.std(fid, ddof=1)), abs=1e-15)
    assert stats.stderr_probability == pytest.approx(
        stats.std_probability / 10.0, abs=1e-15
    )
    assert isinstance(stats, EnsembleStats)


def test_derive_point_seed_properties():
    base = derive_point_seed(7, "swap", 25, 0.1, 0.2)
    assert derive_point_seed(7, "swap", 25, 0.1, 0.2) == base
    assert derive_point_seed(8, "swap", 25, 0.1, 0.2) != base
    assert derive_point_seed(7, "spin-coupling", 25, 0.1, 0.2) != base
    assert derive_point_seed(7, "swap", 27, 0.1, 0.2) != base
    assert derive_point_seed(7, "swap", 25, 0.12, 0.2) != base
    # Negative zero widths normalize to the plain zero stream.
    assert derive_point_seed(7, "swap", 25, -0.0, 0.2) == derive_point_seed(
        7, "swap", 25, 0.0, 0.2
    )
    # The master seed enters modulo 2^64.
    assert derive_point_seed(7 + (1 << 64), "swap", 25, 0.1, 0.2) == base
    with pytest.raises(ValueError):
        derive_point_seed(7, "wormhole", 25, 0.1, 0.2)


def test_prefix_invariance():
    # The first 65 realizations of a 130-run point are the same numbers
    # as a 65-run point: identities come from (seed, index) alone.
    short = point_samples(_config(realizations=65), workers=1)
    long = point_samples(_config(realizations=130), workers=1)
    assert np.array_equal(short[0], long[0][:65])
    assert np.array_equal(short[1], long[1][:65])


def test_worker_count_does_not_change_results():
    config = _config(realizations=130)
    prob1, fid1 = point_samples(config, workers=1)
    prob2, fid2 = point_samples(config, workers=2)
    assert np.array_equal(prob1, prob2)
    assert np.array_equal(fid1, fid2)


def test_resolve_workers(monkeypatch):
    assert resolve_workers(3) == 3
    assert resolve_workers(0) == 1
    monkeypatch.setenv("SPINCHAIN_WORKERS", "5")
    assert resolve_workers() == 5
    assert resolve_workers(2) == 2
    monkeypatch.setenv("SPINCHAIN_WORKERS", "many")
    with pytest.raises(ValueError):
        resolve_workers()
    monkeypatch.delenv("SPINCHAIN_WORKERS")
    assert resolve_workers() >= 1


def test_adiabatic_point_through_batch_backend():
    config = ExperimentConfig(
        chain=ChainConfig(n_sites=15),
        protocol=ProtocolSpec(kind="adiabatic"),
        disorder=DisorderSpec(),
        realizations=1,
        seed=0,
    )
    stats = run_point(config, workers=1)
    assert stats.mean_probability >= 0.99
    assert stats.mean_fidelity >= 0.99


def test_fidelity_decreases_with_field_disorder():
    clean = run_point(
        _config(disorder=DisorderSpec(), realizations=200), workers=1
    )
    noisy = run_point(
        _config(disorder=DisorderSpec(sigma_h=0.25), realizations=200), workers=1
    )
    margin = 2 * (clean.stderr_fidelity + noisy.stderr_fidelity)
    assert clean.mean_fidelity > noisy.mean_fidelity + margin


def test_fidelity_decreases_with_chain_length():
    results = []
    for n in (15, 25, 51):
        stats = run_point(
            _config(chain=ChainConfig(n_sites=n), realizations=200), workers=1
        )
        results.append(stats)
    for shorter, longer in zip(results, results[1:]):
        margin = 2 * (shorter.stderr_fidelity + longer.stderr_fidelity)
        assert shorter.mean_fidelity > longer.mean_fidelity + margin


def test_sweep_grid_validation():
    with pytest.raises(ValueError):
        SweepGrid(
            protocols=(SC,), n_values=(), sigma_h_values=(0.0,), sigma_j_values=(0.0,)
        )
    with pytest.raises(ValueError, match="odd"):
        SweepGrid(
            protocols=(ProtocolSpec(kind="adiabatic"),),
            n_values=(24,),
            sigma_h_values=(0.0,),
            sigma_j_values=(0.0,),
        )


def test_sweep_row_order_and_coordinates():
    grid = SweepGrid(
        protocols=(ProtocolSpec(kind="swap"), SC),
        n_values=(5, 15),
        sigma_h_values=(0.0, 0.1),
        sigma_j_values=(0.05,),
    )
    rows = run_sweep(grid, _config(realizations=8, seed=3), workers=1)
    assert len(rows) == 8
    expected = [
        (kind, n, sh, 0.05)
        for kind in ("swap", "spin-coupling")
        for n in (5, 15)
        for sh in (0.0, 0.1)
    ]
    assert [(r.protocol, r.n_sites, r.sigma_h, r.sigma_j) for r in rows] == expected
    for row in rows:
        assert row.realizations == 8
        assert row.seed == derive_point_seed(3, row.protocol, row.n_sites, 0.0 + row.sigma_h, row.sigma_j)
        assert row.stats.count == 8


def test_singleton_sweep_matches_run_point():
    base = _config(realizations=64, seed=42)
    grid = SweepGrid(
        protocols=(SC,),
        n_values=(15,),
        sigma_h_values=(0.1,),
        sigma_j_values=(0.1,),
    )
    rows = run_sweep(grid, base, workers=1)
    assert len(rows) == 1
    seed = derive_point_seed(42, "spin-coupling", 15, 0.1, 0.1)
    direct = run_point(
        ExperimentConfig(
            chain=ChainConfig(n_sites=15),
            protocol=SC,
            disorder=DisorderSpec(sigma_h=0.1, sigma_j=0.1),
            realizations=64,
            seed=seed,
        ),
        workers=1,
    )
    assert rows[0].stats == direct
