"""Monte Carlo engine: tallies, reproducibility, CSV output."""

import json
import math

import numpy as np
import pytest

from linkverify import (ExperimentConfig, Method, PlantModel,
                        hoeffding_sample_size, load_experiment_config,
                        run_cost_experiment, run_stability_experiment,
                        run_wrong_answer_experiment, save_plant,
                        sweep_sample_complexity, write_complexity_csv,
                        write_ledger_csvs)

SCALAR_2 = PlantModel.simple([[2.0]])
THREE_METHODS = (Method.HOEFFDING, Method.EXACT_BINOMIAL, Method.NORMAL_APPROX)


def small_config(**overrides):
    base = dict(plant=SCALAR_2, true_rate=0.9, delta=1e-3,
                n_grid=(10, 50, 200), trials=200, seed=12345,
                methods=(Method.HOEFFDING,))
    base.update(overrides)
    return ExperimentConfig(**base)


def test_single_cell_ledger():
    ledger = run_stability_experiment(small_config(trials=1, n_grid=(1,)))
    cell = ledger.cell(Method.HOEFFDING, 1)
    assert cell.affirm + cell.deny + cell.undetermined == 1


def test_cell_counts_partition_trials():
    cfg = small_config(methods=THREE_METHODS)
    ledger = run_stability_experiment(cfg)
    for method in cfg.methods:
        for n in cfg.n_grid:
            cell = ledger.cell(method, n)
            assert cell.affirm + cell.deny + cell.undetermined == cfg.trials
            assert cell.correct + cell.wrong <= cfg.trials
            assert min(cell.affirm, cell.deny, cell.undetermined,
                       cell.correct, cell.wrong) >= 0


def test_stable_truth_labels():
    # q=0.9 above threshold 0.75: Affirm is correct, Deny is wrong.
    ledger = run_stability_experiment(small_config(n_grid=(2000,)))
    cell = ledger.cell(Method.HOEFFDING, 2000)
    assert cell.correct == cell.affirm
    assert cell.wrong == cell.deny
    assert cell.correct > 190  # nearly every trial decides by n=2000


def test_unstable_truth_labels():
    cfg = small_config(true_rate=0.3, n_grid=(2000,))
    ledger = run_stability_experiment(cfg)
    cell = ledger.cell(Method.HOEFFDING, 2000)
    assert cell.correct == cell.deny
    assert cell.wrong == cell.affirm


def test_degenerate_perfect_link_never_wrong():
    ledger = run_stability_experiment(small_config(true_rate=1.0))
    for n in (10, 50, 200):
        assert ledger.cell(Method.HOEFFDING, n).wrong == 0


def test_affirm_rate_nondecreasing_on_dyadic_grid():
    cfg = small_config(trials=400, n_grid=(64, 128, 256, 512, 1024, 2048))
    ledger = run_stability_experiment(cfg)
    rates = [ledger.affirm_rate(Method.HOEFFDING, n) for n in cfg.n_grid]
    sigma = 3.0 * math.sqrt(0.25 / cfg.trials)
    assert all(b >= a - 2 * sigma for a, b in zip(rates, rates[1:]))
    for n, rate in zip(cfg.n_grid, rates):
        assert rate >= ledger.bound[n] - sigma


def test_wrong_answer_experiment_delegates():
    cfg = small_config()
    a = run_stability_experiment(cfg)
    b = run_wrong_answer_experiment(cfg)
    for key in a.cells:
        assert a.cells[key] == b.cells[key]


def test_rejects_rate_on_threshold():
    with pytest.raises(ValueError):
        run_stability_experiment(small_config(true_rate=0.75))


def test_cost_experiment_reports_sample_size():
    cfg = small_config(true_rate=0.95, delta=0.01, j_req=2.0,
                       n_grid=(100, 1638), trials=150)
    ledger = run_cost_experiment(cfg)
    assert ledger.extras["critical_rate"] == pytest.approx(0.875, abs=1e-8)
    assert ledger.extras["thm_sample_size"] == 1638
    cell = ledger.cell(Method.HOEFFDING, 1638)
    assert cell.correct == cell.affirm  # J(0.95)=1.25 <= 2, so Affirm is right
    assert cell.correct >= 140


def test_cost_experiment_rejects_infeasible_target():
    with pytest.raises(ValueError):
        run_cost_experiment(small_config(j_req=0.5))


def test_config_validation():
    with pytest.raises(ValueError):
        small_config(n_grid=(10, 10))
    with pytest.raises(ValueError):
        small_config(n_grid=())
    with pytest.raises(ValueError):
        small_config(trials=0)
    with pytest.raises(ValueError):
        small_config(true_rate=1.5)
    with pytest.raises(ValueError):
        small_config(methods=())
    with pytest.raises(ValueError):
        small_config(delta=0.0)


def test_csv_output_and_reproducibility(tmp_path):
    cfg = small_config(methods=THREE_METHODS, trials=100)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    write_ledger_csvs(run_stability_experiment(cfg), out_a)
    write_ledger_csvs(run_stability_experiment(cfg), out_b)
    for name in ("correct_rate.csv", "wrong_rate.csv", "bound.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    correct = (out_a / "correct_rate.csv").read_bytes()
    assert b"\r" not in correct
    lines = correct.decode().splitlines()
    assert lines[0] == "method,n,rate"
    assert len(lines) == 1 + len(THREE_METHODS) * len(cfg.n_grid)
    # Rows are sorted by (method, n).
    keys = [(row.split(",")[0], int(row.split(",")[1])) for row in lines[1:]]
    assert keys == sorted(keys)

    bound_lines = (out_a / "bound.csv").read_text().splitlines()
    assert bound_lines[0] == "n,bound"
    assert len(bound_lines) == 1 + len(cfg.n_grid)


def test_csv_12_significant_digits(tmp_path):
    cfg = small_config(trials=3, n_grid=(10, 2000))
    write_ledger_csvs(run_stability_experiment(cfg), tmp_path)
    for line in (tmp_path / "bound.csv").read_text().splitlines()[1:]:
        value = line.split(",")[1]
        assert value == f"{float(value):.12g}"


def test_seed_changes_the_sample_paths():
    from linkverify.harness import _success_counts
    a = _success_counts(small_config(trials=300, n_grid=(50,)))
    b = _success_counts(small_config(trials=300, n_grid=(50,), seed=999))
    assert not np.array_equal(a, b)
    assert np.array_equal(a, _success_counts(small_config(trials=300, n_grid=(50,))))


def test_sweep_rows():
    rows = sweep_sample_complexity("rho", [1.5, 2.0, 3.0], q=0.9, delta=0.01)
    by_x = {x: (nh, nb) for x, nh, nb in rows}
    assert by_x[2.0][0] == 410
    rows = sweep_sample_complexity("q", [0.9, 0.99], rho=2.0, delta=0.01)
    by_x = {x: (nh, nb) for x, nh, nb in rows}
    assert by_x[0.9][0] == 410
    assert by_x[0.99] == (160, 36)


def test_sweep_axis_aliases_and_critical_guard():
    canonical = sweep_sample_complexity("spectral_radius", [2.0])
    alias = sweep_sample_complexity("rho", [2.0])
    assert canonical == alias
    with pytest.raises(ValueError):
        # Threshold at rho=2 is exactly q=0.75.
        sweep_sample_complexity("q", [0.75 + 1e-9], rho=2.0)
    with pytest.raises(ValueError):
        sweep_sample_complexity("diagonal", [1.0])


def test_complexity_csv(tmp_path):
    rows = sweep_sample_complexity("rho", [1.5, 2.0], q=0.9, delta=0.01)
    path = tmp_path / "complexity.csv"
    write_complexity_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,n_hoeffding,n_bernstein"
    assert lines[2].startswith("2,410,")


def test_config_file_loading(tmp_path):
    plant_path = tmp_path / "plant.json"
    save_plant(SCALAR_2, plant_path)
    cfg_path = tmp_path / "exp.json"
    cfg_path.write_text(json.dumps({
        "plant": "plant.json", "true_rate": 0.9, "delta": 0.01,
        "n_grid": [10, 20], "trials": 5, "methods": ["hoeffding", "exact"],
        "seed": 7,
    }))
    cfg = load_experiment_config(cfg_path)
    assert cfg.true_rate == 0.9
    assert cfg.methods == (Method.HOEFFDING, Method.EXACT_BINOMIAL)
    assert cfg.plant.a_open[0, 0] == 2.0
    assert cfg.j_req is None


def test_config_file_inline_plant_and_defaults(tmp_path):
    cfg_path = tmp_path / "exp.json"
    cfg_path.write_text(json.dumps({
        "plant": {"n": 1, "a_open": [[2.0]]}, "true_rate": 0.5,
    }))
    cfg = load_experiment_config(cfg_path)
    assert cfg.delta == 1e-3
    assert cfg.trials == 1000
    assert cfg.n_grid[-1] == 2000


def test_config_file_rejects_unknown_keys(tmp_path):
    cfg_path = tmp_path / "exp.json"
    cfg_path.write_text(json.dumps({
        "plant": {"n": 1, "a_open": [[2.0]]}, "true_rate": 0.5, "burnin": 10,
    }))
    with pytest.raises(ValueError):
        load_experiment_config(cfg_path)
