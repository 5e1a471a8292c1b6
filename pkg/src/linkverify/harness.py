"""Monte Carlo experiment engine for the decision procedures.

An experiment repeats the same question over many independently drawn
channel traces and tallies how often each interval method answers
correctly, wrongly, or not at all, across a grid of sample sizes. One
trace is drawn per trial at the largest grid size and every smaller
size is evaluated on its prefix, so a trial traces the same path a
practitioner would see while collecting data.

Verdicts depend on a trace only through (success count, length), so the
engine tallies over distinct counts rather than re-deriving intervals
per trial; this keeps ten-thousand-trial runs with exact binomial
intervals fast.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .channel import draw_trace
from .complexity import (MarginSpec, bernstein_sample_size, correctness_bound,
                         hoeffding_sample_size)
from .intervals import Method, interval_from_counts
from .sysmodel import (PlantModel, critical_rate, load_plant, lyapunov_cost,
                       plant_from_dict, stability_threshold)
from .verify import Decision, decide_cost, decide_stability

DEFAULT_N_GRID = (10, 20, 50, 100, 200, 300, 500, 1000, 1500, 2000)
DEFAULT_DELTA = 1e-3
DEFAULT_TRIALS = 1000


@dataclass(frozen=True)
class ExperimentConfig:
    plant: PlantModel
    true_rate: float
    delta: float = DEFAULT_DELTA
    n_grid: tuple[int, ...] = DEFAULT_N_GRID
    trials: int = DEFAULT_TRIALS
    methods: tuple[Method, ...] = (Method.HOEFFDING,)
    seed: int = 0
    j_req: float | None = None
    out: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.true_rate <= 1.0:
            raise ValueError(f"true_rate={self.true_rate} outside [0, 1]")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta={self.delta} outside (0, 1)")
        grid = tuple(int(n) for n in self.n_grid)
        if not grid or any(n < 1 for n in grid):
            raise ValueError("n_grid must contain positive sample sizes")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("n_grid must be strictly increasing")
        object.__setattr__(self, "n_grid", grid)
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.methods:
            raise ValueError("at least one interval method is required")
        object.__setattr__(self, "methods", tuple(self.methods))
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.j_req is not None and self.j_req <= 0.0:
            raise ValueError("j_req must be positive")


@dataclass
class Cell:
    affirm: int = 0
    deny: int = 0
    undetermined: int = 0
    correct: int = 0
    wrong: int = 0


class TrialLedger:
    """Per (method, n) tallies plus the matching theoretical bound."""

    def __init__(self, config: ExperimentConfig, truth: Decision,
                 bound: dict[int, float], extras: dict | None = None):
        self.config = config
        self.truth = truth
        self.bound = bound
        self.extras = extras or {}
        self.cells: dict[tuple[str, int], Cell] = {
            (m.value, n): Cell() for m in config.methods for n in config.n_grid
        }

    def add(self, method: Method, n: int, decision: Decision, count: int) -> None:
        cell = self.cells[(method.value, n)]
        if decision is Decision.AFFIRM:
            cell.affirm += count
        elif decision is Decision.DENY:
            cell.deny += count
        else:
            cell.undetermined += count
        if decision is self.truth:
            cell.correct += count
        elif decision is not Decision.UNDETERMINED:
            cell.wrong += count

    def cell(self, method: Method, n: int) -> Cell:
        return self.cells[(method.value, n)]

    def correct_rate(self, method: Method, n: int) -> float:
        return self.cell(method, n).correct / self.config.trials

    def wrong_rate(self, method: Method, n: int) -> float:
        return self.cell(method, n).wrong / self.config.trials

    def affirm_rate(self, method: Method, n: int) -> float:
        return self.cell(method, n).affirm / self.config.trials

    def rows(self, statistic: str) -> list[tuple[str, int, float]]:
        getter = {"correct": self.correct_rate, "wrong": self.wrong_rate,
                  "affirm": self.affirm_rate}[statistic]
        out = []
        for method_value, n in sorted(self.cells):
            out.append((method_value, n, getter(Method.parse(method_value), n)))
        return out


def _success_counts(cfg: ExperimentConfig) -> np.ndarray:
    """(trials, len(n_grid)) success counts, one prefix-stable trace per trial.

    Trial streams are keyed by seed XOR trial index; Philox keys give
    independent streams, so the tally is the same under any trial
    execution order.
    """
    max_n = cfg.n_grid[-1]
    idx = np.asarray(cfg.n_grid, dtype=np.int64) - 1
    counts = np.empty((cfg.trials, len(cfg.n_grid)), dtype=np.int64)
    for trial in range(cfg.trials):
        trace = draw_trace(cfg.true_rate, max_n, cfg.seed ^ trial)
        counts[trial] = np.cumsum(trace.outcomes, dtype=np.int64)[idx]
    return counts


def _tally(cfg: ExperimentConfig, truth: Decision, decide,
           bound: dict[int, float], extras: dict | None = None) -> TrialLedger:
    counts = _success_counts(cfg)
    ledger = TrialLedger(cfg, truth, bound, extras)
    for method in cfg.methods:
        for col, n in enumerate(cfg.n_grid):
            uniq, reps = np.unique(counts[:, col], return_counts=True)
            for k, rep in zip(uniq, reps):
                interval = interval_from_counts(method, int(k), n, cfg.delta)
                ledger.add(method, n, decide(interval), int(rep))
    return ledger


def run_stability_experiment(cfg: ExperimentConfig) -> TrialLedger:
    """Tally stability verdicts against the known ground truth."""
    threshold = stability_threshold(cfg.plant)
    if cfg.true_rate == threshold:
        raise ValueError("true_rate sits exactly on the stability threshold; "
                         "ground truth is undefined there")
    truth = Decision.AFFIRM if cfg.true_rate > threshold else Decision.DENY
    if math.isfinite(threshold):
        spec = MarginSpec(cfg.true_rate, threshold, cfg.delta)
        bound = {n: correctness_bound(spec, n) for n in cfg.n_grid}
    else:
        # Nilpotent open loop: the test affirms unconditionally and is
        # always correct, so the bound is exactly one.
        bound = {n: 1.0 for n in cfg.n_grid}
    return _tally(cfg, truth, lambda iv: decide_stability(threshold, iv), bound)


def run_wrong_answer_experiment(cfg: ExperimentConfig) -> TrialLedger:
    """Same tallies as the stability experiment; read the wrong rates."""
    return run_stability_experiment(cfg)


def run_cost_experiment(cfg: ExperimentConfig) -> TrialLedger:
    """Tally cost verdicts; also reports the theoretical sample size.

    The reported size is the two-sided margin bound at the gap between
    the true rate and the smallest rate meeting the target.
    """
    if cfg.j_req is None:
        raise ValueError("cost experiments need j_req in the config")
    q_star = critical_rate(cfg.plant, cfg.j_req)
    if q_star is None:
        raise ValueError("j_req is infeasible: even a perfect link exceeds it")
    if cfg.true_rate == q_star:
        raise ValueError("true_rate equals the critical rate for j_req; "
                         "ground truth is undefined there")
    truth_cost = lyapunov_cost(cfg.plant, cfg.true_rate)
    truth = Decision.AFFIRM if truth_cost <= cfg.j_req else Decision.DENY
    spec = MarginSpec(cfg.true_rate, q_star, cfg.delta)
    bound = {n: correctness_bound(spec, n) for n in cfg.n_grid}
    extras = {"critical_rate": q_star,
              "thm_sample_size": hoeffding_sample_size(spec)}
    plant, j_req = cfg.plant, cfg.j_req
    return _tally(cfg, truth, lambda iv: decide_cost(plant, j_req, iv),
                  bound, extras)


_AXIS_ALIASES = {"spectral_radius": "spectral_radius", "rho": "spectral_radius",
                 "rate": "rate", "q": "rate"}


def sweep_sample_complexity(axis: str, grid, *, q: float = 0.9,
                            rho: float = 2.0,
                            delta: float = 0.01) -> list[tuple[float, int, int]]:
    """Required sample counts along a spectral-radius or rate sweep.

    Returns (axis value, plain bound, variance-aware bound) rows. Grid
    points closer than 1e-6 to the critical configuration are rejected,
    since the counts diverge there.
    """
    canonical = _AXIS_ALIASES.get(axis)
    if canonical is None:
        raise ValueError(f"axis must be one of {sorted(_AXIS_ALIASES)}")
    rows = []
    for x in grid:
        x = float(x)
        if canonical == "spectral_radius":
            if x <= 0.0:
                raise ValueError("spectral radius grid values must be positive")
            spec_q, threshold = q, 1.0 - 1.0 / (x * x)
        else:
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"rate grid value {x} outside [0, 1]")
            spec_q, threshold = x, 1.0 - 1.0 / (rho * rho)
        if abs(spec_q - threshold) < 1e-6:
            raise ValueError(f"grid value {x} is within 1e-6 of the critical "
                             "point; sample counts diverge there")
        spec = MarginSpec(spec_q, threshold, delta)
        rows.append((x, hoeffding_sample_size(spec), bernstein_sample_size(spec)))
    return rows


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_ledger_csvs(ledger: TrialLedger, out_dir) -> None:
    """Write correct_rate.csv, wrong_rate.csv and bound.csv into out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    for name, statistic in (("correct_rate.csv", "correct"),
                            ("wrong_rate.csv", "wrong")):
        with open(os.path.join(out_dir, name), "w", encoding="ascii",
                  newline="\n") as fh:
            fh.write("method,n,rate\n")
            for method_value, n, rate in ledger.rows(statistic):
                fh.write(f"{method_value},{n},{_fmt(rate)}\n")
    with open(os.path.join(out_dir, "bound.csv"), "w", encoding="ascii",
              newline="\n") as fh:
        fh.write("n,bound\n")
        for n in ledger.config.n_grid:
            fh.write(f"{n},{_fmt(ledger.bound[n])}\n")


def write_complexity_csv(rows, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("x,n_hoeffding,n_bernstein\n")
        for x, n_h, n_b in rows:
            fh.write(f"{_fmt(x)},{n_h},{n_b}\n")


_CONFIG_KEYS = {"plant", "true_rate", "delta", "n_grid", "trials", "methods",
                "seed", "j_req", "out"}


def load_experiment_config(path) -> ExperimentConfig:
    """Read an experiment config (JSON); unknown keys are rejected.

    ``plant`` is either a path to a plant file (resolved relative to the
    config) or an inline plant object with the plant-file keys.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("experiment config must be a JSON object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key in ("plant", "true_rate"):
        if key not in doc:
            raise ValueError(f"experiment config missing required key {key!r}")
    plant_ref = doc["plant"]
    if isinstance(plant_ref, str):
        plant_path = os.path.join(os.path.dirname(os.path.abspath(path)), plant_ref)
        plant = load_plant(plant_path)
    elif isinstance(plant_ref, dict):
        plant = plant_from_dict(plant_ref)
    else:
        raise ValueError("plant must be a file path or an inline object")
    methods = tuple(Method.parse(m) for m in doc.get("methods", ["hoeffding"]))
    return ExperimentConfig(
        plant=plant,
        true_rate=float(doc["true_rate"]),
        delta=float(doc.get("delta", DEFAULT_DELTA)),
        n_grid=tuple(doc.get("n_grid", DEFAULT_N_GRID)),
        trials=int(doc.get("trials", DEFAULT_TRIALS)),
        methods=methods,
        seed=int(doc.get("seed", 0)),
        j_req=None if doc.get("j_req") is None else float(doc["j_req"]),
        out=doc.get("out"),
    )
