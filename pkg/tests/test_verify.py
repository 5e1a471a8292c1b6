"""Decision procedures: frozen verdicts, reduction, serialization."""

import json
import math

import numpy as np
import pytest

from linkverify import (ChannelTrace, Decision, Method, PlantModel, cost_test,
                        general_test, lyapunov_cost, stability_test,
                        stability_threshold)


def trace_of(successes, n):
    return ChannelTrace(np.r_[np.ones(successes), np.zeros(n - successes)])


SCALAR_2 = PlantModel.simple([[2.0]])


def test_stability_affirm():
    verdict = stability_test(SCALAR_2, trace_of(1800, 2000), 1e-3)
    assert verdict.decision is Decision.AFFIRM
    assert verdict.interval.lo == pytest.approx(0.858443546593, abs=1e-9)
    assert verdict.threshold_or_target == 0.75


def test_stability_undetermined_small_sample():
    # Half-width sqrt(ln(1000)/20) = 0.588 swallows the threshold.
    verdict = stability_test(SCALAR_2, trace_of(9, 10), 1e-3)
    assert verdict.decision is Decision.UNDETERMINED


def test_stability_deny():
    plant = PlantModel.simple([[4.0]])  # threshold 0.9375
    verdict = stability_test(plant, trace_of(1000, 2000), 1e-3)
    assert verdict.decision is Decision.DENY
    assert verdict.interval.hi == pytest.approx(0.541556453407, abs=1e-9)


def test_stability_trivial_when_contractive():
    plant = PlantModel.simple([[0.5]])
    verdict = stability_test(plant, trace_of(0, 10), 1e-3)
    assert verdict.decision is Decision.AFFIRM
    assert "trivially stable" in verdict.flags


def test_stability_threshold_tie_is_undetermined():
    # Engineer an interval whose lower end sits exactly on the threshold.
    plant = PlantModel.simple([[2.0]])
    # q_hat=0.85, half-width 0.1 -> lo = 0.75 exactly with delta = e^{-2n*hw^2}.
    n = 200
    delta = math.exp(-2 * n * 0.1 ** 2)
    verdict = stability_test(plant, trace_of(170, n), delta)
    assert verdict.interval.lo == pytest.approx(0.75, abs=1e-12)
    assert verdict.decision is Decision.UNDETERMINED


def test_stability_rejects_general_plant():
    plant = PlantModel(a_open=[[2.0]], a_closed=[[0.5]],
                       q_weight=[[1.0]], w_cov=[[1.0]])
    with pytest.raises(ValueError):
        stability_test(plant, trace_of(5, 10), 1e-3)


@pytest.mark.parametrize("successes,expected", [
    (1900, Decision.AFFIRM),        # lo=0.908, J(lo)=1.58 <= 2
    (1500, Decision.DENY),          # hi=0.792, J(hi)=6.02 >= 2
    (1750, Decision.UNDETERMINED),  # interval straddles q*=0.875
])
def test_cost_verdicts(successes, expected):
    verdict = cost_test(SCALAR_2, trace_of(successes, 2000), 1e-3, j_req=2.0)
    assert verdict.decision is expected
    assert verdict.threshold_or_target == 2.0


def test_cost_deny_on_unstable_interval_end():
    # hi below the stability threshold: the cost there is infinite.
    verdict = cost_test(SCALAR_2, trace_of(600, 2000), 1e-3, j_req=100.0)
    assert verdict.decision is Decision.DENY


def test_cost_branches_respect_monotonicity():
    rng = np.random.default_rng(13)
    for _ in range(30):
        n = int(rng.integers(10, 2000))
        k = int(rng.integers(0, n + 1))
        j_req = float(rng.uniform(1.1, 10.0))
        verdict = cost_test(SCALAR_2, trace_of(k, n), 1e-3, j_req=j_req)
        j_lo = lyapunov_cost(SCALAR_2, verdict.interval.lo)
        j_hi = lyapunov_cost(SCALAR_2, verdict.interval.hi)
        if verdict.decision is Decision.AFFIRM:
            assert j_lo <= j_req
        elif verdict.decision is Decision.DENY:
            assert j_hi >= j_req or math.isinf(j_hi)
        else:
            assert j_lo > j_req > j_hi


def test_cost_rejects_nonpositive_target():
    with pytest.raises(ValueError):
        cost_test(SCALAR_2, trace_of(5, 10), 1e-3, j_req=0.0)


def test_general_matches_stability_when_closed_loop_zero():
    rng = np.random.default_rng(41)
    for _ in range(15):
        rho = float(rng.uniform(1.05, 3.0))
        plant = PlantModel.simple([[rho]])
        n = int(rng.integers(20, 800))
        k = int(rng.integers(0, n + 1))
        trace = trace_of(k, n)
        direct = stability_test(plant, trace, 1e-3)
        swept = general_test(plant, trace, 1e-3, grid_step=1e-3)
        assert swept.decision is direct.decision


def test_general_both_modes_contractive():
    plant = PlantModel(a_open=0.5 * np.eye(2), a_closed=0.5 * np.eye(2),
                       q_weight=np.eye(2), w_cov=np.eye(2))
    verdict = general_test(plant, trace_of(3, 10), 1e-3)
    assert verdict.decision is Decision.AFFIRM
    assert "grid-certified" in verdict.flags


def test_general_mixed_interval():
    plant = PlantModel(a_open=[[2.0]], a_closed=[[0.5]],
                       q_weight=[[1.0]], w_cov=[[1.0]])
    # Hoeffding interval [0.7, 0.9] straddles the scalar boundary q=0.8.
    n = 200
    delta = math.exp(-2 * n * 0.1 ** 2)
    verdict = general_test(plant, trace_of(160, n), delta, grid_step=1e-3)
    assert verdict.interval.lo == pytest.approx(0.7, abs=1e-12)
    assert verdict.interval.hi == pytest.approx(0.9, abs=1e-12)
    assert verdict.decision is Decision.UNDETERMINED


def test_general_rejects_coarse_grid():
    with pytest.raises(ValueError):
        general_test(SCALAR_2, trace_of(5, 10), 1e-3, grid_step=0.01)


def test_verdict_json_shape():
    verdict = stability_test(SCALAR_2, trace_of(1800, 2000), 1e-3,
                             Method.EXACT_BINOMIAL)
    doc = json.loads(json.dumps(verdict.to_dict()))
    assert set(doc) == {"decision", "method", "delta", "n", "q_hat", "lo",
                        "hi", "threshold", "flags"}
    assert doc["method"] == "exact"
    assert doc["n"] == 2000

    cost_doc = cost_test(SCALAR_2, trace_of(1900, 2000), 1e-3, 2.0).to_dict()
    assert "j_req" in cost_doc and "threshold" not in cost_doc


def test_verdicts_are_pure():
    trace = trace_of(1234, 1500)
    a = stability_test(SCALAR_2, trace, 1e-3)
    b = stability_test(SCALAR_2, trace, 1e-3)
    assert a == b
