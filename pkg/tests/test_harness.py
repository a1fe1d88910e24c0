import math

import numpy as np
import pytest
import scipy.optimize

from spectral_var import harness
from spectral_var.constants import cp
from spectral_var.errors import DegenerateError, NumericalError, ParameterError
from spectral_var.harness import (
    Ensemble,
    TrialConfig,
    decode_pair,
    family_ratio,
    gen_hermitian,
    gen_perturbation,
    parameter_count,
    ratio,
    run_sweep,
    search_start,
    sharp_pair,
    sharpness_search,
    summarize,
    trial_instance,
)
from spectral_var.linalg_core import is_hermitian
from spectral_var.schatten import schatten_norm
from spectral_var.session import init_session


# ===== GENERATORS =====

def test_gen_hermitian_is_seeded_and_hermitian():
    a = gen_hermitian(6, [1, 2])
    assert is_hermitian(a)
    np.testing.assert_array_equal(a, gen_hermitian(6, [1, 2]))
    assert not np.array_equal(a, gen_hermitian(6, [1, 3]))
    with pytest.raises(ParameterError):
        gen_hermitian(0, 1)


@pytest.mark.parametrize("p", [1, 2, 3.5])
def test_gen_perturbation_norm(p):
    k = gen_perturbation(5, 9, p, 0.3)
    assert schatten_norm(k, p) == pytest.approx(0.3)


def test_gen_perturbation_validates_norm():
    with pytest.raises(ParameterError):
        gen_perturbation(3, 0, 2, 0.0)
    with pytest.raises(ParameterError):
        gen_perturbation(3, 0, 2, math.inf)


def test_gen_perturbation_retries_zero_draw(monkeypatch):
    original = harness._ginibre
    calls = []

    def zero_first(n, rng):
        calls.append(n)
        if len(calls) == 1:
            return np.zeros((n, n), dtype=np.complex128)
        return original(n, rng)

    monkeypatch.setattr(harness, "_ginibre", zero_first)
    k = gen_perturbation(4, [5, 1], 2, 1.0)
    assert len(calls) == 2
    assert schatten_norm(k, 2) == pytest.approx(1.0)


def test_sharp_pairs():
    a, b = sharp_pair("remark1")
    assert ratio(a, b, 2) == pytest.approx(2.0)
    for b_value in (0.25, 1.0, 4.0):
        assert ratio(*sharp_pair("main1_family", b_value), 2) == pytest.approx(family_ratio(b_value))
    with pytest.raises(ParameterError):
        sharp_pair("main1_family")
    with pytest.raises(ParameterError):
        sharp_pair("other")


def test_family_ratio_tends_to_two():
    assert family_ratio(1.0) == pytest.approx(4 / 3)
    assert 1.999 < family_ratio(0.01) < 2.0
    with pytest.raises(ParameterError):
        family_ratio(0.0)


def test_ratio_rejects_unperturbed_pair():
    a = gen_hermitian(3, 0)
    with pytest.raises(DegenerateError):
        ratio(a, a, 2)


# ===== SWEEPS =====

def test_trial_config_validation():
    with pytest.raises(ParameterError):
        TrialConfig(dim=1, p=2, trials=1, seed=0)
    with pytest.raises(ParameterError):
        TrialConfig(dim=3, p=2, trials=0, seed=0)
    with pytest.raises(ParameterError):
        TrialConfig(dim=3, p=2, trials=1, seed=-1)
    with pytest.raises(ParameterError):
        TrialConfig(dim=3, p=2, trials=1, seed=2**64)
    with pytest.raises(ParameterError):
        TrialConfig(dim=3, p=0.5, trials=1, seed=0)
    with pytest.raises(ParameterError):
        TrialConfig(dim=3, p=2, trials=1, seed=0, ensemble="wishart")

    config = TrialConfig(dim=3, p=1, trials=1, seed=0, ensemble="hermitian_pair")
    assert config.ensemble is Ensemble.HERMITIAN_PAIR
    assert config.exploratory
    assert config.to_dict()["ensemble"] == "hermitian_pair"


def test_trial_instance_depends_only_on_trial():
    config = TrialConfig(dim=4, p=2, trials=5, seed=17)
    a1, b1 = trial_instance(config, 3)
    a2, b2 = trial_instance(config, 3)
    np.testing.assert_array_equal(b1, b2)
    assert schatten_norm(b1 - a1, 2) == pytest.approx(1.0)
    assert not np.array_equal(b1, trial_instance(config, 2)[1])


def test_sweep_is_deterministic_and_sound():
    config = TrialConfig(dim=4, p=3, trials=4, seed=7)
    first = run_sweep(config)
    second = run_sweep(config)
    assert first.rows == second.rows
    assert first.max_ratio == second.max_ratio
    assert first.violations == 0
    assert first.failures == ()
    assert 0 < first.max_ratio <= cp(3).value
    names = {row.check_name for row in first.rows}
    assert {"corollary", "main_theorem", "interval", "numrange", "macaev", "chain.final"} <= names
    assert "kato" not in names


def test_sweep_threads_give_identical_result():
    config = TrialConfig(dim=3, p=2, trials=6, seed=99)
    serial = run_sweep(config, init_session(environ={}, threads=1))
    threaded = run_sweep(config, init_session(environ={}, threads=2))
    assert [row[:4] for row in serial.rows] == [row[:4] for row in threaded.rows]
    np.testing.assert_allclose([row.lhs for row in serial.rows], [row.lhs for row in threaded.rows], rtol=1e-12)
    assert serial.argmax_trial == threaded.argmax_trial


def test_sharp_family_sweep_reaches_two():
    summary = run_sweep(TrialConfig(dim=2, p=2, trials=6, seed=0, ensemble="sharp_family"))
    assert summary.max_ratio == pytest.approx(2.0)
    assert summary.argmax_trial == 0
    assert summary.violations == 0
    assert summary.argmax_instance["b"]["data"][2] == [0.0, 0.0]


def test_exploratory_sweep_at_p_one():
    summary = run_sweep(TrialConfig(dim=3, p=1, trials=2, seed=1))
    names = {row.check_name for row in summary.rows}
    assert "corollary" not in names and "macaev" not in names
    assert not any(name.startswith("chain.") for name in names)
    assert {"interval", "numrange", "diag_split"} <= names
    assert summary.max_ratio is not None


def test_hermitian_pair_sweep_runs_kato():
    summary = run_sweep(TrialConfig(dim=4, p=2, trials=3, seed=5, ensemble="hermitian_pair"))
    kato = [row for row in summary.rows if row.check_name == "kato"]
    assert len(kato) == 3
    assert all(row.holds for row in kato)
    assert summary.max_ratio <= 1.0 + 1e-8


def test_numerical_failure_is_recorded(monkeypatch):
    def failing_ratio(a, b, p):
        raise NumericalError("eigensolver did not converge")

    monkeypatch.setattr(harness, "ratio", failing_ratio)
    summary = run_sweep(TrialConfig(dim=3, p=2, trials=2, seed=0))
    assert summary.failures == (
        {"trial": 0, "error": "eigensolver did not converge"},
        {"trial": 1, "error": "eigensolver did not converge"},
    )
    assert summary.max_ratio is None
    assert summary.rows == ()


def test_summarize_ignores_outcome_order():
    config = TrialConfig(dim=3, p=2, trials=3, seed=2)
    outcomes = [harness._run_trial(config, trial, 64) for trial in range(3)]
    forward = summarize(config, outcomes)
    backward = summarize(config, outcomes[::-1])
    assert forward.rows == backward.rows
    assert forward.to_dict() == backward.to_dict()


# ===== SHARPNESS SEARCH =====

def test_decode_pair():
    x = search_start(3, 0, 0)
    assert len(x) == parameter_count(3)
    a, b = decode_pair(x, 3, 2)
    assert is_hermitian(a)
    assert schatten_norm(b - a, 2) == pytest.approx(1.0)
    with pytest.raises(DegenerateError):
        decode_pair(np.zeros(parameter_count(3)), 3, 2)


def test_single_iteration_returns_seeded_start():
    result = sharpness_search(2, 2, iterations=1, seed=3, restarts=1)
    expected = ratio(*decode_pair(search_start(2, 3, 0), 2, 2), 2)
    assert result.best_ratio == pytest.approx(expected)
    assert len(result.trace) == 1


def test_search_is_deterministic_and_bounded():
    first = sharpness_search(2, 2, iterations=150, seed=1, restarts=2)
    second = sharpness_search(2, 2, iterations=150, seed=1, restarts=2)
    assert first.best_ratio == second.best_ratio
    assert first.best_ratio <= 2.0 + 1e-6
    values = [point.best_ratio for point in first.trace]
    assert values == sorted(values)
    assert values[-1] == first.best_ratio
    assert ratio(*first.best_pair, 2) == pytest.approx(first.best_ratio)


def test_odd_restart_jitter_scales_with_best_point():
    best_x = 10.0 * search_start(2, 5, 0)
    draw = search_start(2, 5, 1)
    jittered = search_start(2, 5, 1, best_x)
    scale = 0.1 * np.linalg.norm(best_x) / math.sqrt(parameter_count(2))
    np.testing.assert_allclose(jittered - best_x, scale * draw)
    np.testing.assert_array_equal(search_start(2, 5, 2, best_x), search_start(2, 5, 2))


def _fake_minimize(calls, gains):
    def minimize(fun, x0, method, options):
        calls.append(options["maxiter"])
        fun(x0)
        return scipy.optimize.OptimizeResult(x=x0, fun=-float(sum(gains[: len(calls)])), nit=30)
    return minimize


def test_collapsed_simplex_is_relaunched_within_budget(monkeypatch):
    calls = []
    monkeypatch.setattr(harness.scipy.optimize, "minimize", _fake_minimize(calls, [1.0] * 10))
    sharpness_search(2, 2, iterations=100, seed=0, restarts=1)
    assert calls == [100, 70, 40, 10]


def test_relaunch_stops_without_gain(monkeypatch):
    calls = []
    monkeypatch.setattr(harness.scipy.optimize, "minimize", _fake_minimize(calls, [1.0, 0.0, 5.0]))
    sharpness_search(2, 2, iterations=100, seed=0, restarts=1)
    assert calls == [100, 70]


def test_search_validates_arguments():
    with pytest.raises(ParameterError):
        sharpness_search(1, 2, 10, 0)
    with pytest.raises(ParameterError):
        sharpness_search(2, 1, 10, 0)
    with pytest.raises(ParameterError):
        sharpness_search(2, 2, 0, 0)


@pytest.mark.slow
def test_search_finds_near_sharp_pair():
    result = sharpness_search(2, 2, iterations=2000, seed=3, restarts=8)
    assert 1.999 <= result.best_ratio <= 2.0 + 1e-6
