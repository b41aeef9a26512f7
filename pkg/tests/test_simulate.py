"""Simulation tests: determinism, exact invariants, and seeded statistical
checks (chi-square, Kolmogorov-Smirnov, total variation) at significance
levels far below anything a correct sampler would trip."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from crnkit import parse
from crnkit.catalog import (
    birth_death,
    five_complex_cycle,
    pure_birth,
    reversible_isomers,
)
from crnkit.errors import AmbiguousRegionError
from crnkit.kinetics import embedded_step_distribution, total_rate
from crnkit.simulate import (
    drift_estimate_mc,
    embedded_chain_simulate,
    lyapunov_sublevel,
    occupancy_estimate,
    return_times,
    ssa_simulate,
    truncated_stationary,
)
from crnkit.tiers import exact_kstep_drift

BD = birth_death(2.0, 1.0)
ISO = reversible_isomers(1.0, 1.0)


def tv_distance(a, b):
    keys = set(a) | set(b)
    return 0.5 * sum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys)


# ---------------------------------------------------------------------------
# trajectory mechanics


def test_trajectory_starts_at_time_zero_in_initial_state():
    s = ssa_simulate(BD, (3,), max_jumps=10, seed=0)
    assert s.times[0] == 0.0
    assert tuple(s.states[0]) == (3,)


def test_times_and_states_are_row_aligned_and_increasing():
    s = ssa_simulate(BD, (0,), max_time=30.0, seed=1)
    assert len(s.times) == len(s.states)
    assert np.all(np.diff(s.times) > 0)
    assert np.all(s.states >= 0)


def test_max_jumps_is_exact():
    s = ssa_simulate(BD, (0,), max_jumps=57, seed=2)
    assert len(s) == 58
    assert s.terminated_by == "max_jumps"


def test_max_time_stops_before_the_crossing_jump():
    s = ssa_simulate(BD, (0,), max_time=25.0, seed=3)
    assert s.terminated_by == "max_time"
    assert s.times[-1] <= 25.0


def test_equal_seeds_give_identical_trajectories():
    a = ssa_simulate(BD, (0,), max_time=100.0, seed=9)
    b = ssa_simulate(BD, (0,), max_time=100.0, seed=9)
    assert np.array_equal(a.times, b.times)
    assert np.array_equal(a.states, b.states)


def test_different_seeds_give_different_trajectories():
    a = ssa_simulate(BD, (0,), max_jumps=50, seed=0)
    b = ssa_simulate(BD, (0,), max_jumps=50, seed=1)
    assert not np.array_equal(a.times, b.times)


def test_embedded_chain_equals_full_simulation_states():
    emb = embedded_chain_simulate(BD, (0,), steps=200, seed=4)
    full = ssa_simulate(BD, (0,), max_jumps=200, seed=4)
    assert np.array_equal(emb, full.states)


def test_absorbed_trajectory_terminates_early():
    decay = parse("species: A, B\nA -> B ; k=1.0")
    s = ssa_simulate(decay, (3, 0), max_time=1e6, seed=5)
    assert s.terminated_by == "absorbed"
    assert s.final_state == (0, 3)
    assert len(s) == 4  # three decays, then nothing can fire


def test_simulate_requires_a_stopping_bound():
    with pytest.raises(ValueError, match="max_time"):
        ssa_simulate(BD, (0,), seed=0)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_conserved_total_is_exact_along_any_trajectory(seed):
    s = ssa_simulate(ISO, (4, 1), max_jumps=300, seed=seed)
    assert np.all(s.states.sum(axis=1) == 5)


# ---------------------------------------------------------------------------
# distributional checks on the sampler


def _visits_from(system, state, steps, seed):
    """Successor-state counts and holding times observed from one state."""
    sample = ssa_simulate(system, state, max_jumps=steps, seed=seed)
    successors = {}
    holds = []
    for row in range(len(sample) - 1):
        here = tuple(int(v) for v in sample.states[row])
        if here != state:
            continue
        nxt = tuple(int(v) for v in sample.states[row + 1])
        successors[nxt] = successors.get(nxt, 0) + 1
        holds.append(sample.times[row + 1] - sample.times[row])
    return successors, np.asarray(holds)


def test_jump_choice_matches_embedded_step_distribution():
    successors, _ = _visits_from(BD, (1,), steps=120_000, seed=6)
    dist = embedded_step_distribution(BD, (1,))
    total = sum(successors.values())
    assert total >= 10_000
    observed = [successors.get(nxt, 0) for nxt in sorted(dist)]
    expected = [dist[nxt] * total for nxt in sorted(dist)]
    result = stats.chisquare(observed, expected)
    assert result.pvalue > 1e-3


def test_holding_times_are_exponential_at_the_total_rate():
    _, holds = _visits_from(BD, (1,), steps=120_000, seed=7)
    lam = total_rate(BD, (1,))
    assert lam == 3.0
    assert len(holds) >= 10_000
    result = stats.kstest(holds, "expon", args=(0.0, 1.0 / lam))
    assert result.pvalue > 1e-3


def test_occupancy_close_to_censored_stationary_solution():
    occ = occupancy_estimate(BD, (0,), t_max=20_000.0, seed=8)
    sol = truncated_stationary(BD, [(i,) for i in range(41)])
    assert tv_distance(occ.as_dict(), sol.as_dict()) < 0.02


def test_occupancy_weights_include_the_final_partial_interval():
    occ = occupancy_estimate(BD, (0,), t_max=5.0, seed=9)
    assert math.isclose(float(occ.probabilities.sum()), 1.0, rel_tol=1e-12)


def test_occupancy_of_absorbed_trajectory_concentrates_on_the_trap():
    decay = parse("species: A, B\nA -> B ; k=1.0")
    occ = occupancy_estimate(decay, (3, 0), t_max=1000.0, seed=10)
    assert occ.method == "time_average"
    assert occ.probability_of((0, 3)) > 0.95


# ---------------------------------------------------------------------------
# censored stationary solve


def test_censored_birth_death_matches_truncated_poisson():
    # birth 2, death n: detailed balance gives a Poisson(2) profile, and the
    # mass beyond the box is ~1e-34, far below the comparison tolerance
    sol = truncated_stationary(BD, [(i,) for i in range(41)])
    weights = np.array([2.0**k / math.factorial(k) for k in range(41)])
    poisson = weights / weights.sum()
    assert np.max(np.abs(sol.probabilities - poisson)) < 1e-8


def test_censored_isomer_pair_is_binomial_one_half():
    sol = truncated_stationary(ISO, [(2, 0), (1, 1), (0, 2)])
    assert sol.method == "truncated_solve"
    expected = {(2, 0): 0.25, (1, 1): 0.5, (0, 2): 0.25}
    for state, p in expected.items():
        assert math.isclose(sol.probability_of(state), p, abs_tol=1e-10)


def test_censored_solve_reports_transient_states_with_zero_mass():
    sol = truncated_stationary(pure_birth(1.0), [(0,), (1,), (2,)])
    assert sol.probability_of((0,)) == 0.0
    assert sol.probability_of((1,)) == 0.0
    assert sol.probability_of((2,)) == 1.0


def test_region_spanning_two_conservation_classes_is_ambiguous():
    region = [(2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)]
    with pytest.raises(AmbiguousRegionError) as info:
        truncated_stationary(ISO, region)
    assert len(info.value.classes) == 2
    sizes = sorted(len(c) for c in info.value.classes)
    assert sizes == [3, 4]


def test_single_state_region_is_a_point_mass():
    sol = truncated_stationary(BD, [(5,)])
    assert sol.support == ((5,),)
    assert sol.probabilities[0] == 1.0


def test_empty_region_is_rejected():
    with pytest.raises(ValueError, match="empty"):
        truncated_stationary(BD, [])


# ---------------------------------------------------------------------------
# return times


def test_return_times_from_a_sublevel_set():
    target = lyapunov_sublevel(10.0)
    stats_ = return_times(
        BD, (1,), target, horizon=1e4, replicas=50, seed=11
    )
    assert stats_.replicas == 50
    assert stats_.non_returning == 0
    assert len(stats_.times) == 50
    assert stats_.target_description == "V <= 10.0"
    assert 0 < stats_.mean
    assert stats_.median <= stats_.max
    assert np.all(stats_.times > 0)


def test_transient_chain_never_returns():
    stats_ = return_times(
        pure_birth(1.0),
        (0,),
        lyapunov_sublevel(3.0),
        horizon=200.0,
        replicas=20,
        seed=12,
    )
    assert stats_.non_returning == 20
    assert len(stats_.times) == 0
    assert stats_.mean is None


def test_return_times_requires_start_inside_target():
    with pytest.raises(ValueError, match="not in the target"):
        return_times(
            BD, (50,), lyapunov_sublevel(1.0), horizon=10.0, replicas=2, seed=0
        )


def test_return_times_reproducible_across_calls():
    a = return_times(BD, (1,), lyapunov_sublevel(5.0), horizon=1e3, replicas=10, seed=13)
    b = return_times(BD, (1,), lyapunov_sublevel(5.0), horizon=1e3, replicas=10, seed=13)
    assert np.array_equal(a.times, b.times)


def test_replica_results_do_not_depend_on_thread_count(monkeypatch):
    monkeypatch.setenv("CRN_THREADS", "1")
    serial = return_times(
        BD, (1,), lyapunov_sublevel(5.0), horizon=1e3, replicas=16, seed=14
    )
    monkeypatch.setenv("CRN_THREADS", "4")
    threaded = return_times(
        BD, (1,), lyapunov_sublevel(5.0), horizon=1e3, replicas=16, seed=14
    )
    assert np.array_equal(serial.times, threaded.times)
    assert serial.non_returning == threaded.non_returning


def test_invalid_thread_count_is_rejected(monkeypatch):
    monkeypatch.setenv("CRN_THREADS", "zero")
    with pytest.raises(ValueError, match="CRN_THREADS"):
        drift_estimate_mc(BD, (1,), 1, replicas=4, seed=0)


# ---------------------------------------------------------------------------
# Monte Carlo drift


def test_mc_drift_agrees_with_exact_recursion():
    exact = exact_kstep_drift(BD, (5,), 1)
    mean, stderr = drift_estimate_mc(BD, (5,), 1, replicas=20_000, seed=15)
    assert abs(mean - exact) < 4 * stderr


def test_mc_drift_agrees_for_multistep_walks():
    exact = exact_kstep_drift(BD, (3,), 3)
    mean, stderr = drift_estimate_mc(BD, (3,), 3, replicas=20_000, seed=16)
    assert abs(mean - exact) < 4 * stderr


def test_mc_drift_on_the_cycle_matches_exact():
    system = five_complex_cycle()
    exact = exact_kstep_drift(system, (10, 1, 0), 2)
    mean, stderr = drift_estimate_mc(system, (10, 1, 0), 2, replicas=20_000, seed=17)
    assert abs(mean - exact) < 4 * stderr


def test_mc_drift_zero_steps_is_exactly_zero():
    assert drift_estimate_mc(BD, (5,), 0, replicas=10, seed=0) == (0.0, 0.0)


def test_mc_drift_freezes_at_absorbing_states():
    decay = parse("species: A, B\nA -> B ; k=1.0")
    # from (1, 0) every path is absorbed after one step, at V-difference 0
    mean, stderr = drift_estimate_mc(decay, (1, 0), 25, replicas=100, seed=18)
    assert mean == 0.0
    assert stderr == 0.0


def test_mc_drift_needs_enough_replicas_for_an_error_bar():
    with pytest.raises(ValueError, match="replicas"):
        drift_estimate_mc(BD, (5,), 1, replicas=1, seed=0)
