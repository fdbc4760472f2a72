import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_sample, with_gap
from longsafe.classify import classify_batch, classify_point, classify_scenario
from longsafe.core import EnvironmentParams, PairTrajectory, TrajectoryError
from longsafe.metrics import Status, matrix_relevant
from longsafe.simulator import ScenarioConfig, generate_batch


def hand_rule(s, env):
    """Critical-point rule with exact ADSS, written independently of the package."""
    F = lambda x: Fr(repr(x))  # noqa: E731
    d = F(s.leader.x) - F(s.follower.x) - F(env.l_V)
    if d < 0:
        return True
    if not (s.leader.a < 0 and s.follower.a < 0):
        return False
    a_max = F(env.mu) * F(env.g)
    a_L = min(max(-F(s.leader.a), F(env.adss_a_min)), a_max)
    a_F = min(max(-F(s.follower.a), F(env.adss_a_min)), a_max)
    v_L, v_F = F(s.leader.v), F(s.follower.v)
    value = (d + v_L ** 2 / (2 * a_L)) - (v_F * F(env.t_R) + v_F ** 2 / (2 * a_F))
    return value <= 0


@pytest.fixture(scope="module")
def default_batch():
    return generate_batch(ScenarioConfig())


class TestPoint:
    def test_both_braking_negative_margin(self, env):
        s = with_gap(15.4, v_L=22.22, v_F=25.0, a_L=-7.0, a_F=-7.0)
        p = classify_point(s, env)
        assert p.adss.value == pytest.approx(-11.4765, abs=1e-3)
        assert p.both_braking and p.critical

    def test_leader_not_braking(self, env):
        s = with_gap(15.4, v_L=22.22, v_F=25.0, a_L=0.0, a_F=-7.0)
        p = classify_point(s, env)
        assert p.adss.value < 0
        assert not p.both_braking and not p.critical

    def test_positive_margin(self, env):
        s = with_gap(60.0, v_L=20.0, v_F=20.0, a_L=-5.0, a_F=-5.0)
        p = classify_point(s, env)
        assert p.adss.value > 0 and not p.critical

    def test_overlap_is_critical_without_braking(self, env):
        p = classify_point(with_gap(-0.2, v_L=10.0, v_F=10.0), env)
        assert p.adss.status is Status.ALREADY_COLLIDING and p.critical

    def test_tts_backend(self, env):
        s = with_gap(5.0, v_L=20.0, v_F=25.0)
        p = classify_point(s, env, classifier="tts")
        assert p.tts is not None and p.critical == p.tts.b_crit
        opening = classify_point(with_gap(5.0, v_L=25.0, v_F=20.0), env, classifier="tts")
        assert opening.tts is None and not opening.critical

    def test_unknown_backend(self, env):
        with pytest.raises(ValueError):
            classify_point(with_gap(1.0), env, classifier="dss")


def _safe(i):
    return with_gap(50.0, v_L=20.0, v_F=15.0, a_L=-1.0, a_F=-2.0, t=0.25 * i)


def _critical(i):
    return with_gap(5.0, v_L=20.0, v_F=25.0, a_L=-7.0, a_F=-7.0, t=0.25 * i)


class TestScenario:
    def test_all_safe(self, env):
        v = classify_scenario(PairTrajectory([_safe(i) for i in range(10)]), env)
        assert not v.b_crit and v.first_critical_index is None

    def test_critical_only_at_end(self, env):
        samples = [_safe(i) for i in range(9)] + [_critical(9)]
        v = classify_scenario(PairTrajectory(samples), env)
        assert v.b_crit and v.first_critical_index == 9

    def test_invalid_trajectory_raises(self, env):
        with pytest.raises(TrajectoryError) as exc:
            classify_scenario(PairTrajectory([_safe(0), _safe(0)]), env)
        assert exc.value.violations[0].index == 1

    def test_hand_rule_on_reference_trajectory(self, env):
        cfg = ScenarioConfig(v0_var_grid=(0.0,), a_brake_var_grid=(0.0,), n_series=1)
        traj = generate_batch(cfg).trajectories[0]
        v = classify_scenario(traj, env)
        assert [p.critical for p in v.points] == [hand_rule(s, env) for s in traj]
        assert v.b_crit

    def test_default_batch_matches_hand_rule(self, env, default_batch):
        for traj in default_batch.trajectories[:100]:
            v = classify_scenario(traj, env)
            assert [p.critical for p in v.points] == [hand_rule(s, env) for s in traj]


class TestBatch:
    def test_default_counts(self, env, default_batch):
        report = classify_batch(default_batch, env)
        assert report.n_total == 1000
        assert report.critical_fraction == report.n_critical / 1000
        assert report.seed == default_batch.config.seed

    def test_empty(self, env):
        report = classify_batch([], env)
        assert report.n_total == 0 and report.critical_fraction == 0.0

    def test_order_invariant(self, env):
        batch = generate_batch(ScenarioConfig(n_series=60, seed=5))
        ids = [str(i) for i in range(60)]
        order = list(range(60))
        random.Random(0).shuffle(order)
        a = classify_batch(batch.trajectories, env, series_ids=ids)
        b = classify_batch([batch.trajectories[i] for i in order], env, series_ids=[ids[i] for i in order])
        assert {v.series_id: v for v in a.verdicts} == {v.series_id: v for v in b.verdicts}

    def test_shorter_gap_never_less_critical(self, env):
        base = ScenarioConfig(n_series=300, seed=17, d0=30.0)
        near = ScenarioConfig(n_series=300, seed=17, d0=25.0)
        a = classify_batch(generate_batch(base), env)
        b = classify_batch(generate_batch(near), env)
        for va, vb in zip(a.verdicts, b.verdicts):
            for pa, pb in zip(va.points, vb.points):
                assert not (pa.critical and not pb.critical)
        assert b.n_critical >= a.n_critical

    def test_critical_points_fall_in_marked_cells(self, env, default_batch):
        report = classify_batch(default_batch, env)
        for traj, v in zip(default_batch.trajectories, report.verdicts):
            for s, p in zip(traj, v.points):
                if p.critical:
                    assert matrix_relevant(s.leader.v, s.follower.v, s.leader.a, s.follower.a)[1] == 1

    def test_reaction_elapsed_separates_classes(self, default_batch):
        # Charging no reaction distance (follower already braking) leaves a
        # minority of series non-critical; these brake harder than their leader.
        env = EnvironmentParams(t_R=0.0)
        report = classify_batch(default_batch, env)
        safe = [(t, v) for t, v in zip(default_batch.trajectories, report.verdicts) if not v.b_crit]
        assert 0 < len(safe) < report.n_total
        for traj, _ in safe:
            window = [s for s in traj if s.leader.a < 0 and s.follower.a < 0]
            assert window and all(s.leader.a - s.follower.a > 0 for s in window)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 8), crit_at=st.integers(0, 7))
def test_existential_aggregation(n, crit_at):
    env = EnvironmentParams()
    safe = [_safe(i) for i in range(n)]
    assert not classify_scenario(PairTrajectory(safe), env).b_crit
    assert not classify_scenario(PairTrajectory(safe + [_safe(n)]), env).b_crit
    assert classify_scenario(PairTrajectory(safe + [_critical(n)]), env).b_crit
    k = min(crit_at, n - 1)
    mixed = [(_critical(i) if i == k else s) for i, s in enumerate(safe)]
    v = classify_scenario(PairTrajectory(mixed), env)
    assert v.b_crit and v.first_critical_index == k
