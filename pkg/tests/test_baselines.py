import numpy as np
import pytest

from mpcsb import Environment, GenCTS, GenLBINFV, Knapsack, Transport, Uniform, argmin_action, duplicate_instance, observe
from mpcsb.baselines import duplicated_cts, duplicated_lbinfv, run_duplicated_cts, run_duplicated_lbinfv
from mpcsb.genlbinfv import phi

from conftest import SECTION_INSTANCE


class TestExpansion:
    def test_four_demanders(self):
        dup = duplicate_instance(Transport((1, 3, 4), (2, 2, 2, 2)))
        assert dup.d_expanded == 32
        assert np.all(dup.expanded.caps == 1)

    def test_section_instance(self):
        dup = duplicate_instance(SECTION_INSTANCE)
        assert dup.d_expanded == 20
        assert dup.expanded.supplies == (1,) * 10
        assert dup.truck_owner.tolist() == [0, 1, 1, 1, 1, 2, 2, 2, 2, 2]
        assert dup.truck_rank.tolist() == [0, 0, 1, 2, 3, 0, 1, 2, 3, 4]

    def test_singleton_is_identity(self):
        dup = duplicate_instance(Transport((1,), (1,)))
        assert dup.d_expanded == 1
        assert dup.edge_map.tolist() == [0]
        assert dup.pullback([1]).tolist() == [1]

    def test_only_transport(self):
        with pytest.raises(TypeError):
            duplicate_instance(Knapsack((1,), 1))

    def test_pullback_of_every_vertex_is_feasible(self, rng):
        dup = duplicate_instance(SECTION_INSTANCE)
        for _ in range(100):
            a = argmin_action(dup.expanded, rng.random(dup.d_expanded))
            assert SECTION_INSTANCE.validate_action(dup.pullback(a))

    def test_observation_slots(self):
        dup = duplicate_instance(Transport((2,), (1, 1)))
        # truck 0 -> demander 1, truck 1 -> demander 0
        a_exp = np.array([0, 1, 1, 0])
        a = dup.pullback(a_exp)
        assert a.tolist() == [1, 1]
        env = Environment(dup.original, [Uniform(0, 1)] * 2, seed=0)
        _, table = env.draw_round(1)
        obs = dup.expand_observation(a_exp, observe(table, a))
        assert obs.values[1].tolist() == [table.row(1)[0]]
        assert obs.values[2].tolist() == [table.row(0)[0]]
        assert obs.values[0].size == 0 and obs.values[3].size == 0

    def test_trucks_of_one_supplier_take_distinct_slots(self):
        dup = duplicate_instance(Transport((3,), (3,)))
        a_exp = np.ones(3, dtype=int)
        env = Environment(dup.original, [Uniform(0, 1)], seed=1)
        _, table = env.draw_round(1)
        obs = dup.expand_observation(a_exp, observe(table, [3]))
        got = [v[0] for v in obs.values]
        assert got == table.row(0).tolist()


class TestWrappedLearners:
    def test_singleton_cts_matches_plain(self):
        spec = Transport((1,), (1,))
        plain, dup = GenCTS(spec, rng=5), duplicated_cts(spec, rng=5)
        env_a = Environment(spec, [Uniform(0, 0.6)], seed=2)
        env_b = Environment(spec, [Uniform(0, 0.6)], seed=2)
        for t in range(1, 30):
            assert plain.run_round(env_a, t).loss == dup.run_round(env_b, t).loss
        np.testing.assert_array_equal(plain.p, dup.inner.p)
        np.testing.assert_array_equal(plain.q, dup.inner.q)

    def test_singleton_lbinfv_matches_plain(self):
        spec = Transport((1,), (1,))
        plain, dup = GenLBINFV(spec, 100, rng=5), duplicated_lbinfv(spec, 100, rng=5)
        env_a = Environment(spec, [Uniform(0, 0.6)], seed=2)
        env_b = Environment(spec, [Uniform(0, 0.6)], seed=2)
        for t in range(1, 20):
            plain.run_round(env_a, t)
            dup.run_round(env_b, t)
        np.testing.assert_allclose(plain.cumulative, dup.inner.cumulative)
        np.testing.assert_allclose(plain.beta(), dup.inner.beta())

    def test_unit_cap_regularizer_value(self):
        gamma = np.log(500)
        assert float(phi(1.0, 1.0, gamma)) == pytest.approx(gamma)

    def test_each_duplicated_arm_counts_its_own_pulls(self):
        spec = SECTION_INSTANCE
        algo = duplicated_cts(spec, rng=0)
        env = Environment(spec, [Uniform(0, 0.5)] * spec.d, seed=0)
        pulls = np.zeros(algo.dup.d_expanded, dtype=int)
        for t in range(1, 101):
            rec = algo.run_round(env, t)
            pulls += algo._expanded_action
            assert spec.validate_action(rec.action)
        np.testing.assert_array_equal(algo.inner.n_obs, pulls)

    def test_curve_helpers(self):
        spec = SECTION_INSTANCE
        dup = duplicate_instance(spec)
        dists = [Uniform(0, 2 * c) for c in np.linspace(0.1, 0.5, spec.d)]
        a = run_duplicated_cts(dup, Environment(spec, dists, seed=1), 50, rng=1)
        b = run_duplicated_lbinfv(dup, Environment(spec, dists, seed=1), 50, rng=1)
        assert a.shape == b.shape == (50,)
        assert np.all(np.diff(a) >= -1e-12) and np.all(np.diff(b) >= -1e-12)
