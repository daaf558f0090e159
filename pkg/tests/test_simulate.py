import itertools
import json
import math

import numpy as np
import pytest

from becc import bell, ccp, simulate, state
from becc.simulate import (
    GameTables,
    SimulationConfig,
    born_distribution,
    gap_experiment,
    run_protocol,
    sample_inputs,
)


@pytest.fixture(scope="module")
def tables():
    return simulate.default_tables()


@pytest.fixture(scope="module")
def rho():
    return state.build_vb_state()


@pytest.fixture(scope="module")
def obs():
    return bell.measurement_observables()


class TestBornDistribution:
    def test_all_identity_is_deterministic(self, rho, obs):
        probs = born_distribution(rho, obs, (0, 0, 0))
        assert probs[0] == pytest.approx(1.0, abs=1e-12)
        assert probs[1:].max() == 0.0

    def test_normalized_on_all_setting_tuples(self, rho, obs):
        for x in itertools.product(range(3), repeat=3):
            probs = born_distribution(rho, obs, x)
            assert probs.min() >= 0.0
            assert abs(probs.sum() - 1.0) <= 1e-9

    def test_correlation_oracle_equivalence(self, rho, obs):
        # sum_a (a1 a2 a3) P(a|x) must reproduce the trace formula
        for x in itertools.product(range(3), repeat=3):
            probs = born_distribution(rho, obs, x)
            derived = float(np.dot(simulate.OUTCOME_PRODUCT, probs))
            assert derived == pytest.approx(bell.correlation(rho, obs, x), abs=1e-9)

    def test_setting_out_of_range(self, rho, obs):
        with pytest.raises(ValueError):
            born_distribution(rho, obs, (0, 0, 5))


class TestConfig:
    def test_rejects_zero_shots(self):
        with pytest.raises(ValueError):
            SimulationConfig(shots=0)

    def test_rejects_zero_shards(self):
        with pytest.raises(ValueError):
            SimulationConfig(shots=1, shards=0)

    def test_rejects_unknown_protocol(self):
        with pytest.raises(ValueError):
            SimulationConfig(shots=1, protocol="psychic")


class TestSampleInputs:
    def test_input_frequencies(self, tables):
        rng = np.random.Generator(np.random.Philox(123))
        n = 100_000
        count_000 = 0
        y1_sum = 0
        for _ in range(n):
            inst = sample_inputs(rng, tables)
            assert 3 not in inst.x
            if inst.x == (0, 0, 0):
                count_000 += 1
            y1_sum += inst.y[0]
        p = 5 / 22
        stderr = math.sqrt(p * (1 - p) / n)
        assert abs(count_000 / n - p) <= 5 * stderr
        assert abs(y1_sum / n) <= 5 / math.sqrt(n)


class TestRunProtocol:
    def test_deterministic_reports(self, tables):
        config = SimulationConfig(shots=50_000, seed=42, protocol="quantum", shards=3)
        r1 = run_protocol(config, tables)
        r2 = run_protocol(config, tables)
        assert r1.successes == r2.successes
        assert r1.to_dict().keys() == r2.to_dict().keys()

    @pytest.mark.parametrize("protocol,target", [
        ("classical", 15 / 22),
        ("quantum", 0.681974),
    ])
    def test_million_shots_within_five_sigma(self, tables, protocol, target):
        report = run_protocol(
            SimulationConfig(shots=1_000_000, seed=0, protocol=protocol), tables)
        assert abs(report.empirical_probability - target) <= 5 * report.standard_error
        assert report.successes <= report.shots
        assert report.empirical_probability == report.successes / report.shots

    def test_sharded_run_aggregates_all_shots(self, tables):
        report = run_protocol(
            SimulationConfig(shots=100_001, seed=1, protocol="classical", shards=7),
            tables)
        assert report.shots == 100_001

    def test_identity_observables_reduce_to_trivial_classical(self):
        # with identity measurements every outcome is +1, so the quantum
        # run must match a classical run with all sign functions fixed to +1
        eye_obs = [[np.eye(2)] * 3 for _ in range(3)]
        t = GameTables(obs=eye_obs)
        t.classical_answer_sign = np.ones_like(t.classical_answer_sign)
        config_q = SimulationConfig(shots=20_000, seed=5, protocol="quantum")
        config_c = SimulationConfig(shots=20_000, seed=5, protocol="classical")
        assert run_protocol(config_q, t).successes == run_protocol(config_c, t).successes

    def test_sqrt_law_convergence(self, tables):
        # deviations stay inside 5-sigma bands as shots grow 9x, seeds 0..9
        for shots in (10_000, 90_000):
            for seed in range(10):
                report = run_protocol(
                    SimulationConfig(shots=shots, seed=seed, protocol="quantum"),
                    tables)
                p = tables.p_quantum_exact
                band = 5 * math.sqrt(p * (1 - p) / shots)
                assert abs(report.empirical_probability - p) <= band

    def test_report_json(self, tables):
        report = run_protocol(
            SimulationConfig(shots=1000, seed=0, protocol="quantum"), tables)
        doc = json.loads(report.to_json())
        for key in ("protocol", "shots", "successes", "p_hat", "stderr", "seed"):
            assert key in doc


class TestGapExperiment:
    def test_underpowered_run_flagged(self, tables):
        report = gap_experiment(10_000, seed=0, tables=tables)
        assert report.underpowered
        assert math.isfinite(report.z_vs_classical)

    def test_exact_references(self, tables):
        report = gap_experiment(10_000, seed=0, tables=tables)
        assert report.p_classical_exact == pytest.approx(15 / 22, abs=1e-12)
        assert report.p_quantum_exact == pytest.approx(0.681974, abs=1e-5)
        assert report.exact_gap == pytest.approx(1.56e-4, abs=1e-5)

    def test_power_threshold_arithmetic(self, tables):
        # stderr = sqrt(p(1-p)/shots) drops below gap/4 around 1.4e8 shots;
        # at 4e8 shots the expected z-score is ~6.7
        gap = tables.p_quantum_exact - float(tables.p_classical_exact)
        p = tables.p_quantum_exact
        shots_needed = p * (1 - p) / (gap / 4) ** 2
        assert 1.3e8 < shots_needed < 1.6e8
        expected_z = gap / math.sqrt(p * (1 - p) / 4e8)
        assert expected_z == pytest.approx(6.7, abs=0.1)

    def test_well_powered_threshold(self, tables):
        # a 2e8-shot run would clear the power threshold (full-size runs
        # live in the acceptance suite)
        shots = 200_000_000
        p = tables.p_quantum_exact
        gap = p - float(tables.p_classical_exact)
        assert math.sqrt(p * (1 - p) / shots) < gap / 4

    def test_json(self, tables):
        doc = json.loads(gap_experiment(1000, seed=0, tables=tables).to_json())
        assert "z_vs_classical" in doc and "underpowered" in doc
