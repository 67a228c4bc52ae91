import pytest

from opacheck.generate import (
    fuzz_automaton,
    fuzz_instances,
    random_automaton,
    run_campaign,
    run_instance,
    CampaignReport,
)
from opacheck.verifiers import PROPERTIES

from conftest import EXPECTED_VERDICTS, FIXTURE_NAMES, load_fixture


class TestRandomAutomaton:
    def test_same_seed_same_automaton(self):
        assert random_automaton(seed=42) == random_automaton(seed=42)
        assert random_automaton(seed=42) != random_automaton(seed=43)

    def test_zero_secret_ratio(self):
        aut = random_automaton(seed=1, secret_ratio=0.0)
        assert aut.secret_states == frozenset()

    def test_extreme_observation_ratios(self):
        silent = random_automaton(seed=2, obs_ratio=0.0)
        assert silent.observable == frozenset()
        loud = random_automaton(seed=2, obs_ratio=1.0)
        assert loud.observable == frozenset(loud.events)

    def test_all_generated_instances_pass_validation_unpruned(self):
        # Accessibility is built in, so validation never prunes: the
        # declared state count survives.
        for index in range(1000):
            aut = fuzz_automaton(base_seed=97, index=index)
            assert len(aut.states) >= 1
            assert aut.initial_states <= frozenset(aut.states)
            # the state names are contiguous, so none were dropped
            assert len(aut.states) == int(max(aut.states)[1:]) + 1

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_states=0),
            dict(n_events=0),
            dict(obs_ratio=-0.1),
            dict(secret_ratio=1.5),
            dict(density=-1.0),
        ],
    )
    def test_parameter_validation(self, kwargs):
        with pytest.raises(ValueError):
            random_automaton(seed=0, **kwargs)


class TestCampaign:
    def test_fixture_campaign_matches_recorded_verdicts(self):
        report = CampaignReport()
        for name in FIXTURE_NAMES:
            verdicts = run_instance(name, load_fixture(name), report)
            for prop in PROPERTIES:
                assert verdicts[prop].holds is EXPECTED_VERDICTS[name][prop], f"{name} {prop}"
        assert report.ok
        assert report.count == len(FIXTURE_NAMES)

    def test_seeded_campaign_is_reproducible(self):
        first = run_campaign(fuzz_instances(30, 5, seed=12))
        second = run_campaign(fuzz_instances(30, 5, seed=12))
        assert first.holds == second.holds
        assert first.fails == second.fails
        assert first.ok and second.ok

    def test_report_flags_problems(self):
        report = CampaignReport()
        assert report.ok
        report.discrepancies.append("x")
        assert not report.ok
