import pytest

from catq.mutation import MUTANTS, all_mutants
from catq.suites import SUITES


def test_every_suite_has_mutants():
    assert set(MUTANTS) == set(SUITES)


@pytest.mark.parametrize("suite", sorted(MUTANTS))
def test_mutants_detected_with_witness(suite):
    mutants = MUTANTS[suite]()
    assert len(mutants) >= 5
    for m in mutants:
        assert m.suite == suite
        assert m.detected, (m.description, str(m.report))
        assert m.report.witness() is not None


def test_descriptions_unique_per_suite():
    seen = set()
    for m in all_mutants():
        key = (m.suite, m.description)
        assert key not in seen
        seen.add(key)
