import pytest

from urnlab.core import DecisionRule, all_acts, enumerate_rules


def rule(code: str) -> DecisionRule:
    return DecisionRule.from_code(code)


@pytest.fixture(scope="session")
def rules():
    return enumerate_rules()


@pytest.fixture(scope="session")
def acts():
    return all_acts()
