from dataclasses import replace

import pytest

from cusumopt.config import load_config
from cusumopt.economics import NO_IN_CONTROL_COST
from cusumopt.problem import ArlConstraints
from cusumopt.report import run_optimize

_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record a one-line PASS/FAIL verdict for the acceptance summary."""
    def record(number, name, passed, detail=""):
        line = f"criterion {number:>2} [{'PASS' if passed else 'FAIL'}] {name}"
        if detail:
            line += f" -- {detail}"
        _CRITERIA.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def yogurt_cfg():
    return load_config("example_sec5")


@pytest.fixture(scope="session")
def yogurt_repro(yogurt_cfg):
    """Yogurt example priced without the C0/lambda term and with the ARL constraints off."""
    return replace(yogurt_cfg, variant=NO_IN_CONTROL_COST,
                   constraints=ArlConstraints(200.0, 14.0, "off"))


@pytest.fixture(scope="session")
def repro_front(yogurt_repro):
    return run_optimize(yogurt_repro)
