import pytest

from osmc.generators import gen_cycle, gen_grid, gen_halin, gen_random_planar, gen_shalin_lower

_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    props = dict(report.user_properties)
    label = props.get("criterion", report.nodeid.split("::")[-1])
    outcome = "PASS" if report.passed else "FAIL"
    _ACCEPTANCE.append((label, outcome, str(props.get("measured", ""))))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, measured in sorted(_ACCEPTANCE, key=lambda r: int(r[0].split()[0])):
        terminalreporter.write_line(f"{outcome}  criterion {label}" + (f"  [{measured}]" if measured else ""))


@pytest.fixture(scope="session")
def c4():
    return gen_cycle(4)


@pytest.fixture(scope="session")
def grid3():
    return gen_grid(3, 3)


@pytest.fixture(scope="session")
def small_instances():
    return [gen_cycle(4), gen_cycle(7), gen_grid(3, 3), gen_grid(5, 4), gen_random_planar(1, 8, 8, 0.3),
            gen_halin(2, 12), gen_shalin_lower(8)]
