from fractions import Fraction as F

import pytest

from nncone.cone import ConeProblem, Indicator, MonotoneStep, Power, PowerMixture, SignedPower

POWER_BETAS = [F(1, 2), F(1), F(3, 2), F(3), F(7, 2), F(5)]
SIGNED_GAMMAS = [F(1, 2), F(2), F(5, 2)]
INDICATOR_AS = [F(-1, 2), F(-1, 4), F(0), F(1, 4), F(2, 5), F(1, 2)]

FIXTURE_TARGETS = (
    [Power(b) for b in POWER_BETAS]
    + [SignedPower(g) for g in SIGNED_GAMMAS]
    + [Indicator(a) for a in INDICATOR_AS]
)

# targets with a certified closed form
CERTIFIED_TARGETS = (
    [Power(b) for b in POWER_BETAS]
    + [SignedPower(g) for g in SIGNED_GAMMAS if g >= 1]
    + [Indicator(a) for a in (F(-2, 5), F(-1, 4), F(0), F(1, 4), F(2, 5), F(9, 20),
                              F(23, 50), F(1, 2))]
    + [PowerMixture(0, ((F(1, 2), 1), (F(3, 2), 1))),
       PowerMixture(1, ((F(1), 1), (F(0), 2))),
       MonotoneStep(((F(1, 4), 2), (F(2, 5), 1))),
       MonotoneStep(((F(0), 1), (F(1, 8), 3)))]
)


def problem(target):
    return ConeProblem(target)


_acceptance = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key in report.keywords:
        if key.startswith("AC") and key[2:].isdigit():
            _acceptance.setdefault(int(key[2:]), []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        status = "PASS" if all(_acceptance[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status} "
                                    f"({sum(_acceptance[n])}/{len(_acceptance[n])} checks)")


@pytest.fixture
def h3():
    return ConeProblem(Power(3))
