"""Acceptance gate: one group of checks per criterion.

Each test carries an ``AC<n>`` marker; the terminal summary prints one
PASS/FAIL line per criterion (see conftest). Run on its own with
``pytest tests/test_acceptance.py``.
"""

import json
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nncone import cli
from nncone import closedform as cf
from nncone.closedform import IndicatorRegime as R
from nncone.cone import ConeProblem, ExplicitMoments, Indicator, Power, SignedPower
from nncone.cone import DEFAULT_FAMILY, gram_entry
from nncone.exactmath import RationalMatrix
from nncone.projector import (
    ActiveSetSolution,
    distance,
    exhaustive_oracle,
    nnls_active_set,
    verify_candidate,
)

from conftest import CERTIFIED_TARGETS, FIXTURE_TARGETS


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, limit {seconds}s"


# 1 -----------------------------------------------------------------------

@pytest.mark.AC1
def test_power_three_projection_via_cli(capsys):
    with budget(1):
        code = cli.main(["project", "--target", "power", "--beta", "3"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["active_set"] == [2, 4]
    assert {k: F(v) for k, v in doc["coefficients"].items()} == {"2": F(35, 96), "4": F(21, 32)}


# 2 -----------------------------------------------------------------------

@pytest.mark.AC2
def test_distance_formulas():
    with budget(5):
        for m in range(5):
            for alpha in (F(0), F(1, 2), F(1), F(3, 2)):
                d_sq, lam = cf.power_distance(m, alpha)
                a, b = cf.project_power(m, alpha)
                sol = ActiveSetSolution.from_coefficients({2 * m: a, 2 * m + 2: b})
                assert distance(ConeProblem(Power(2 * m + alpha)), sol) == (d_sq, lam ** 2)
                # closed expressions, reduced by hand from the 2x2 system
                assert d_sq == 2 * alpha ** 2 * (2 - alpha) ** 2 / (
                    (4 * m + 2 * alpha + 1) * (4 * m + alpha + 1) ** 2 * (4 * m + alpha + 3) ** 2)

                d_sq, lam = cf.signed_power_distance(m, alpha)
                c, d = cf.project_signed_power(m, alpha)
                sol = ActiveSetSolution.from_coefficients({2 * m + 1: c, 2 * m + 3: d})
                assert distance(ConeProblem(SignedPower(2 * m + 1 + alpha)), sol) == \
                    (d_sq, lam ** 2)
                assert d_sq == 2 * alpha ** 2 * (2 - alpha) ** 2 / (
                    (4 * m + 2 * alpha + 3) * (4 * m + alpha + 3) ** 2 * (4 * m + alpha + 5) ** 2)
        assert cf.power_distance(1, 1) == (F(1, 8064), F(1, 48))


# 3 -----------------------------------------------------------------------

REGIMES = ([(a, R.TWO_TERM) for a in (F(-2, 5), F(-1, 4), F(0))]
           + [(a, R.THREE_TERM) for a in (F(1, 8), F(1, 4), F(2, 5))]
           + [(a, R.FOUR_TERM) for a in (F(23, 50), F(9, 20))]
           + [(a, R.UNRESOLVED) for a in (F(-1, 2), F(1, 2), F(3, 5))])


@pytest.mark.AC3
@pytest.mark.parametrize("a, regime", REGIMES, ids=lambda v: str(v))
def test_indicator_regime(a, regime):
    with budget(1):
        assert cf.classify_indicator(a) is regime


# 4 -----------------------------------------------------------------------

@pytest.mark.AC4
def test_oracle_equivalence_grid():
    assert len(FIXTURE_TARGETS) >= 15
    with budget(120):
        for target in FIXTURE_TARGETS:
            for N in (6, 8, 10):
                p = ConeProblem(target)
                fast = nnls_active_set(p, N).solution
                slow = exhaustive_oracle(p, N).solution  # raises unless exactly one subset
                assert fast == slow, (target, N)


# 5 -----------------------------------------------------------------------

@pytest.mark.AC5
def test_stabilization_to_closed_forms():
    with budget(60):
        for target in CERTIFIED_TARGETS:
            form = cf.closed_form_projection(target)
            assert form.certificate.algebraic_ok, target
            for N in (8, 10, 12):
                assert nnls_active_set(ConeProblem(target), N).solution == form.solution, \
                    (target, N)


# 6 -----------------------------------------------------------------------

@pytest.mark.AC6
def test_candidate_rejection():
    with budget(1):
        p = ConeProblem(Power(3))
        wrong = ActiveSetSolution((2,), {2: F(5, 6)})
        rep = verify_candidate(p, wrong)
        assert not rep.accepted
        negative = [(j, r) for j, r in enumerate(rep.residuals) if r < 0]
        assert negative[0] == (4, F(-1, 84))

        q = ConeProblem(Indicator(F(1, 2)))
        three = cf.indicator_coefficients(F(1, 2), R.THREE_TERM)
        assert not verify_candidate(q, ActiveSetSolution.from_coefficients(three)).accepted


# 7 -----------------------------------------------------------------------

@pytest.mark.AC7
def test_nonclosedness_divergence():
    with budget(5):
        for N in (10, 50, 100, 400):
            estimate, bound = cf.nonclosedness_witness(N)
            assert bound == pytest.approx((N + 2) / (2 * (2 * N + 3) ** 0.5) - 1)
            assert estimate > bound - 1e-6, N
        assert cf.nonclosedness_lower_bound(400) > cf.nonclosedness_lower_bound(100)


# 8 -----------------------------------------------------------------------

@pytest.mark.AC8
def test_gram_properties():
    for n in range(1, 9):
        M = RationalMatrix.from_rows([[gram_entry(DEFAULT_FAMILY, i, j) for j in range(n)]
                                      for i in range(n)])
        assert M.to_rows() == [list(r) for r in zip(*M.to_rows())]
        assert M.determinant() > 0


@pytest.mark.AC8
def test_orthogonality_and_relative_distance():
    with budget(30):
        for target in FIXTURE_TARGETS:
            rep = nnls_active_set(ConeProblem(target), 10)
            assert rep.verification.accepted and rep.verification.orthogonality_ok
            assert 0 <= rep.rel_distance_sq <= 1


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=12)


@pytest.mark.AC8
@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=6, max_size=6),
       st.fractions(min_value=F(1, 10), max_value=10, max_denominator=20))
def test_positive_homogeneity(moments, scale):
    target = ExplicitMoments(tuple(moments))
    base = nnls_active_set(ConeProblem(target), 5).solution
    scaled = nnls_active_set(ConeProblem(target.scaled(scale)), 5).solution
    assert scaled.S == base.S
    assert all(scaled.x[k] == scale * base.x[k] for k in base.S)


@pytest.mark.AC8
def test_not_a_convex_combination():
    for m in range(11):
        for i in range(1, 20):
            a, b = cf.project_power(m, F(i, 10))
            assert a + b > 1
