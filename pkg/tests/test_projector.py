from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import nnls

from nncone.cone import (
    ConeProblem,
    ExplicitMoments,
    GeneratorFamily,
    Indicator,
    Interval,
    Power,
    SignedPower,
    Stride,
    evaluate,
    generator_gram,
    moment,
    norm_squared,
)
from nncone.projector import (
    ActiveSetSolution,
    distance,
    exhaustive_oracle,
    nnls_active_set,
    solve_for_active_set,
    verify_candidate,
)

from conftest import FIXTURE_TARGETS


def sol(mapping):
    return ActiveSetSolution(tuple(mapping), mapping)


THREE_TERM_HALF = {0: (4 - 9 * F(1, 2) + 5 * F(1, 8)) / 8, 1: 3 * F(3, 4) / 4,
                   2: 15 * (F(1, 2) - F(1, 8)) / 8}


# --- solve_for_active_set ------------------------------------------------

def test_solve_h3(h3):
    assert solve_for_active_set(h3, {2, 4}) == [F(35, 96), F(21, 32)]


def test_solve_indicator_quarter():
    got = solve_for_active_set(ConeProblem(Indicator(F(1, 4))), {0, 1, 2})
    assert got == [F(117, 512), F(45, 64), F(225, 512)]


def test_solve_generator_itself():
    assert solve_for_active_set(ConeProblem(Power(4)), {4}) == [1]


def test_solve_needs_nonempty():
    with pytest.raises(ValueError):
        solve_for_active_set(ConeProblem(Power(4)), set())


# --- verify_candidate ----------------------------------------------------

def test_verify_h3_accepted(h3):
    rep = verify_candidate(h3, sol({2: F(35, 96), 4: F(21, 32)}), 40)
    assert rep.accepted and rep.orthogonality_ok
    assert all(r >= 0 for r in rep.residuals)
    assert len(rep.residuals) == 41


def test_verify_three_term_at_half_rejected():
    rep = verify_candidate(ConeProblem(Indicator(F(1, 2))), sol(THREE_TERM_HALF), 40)
    assert rep.positivity_ok and rep.equality_ok
    assert not rep.inequality_ok and not rep.accepted
    assert min(rep.residuals) < 0


def test_verify_empty_set_for_nonpositive_moments():
    prob = ConeProblem(ExplicitMoments((F(-1),) * 6))
    rep = verify_candidate(prob, sol({}), 5)
    assert rep.accepted
    assert distance(prob, sol({})) == (None, None)


def test_verify_h3_single_index_first_violation(h3):
    cand = sol({2: F(5, 6)})
    rep = verify_candidate(h3, cand, 40)
    assert not rep.accepted
    assert rep.residuals[4] == F(-1, 84)
    assert all(r >= 0 for r in rep.residuals[:4])
    assert rep.first_violation(cand.S).startswith("inequality: residual r_4 = -1/84")


def test_verify_flags_nonpositive_coefficient(h3):
    rep = verify_candidate(h3, sol({2: F(0), 4: F(1)}), 10)
    assert not rep.positivity_ok


def test_verify_j_max_must_cover_support(h3):
    with pytest.raises(ValueError):
        verify_candidate(h3, sol({12: F(1)}), 5)


# --- solvers ----------------------------------------------------------------

def test_nnls_h3():
    rep = nnls_active_set(ConeProblem(Power(3)), 8)
    assert rep.solution == sol({2: F(35, 96), 4: F(21, 32)})
    assert rep.verification.truncation == 40 and rep.verification.accepted


def test_nnls_empty_for_nonpositive_moments():
    rep = nnls_active_set(ConeProblem(ExplicitMoments((F(-1), F(0), F(-3, 2), F(-1), 0, F(-2)))), 5)
    assert rep.solution.S == ()
    assert rep.verification.truncation == 5


def test_nnls_negative_quarter_indicator():
    rep = nnls_active_set(ConeProblem(Indicator(F(-1, 4))), 8)
    assert rep.solution == sol({0: F(5, 8), 1: F(45, 64)})


def test_nnls_j_max_default_grows_with_n():
    assert nnls_active_set(ConeProblem(Power(1)), 25).verification.truncation == 50


def test_oracle_examples():
    assert exhaustive_oracle(ConeProblem(Power(3)), 6).solution == \
        nnls_active_set(ConeProblem(Power(3)), 6).solution
    assert exhaustive_oracle(ConeProblem(Indicator(F(1, 4))), 6).solution.S == (0, 1, 2)
    assert exhaustive_oracle(ConeProblem(SignedPower(1)), 5).solution == sol({1: F(1)})


def test_oracle_limits():
    with pytest.raises(ValueError):
        exhaustive_oracle(ConeProblem(Power(3)), 16)
    with pytest.raises(ValueError):
        nnls_active_set(ConeProblem(Power(3)), 0)


def test_unit_interval_even_generators_give_same_coefficients():
    # on [0,1] with generators t^(2n) the problem is the even part of the [-1,1] one
    prob = ConeProblem(Power(3), GeneratorFamily(Interval.UNIT, Stride.EVEN))
    rep = nnls_active_set(prob, 6)
    assert rep.solution == sol({1: F(35, 96), 2: F(21, 32)})
    assert rep.verification.accepted


def _float_nnls_support(problem, N):
    G = np.array([[float(generator_gram(problem, i, j)) for j in range(N + 1)]
                  for i in range(N + 1)])
    y = np.array([float(moment(problem, n)) for n in range(N + 1)])
    L = np.linalg.cholesky(G)
    # ||L^T x - L^{-1} y||^2 = x'Gx - 2y'x + const
    x, _ = nnls(L.T, np.linalg.solve(L, y))
    return x


@pytest.mark.parametrize("target", [Power(3), Power(F(1, 2)), SignedPower(F(5, 2)),
                                    Indicator(F(1, 4)), Indicator(F(-1, 4)), Indicator(F(9, 20))])
def test_float_nnls_agrees(target):
    prob = ConeProblem(target)
    exact = nnls_active_set(prob, 5).solution
    x = _float_nnls_support(prob, 5)
    for n in range(6):
        assert abs(x[n] - float(exact.x.get(n, 0))) < 1e-6


# --- distance --------------------------------------------------------------

def test_distance_h3(h3):
    d_sq, rel = distance(h3, sol({2: F(35, 96), 4: F(21, 32)}))
    assert d_sq == F(1, 8064)
    assert rel == F(1, 2304)


def test_distance_in_cone():
    assert distance(ConeProblem(Power(4)), sol({4: F(1)})) == (0, 0)


@pytest.mark.parametrize("target", [Power(F(1, 2)), SignedPower(F(5, 2)), Indicator(F(1, 4)),
                                    Indicator(F(-1, 2))])
def test_distance_matches_quadrature(target):
    prob = ConeProblem(target)
    rep = nnls_active_set(prob, 8)
    coeffs = rep.solution.x
    cuts = [-1, 0, 1] if not isinstance(target, Indicator) else [-1, float(target.a), 1]

    def diff_sq(t):
        ws = sum(float(c) * t ** k for k, c in coeffs.items())
        return (evaluate(target, float(t)) - ws) ** 2

    ref = mpmath.quad(diff_sq, cuts)
    assert abs(float(rep.distance_sq) - float(ref)) < 1e-10


# --- invariants ----------------------------------------------------------

@pytest.mark.parametrize("target", FIXTURE_TARGETS, ids=str)
def test_fixture_invariants(target):
    prob = ConeProblem(target)
    rep = nnls_active_set(prob, 8)
    v = rep.verification
    assert v.orthogonality_ok
    assert sum(rep.solution.x[n] * v.residuals[n] for n in rep.solution.S) == 0
    inner = sum(x * moment(prob, n) for n, x in rep.solution.x.items())
    assert rep.distance_sq + inner == norm_squared(target)
    assert rep.distance_sq >= 0 and 0 <= rep.rel_distance_sq <= 1
    # the truncated problem's KKT conditions hold exactly on 0..N
    assert all(r >= 0 for r in v.residuals[:9])
    assert all(v.residuals[n] == 0 for n in rep.solution.S)


@pytest.mark.parametrize("target", [Power(F(7, 2)), Indicator(F(1, 4)), Indicator(F(9, 20)),
                                    SignedPower(F(2)), Indicator(F(-2, 5))], ids=str)
def test_truncation_stabilizes(target):
    prob = ConeProblem(target)
    sets = {N: nnls_active_set(prob, N).solution for N in (6, 8, 10, 12)}
    base = max(sets[12].S) + 3
    stable = [s for N, s in sets.items() if N >= base]
    assert stable and all(s == stable[0] for s in stable)


moment_lists = st.lists(st.fractions(-3, 3, max_denominator=7), min_size=5, max_size=7)


@settings(max_examples=40, deadline=None)
@given(moment_lists, st.fractions(F(1, 9), 9, max_denominator=9))
def test_positive_homogeneity(moments, lam):
    target = ExplicitMoments(tuple(moments), F(100))
    N = len(moments) - 1
    base = nnls_active_set(ConeProblem(target), N).solution
    scaled = nnls_active_set(ConeProblem(target.scaled(lam)), N).solution
    assert scaled.S == base.S
    assert all(scaled.x[n] == lam * base.x[n] for n in base.S)


@settings(max_examples=30, deadline=None)
@given(moment_lists)
def test_random_moments_solver_matches_oracle(moments):
    prob = ConeProblem(ExplicitMoments(tuple(moments)))
    N = len(moments) - 1
    assert nnls_active_set(prob, N).solution == exhaustive_oracle(prob, N).solution


def test_tied_zero_coefficient_regression():
    # two indices reach zero in one ratio step; the survivor then solves to 0 again
    coeffs = {3: F(1, 10)}
    moments = tuple(sum(c * generator_gram(ConeProblem(Power(0)), k, j)
                        for k, c in coeffs.items()) for j in range(10))
    rep = nnls_active_set(ConeProblem(ExplicitMoments(moments, F(1, 350))), 9)
    assert rep.solution == sol(coeffs)
    assert rep.distance_sq == 0


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.integers(0, 7), st.fractions(F(1, 10), 5, max_denominator=10),
                       min_size=1, max_size=4))
def test_idempotence(coeffs):
    fam = GeneratorFamily()
    moments = tuple(sum(c * generator_gram(ConeProblem(Power(0), fam), k, j)
                        for k, c in coeffs.items()) for j in range(10))
    norm_sq = sum(ci * cj * generator_gram(ConeProblem(Power(0)), i, j)
                  for i, ci in coeffs.items() for j, cj in coeffs.items())
    rep = nnls_active_set(ConeProblem(ExplicitMoments(moments, norm_sq)), 9)
    assert rep.solution == sol(coeffs)
    assert rep.distance_sq == 0
