"""Explicit projections onto the non-negative-coefficient cone and their certificates.

Families covered, all on [-1, 1]:

* ``|t|**(2m + alpha)``            -> span of ``t**2m, t**(2m+2)``
* ``sgn(t)|t|**(2m + 1 + alpha)``  -> span of ``t**(2m+1), t**(2m+3)``
* ``1(t >= a)`` for ``a`` in three ranges -> ``1, t`` / ``1, t, t**2`` / ``1, ..., t**3``
* non-negative mixtures of the above that share an active set.

A tail certificate re-checks the algebraic reduction behind the all-orders
residual inequality exactly, so a finite computation covers every order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .cone import (
    ConeProblem,
    Indicator,
    MonotoneStep,
    Power,
    PowerMixture,
    SignedPower,
    Target,
)
from .exactmath import IntQuadratic, Ordering, as_rational, certify_quadratic_nonneg, cmp_sqrt
from .projector import ActiveSetSolution, verify_candidate

ONE_FIFTH = Fraction(1, 5)
UPPER_SQ = Fraction(105, 100)  # (a + 1/2)**2 < 105/100  <=>  a < (sqrt(105) - 5)/10
IDENTITY_WINDOW = 20
DIRECT_ORDERS = 2 * IDENTITY_WINDOW + 2


class UnresolvedRegime(ValueError):
    """No certified closed form exists for these parameters."""


class IndicatorRegime(enum.Enum):
    TWO_TERM = "two-term"      # -1/sqrt(5) <= a <= 0
    THREE_TERM = "three-term"  # 0 < a <= 1/sqrt(5)
    FOUR_TERM = "four-term"    # 1/sqrt(5) < a < (sqrt(105) - 5)/10
    UNRESOLVED = "unresolved"


@dataclass
class TailCertificate:
    family: str
    parameters: dict
    finite_checks: int
    algebraic_ok: bool
    checks: dict = field(default_factory=dict)


def split_exponent(beta) -> tuple[int, Fraction]:
    """Write ``beta = 2m + alpha`` with ``alpha`` in ``[0, 2)``."""
    beta = as_rational(beta)
    if beta < 0:
        raise ValueError("exponent must be non-negative")
    m = math.floor(beta / 2)
    return m, beta - 2 * m


def _check_alpha(alpha: Fraction):
    if not 0 <= alpha < 2:
        raise ValueError("alpha must lie in [0, 2)")


# --------------------------------------------------------------------------
# power and signed power


def project_power(m: int, alpha) -> tuple[Fraction, Fraction]:
    """Coefficients of ``t**2m`` and ``t**(2m+2)`` in the projection of ``|t|**(2m+alpha)``."""
    alpha = as_rational(alpha)
    _check_alpha(alpha)
    den = (4 * m + 1 + alpha) * (4 * m + 3 + alpha)
    a = Fraction((4 * m + 1) * (4 * m + 3)) / den * (2 - alpha) / 2
    b = Fraction((4 * m + 3) * (4 * m + 5)) / den * alpha / 2
    return a, b


def project_signed_power(m: int, alpha) -> tuple[Fraction, Fraction]:
    """Coefficients of ``t**(2m+1)`` and ``t**(2m+3)`` for ``sgn(t)|t|**(2m+1+alpha)``."""
    alpha = as_rational(alpha)
    _check_alpha(alpha)
    den = (4 * m + 3 + alpha) * (4 * m + 5 + alpha)
    c = Fraction((4 * m + 3) * (4 * m + 5)) / den * (2 - alpha) / 2
    d = Fraction((4 * m + 5) * (4 * m + 7)) / den * alpha / 2
    return c, d


def power_distance(m: int, alpha) -> tuple[Fraction, Fraction]:
    """``(d**2, lambda)`` for ``|t|**(2m+alpha)``; lambda is rational here."""
    alpha = as_rational(alpha)
    _check_alpha(alpha)
    p, q = 4 * m + alpha + 1, 4 * m + alpha + 3
    d_sq = 2 * alpha ** 2 * (2 - alpha) ** 2 / ((4 * m + 2 * alpha + 1) * p ** 2 * q ** 2)
    return d_sq, alpha * (2 - alpha) / (p * q)


def signed_power_distance(m: int, alpha) -> tuple[Fraction, Fraction]:
    alpha = as_rational(alpha)
    _check_alpha(alpha)
    p, q = 4 * m + alpha + 3, 4 * m + alpha + 5
    d_sq = 2 * alpha ** 2 * (2 - alpha) ** 2 / ((4 * m + 2 * alpha + 3) * p ** 2 * q ** 2)
    return d_sq, alpha * (2 - alpha) / (p * q)


def _tail_quadratic(m: int, alpha: Fraction) -> IntQuadratic:
    # 2a(2-a) * [(2k - 2m - 1)**2 - 1], expanded in k
    s = 2 * m + 1
    return IntQuadratic(4, -4 * s, s * s - 1).scaled(2 * alpha * (2 - alpha))


def certify_power_tail(m: int, alpha) -> TailCertificate:
    alpha = as_rational(alpha)
    a, b = project_power(m, alpha)
    reduced = _tail_quadratic(m, alpha)
    identity_ok = True
    for k in range(IDENTITY_WINDOW + 1):
        p, q, r = 2 * m + 2 * k + 1, 2 * m + 2 * k + 3, 2 * m + 2 * k + alpha + 1
        D_k = ((4 * m + 1 + alpha) * (4 * m + 3 + alpha) * p * q * r
               * (2 * a / p + 2 * b / q - 2 / r))
        identity_ok &= D_k == reduced(k)
    nonneg = certify_quadratic_nonneg(reduced, 0)
    return TailCertificate(
        "power", {"m": m, "alpha": alpha}, IDENTITY_WINDOW + 1,
        identity_ok and nonneg,
        {"identity_window": identity_ok, "quadratic_nonneg": nonneg},
    )


def certify_signed_tail(m: int, alpha) -> TailCertificate:
    alpha = as_rational(alpha)
    c, d = project_signed_power(m, alpha)
    reduced = _tail_quadratic(m, alpha)
    identity_ok = True
    for k in range(IDENTITY_WINDOW + 1):
        p, q, r = 2 * m + 2 * k + 3, 2 * m + 2 * k + 5, 2 * m + 2 * k + 3 + alpha
        T_k = (p * q * (4 * m + 3 + alpha) * (4 * m + 5 + alpha) * r
               * (2 * c / p + 2 * d / q - 2 / r))
        identity_ok &= T_k == reduced(k)
    nonneg = certify_quadratic_nonneg(reduced, 0)
    return TailCertificate(
        "signed-power", {"m": m, "alpha": alpha}, IDENTITY_WINDOW + 1,
        identity_ok and nonneg,
        {"identity_window": identity_ok, "quadratic_nonneg": nonneg},
    )


def project_power_mixture(m: int, atoms) -> tuple[Fraction, Fraction]:
    A = B = Fraction(0)
    for alpha, w in atoms:
        alpha, w = as_rational(alpha), as_rational(w)
        if alpha == 2:
            # |t|^(2m+2) is itself the generator t^(2m+2)
            a, b = Fraction(0), Fraction(1)
        else:
            a, b = project_power(m, alpha)
        A += w * a
        B += w * b
    return A, B


# --------------------------------------------------------------------------
# indicators


def classify_indicator(a) -> IndicatorRegime:
    a = as_rational(a)
    if not -1 <= a < 1:
        raise ValueError("a must lie in [-1, 1)")
    within_fifth = cmp_sqrt(abs(a), ONE_FIFTH) is not Ordering.GREATER
    if a <= 0:
        return IndicatorRegime.TWO_TERM if within_fifth else IndicatorRegime.UNRESOLVED
    if within_fifth:
        return IndicatorRegime.THREE_TERM
    if cmp_sqrt(a + Fraction(1, 2), UPPER_SQ) is Ordering.LESS:
        return IndicatorRegime.FOUR_TERM
    return IndicatorRegime.UNRESOLVED


def indicator_coefficients(a, regime: IndicatorRegime) -> dict[int, Fraction]:
    """Evaluate a regime's formulas at ``a`` without checking that they apply."""
    a = as_rational(a)
    s = 1 - a * a
    if regime is IndicatorRegime.TWO_TERM:
        return {0: (1 - a) / 2, 1: 3 * s / 4}
    if regime is IndicatorRegime.THREE_TERM:
        return {0: (4 - 9 * a + 5 * a ** 3) / 8, 1: 3 * s / 4, 2: 15 * (a - a ** 3) / 8}
    if regime is IndicatorRegime.FOUR_TERM:
        return {
            0: (1 - a) * (4 - 5 * a - 5 * a * a) / 8,
            1: 15 * s * (3 - 7 * a * a) / 32,
            2: 15 * a * s / 8,
            3: 35 * s * (5 * a * a - 1) / 32,
        }
    raise UnresolvedRegime(f"no closed form for the indicator at a = {a}")


def project_indicator(a) -> tuple[IndicatorRegime, dict[int, Fraction]]:
    """Regime and coefficient map of the projection of ``1(t >= a)``.

    ``a = -1`` gives the constant 1, which lies in the cone; it is returned
    directly even though it sits outside the three certified ranges.
    """
    a = as_rational(a)
    regime = classify_indicator(a)
    if a == -1:
        return regime, {0: Fraction(1), 1: Fraction(0)}
    return regime, indicator_coefficients(a, regime)


def _odd_residual_low(a: Fraction, n: int) -> Fraction:
    # j = 2n+1 residual for the two- and three-term projections
    a2 = a * a
    return ((1 - 3 * a2 + 2 * a ** (2 * n + 2)) * n + 3 * a ** (2 * n + 2) - 3 * a2) \
        / (2 * (2 * n + 3) * (n + 1))


def _indicator_identities(a: Fraction, regime: IndicatorRegime, r: list[Fraction]) -> bool:
    """Compare direct residuals with the reduced closed forms on a window."""
    ok = True
    for n in range(1, IDENTITY_WINDOW + 1):
        if regime is IndicatorRegime.TWO_TERM:
            ok &= r[2 * n] == (a ** (2 * n + 1) - a) / (2 * n + 1)
            ok &= r[2 * n + 1] == _odd_residual_low(a, n)
        elif regime is IndicatorRegime.THREE_TERM:
            ok &= r[2 * n + 1] == _odd_residual_low(a, n)
            ok &= r[2 * n + 2] == a * ((3 - 5 * a * a + 2 * a ** (2 * n + 2)) * n
                                       - 5 * a * a + 5 * a ** (2 * n + 2)) \
                / ((2 * n + 3) * (2 * n + 5))
        elif n >= 2:
            even = ((3 * a - 5 * a ** 3 + 2 * a ** (2 * n + 1)) * n
                    + 3 * a ** (2 * n + 1) - 3 * a) / ((2 * n + 1) * (2 * n + 3))
            p = a ** (2 * n + 2)
            odd = ((-3 + 30 * a * a - 35 * a ** 4 + 8 * p) * n * n
                   + (3 - 35 * a ** 4 + 32 * p) * n + 30 * p - 30 * a * a) \
                / (2 * (2 * n + 3) * (2 * n + 5) * (2 * n + 2))
            ok &= r[2 * n] == even
            ok &= r[2 * n + 1] == odd
    return ok


def certify_indicator_tail(a, regime: IndicatorRegime) -> TailCertificate:
    """Certificate that the regime's formula is the projection at every order.

    Two/three terms: the odd residual reduces to the one-parameter inequality
    with ``rho = a**2``, which holds for all ``n >= 1`` iff ``rho <= 1/5``; the
    even residual carries the sign of ``a``. Four terms: rational sufficient
    conditions that make both residual families increasing and non-negative
    for ``n >= 2``.
    """
    a = as_rational(a)
    if regime is IndicatorRegime.UNRESOLVED:
        raise UnresolvedRegime(f"no certificate for the indicator at a = {a}")
    coeffs = indicator_coefficients(a, regime)
    problem = ConeProblem(Indicator(a))
    candidate = ActiveSetSolution(tuple(coeffs), coeffs)
    report = verify_candidate(problem, candidate, DIRECT_ORDERS)
    a2 = a * a
    checks = {
        "direct_residuals": report.accepted,
        "identity_window": _indicator_identities(a, regime, report.residuals),
    }
    if regime is IndicatorRegime.TWO_TERM:
        checks["sign"] = -1 < a <= 0
        checks["rho_le_fifth"] = a2 <= ONE_FIFTH
    elif regime is IndicatorRegime.THREE_TERM:
        checks["sign"] = a > 0
        checks["rho_le_fifth"] = a2 <= ONE_FIFTH
    else:
        checks["sign"] = a > 0
        checks["above_fifth"] = a2 > ONE_FIFTH
        checks["below_upper"] = cmp_sqrt(a + Fraction(1, 2), UPPER_SQ) is Ordering.LESS
        checks["3-5a^2>0"] = 3 - 5 * a2 > 0
        checks["3-10a^2>0"] = 3 - 10 * a2 > 0
        checks["3-35a^4>0"] = 3 - 35 * a2 * a2 > 0
        checks["-3+30a^2-35a^4>0"] = -3 + 30 * a2 - 35 * a2 * a2 > 0
        checks["-1+15a^2-35a^4>=0"] = -1 + 15 * a2 - 35 * a2 * a2 >= 0
    return TailCertificate(
        "indicator", {"a": a, "regime": regime.value}, DIRECT_ORDERS + 1,
        all(checks.values()), checks,
    )


def project_monotone(atoms) -> tuple[Fraction, Fraction, Fraction]:
    """``(A, B, C)`` with projection ``A + B t + C t**2`` for steps in ``[0, 1/sqrt(5)]``."""
    A = B = C = Fraction(0)
    for pos, (a, w) in enumerate(atoms):
        a, w = as_rational(a), as_rational(w)
        if a < 0 or cmp_sqrt(a, ONE_FIFTH) is Ordering.GREATER:
            raise ValueError(f"atom {pos}: a = {a} outside [0, 1/sqrt(5)]")
        A += w * (4 - 9 * a + 5 * a ** 3) / 8
        B += w * 3 * (1 - a * a) / 4
        C += w * 15 * (a - a ** 3) / 8
    return A, B, C


# --------------------------------------------------------------------------
# dispatch


@dataclass
class ClosedForm:
    solution: ActiveSetSolution
    certificate: TailCertificate
    distance_sq: Optional[Fraction] = None
    rel_distance: Optional[Fraction] = None
    regime: Optional[IndicatorRegime] = None


def _all_ok(family, parameters, certs):
    return TailCertificate(
        family, parameters, sum(c.finite_checks for c in certs),
        all(c.algebraic_ok for c in certs),
        {f"atom{i}": c.algebraic_ok for i, c in enumerate(certs)},
    )


def has_closed_form(target: Target) -> bool:
    if isinstance(target, (Power, PowerMixture, MonotoneStep)):
        return True
    if isinstance(target, SignedPower):
        return target.gamma >= 1
    if isinstance(target, Indicator):
        return classify_indicator(target.a) is not IndicatorRegime.UNRESOLVED
    return False


def closed_form_projection(target: Target) -> ClosedForm:
    """Certified projection for any target in a covered family."""
    if isinstance(target, Power):
        m, alpha = split_exponent(target.beta)
        a, b = project_power(m, alpha)
        d_sq, lam = power_distance(m, alpha)
        sol = ActiveSetSolution.from_coefficients({2 * m: a, 2 * m + 2: b})
        return ClosedForm(sol, certify_power_tail(m, alpha), d_sq, lam)
    if isinstance(target, SignedPower):
        if target.gamma < 1:
            raise UnresolvedRegime("signed powers below 1 have no closed form")
        m, alpha = split_exponent(target.gamma - 1)
        c, d = project_signed_power(m, alpha)
        d_sq, lam = signed_power_distance(m, alpha)
        sol = ActiveSetSolution.from_coefficients({2 * m + 1: c, 2 * m + 3: d})
        return ClosedForm(sol, certify_signed_tail(m, alpha), d_sq, lam)
    if isinstance(target, Indicator):
        regime, coeffs = project_indicator(target.a)
        if target.a == -1:
            # constant function: residuals vanish identically
            cert = TailCertificate("in-cone", {"a": target.a}, 0, True, {"constant": True})
            return ClosedForm(ActiveSetSolution.from_coefficients(coeffs), cert,
                              Fraction(0), Fraction(0), regime)
        if regime is IndicatorRegime.UNRESOLVED:
            raise UnresolvedRegime(f"indicator threshold a = {target.a} is outside the "
                                   "certified ranges")
        cert = certify_indicator_tail(target.a, regime)
        return ClosedForm(ActiveSetSolution.from_coefficients(coeffs), cert, regime=regime)
    if isinstance(target, PowerMixture):
        A, B = project_power_mixture(target.m, target.atoms)
        certs = [certify_power_tail(target.m, al) for al, w in target.atoms if al < 2 and w]
        sol = ActiveSetSolution.from_coefficients({2 * target.m: A, 2 * target.m + 2: B})
        return ClosedForm(sol, _all_ok("power-mixture", {"m": target.m}, certs))
    if isinstance(target, MonotoneStep):
        A, B, C = project_monotone(target.atoms)
        certs = [certify_indicator_tail(a, classify_indicator(a))
                 for a, w in target.atoms if w]
        sol = ActiveSetSolution.from_coefficients({0: A, 1: B, 2: C})
        return ClosedForm(sol, _all_ok("monotone", {}, certs))
    raise UnresolvedRegime(f"no closed form for {type(target).__name__}")


# --------------------------------------------------------------------------
# non-closedness on [0, 1] with generators (-t)^n


def _panel_rule(points: int = 64, panels: int = 8):
    nodes, weights = np.polynomial.legendre.leggauss(points)
    # panels shrink geometrically toward t = 1 where t**N concentrates
    edges = [0.0] + [1.0 - 2.0 ** -k for k in range(1, panels)] + [1.0]
    ts, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = (hi - lo) / 2
        ts.append(lo + half * (nodes + 1))
        ws.append(half * weights)
    return np.concatenate(ts), np.concatenate(ws)


def nonclosedness_lower_bound(N: int) -> float:
    return (N + 2) / (2 * math.sqrt(2 * N + 3)) - 1


def nonclosedness_witness(N: int) -> tuple[float, float]:
    """L2([0,1]) norm of ``sum_{n<=N} (n+1)(-t)**n - (1+t)**-2`` and its lower bound."""
    if N < 1:
        raise ValueError("N must be at least 1")
    t, w = _panel_rule()
    coeffs = np.arange(1, N + 2, dtype=float) * (-1.0) ** np.arange(N + 1)
    partial = np.polynomial.polynomial.polyval(t, coeffs)
    diff = partial - 1.0 / (1.0 + t) ** 2
    return float(math.sqrt(np.dot(w, diff * diff))), nonclosedness_lower_bound(N)
