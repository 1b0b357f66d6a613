"""Monomial generators on [-1, 1] or [0, 1] and the target catalog.

All inner products are taken against Lebesgue measure on the family's
interval and are returned as exact Fractions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactmath import Ordering, as_rational, cmp_sqrt

ONE_FIFTH = Fraction(1, 5)


class MomentUnavailable(LookupError):
    pass


class InvalidTarget(ValueError):
    """Raised for targets whose parameters fall outside their admissible range.

    ``field`` names the offending parameter so callers can report it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class Interval(enum.Enum):
    SYMMETRIC_UNIT = "symmetric"  # [-1, 1]
    UNIT = "unit"  # [0, 1]


class Stride(enum.Enum):
    ALL = 1
    EVEN = 2


@dataclass(frozen=True)
class GeneratorFamily:
    interval: Interval = Interval.SYMMETRIC_UNIT
    stride: Stride = Stride.ALL

    def exponent(self, n: int) -> int:
        """Power of ``t`` carried by the ``n``-th generator."""
        return self.stride.value * n

    @property
    def bounds(self) -> tuple[int, int]:
        return (-1, 1) if self.interval is Interval.SYMMETRIC_UNIT else (0, 1)


DEFAULT_FAMILY = GeneratorFamily()


def gram_entry(family: GeneratorFamily, i: int, j: int) -> Fraction:
    """``<t^i, t^j>`` for exponents ``i`` and ``j``."""
    if family.interval is Interval.UNIT:
        return Fraction(1, i + j + 1)
    if (i + j) % 2:
        return Fraction(0)
    return Fraction(2, i + j + 1)


# --------------------------------------------------------------------------
# targets


def _check_weights(atoms, name):
    for pos, (_, w) in enumerate(atoms):
        if w < 0:
            raise InvalidTarget(f"{name}[{pos}].weight", "weights must be non-negative")


@dataclass(frozen=True)
class Power:
    """``|t|**beta``."""

    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "beta", as_rational(self.beta))
        if self.beta < 0:
            raise InvalidTarget("beta", "exponent must be non-negative")


@dataclass(frozen=True)
class SignedPower:
    """``sgn(t) * |t|**gamma``."""

    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_rational(self.gamma))
        if self.gamma < 0:
            raise InvalidTarget("gamma", "exponent must be non-negative")


@dataclass(frozen=True)
class Indicator:
    """The step ``1(t >= a)``."""

    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        if not -1 <= self.a < 1:
            raise InvalidTarget("a", "threshold must lie in [-1, 1)")


@dataclass(frozen=True)
class PowerMixture:
    """``sum(w * |t|**(2m + alpha))`` over atoms ``(alpha, w)``."""

    m: int
    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 0:
            raise InvalidTarget("m", "must be a natural number")
        atoms = tuple((as_rational(al), as_rational(w)) for al, w in self.atoms)
        if not atoms:
            raise InvalidTarget("atoms", "at least one atom is required")
        for pos, (al, _) in enumerate(atoms):
            if not 0 <= al <= 2:
                raise InvalidTarget(f"atoms[{pos}].alpha", "must lie in [0, 2]")
        _check_weights(atoms, "atoms")
        object.__setattr__(self, "atoms", atoms)

    def components(self) -> list[tuple[Power, Fraction]]:
        return [(Power(2 * self.m + al), w) for al, w in self.atoms]


@dataclass(frozen=True)
class MonotoneStep:
    """``sum(w * 1(t >= a))`` with every ``a`` in ``[0, 1/sqrt(5)]``."""

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        atoms = tuple((as_rational(a), as_rational(w)) for a, w in self.atoms)
        if not atoms:
            raise InvalidTarget("atoms", "at least one atom is required")
        for pos, (a, _) in enumerate(atoms):
            if a < 0 or cmp_sqrt(a, ONE_FIFTH) is Ordering.GREATER:
                raise InvalidTarget(f"atoms[{pos}].a", "must lie in [0, 1/sqrt(5)]")
        _check_weights(atoms, "atoms")
        object.__setattr__(self, "atoms", atoms)

    def components(self) -> list[tuple[Indicator, Fraction]]:
        return [(Indicator(a), w) for a, w in self.atoms]


@dataclass(frozen=True)
class ExplicitMoments:
    """A vector known only through ``<w, t^j>`` for ``j < len(moments)``."""

    moments: tuple[Fraction, ...]
    norm_sq: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(as_rational(v) for v in self.moments))
        if self.norm_sq is not None:
            object.__setattr__(self, "norm_sq", as_rational(self.norm_sq))
            if self.norm_sq < 0:
                raise InvalidTarget("norm_sq", "squared norm must be non-negative")

    def scaled(self, factor) -> "ExplicitMoments":
        f = as_rational(factor)
        ns = None if self.norm_sq is None else self.norm_sq * f * f
        return ExplicitMoments(tuple(v * f for v in self.moments), ns)


Target = Union[Power, SignedPower, Indicator, PowerMixture, MonotoneStep, ExplicitMoments]


@dataclass(frozen=True)
class ConeProblem:
    target: Target
    family: GeneratorFamily = field(default=DEFAULT_FAMILY)


# --------------------------------------------------------------------------
# oracles


def _power_moment(beta: Fraction, j: int, interval: Interval, signed: bool) -> Fraction:
    if interval is Interval.UNIT:
        return 1 / (beta + j + 1)
    # even part survives for |t|^beta, odd part for sgn(t)|t|^gamma
    if (j % 2 == 1) != signed:
        return Fraction(0)
    return 2 / (beta + j + 1)


def _indicator_moment(a: Fraction, j: int, interval: Interval) -> Fraction:
    if interval is Interval.UNIT:
        a = max(a, Fraction(0))
    return (1 - a ** (j + 1)) / (j + 1)


def moment_of_exponent(target: Target, j: int, interval: Interval = Interval.SYMMETRIC_UNIT) -> Fraction:
    """``<w, t^j>`` for the exponent ``j``."""
    if isinstance(target, Power):
        return _power_moment(target.beta, j, interval, signed=False)
    if isinstance(target, SignedPower):
        return _power_moment(target.gamma, j, interval, signed=True)
    if isinstance(target, Indicator):
        return _indicator_moment(target.a, j, interval)
    if isinstance(target, (PowerMixture, MonotoneStep)):
        return sum((w * moment_of_exponent(part, j, interval)
                    for part, w in target.components()), Fraction(0))
    if isinstance(target, ExplicitMoments):
        if j >= len(target.moments):
            raise MomentUnavailable(
                f"moment {j} requested but only {len(target.moments)} supplied")
        return target.moments[j]
    raise TypeError(f"unknown target {target!r}")


def moment(problem: ConeProblem, n: int) -> Fraction:
    """``<w, v_n>`` for the ``n``-th generator of the problem's family.

    Explicit moment lists are indexed by generator, not by exponent.
    """
    target = problem.target
    if isinstance(target, ExplicitMoments):
        return moment_of_exponent(target, n)
    return moment_of_exponent(target, problem.family.exponent(n), problem.family.interval)


def generator_gram(problem: ConeProblem, i: int, j: int) -> Fraction:
    f = problem.family
    return gram_entry(f, f.exponent(i), f.exponent(j))


def norm_squared(target: Target, interval: Interval = Interval.SYMMETRIC_UNIT) -> Optional[Fraction]:
    """``||w||**2``, or None when the target does not determine it."""
    half = interval is Interval.UNIT
    if isinstance(target, (Power, SignedPower)):
        e = target.beta if isinstance(target, Power) else target.gamma
        return (1 if half else 2) / (2 * e + 1)
    if isinstance(target, Indicator):
        a = max(target.a, Fraction(0)) if half else target.a
        return 1 - a
    if isinstance(target, PowerMixture):
        scale = 1 if half else 2
        betas = [(p.beta, w) for p, w in target.components()]
        return sum((wi * wj * scale / (bi + bj + 1)
                    for bi, wi in betas for bj, wj in betas), Fraction(0))
    if isinstance(target, MonotoneStep):
        # atoms are non-negative, so both intervals agree
        return sum((wi * wj * (1 - max(ai, aj))
                    for ai, wi in target.atoms for aj, wj in target.atoms), Fraction(0))
    if isinstance(target, ExplicitMoments):
        return target.norm_sq
    raise TypeError(f"unknown target {target!r}")


def evaluate(target: Target, t: float) -> float:
    """Pointwise value ``w(t)`` in floating point (presentation only)."""
    if isinstance(target, Power):
        return abs(t) ** float(target.beta) if target.beta else 1.0
    if isinstance(target, SignedPower):
        mag = abs(t) ** float(target.gamma) if target.gamma else 1.0
        return math.copysign(mag, t) if t else 0.0
    if isinstance(target, Indicator):
        return 1.0 if t >= target.a else 0.0
    if isinstance(target, (PowerMixture, MonotoneStep)):
        return math.fsum(float(w) * evaluate(p, t) for p, w in target.components())
    if isinstance(target, ExplicitMoments):
        return math.nan
    raise TypeError(f"unknown target {target!r}")


def check_closedness_condition(
    positive_atoms: Sequence[tuple],
    negative_atoms: Sequence[tuple],
    C,
    n_max: int,
) -> bool:
    """Check the even-moment domination condition for a finite atomic measure.

    Tests ``sum_neg mass * t**(2n) <= C * sum_pos mass * t**(2n)`` for
    ``n = 0 .. n_max``. Passing is evidence only; it does not prove the
    inequality for every ``n``.
    """
    C = as_rational(C)
    pos = [(as_rational(t), as_rational(w)) for t, w in positive_atoms]
    neg = [(as_rational(t), as_rational(w)) for t, w in negative_atoms]
    if C <= 0:
        raise ValueError("C must be positive")
    if any(t < 0 or w <= 0 for t, w in pos) or any(t >= 0 or w <= 0 for t, w in neg):
        raise ValueError("atoms must have the right sign and positive mass")
    for n in range(n_max + 1):
        lhs = sum((w * t ** (2 * n) for t, w in neg), Fraction(0))
        rhs = sum((w * t ** (2 * n) for t, w in pos), Fraction(0))
        if lhs > C * rhs:
            return False
    return True
