"""Active-set characterization, solver and brute-force oracle.

A candidate ``(S, x)`` is the projection of ``w`` onto the cone generated by
``{v_n}`` exactly when

* ``x_n > 0`` for ``n`` in ``S``,
* the residual ``r_j = sum_{k in S} x_k <v_k, v_j> - <w, v_j>`` vanishes on ``S``,
* ``r_j >= 0`` everywhere else.

The infinite family is handled by truncation: the solvers work on
``{v_0, ..., v_N}`` and the verifier checks residuals up to a finite order.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .cone import ConeProblem, ExplicitMoments, generator_gram, moment, norm_squared
from .exactmath import RationalMatrix, as_rational, solve_linear_exact

log = logging.getLogger(__name__)

DEFAULT_J_MAX = 40
ORACLE_MAX_N = 15


class NonTermination(RuntimeError):
    pass


class UniquenessViolation(AssertionError):
    pass


@dataclass(frozen=True)
class ActiveSetSolution:
    S: tuple[int, ...]
    x: Mapping[int, Fraction]

    def __post_init__(self):
        S = tuple(sorted(set(self.S)))
        x = {int(k): as_rational(v) for k, v in self.x.items()}
        if set(x) != set(S):
            raise ValueError("coefficients must be given for exactly the indices in S")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "x", x)

    @classmethod
    def from_coefficients(cls, coeffs: Mapping[int, Fraction]) -> "ActiveSetSolution":
        """Build from a coefficient map, dropping zero entries."""
        kept = {k: v for k, v in coeffs.items() if v != 0}
        return cls(tuple(kept), kept)

    @property
    def strictly_positive(self) -> bool:
        return all(v > 0 for v in self.x.values())

    def coefficients(self) -> list[Fraction]:
        return [self.x[k] for k in self.S]

    def __hash__(self):
        return hash((self.S, tuple(self.coefficients())))


@dataclass
class VerificationReport:
    truncation: int
    equality_ok: bool
    inequality_ok: bool
    positivity_ok: bool
    orthogonality_ok: bool
    residuals: list[Fraction]
    certified_all_orders: bool = False

    @property
    def accepted(self) -> bool:
        return self.equality_ok and self.inequality_ok and self.positivity_ok

    def first_violation(self, S: Iterable[int]) -> Optional[str]:
        """Human-readable description of the first failed condition."""
        S = set(S)
        if not self.positivity_ok:
            return "positivity: some coefficient on S is not strictly positive"
        for j, r in enumerate(self.residuals):
            if j in S and r != 0:
                return f"equality: residual r_{j} = {r} is nonzero on the active set"
        for j, r in enumerate(self.residuals):
            if j not in S and r < 0:
                return f"inequality: residual r_{j} = {r} is negative"
        return None


@dataclass
class ProjectionReport:
    solution: ActiveSetSolution
    verification: VerificationReport
    distance_sq: Optional[Fraction] = None
    rel_distance_sq: Optional[Fraction] = None
    iterations: int = field(default=0, compare=False)


def _gram_submatrix(problem: ConeProblem, S: tuple[int, ...]) -> RationalMatrix:
    return RationalMatrix.from_rows([[generator_gram(problem, i, j) for j in S] for i in S])


def solve_for_active_set(problem: ConeProblem, S: Iterable[int]) -> list[Fraction]:
    """Coefficients ``x`` with ``M_S x = y`` for the prescribed index set."""
    S = tuple(sorted(S))
    if not S:
        raise ValueError("active set must be nonempty")
    y = [moment(problem, n) for n in S]
    return solve_linear_exact(_gram_submatrix(problem, S), y)


def residuals(problem: ConeProblem, candidate: ActiveSetSolution, j_max: int) -> list[Fraction]:
    out = []
    for j in range(j_max + 1):
        fit = sum((xk * generator_gram(problem, k, j) for k, xk in candidate.x.items()),
                  Fraction(0))
        out.append(fit - moment(problem, j))
    return out


def verify_candidate(problem: ConeProblem, candidate: ActiveSetSolution,
                     j_max: int = DEFAULT_J_MAX) -> VerificationReport:
    if candidate.S and j_max < max(candidate.S):
        raise ValueError("j_max must cover the active set")
    r = residuals(problem, candidate, j_max)
    S = set(candidate.S)
    ortho = sum((candidate.x[n] * r[n] for n in candidate.S), Fraction(0))
    return VerificationReport(
        truncation=j_max,
        equality_ok=all(r[n] == 0 for n in S),
        inequality_ok=all(rj >= 0 for j, rj in enumerate(r) if j not in S),
        positivity_ok=candidate.strictly_positive,
        orthogonality_ok=ortho == 0,
        residuals=r,
    )


def default_j_max(problem: ConeProblem, N: int) -> int:
    j_max = max(2 * N, DEFAULT_J_MAX)
    if isinstance(problem.target, ExplicitMoments):
        j_max = min(j_max, len(problem.target.moments) - 1)
    return j_max


def distance(problem: ConeProblem, solution: ActiveSetSolution):
    """Squared distance and squared relative distance via Pythagoras.

    ``d**2 = ||w||**2 - <w, w*>``; both values are None when the target
    has no known norm. The relative value is None for ``w = 0``.
    """
    nsq = norm_squared(problem.target, problem.family.interval)
    if nsq is None:
        return None, None
    inner = sum((x * moment(problem, n) for n, x in solution.x.items()), Fraction(0))
    d_sq = nsq - inner
    rel = d_sq / nsq if nsq else None
    return d_sq, rel


def _report(problem, solution, j_max, iterations=0) -> ProjectionReport:
    verification = verify_candidate(problem, solution, j_max)
    d_sq, rel = distance(problem, solution)
    return ProjectionReport(solution, verification, d_sq, rel, iterations)


def nnls_active_set(problem: ConeProblem, N: int, j_max: Optional[int] = None) -> ProjectionReport:
    """Lawson-Hanson active-set method on ``{v_0, ..., v_N}`` in exact arithmetic.

    The quadratic ``1/2 x'Gx - y'x`` is minimized over ``x >= 0`` where ``G``
    is the truncated Gram matrix and ``y`` the moment vector; its KKT system
    is the three-condition characterization above restricted to ``n <= N``.
    """
    if N < 1:
        raise ValueError("truncation must be at least 1")
    idx = range(N + 1)
    G = [[generator_gram(problem, i, j) for j in idx] for i in idx]
    y = [moment(problem, n) for n in idx]

    def solve(P):
        m = RationalMatrix.from_rows([[G[i][j] for j in P] for i in P])
        return dict(zip(P, solve_linear_exact(m, [y[i] for i in P])))

    x: dict[int, Fraction] = {}
    cap = 2 ** (N + 2)
    it = 0
    while True:
        # negative gradient; positive entries off P are KKT violations
        grad = [y[j] - sum((G[j][k] * xk for k, xk in x.items()), Fraction(0)) for j in idx]
        candidates = [j for j in idx if j not in x and grad[j] > 0]
        if not candidates:
            break
        enter = max(candidates, key=lambda j: (grad[j], -j))
        x[enter] = Fraction(0)
        while True:
            it += 1
            if it > cap:
                raise NonTermination(f"active-set loop exceeded {cap} iterations")
            P = sorted(x)
            z = solve(P)
            bad = [k for k in P if z[k] <= 0]
            if not bad:
                x = z
                break
            # x_k == z_k only when both are 0: such an index leaves with a zero step
            ratios = {k: x[k] / (x[k] - z[k]) if x[k] != z[k] else Fraction(0) for k in bad}
            leave = min(bad, key=lambda k: (ratios[k], k))
            step = ratios[leave]
            x = {k: x[k] + step * (z[k] - x[k]) for k in P if k != leave}
            log.debug("index %d leaves the active set (step %s)", leave, step)
    solution = ActiveSetSolution(tuple(x), x)
    if j_max is None:
        j_max = default_j_max(problem, N)
    return _report(problem, solution, j_max, it)


def exhaustive_oracle(problem: ConeProblem, N: int, j_max: Optional[int] = None) -> ProjectionReport:
    """Try every ``S`` within ``{0..N}`` and keep the ones meeting the conditions.

    Exactly one subset must pass; anything else raises UniquenessViolation.
    """
    if N > ORACLE_MAX_N:
        raise ValueError(f"exhaustive search is limited to N <= {ORACLE_MAX_N}")
    idx = list(range(N + 1))
    gram = {(i, j): generator_gram(problem, i, j) for i in idx for j in idx}
    y = [moment(problem, n) for n in idx]

    accepted = []
    for size in range(N + 2):
        for S in itertools.combinations(idx, size):
            if S:
                m = RationalMatrix.from_rows([[gram[i, j] for j in S] for i in S])
                xs = solve_linear_exact(m, [y[i] for i in S])
                if any(v <= 0 for v in xs):
                    continue
            else:
                xs = []
            coef = dict(zip(S, xs))
            if all(sum((c * gram[k, j] for k, c in coef.items()), Fraction(0)) >= y[j]
                   for j in idx if j not in coef):
                accepted.append(ActiveSetSolution(S, coef))
    if len(accepted) != 1:
        raise UniquenessViolation(f"{len(accepted)} subsets satisfy the conditions")
    if j_max is None:
        j_max = default_j_max(problem, N)
    return _report(problem, accepted[0], j_max)
