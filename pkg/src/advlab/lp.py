"""
Linear-programming size bounds in Krawtchouk form.

A polynomial ``f(x) = sum_k f_k K_k(x)`` with ``f_0 = 1`` and ``f_k >= 0`` is
searched for by LP. In skew mode the values ``f(j)`` are capped by ``c*beta``
up to the threshold ``t = floor(2pn)`` and by ``-(1-c)*beta`` above it; any
code whose distance mass beyond ``2pn`` is at least ``c|C|`` then has
``|C| <= f(0) - c*beta``. Classical mode is the Delsarte bound for minimum
distance ``d``: ``f(j) <= 0`` for ``j >= d`` and ``|C| <= f(0)``.

Solutions are never reported as bounds until :func:`verify_certificate` has
recomputed every ``f(j)`` in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .bounds import strong_adversary_upper
from .codespace import as_fraction, krawtchouk_matrix
from .simplex import polish_exact, simplex_min

__all__ = [
    "Certificate",
    "ClassicalLpProblem",
    "LpError",
    "LpSolution",
    "RateBound",
    "SkewLpProblem",
    "build_classical_lp",
    "build_skew_lp",
    "classical_delsarte_lp",
    "rate_bound_from_lp",
    "solve_lp",
    "verify_certificate",
]

DEFAULT_TOL = 1e-9
QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)


class LpError(RuntimeError):
    def __init__(self, status: str, message: str = ""):
        super().__init__(message or status)
        self.status = status


@dataclass(frozen=True)
class LpMatrices:
    """Exact LP data: minimise ``cost.x + constant`` s.t. ``A x <= b``, ``x >= 0``."""

    cost: tuple[Fraction, ...]
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    constant: Fraction
    variables: tuple[str, ...]


@dataclass(frozen=True)
class SkewLpProblem:
    n: int
    p: Fraction
    c: Fraction
    t: int

    def beta_coef(self, j: int) -> Fraction:
        """f(j) <= beta_coef(j) * beta."""
        return self.c if j <= self.t else self.c - 1

    def matrices(self) -> LpMatrices:
        n, c = self.n, self.c
        K = krawtchouk_matrix(n)
        variables = tuple(f"f{k}" for k in range(1, n + 1)) + ("beta",)
        A, b = [], []
        for j in range(1, n + 1):
            A.append(tuple(Fraction(K[k][j]) for k in range(1, n + 1)) + (-self.beta_coef(j),))
            b.append(Fraction(-K[0][j]))
        cost = tuple(Fraction(comb(n, k)) for k in range(1, n + 1)) + (-c,)
        return LpMatrices(cost, tuple(A), tuple(b), Fraction(comb(n, 0)), variables)


@dataclass(frozen=True)
class ClassicalLpProblem:
    n: int
    d: int

    def matrices(self) -> LpMatrices:
        n = self.n
        K = krawtchouk_matrix(n)
        variables = tuple(f"f{k}" for k in range(1, n + 1))
        A = tuple(tuple(Fraction(K[k][j]) for k in range(1, n + 1)) for j in range(self.d, n + 1))
        b = tuple(Fraction(-K[0][j]) for j in range(self.d, n + 1))
        cost = tuple(Fraction(comb(n, k)) for k in range(1, n + 1))
        return LpMatrices(cost, A, b, Fraction(1), variables)


def build_skew_lp(n: int, p, c) -> SkewLpProblem:
    p, c = as_fraction(p), as_fraction(c)
    if n < 2:
        raise ValueError("n must be at least 2")
    if not QUARTER < p <= HALF:
        raise ValueError("the skew split needs 1/4 < p <= 1/2")
    if not 0 < c < 1:
        raise ValueError("skew constant c must lie in (0, 1)")
    t = math.floor(2 * p * n)
    if not 1 <= t <= n - 1:
        raise ValueError(f"degenerate split t={t} for n={n}, p={p}")
    return SkewLpProblem(n, p, c, t)


def build_classical_lp(n: int, d: int) -> ClassicalLpProblem:
    if not 1 <= d <= n:
        raise ValueError("need 1 <= d <= n")
    return ClassicalLpProblem(n, d)


@dataclass(frozen=True)
class LpSolution:
    problem: SkewLpProblem | ClassicalLpProblem
    status: str
    f_coeffs: tuple[Fraction, ...]  # f_1..f_n
    beta: Fraction
    objective: float | None
    beta_positive: bool
    tolerance: float
    exact: bool = False  # True when the optimum was confirmed in rational arithmetic
    iterations: int = 0

    def f_value(self, j: int) -> Fraction:
        K = krawtchouk_matrix(self.problem.n)
        return 1 + sum((f * K[k][j] for k, f in enumerate(self.f_coeffs, start=1)), Fraction(0))


def solve_lp(problem: SkewLpProblem | ClassicalLpProblem, tolerance: float = DEFAULT_TOL) -> LpSolution:
    """Solve in floating point, then confirm the optimal basis exactly.

    Rows and columns are equilibrated by their largest entry for the float
    solve. The resulting basis is re-solved over the rationals; if it is not
    exactly optimal a few rational Bland pivots finish the job, and failing
    that the float point is returned with ``exact=False``.
    """
    mats = problem.matrices()
    A = np.array([[float(v) for v in row] for row in mats.A])
    b = np.array([float(v) for v in mats.b])
    cost = np.array([float(v) for v in mats.cost])
    col_scale = np.abs(A).max(axis=0)
    col_scale[col_scale == 0] = 1.0
    As = A / col_scale
    row_scale = np.abs(As).max(axis=1)
    row_scale[row_scale == 0] = 1.0
    n = problem.n
    max_iter = 20 * (A.shape[0] + A.shape[1]) + 1000
    first = None
    # Bland's rule can stall in floating point on degenerate vertices; nearby
    # tolerances are tried, but only an exactly confirmed basis short-circuits.
    for tol in (tolerance, 10 * tolerance, tolerance / 10):
        res = simplex_min(cost / col_scale, As / row_scale[:, None], b / row_scale, tol=tol, max_iter=max_iter)
        if first is None:
            first = res
        if res.status != "optimal":
            continue
        pol = polish_exact(mats.cost, mats.A, mats.b, res.basis)
        if pol.status == "optimal":
            x, exact, iterations = pol.x, True, res.iterations + pol.pivots
            break
        if pol.status == "unbounded":
            return LpSolution(problem, "unbounded", (), Fraction(0), None, False, tolerance, True, res.iterations)
    else:
        res = first
        if res.status != "optimal":
            return LpSolution(problem, res.status, (), Fraction(0), None, False, tolerance, False, res.iterations)
        x = [Fraction(float(v)) for v in np.maximum(res.x / col_scale, 0.0)]
        exact, iterations = False, res.iterations
    f = tuple(x[:n])
    beta = x[n] if isinstance(problem, SkewLpProblem) else Fraction(0)
    objective = mats.constant + sum((ci * xi for ci, xi in zip(mats.cost, x)), Fraction(0))
    return LpSolution(
        problem,
        "optimal",
        f,
        beta,
        float(objective),
        beta > 10 * as_fraction(tolerance),
        tolerance,
        exact,
        iterations,
    )


def classical_delsarte_lp(n: int, d: int, tolerance: float = DEFAULT_TOL) -> LpSolution:
    return solve_lp(build_classical_lp(n, d), tolerance)


@dataclass(frozen=True)
class Certificate:
    valid: bool
    recomputed_bound: Fraction | None
    reasons: tuple[str, ...] = ()


def verify_certificate(
    solution: LpSolution,
    problem: SkewLpProblem | ClassicalLpProblem | None = None,
    exact_tolerance: float = 1e-8,
) -> Certificate:
    """Recheck the bound's hypotheses from ``f_coeffs`` using exact Krawtchouk integers."""
    problem = problem or solution.problem
    if solution.status != "optimal":
        return Certificate(False, None, (f"status {solution.status}",))
    n = problem.n
    tol = as_fraction(exact_tolerance)
    K = krawtchouk_matrix(n)
    # float inputs convert to the exact rational they represent
    f = [Fraction(1)] + [Fraction(v) for v in solution.f_coeffs]
    if len(f) != n + 1:
        return Certificate(False, None, ("coefficient vector has the wrong length",))
    reasons = [f"f_{k} = {float(v):.3g} < 0" for k, v in enumerate(f) if v < -tol]

    def fval(j: int) -> Fraction:
        return sum((fk * K[k][j] for k, fk in enumerate(f)), Fraction(0))

    if isinstance(problem, SkewLpProblem):
        beta = Fraction(solution.beta)
        if beta <= tol:
            reasons.append(f"beta = {float(beta):.3g} is not positive")
        for j in range(1, n + 1):
            excess = fval(j) - problem.beta_coef(j) * beta
            if excess > tol:
                reasons.append(f"f({j}) exceeds its cap by {float(excess):.3g}")
        bound = fval(0) - problem.c * beta
    else:
        for j in range(problem.d, n + 1):
            if fval(j) > tol:
                reasons.append(f"f({j}) = {float(fval(j)):.3g} > 0")
        bound = fval(0)
    return Certificate(not reasons, bound, tuple(reasons))


@dataclass(frozen=True)
class RateBound:
    bound: float
    rate: float
    comparison: float
    solution: LpSolution
    certificate: Certificate


def rate_bound_from_lp(n: int, p, c, tolerance: float = DEFAULT_TOL, exact_tolerance: float = 1e-8) -> RateBound:
    """Certified size bound from the skew LP, its rate, and the closed-form bound at ``p``."""
    problem = build_skew_lp(n, p, c)
    sol = solve_lp(problem, tolerance)
    if sol.status != "optimal":
        raise LpError(sol.status, f"skew LP ended with status {sol.status}")
    cert = verify_certificate(sol, problem, exact_tolerance)
    if not cert.valid:
        raise LpError("uncertified", "; ".join(cert.reasons))
    bound = float(cert.recomputed_bound)
    if bound <= 0:
        raise LpError("uncertified", f"non-positive bound {bound}")
    return RateBound(bound, math.log2(bound) / n, strong_adversary_upper(float(p)), sol, cert)
