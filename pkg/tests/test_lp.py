import math
from dataclasses import replace
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from scipy.optimize import linprog

from advlab.codespace import krawtchouk
from advlab.lp import (
    LpError,
    LpSolution,
    build_classical_lp,
    build_skew_lp,
    classical_delsarte_lp,
    rate_bound_from_lp,
    solve_lp,
    verify_certificate,
)
from advlab.simplex import polish_exact, simplex_min

from oracles import max_code_size


def highs_value(problem):
    m = problem.matrices()
    r = linprog(
        np.array(m.cost, dtype=float),
        A_ub=np.array(m.A, dtype=float),
        b_ub=np.array(m.b, dtype=float),
        bounds=(0, None),
        method="highs",
    )
    return r.status, (r.fun + float(m.constant) if r.status == 0 else None)


# -- simplex core -------------------------------------------------------------


def test_simplex_textbook():
    # max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    r = simplex_min([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert r.status == "optimal"
    assert r.fun == pytest.approx(-36)
    assert r.x == pytest.approx([2, 6])


def test_simplex_phase_one_and_statuses():
    r = simplex_min([1, 1], [[-1, -1]], [-2])  # x + y >= 2
    assert r.status == "optimal" and r.fun == pytest.approx(2)
    assert simplex_min([1], [[1], [-1]], [1, -2]).status == "infeasible"
    assert simplex_min([-1, 0], [[0, 1]], [1]).status == "unbounded"


def test_simplex_degenerate_cycling_example():
    # Beale's example cycles under the textbook largest-coefficient rule
    c = [-0.75, 150, -0.02, 6]
    A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    b = [0, 0, 1]
    r = simplex_min(c, A, b)
    assert r.status == "optimal"
    assert r.fun == pytest.approx(-0.05)


def test_polish_exact_confirms_basis():
    r = simplex_min([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    pol = polish_exact([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18], r.basis)
    assert pol.status == "optimal"
    assert pol.x == [2, 6]
    assert all(isinstance(v, Fraction) for v in pol.x)


# -- problem construction ------------------------------------------------------


def test_build_skew_structure():
    pr = build_skew_lp(2, 0.3, 0.5)
    assert pr.t == 1
    m = pr.matrices()
    assert m.variables == ("f1", "f2", "beta")
    assert len(m.A) == 2
    assert m.A[0][-1] == -Fraction(1, 2) and m.A[1][-1] == Fraction(1, 2)

    pr = build_skew_lp(24, 0.3, 0.1)
    m = pr.matrices()
    assert pr.t == 14
    assert len(m.variables) == 25 and len(m.A) == 24


def test_skew_columns_are_krawtchouk():
    pr = build_skew_lp(7, 0.3, 0.1)
    assert pr.t == 4
    m = pr.matrices()
    for k in range(1, 8):
        assert [row[k - 1] for row in m.A] == [krawtchouk(7, k, j) for j in range(1, 8)]
    assert m.b == tuple(Fraction(-1) for _ in range(7))
    assert m.cost[:7] == tuple(comb(7, k) for k in range(1, 8))


@pytest.mark.parametrize("args", [(24, 0.2, 0.1), (24, 0.3, 0), (24, 0.3, 1), (1, 0.3, 0.5), (24, 0.55, 0.5)])
def test_build_skew_rejects(args):
    with pytest.raises(ValueError):
        build_skew_lp(*args)


def test_build_classical_rejects():
    with pytest.raises(ValueError):
        build_classical_lp(5, 0)
    with pytest.raises(ValueError):
        build_classical_lp(5, 6)


# -- classical baseline --------------------------------------------------------


@pytest.mark.parametrize("n,d,expected", [(7, 3, 16), (7, 7, 2), (4, 4, 2), (5, 1, 32)])
def test_classical_examples(n, d, expected):
    sol = classical_delsarte_lp(n, d)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(expected, abs=1e-6)
    cert = verify_certificate(sol)
    assert cert.valid and cert.recomputed_bound == expected


@pytest.mark.parametrize("n", range(1, 8))
def test_classical_dominates_exhaustive_search(n):
    for d in range(1, n + 1):
        sol = classical_delsarte_lp(n, d)
        assert verify_certificate(sol).valid
        assert sol.objective >= max_code_size(n, d) - 1e-9


@pytest.mark.parametrize("n,d", [(12, 4), (20, 6), (24, 8), (30, 10), (40, 12)])
def test_classical_matches_highs(n, d):
    sol = classical_delsarte_lp(n, d)
    status, ref = highs_value(build_classical_lp(n, d))
    assert status == 0 and sol.status == "optimal" and sol.exact
    assert sol.objective == pytest.approx(ref, rel=1e-9)


# -- skew LP ---------------------------------------------------------------------


def test_skew_n24_c01_is_degenerate():
    # The whole space F_2^24 already has 15.4% of its distance mass beyond 14 > c,
    # so no certificate beats 2^24 and the optimum sits at beta = 0.
    pr = build_skew_lp(24, 0.3, 0.1)
    sol = solve_lp(pr)
    assert sol.status == "optimal" and sol.exact
    assert sol.beta == 0 and not sol.beta_positive
    assert sol.objective == 2**24
    cert = verify_certificate(sol, pr, 1e-8)
    assert not cert.valid
    assert cert.recomputed_bound == 2**24
    with pytest.raises(LpError):
        rate_bound_from_lp(24, 0.3, 0.1)
    status, ref = highs_value(pr)
    assert status == 0 and ref == pytest.approx(2**24, rel=1e-9)


@pytest.mark.parametrize(
    "args,bound",
    [
        ((24, 0.3, 0.5), Fraction(2359296, 35)),
        ((24, 0.3, 0.2), Fraction(1862795264000, 596227)),
        ((24, 0.45, 0.5), Fraction(56)),
    ],
)
def test_skew_certified_snapshots(args, bound):
    pr = build_skew_lp(*args)
    sol = solve_lp(pr)
    cert = verify_certificate(sol, pr, 1e-8)
    assert cert.valid and sol.beta_positive
    assert cert.recomputed_bound == bound
    assert abs(float(cert.recomputed_bound) - sol.objective) <= 1e-6
    status, ref = highs_value(pr)
    assert ref == pytest.approx(float(bound), rel=1e-9)


@pytest.mark.parametrize("args", [(24, 0.3, 0.5), (40, 0.35, 0.3), (48, 0.3, 0.3)])
def test_skew_objective_identity(args):
    pr = build_skew_lp(*args)
    sol = solve_lp(pr)
    n = pr.n
    exact = 1 + sum(f * comb(n, k) for k, f in enumerate(sol.f_coeffs, 1)) - pr.c * sol.beta
    assert float(exact) == sol.objective
    assert sol.f_value(0) - pr.c * sol.beta == exact


def test_skew_unbounded_when_skew_impossible():
    assert solve_lp(build_skew_lp(24, 0.3, 0.9)).status == "unbounded"


def test_rate_bound_reports_both():
    rb = rate_bound_from_lp(24, 0.3, 0.5)
    assert rb.bound == pytest.approx(2359296 / 35)
    assert rb.rate == pytest.approx(math.log2(2359296 / 35) / 24)
    assert rb.comparison == pytest.approx(0.1140875395895, abs=1e-12)


# -- certificates ------------------------------------------------------------------


def test_certificate_zero_beta_rejected():
    pr = build_skew_lp(2, 0.3, 0.5)
    sol = LpSolution(pr, "optimal", (Fraction(0), Fraction(0)), Fraction(0), 1.0, False, 1e-9)
    cert = verify_certificate(sol, pr, 1e-8)
    assert not cert.valid
    assert any("beta" in r for r in cert.reasons)


def test_certificate_sign_violation():
    pr = build_skew_lp(24, 0.3, 0.5)
    sol = solve_lp(pr)
    assert verify_certificate(sol, pr, 1e-8).valid
    bad = replace(sol, f_coeffs=(Fraction(-2e-8),) + sol.f_coeffs[1:])
    assert not verify_certificate(bad, pr, 1e-8).valid


def test_certificate_detects_constraint_violation():
    pr = build_skew_lp(24, 0.3, 0.5)
    sol = solve_lp(pr)
    bumped = replace(sol, beta=sol.beta * 2)
    cert = verify_certificate(bumped, pr, 1e-8)
    assert not cert.valid


def test_bound_decreases_in_beta():
    pr = build_skew_lp(24, 0.3, 0.5)
    sol = solve_lp(pr)
    bounds = [
        verify_certificate(replace(sol, beta=sol.beta + Fraction(k, 10)), pr).recomputed_bound
        for k in range(5)
    ]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))


def test_certificate_of_failed_solve():
    sol = solve_lp(build_skew_lp(24, 0.3, 0.9))
    assert not verify_certificate(sol).valid
