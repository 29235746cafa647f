"""
Dense two-phase primal simplex with Bland's anti-cycling rule.

Solves ``min c.x  s.t.  A x <= b, x >= 0`` for small dense problems. Rows with
negative right-hand side get an artificial variable for phase one. Each
iteration re-solves the current basis from the original data instead of
updating a tableau in place, so rounding does not accumulate across pivots
(Krawtchouk rows are badly scaled once n passes ~30).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["ExactPolish", "SimplexResult", "polish_exact", "simplex_min"]


@dataclass
class SimplexResult:
    status: str  # optimal | infeasible | unbounded | numerical_failure
    x: np.ndarray | None
    fun: float | None
    iterations: int
    message: str = ""
    # final basis over columns [x | slacks]; slack i has index n + i
    basis: tuple[int, ...] = ()


class _Stop(Exception):
    def __init__(self, status: str, message: str):
        super().__init__(message)
        self.status = status


def _iterate(A, b, cost, basis, allowed, tol, max_iter, it0=0):
    it = it0
    cost_scale = max(1.0, np.abs(cost[allowed]).max()) if allowed.any() else 1.0
    while True:
        B = A[:, basis]
        try:
            xB = np.linalg.solve(B, b)
            y = np.linalg.solve(B.T, cost[basis])
        except np.linalg.LinAlgError:
            raise _Stop("numerical_failure", "singular basis")
        reduced = cost - A.T @ y
        reduced[basis] = 0.0
        cand = np.nonzero(allowed & (reduced < -tol * cost_scale))[0]
        if cand.size == 0:
            return xB, it
        if it >= max_iter:
            raise _Stop("numerical_failure", "iteration limit reached")
        j = int(cand[0])  # Bland: lowest index enters
        u = np.linalg.solve(B, A[:, j])
        rows = np.nonzero(u > tol)[0]
        if rows.size == 0:
            raise _Stop("unbounded", "objective unbounded below")
        ratios = np.maximum(xB[rows], 0.0) / u[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, best)]
        r = min(ties, key=lambda i: basis[i])  # Bland: lowest basic index leaves
        basis[r] = j
        it += 1


def simplex_min(c, A_ub, b_ub, tol: float = 1e-9, max_iter: int = 50_000) -> SimplexResult:
    c = np.asarray(c, dtype=float)
    A_ub = np.asarray(A_ub, dtype=float)
    b_ub = np.asarray(b_ub, dtype=float)
    m, n = A_ub.shape

    neg = np.nonzero(b_ub < 0)[0]
    n_art = neg.size
    width = n + m + n_art
    A = np.zeros((m, width))
    A[:, :n] = A_ub
    A[:, n:n + m] = np.eye(m)
    b = b_ub.copy()
    basis = list(range(n, n + m))
    for a, i in enumerate(neg):
        A[i, :n + m] *= -1
        b[i] *= -1
        A[i, n + m + a] = 1.0
        basis[i] = n + m + a
    basis = np.array(basis)

    it = 0
    try:
        if n_art:
            cost1 = np.zeros(width)
            cost1[n + m:] = 1.0
            allowed = np.ones(width, dtype=bool)
            xB, it = _iterate(A, b, cost1, basis, allowed, tol, max_iter)
            infeas = float(cost1[basis] @ xB)
            if infeas > tol * max(1.0, np.abs(b).max()):
                return SimplexResult("infeasible", None, None, it, f"phase one residual {infeas:g}")
            for r in range(m):
                if basis[r] >= n + m:
                    u = np.linalg.solve(A[:, basis], A[:, :n + m])[r]
                    nz = [j for j in np.nonzero(np.abs(u) > 1e-7)[0] if j not in basis]
                    if nz:
                        basis[r] = nz[0]
        cost2 = np.zeros(width)
        cost2[:n] = c
        allowed = np.zeros(width, dtype=bool)
        allowed[:n + m] = True
        xB, it = _iterate(A, b, cost2, basis, allowed, tol, max_iter, it)
    except _Stop as stop:
        return SimplexResult(stop.status, None, None, it, str(stop))

    full = np.zeros(width)
    full[basis] = xB
    x = full[:n]
    if not np.all(np.isfinite(x)):
        return SimplexResult("numerical_failure", None, None, it, "non-finite solution")
    return SimplexResult("optimal", x, float(c @ x), it, basis=tuple(int(j) for j in basis))


# ---------------------------------------------------------------------------
# Exact rational polishing


def _solve_exact(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over the rationals; None when singular."""
    m = len(M)
    aug = [row[:] + [r] for row, r in zip(M, rhs)]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        prow = [v / pv for v in aug[col]]
        aug[col] = prow
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], prow)]
    return [aug[r][m] for r in range(m)]


@dataclass
class ExactPolish:
    status: str  # optimal | unbounded | not_feasible | singular | pivot_limit
    x: list[Fraction] | None
    pivots: int


def polish_exact(c, A_ub, b_ub, basis, max_pivots: int = 200) -> ExactPolish:
    """Re-solve ``basis`` exactly and finish phase two with rational Bland pivots.

    ``c``, ``A_ub``, ``b_ub`` must hold exact values (ints or Fractions). Only
    succeeds when the starting basis is primal feasible in exact arithmetic.
    """
    m, n = len(A_ub), len(c)
    cols = [[Fraction(A_ub[i][j]) for i in range(m)] for j in range(n)]
    cols += [[Fraction(int(i == k)) for i in range(m)] for k in range(m)]
    cost = [Fraction(v) for v in c] + [Fraction(0)] * m
    b = [Fraction(v) for v in b_ub]
    basis = list(basis)
    if len(basis) != m or any(j >= n + m for j in basis):
        return ExactPolish("not_feasible", None, 0)

    pivots = 0
    while True:
        B = [[cols[j][i] for j in basis] for i in range(m)]
        xB = _solve_exact(B, b)
        if xB is None:
            return ExactPolish("singular", None, pivots)
        if any(v < 0 for v in xB):
            return ExactPolish("not_feasible", None, pivots)
        BT = [[cols[j][i] for i in range(m)] for j in basis]
        y = _solve_exact(BT, [cost[j] for j in basis])
        inb = set(basis)
        entering = None
        for j in range(n + m):
            if j in inb:
                continue
            if cost[j] - sum(yi * aij for yi, aij in zip(y, cols[j])) < 0:
                entering = j
                break
        if entering is None:
            full = [Fraction(0)] * (n + m)
            for r, j in enumerate(basis):
                full[j] = xB[r]
            return ExactPolish("optimal", full[:n], pivots)
        if pivots >= max_pivots:
            return ExactPolish("pivot_limit", None, pivots)
        u = _solve_exact(B, cols[entering])
        rows = [i for i in range(m) if u[i] > 0]
        if not rows:
            return ExactPolish("unbounded", None, pivots)
        best = min(xB[i] / u[i] for i in rows)
        r = min((i for i in rows if xB[i] / u[i] == best), key=lambda i: basis[i])
        basis[r] = entering
        pivots += 1
