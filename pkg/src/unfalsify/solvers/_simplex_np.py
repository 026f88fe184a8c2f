"""Numpy implementation of the dense simplex pivot loops.

This is the fallback kernel; the compiled extension implements the same
routines with identical pivot selection, so both produce the same iterates.

Tableau layout: rows 0..m-1 are constraint rows in canonical form (basis
columns form an identity), row m is the objective row with reduced costs in
columns 0..n-1.  Column n is the right-hand side; T[m, n] holds minus the
current objective value.  All problems are minimizations over nonnegative
standard-form variables.

Status codes: 0 optimal, 1 unbounded, 2 infeasible, 3 iteration limit.
"""

from __future__ import annotations

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
INFEASIBLE = 2
ITER_LIMIT = 3


def _pivot(T: np.ndarray, basis: np.ndarray, r: int, col: int, n: int) -> None:
    piv = T[r, col]
    T[r, : n + 1] /= piv
    colvals = T[:, col].copy()
    colvals[r] = 0.0
    T[:, : n + 1] -= np.outer(colvals, T[r, : n + 1])
    T[:, col] = 0.0
    T[r, col] = 1.0
    basis[r] = col


def primal_loop(
    T: np.ndarray,
    basis: np.ndarray,
    eligible: np.ndarray,
    m: int,
    n: int,
    tol_cost: float,
    tol_piv: float,
    max_iter: int,
    stall_limit: int,
) -> tuple[int, int]:
    """Primal simplex from a primal-feasible canonical tableau.

    Entering: most negative reduced cost, lowest index on ties; after
    ``stall_limit`` consecutive degenerate pivots the rule switches to
    Bland's (lowest eligible index) until the objective moves again.
    Leaving: smallest ratio, smallest basis index on ties.
    """
    elig = eligible[:n].astype(bool)
    iters = 0
    bland = False
    stall = 0
    neg_obj_prev = T[m, n]
    while iters < max_iter:
        cbar = T[m, :n]
        mask = elig & (cbar < -tol_cost)
        if not mask.any():
            return OPTIMAL, iters
        if bland:
            col = int(np.argmax(mask))
        else:
            vals = np.where(mask, cbar, np.inf)
            col = int(np.argmin(vals))

        colvals = T[:m, col]
        pos = colvals > tol_piv
        if not pos.any():
            return UNBOUNDED, iters
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, n][pos] / colvals[pos]
        rmin = float(ratios.min())
        thr = rmin + 1e-12 + 1e-9 * rmin
        cand = ratios <= thr
        keys = np.where(cand, basis[:m], np.iinfo(np.int64).max)
        r = int(np.argmin(keys))

        _pivot(T, basis, r, col, n)
        iters += 1

        if T[m, n] > neg_obj_prev + 1e-12 * (1.0 + abs(neg_obj_prev)):
            neg_obj_prev = T[m, n]
            stall = 0
            bland = False
        else:
            stall += 1
            if stall >= stall_limit:
                bland = True
    return ITER_LIMIT, iters


def dual_loop(
    T: np.ndarray,
    basis: np.ndarray,
    eligible: np.ndarray,
    m: int,
    n: int,
    tol_cost: float,
    tol_piv: float,
    tol_rhs: float,
    max_iter: int,
) -> tuple[int, int]:
    """Dual simplex from a dual-feasible tableau with (possibly) negative
    right-hand sides, as produced by appending violated cut rows.

    Leaving: most negative rhs, smallest basis index on ties.  Entering:
    smallest dual ratio |cbar_j / T[r, j]| over eligible columns with
    negative row coefficient, lowest index on ties.
    """
    elig = eligible[:n].astype(bool)
    iters = 0
    while iters < max_iter:
        rhs = T[:m, n]
        rmin = float(rhs.min()) if m else 0.0
        if rmin >= -tol_rhs:
            return OPTIMAL, iters
        cand = rhs <= rmin + 1e-12 + 1e-9 * abs(rmin)
        keys = np.where(cand, basis[:m], np.iinfo(np.int64).max)
        r = int(np.argmin(keys))

        row = T[r, :n]
        neg = elig & (row < -tol_piv)
        if not neg.any():
            return INFEASIBLE, iters
        cbar = T[m, :n]
        ratios = np.where(neg, cbar / (-row), np.inf)
        tmin = float(ratios.min())
        thr = tmin + 1e-12 + 1e-9 * abs(tmin)
        pick = neg & (ratios <= thr)
        col = int(np.argmax(pick))

        _pivot(T, basis, r, col, n)
        iters += 1
    return ITER_LIMIT, iters
