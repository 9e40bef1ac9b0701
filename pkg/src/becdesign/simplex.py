"""Dense two-phase simplex for the small linear programs in this toolkit.

The programs solved here have a handful of variables and at most a few
thousand inequality rows, so a dense tableau is simpler and fast enough.
Maximization form throughout:

    maximize  c.x   s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
"""

from __future__ import annotations

import numpy as np

from .errors import InfeasibleSearchError

PIVOT_TOL = 1e-11
OPT_TOL = 1e-10


class UnboundedError(RuntimeError):
    pass


def _pivot(M, basis, row, col):
    M[row] /= M[row, col]
    factors = M[:, col].copy()
    factors[row] = 0.0
    M -= np.outer(factors, M[row])
    basis[row] = col


def _run(M, basis, obj, allowed, maxiter):
    """Push the tableau to optimality for the given objective row."""
    ncol = M.shape[1] - 1
    bland_after = maxiter // 2
    for it in range(maxiter):
        red = obj - obj[basis] @ M[:, :ncol]
        red[~allowed] = -np.inf
        if it < bland_after:
            j = int(np.argmax(red))
            if red[j] <= OPT_TOL:
                return
        else:
            # Bland's rule to break degenerate cycling
            pos = np.nonzero(red > OPT_TOL)[0]
            if pos.size == 0:
                return
            j = int(pos[0])
        col = M[:, j]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(col > PIVOT_TOL, M[:, -1] / col, np.inf)
        r = int(np.argmin(ratios))
        if not np.isfinite(ratios[r]):
            raise UnboundedError("objective unbounded above")
        _pivot(M, basis, r, j)
    raise RuntimeError("simplex iteration limit reached")


def maximize(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, maxiter=20000):
    """Solve the LP; returns (x, objective value).

    Raises InfeasibleSearchError when no feasible point exists and
    UnboundedError when the objective is unbounded.
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    blocks_A = []
    blocks_b = []
    n_ub = 0
    if A_ub is not None and len(A_ub):
        A_ub = np.asarray(A_ub, dtype=float).reshape(-1, n)
        b_ub = np.asarray(b_ub, dtype=float).ravel()
        n_ub = A_ub.shape[0]
        blocks_A.append(A_ub)
        blocks_b.append(b_ub)
    n_eq = 0
    if A_eq is not None and len(A_eq):
        A_eq = np.asarray(A_eq, dtype=float).reshape(-1, n)
        b_eq = np.asarray(b_eq, dtype=float).ravel()
        n_eq = A_eq.shape[0]
        blocks_A.append(A_eq)
        blocks_b.append(b_eq)
    m = n_ub + n_eq
    if m == 0:
        raise ValueError("at least one constraint is required")
    A = np.vstack(blocks_A)
    b = np.concatenate(blocks_b)
    is_eq = np.zeros(m, dtype=bool)
    is_eq[n_ub:] = True

    flip = b < 0.0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # slack (+1) for ordinary <= rows, surplus (-1) for flipped ones
    slack = np.zeros((m, n_ub))
    for i in range(n_ub):
        slack[i, i] = -1.0 if flip[i] else 1.0
    needs_art = is_eq | flip
    art_rows = np.nonzero(needs_art)[0]
    art = np.zeros((m, art_rows.size))
    for k, i in enumerate(art_rows):
        art[i, k] = 1.0

    M = np.hstack([A, slack, art, b[:, None]])
    ncol = n + n_ub + art_rows.size
    basis = np.empty(m, dtype=np.int64)
    art_of_row = {int(i): n + n_ub + k for k, i in enumerate(art_rows)}
    for i in range(m):
        basis[i] = art_of_row.get(i, n + i)

    allowed = np.ones(ncol, dtype=bool)
    if art_rows.size:
        obj1 = np.zeros(ncol)
        obj1[n + n_ub:] = -1.0
        _run(M, basis, obj1, allowed, maxiter)
        resid = sum(M[i, -1] for i in range(m) if basis[i] >= n + n_ub)
        if resid > 1e-7:
            raise InfeasibleSearchError(
                f"no feasible point (phase-1 residual {resid:.3e})"
            )
        # force leftover zero-level artificials out of the basis
        for i in range(m):
            if basis[i] >= n + n_ub:
                row = M[i, : n + n_ub]
                j = int(np.argmax(np.abs(row)))
                if abs(row[j]) > PIVOT_TOL:
                    _pivot(M, basis, i, j)
        allowed[n + n_ub:] = False

    obj2 = np.zeros(ncol)
    obj2[:n] = c
    _run(M, basis, obj2, allowed, maxiter)

    x = np.zeros(ncol)
    x[basis] = M[:, -1]
    x = x[:n]
    return x, float(c @ x)
