"""Dense tableau simplex for  max c.x  s.t.  A x <= b,  x >= 0,  b >= 0.

With b >= 0 the slack basis is feasible, so no phase one is needed.  That is
all the matrix-game reduction requires.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverFailure

PIVOT_TOL = 1e-11
# switch from Dantzig pricing to Bland's rule after this many degenerate pivots
DEGENERATE_STREAK = 50


@dataclass
class LPResult:
    x: np.ndarray
    dual: np.ndarray
    objective: float
    iterations: int
    basis: np.ndarray


def simplex_max(c, A, b, max_iter: int | None = None) -> LPResult:
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if np.any(b < 0):
        raise ValueError("simplex_max needs b >= 0")
    if max_iter is None:
        max_iter = 50 * (max(m, n) + 1)

    # rows 0..m-1 constraints, row m objective (reduced costs, negated)
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = A
    tab[:m, n : n + m] = np.eye(m)
    tab[:m, -1] = b
    tab[m, :n] = -c
    basis = np.arange(n, n + m)

    degenerate = 0
    it = 0
    while True:
        obj = tab[m, :-1]
        if degenerate >= DEGENERATE_STREAK:
            candidates = np.flatnonzero(obj < -PIVOT_TOL)
            if candidates.size == 0:
                break
            col = candidates[0]
        else:
            col = int(np.argmin(obj))
            if obj[col] >= -PIVOT_TOL:
                break
        if it >= max_iter:
            raise SolverFailure(f"simplex exceeded {max_iter} iterations")
        column = tab[:m, col]
        pos = column > PIVOT_TOL
        if not pos.any():
            raise SolverFailure("linear program is unbounded")
        ratios = np.full(m, np.inf)
        ratios[pos] = tab[:m, -1][pos] / column[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12 * max(1.0, best))
        # Bland: among tied rows leave the smallest basic index
        row = ties[np.argmin(basis[ties])]
        degenerate = degenerate + 1 if best <= 1e-14 else 0

        tab[row] /= tab[row, col]
        factor = tab[:, col].copy()
        factor[row] = 0.0
        tab -= np.outer(factor, tab[row])
        basis[row] = col
        it += 1

    return _resolve_basis(c, A, b, basis, it)


def _resolve_basis(c, A, b, basis, iterations) -> LPResult:
    """Recompute primal and dual values from the final basis directly."""
    m, n = A.shape
    full = np.hstack([A, np.eye(m)])
    cost = np.concatenate([c, np.zeros(m)])
    B = full[:, basis]
    try:
        xb = np.linalg.solve(B, b)
        dual = np.linalg.solve(B.T, cost[basis])
    except np.linalg.LinAlgError as exc:
        raise SolverFailure(f"final basis is singular: {exc}") from None
    z = np.zeros(n + m)
    z[basis] = xb
    x = z[:n]
    return LPResult(x=x, dual=dual, objective=float(c @ x), iterations=iterations, basis=basis.copy())
