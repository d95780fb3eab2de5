"""Grid approximation of the square game and its exact matrix-game solution."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channel import CornerPoints
from .errors import SolverFailure
from .payoff import ReducedGame, payoff_grid
from .simplex import simplex_max

CERTIFICATE_TOL = 1e-8
DEFAULT_T = 200
ACCEPTANCE_T = 400


@dataclass(frozen=True)
class PayoffMatrix:
    """Rows are source rates (maximizer), columns jammer rates (minimizer)."""

    t: int
    entries: np.ndarray
    xi: np.ndarray
    eta: np.ndarray

    def xi_of(self, i: int) -> float:
        return float(self.xi[i])

    def eta_of(self, j: int) -> float:
        return float(self.eta[j])


@dataclass(frozen=True)
class DiscreteStrategy:
    """Finite mixture: probability ``probs[i]`` on rate ``rates[i]``."""

    rates: np.ndarray
    probs: np.ndarray
    role: str = "source"

    def __call__(self, rate):
        """Cumulative distribution function (right-continuous step)."""
        cum = np.cumsum(self.probs)
        idx = np.searchsorted(self.rates, np.asarray(rate, dtype=float), side="right")
        return np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)[()]

    def sample(self, uniform):
        cum = np.cumsum(self.probs)
        cum[-1] = 1.0
        idx = np.searchsorted(cum, np.asarray(uniform, dtype=float), side="right")
        return self.rates[np.minimum(idx, len(self.rates) - 1)]


@dataclass(frozen=True)
class MatrixGameSolution:
    value: float
    row_strategy: np.ndarray
    col_strategy: np.ndarray
    certificate: tuple[float, float]
    iterations: int = 0


@dataclass(frozen=True)
class DiscreteSolution:
    matrix: PayoffMatrix
    lp: MatrixGameSolution

    @property
    def value(self) -> float:
        return self.lp.value

    @property
    def source(self) -> DiscreteStrategy:
        return DiscreteStrategy(self.matrix.xi, self.lp.row_strategy, "source")

    @property
    def jammer(self) -> DiscreteStrategy:
        return DiscreteStrategy(self.matrix.eta, self.lp.col_strategy, "jammer")


def build_grid_game(rg: ReducedGame, c: CornerPoints, t: int, origin: str = "big_omega_s") -> PayoffMatrix:
    """Sample the reduced square on a (t+1) x (t+1) grid.

    ``origin="small_omega_s"`` starts the source grid at the eavesdropper's
    treat-as-noise corner instead of the reduced square; only useful for
    comparing against that reading of the grid definition.
    """
    if not 2 <= t <= 5000:
        raise ValueError(f"grid parameter t must lie in [2, 5000], got {t}")
    if origin == "big_omega_s":
        xi0 = rg.origin_xi
    elif origin == "small_omega_s":
        xi0 = c.small_omega_s
    else:
        raise ValueError(f"unknown grid origin {origin!r}")
    steps = np.arange(t + 1) / t
    xi = xi0 + rg.edge * steps
    eta = rg.origin_eta + rg.edge * steps
    entries = payoff_grid(xi[:, None], eta[None, :], c)
    return PayoffMatrix(t=t, entries=entries, xi=xi, eta=eta)


def _clean(p: np.ndarray) -> np.ndarray:
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def solve_matrix_game_lp(m, max_iter: int | None = None) -> MatrixGameSolution:
    """Optimal mixed strategies of the zero-sum game with payoff matrix ``m``.

    The column player's problem  max 1.y  s.t.  (A + s) y <= 1  is solved by
    the in-repo simplex; the row strategy comes from its dual.
    """
    A = np.asarray(m.entries if isinstance(m, PayoffMatrix) else m, dtype=float)
    if A.ndim != 2 or A.size == 0 or not np.all(np.isfinite(A)):
        raise ValueError("payoff matrix must be a finite, non-empty 2-D array")
    rows, cols = A.shape
    if max_iter is None:
        max_iter = 50 * (max(rows, cols) + 1)

    shift = 1.0 + abs(float(A.min()))
    lp = simplex_max(np.ones(cols), A + shift, np.ones(rows), max_iter=max_iter)
    total = lp.x.sum()
    if not total > 0:
        raise SolverFailure("degenerate LP solution")
    col = _clean(lp.x)
    row = _clean(lp.dual)
    value = 1.0 / total - shift

    lower = float((row @ A).min())
    upper = float((A @ col).max())
    if lower < value - CERTIFICATE_TOL or upper > value + CERTIFICATE_TOL:
        raise SolverFailure(f"optimality certificate failed: [{lower}, {upper}] vs value {value}")
    return MatrixGameSolution(value, row, col, (lower, upper), lp.iterations)


def solve_grid_game(rg: ReducedGame, c: CornerPoints, t: int = DEFAULT_T, origin: str = "big_omega_s") -> DiscreteSolution:
    matrix = build_grid_game(rg, c, t, origin=origin)
    return DiscreteSolution(matrix, solve_matrix_game_lp(matrix))


def fictitious_play(m, iterations: int, seed=None) -> tuple[float, float]:
    """Brown-Robinson play; returns bounds that bracket the game value.

    The lower bound is the best security level any empirical row mixture has
    reached, the upper bound the same for the columns.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    A = np.asarray(m.entries if isinstance(m, PayoffMatrix) else m, dtype=float)
    rng = np.random.default_rng(seed)
    rows, cols = A.shape
    row_gain = np.zeros(rows)  # payoff of each row against the column history
    col_loss = np.zeros(cols)  # payoff of each column against the row history
    i = int(rng.integers(rows))
    j = int(rng.integers(cols))
    low, high = -math.inf, math.inf
    for n in range(1, iterations + 1):
        row_gain += A[:, j]
        col_loss += A[i, :]
        low = max(low, col_loss.min() / n)
        high = min(high, row_gain.max() / n)
        i = int(np.argmax(row_gain))
        j = int(np.argmin(col_loss))
    return low, high


def discretization_bound(rg: ReducedGame, t) -> float:
    return 2.0 * math.sqrt(2.0) * rg.edge / t


def write_matrix_csv(m: PayoffMatrix, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "xi", "eta", "payoff"])
        for i in range(m.t + 1):
            for j in range(m.t + 1):
                w.writerow([i, j, f"{m.xi[i]:.12g}", f"{m.eta[j]:.12g}", f"{m.entries[i, j]:.12g}"])


def write_strategy_csv(strategy: DiscreteStrategy, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "rate", "probability"])
        for i, (r, p) in enumerate(zip(strategy.rates, strategy.probs)):
            w.writerow([i, f"{r:.12g}", f"{p:.12g}"])
