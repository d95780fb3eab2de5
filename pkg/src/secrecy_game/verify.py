"""Best-response certification and the block-level rate simulation."""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Union

import numpy as np

from . import analytic
from .analytic import AnalyticSolution, PiecewiseCdf
from .channel import CornerPoints
from .discrete import DiscreteSolution, DiscreteStrategy
from .payoff import ReducedGame, boundary_d, boundary_e, payoff_grid

MixedStrategy = Union[PiecewiseCdf, DiscreteStrategy]

INTEGRATION_POINTS = 4001
SIM_CHUNK = 1 << 16
# one-sided limits at jumps are read this far inside each cell; the absolute
# floor must stay well above payoff.RATE_TOL
_NUDGE = 1e-9
_NUDGE_FLOOR = 1e-10


def _inward(width):
    return np.minimum(0.25 * width, np.maximum(_NUDGE * width, _NUDGE_FLOOR))


def sig12(x: float) -> float:
    return float(f"{x:.12g}")


def _rounded(d: dict) -> dict:
    return {k: sig12(v) if isinstance(v, float) else v for k, v in d.items()}


@dataclass(frozen=True)
class EquilibriumReport:
    claimed_value: float
    best_response_source: float
    best_response_jammer: float
    epsilon: float
    passed: bool

    def to_dict(self) -> dict:
        return _rounded(asdict(self))

    @classmethod
    def from_dict(cls, d: dict) -> "EquilibriumReport":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__})

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class SimulationReport:
    blocks: int
    seed: int
    empirical_mean: float
    std_error: float
    target: float

    def to_dict(self) -> dict:
        return _rounded(asdict(self))

    @classmethod
    def from_dict(cls, d: dict) -> "SimulationReport":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__})

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _payoff(strategy_role: str, rates, pure_rate, c: CornerPoints):
    if strategy_role == "source":
        return payoff_grid(rates, pure_rate, c)
    return payoff_grid(pure_rate, rates, c)


def _breakpoints(role: str, pure_rate: float, c: CornerPoints) -> list[float]:
    """Rates of the mixed player where the payoff jumps or kinks."""
    if role == "source":
        return [float(boundary_e(pure_rate, c)), float(boundary_d(pure_rate, c))]
    return [
        c.sum_e - pure_rate,
        c.sum_d - pure_rate,
        c.sum_e - c.small_delta_s,
        c.sum_e - c.small_omega_s,
        c.sum_d - c.big_delta_s,
        c.sum_d - c.big_omega_s,
    ]


def expected_payoff_vs(
    strategy: MixedStrategy,
    pure_rate: float,
    c: CornerPoints,
    n_points: int = INTEGRATION_POINTS,
) -> float:
    """Expected payoff when ``strategy``'s owner mixes and the other plays ``pure_rate``.

    Piecewise c.d.f.s are integrated in the Riemann-Stieltjes sense: atoms
    exactly, the continuous part by the trapezoid rule on a uniform grid
    refined with every jump of the payoff and every seam of the c.d.f.
    """
    role = strategy.role
    if isinstance(strategy, DiscreteStrategy):
        return float(_payoff(role, strategy.rates, pure_rate, c) @ strategy.probs)

    lo, hi = strategy.support_start, strategy.support_end
    extra = [b for b in _breakpoints(role, pure_rate, c) if lo < b < hi]
    grid = np.union1d(np.linspace(lo, hi, n_points), np.concatenate([strategy.seams, extra]))
    mass = np.diff(strategy.continuous_part(grid))
    step = _inward(np.diff(grid))
    left = _payoff(role, grid[:-1] + step, pure_rate, c)
    right = _payoff(role, grid[1:] - step, pure_rate, c)
    total = float(np.sum(0.5 * (left + right) * mass))
    for loc, m in strategy.atoms:
        total += m * float(_payoff(role, loc, pure_rate, c))
    return total


def _strategies(sol) -> tuple[MixedStrategy, MixedStrategy]:
    if isinstance(sol, AnalyticSolution):
        return sol.cdf_source, sol.cdf_jammer
    if isinstance(sol, DiscreteSolution):
        return sol.source, sol.jammer
    raise TypeError(f"cannot certify {type(sol).__name__}")


def _atoms(strategy: MixedStrategy) -> np.ndarray:
    if isinstance(strategy, DiscreteStrategy):
        return strategy.rates[strategy.probs > 0]
    return np.array([loc for loc, _ in strategy.atoms])


def best_responses(
    source: MixedStrategy,
    jammer: MixedStrategy,
    rg: ReducedGame,
    c: CornerPoints,
    grid_density: int,
    n_points: int = INTEGRATION_POINTS,
) -> tuple[float, float]:
    """(max over pure xi vs ``jammer``, min over pure eta vs ``source``) on the square."""
    xs = rg.xi_at(np.linspace(0.0, 1.0, grid_density))
    # the source's payoff drops right after the destination boundary of a jammer atom
    xs_extra = boundary_d(_atoms(jammer), c)
    xs = np.union1d(xs, np.clip(xs_extra, rg.origin_xi, rg.origin_xi + rg.edge))
    es = rg.eta_at(np.linspace(0.0, 1.0, grid_density))
    # the jammer's infimum sits just past the point that knocks a source atom out
    es_extra = c.sum_d - _atoms(source) + _NUDGE_FLOOR
    es_extra = es_extra[(es_extra >= rg.origin_eta) & (es_extra <= rg.origin_eta + rg.edge)]
    es = np.union1d(es, es_extra)

    br_source = max(expected_payoff_vs(jammer, x, c, n_points) for x in xs)
    br_jammer = min(expected_payoff_vs(source, e, c, n_points) for e in es)
    return br_source, br_jammer


def equilibrium_check(
    sol,
    rg: ReducedGame,
    c: CornerPoints,
    epsilon: float,
    grid_density: int | None = None,
    claimed_value: float | None = None,
) -> EquilibriumReport:
    """Certify ``sol`` as an epsilon-equilibrium of the continuous square game.

    A discrete solution with ``grid_density=None`` is checked against its own
    matrix (this reproduces the LP certificate).  Otherwise pure strategies
    are scanned on ``grid_density`` points per side plus the breakpoints the
    opponent's atoms create.
    """
    value = sol.value if claimed_value is None else claimed_value
    if isinstance(sol, DiscreteSolution) and grid_density is None:
        A = sol.matrix.entries
        br_source = float((A @ sol.lp.col_strategy).max())
        br_jammer = float((sol.lp.row_strategy @ A).min())
    else:
        source, jammer = _strategies(sol)
        density = grid_density if grid_density is not None else 4 * 400 + 1
        br_source, br_jammer = best_responses(source, jammer, rg, c, density)
    value = float(value)
    passed = br_source <= value + epsilon and br_jammer >= value - epsilon
    return EquilibriumReport(value, float(br_source), float(br_jammer), float(epsilon), bool(passed))


def expected_payoff_pair(
    source: MixedStrategy, jammer: MixedStrategy, c: CornerPoints, n_outer: int = 2001, n_inner: int = INTEGRATION_POINTS
) -> float:
    """E[payoff] when both players mix independently (nested Stieltjes)."""
    inner = lambda x: expected_payoff_vs(jammer, x, c, n_inner)
    if isinstance(source, DiscreteStrategy):
        return float(sum(p * inner(x) for x, p in zip(source.rates, source.probs) if p > 0))
    lo, hi = source.support_start, source.support_end
    extras = [b for b in boundary_d(_atoms(jammer), c).ravel() if lo < b < hi]
    grid = np.union1d(np.linspace(lo, hi, n_outer), np.concatenate([source.seams, extras]))
    mass = np.diff(source.continuous_part(grid))
    step = _inward(np.diff(grid))
    left = np.array([inner(x) for x in grid[:-1] + step])
    right = np.array([inner(x) for x in grid[1:] - step])
    total = float(np.sum(0.5 * (left + right) * mass))
    for loc, m in source.atoms:
        total += m * inner(loc)
    return total


def draw(strategy: MixedStrategy, uniform):
    if isinstance(strategy, DiscreteStrategy):
        return strategy.sample(uniform)
    return analytic.sample(strategy, uniform)


def _chunk_payoffs(source, jammer, c, seed, index, size):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    u = rng.random((2, size))
    return payoff_grid(draw(source, u[0]), draw(jammer, u[1]), c)


def simulate_blocks(
    source: MixedStrategy,
    jammer: MixedStrategy,
    c: CornerPoints,
    blocks: int,
    seed: int,
    target: float = math.nan,
    workers: int = 1,
) -> SimulationReport:
    """Play ``blocks`` independent rounds, each with fresh rates from both laws.

    Block ``b`` always uses the sub-stream of chunk ``b // SIM_CHUNK``, so the
    report does not depend on ``workers``.
    """
    if blocks < 1:
        raise ValueError("blocks must be >= 1")
    sizes = [min(SIM_CHUNK, blocks - start) for start in range(0, blocks, SIM_CHUNK)]
    jobs = [(source, jammer, c, seed, i, n) for i, n in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda job: _chunk_payoffs(*job), jobs))
    else:
        parts = [_chunk_payoffs(*job) for job in jobs]
    payoffs = np.concatenate(parts)
    # deviations from the first block keep a constant stream exact
    pivot = float(payoffs[0])
    dev = payoffs - pivot
    mean = pivot + float(dev.mean())
    std_error = float(dev.std(ddof=1) / math.sqrt(blocks)) if blocks > 1 else 0.0
    return SimulationReport(blocks, seed, mean, std_error, float(target))
