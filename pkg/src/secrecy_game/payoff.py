"""Rate-region geometry and the secrecy-rate payoff.

The source picks a codebook rate ``xi`` and the jammer a dummy rate ``eta``.
The destination decodes when the pair lies in the closed region

    {xi <= big_delta_s and xi + eta <= sum_d}  union  {xi <= big_omega_s}

and the eavesdropper region is the same shape with the ``small_*`` corners.
The payoff is the horizontal distance from the pair to the eavesdropper
boundary whenever the destination decodes and the eavesdropper does not.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import CornerPoints, check_conditions
from .errors import ConditionsViolated, DegenerateGame

DEGENERATE_EDGE = 1e-12
# closed-boundary slack so rounding never moves a grid point off a region edge
RATE_TOL = 1e-12


@dataclass(frozen=True)
class RatePair:
    xi: float
    eta: float

    def __post_init__(self):
        for name in ("xi", "eta"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class ReducedGame:
    """The square game left after removing dominated rates.

    Source rates span ``[origin_xi, origin_xi + edge]`` and jammer rates
    ``[origin_eta, origin_eta + edge]``; ``skew`` locates the eavesdropper
    boundary on the normalized square (payoff is positive for skew < u+v <= 1).
    """

    origin_xi: float
    origin_eta: float
    edge: float
    skew: float

    def xi_at(self, u):
        return self.origin_xi + self.edge * u

    def eta_at(self, v):
        return self.origin_eta + self.edge * v

    @property
    def max_payoff(self) -> float:
        return self.edge * (1.0 - self.skew)

    def as_dict(self) -> dict:
        return {"origin_xi": self.origin_xi, "origin_eta": self.origin_eta, "L": self.edge, "a": self.skew}


def _in_region(xi, eta, corner_s, sum_rate, noise_s):
    tol = RATE_TOL
    return (xi <= corner_s + tol and xi + eta <= sum_rate + tol) or xi <= noise_s + tol


def in_region_d(rp: RatePair, c: CornerPoints) -> bool:
    return _in_region(rp.xi, rp.eta, c.big_delta_s, c.sum_d, c.big_omega_s)


def in_region_e(rp: RatePair, c: CornerPoints) -> bool:
    return _in_region(rp.xi, rp.eta, c.small_delta_s, c.sum_e, c.small_omega_s)


def boundary_d(eta, c: CornerPoints):
    """Largest source rate the destination decodes against jammer rate ``eta``."""
    return np.clip(c.sum_d - np.asarray(eta, dtype=float), c.big_omega_s, c.big_delta_s)[()]


def boundary_e(eta, c: CornerPoints):
    """Largest source rate the eavesdropper decodes against jammer rate ``eta``."""
    return np.clip(c.sum_e - np.asarray(eta, dtype=float), c.small_omega_s, c.small_delta_s)[()]


def payoff_grid(xi, eta, c: CornerPoints) -> np.ndarray:
    """Vectorized payoff; ``xi`` and ``eta`` broadcast against each other."""
    xi = np.asarray(xi, dtype=float)
    be = boundary_e(eta, c)
    bd = boundary_d(eta, c)
    return np.where((xi > be + RATE_TOL) & (xi <= bd + RATE_TOL), xi - be, 0.0)


def secrecy_payoff(rp: RatePair, c: CornerPoints) -> float:
    if in_region_e(rp, c) or not in_region_d(rp, c):
        return 0.0
    return rp.xi - float(boundary_e(rp.eta, c))


def require_conditions(c: CornerPoints) -> None:
    report = check_conditions(c)
    if not report.all_hold:
        raise ConditionsViolated(report)


def pure_strategy_gap(c: CornerPoints, n: int = 401) -> tuple[float, float]:
    """Return (maximin, minimax) over pure rates.

    The closed forms are cross-checked against an ``n`` x ``n`` grid search;
    an AssertionError means the region geometry is not what the case gate
    promises.
    """
    require_conditions(c)
    maximin, minimax = 0.0, c.sum_d - c.sum_e

    xi_max, eta_max = c.big_delta_s, c.small_omega_r + 1.0
    xs = np.linspace(0.0, xi_max, n)
    es = np.linspace(0.0, eta_max, n)
    grid = payoff_grid(xs[:, None], es[None, :], c)
    grid_maximin = grid.min(axis=1).max()
    grid_minimax = grid.max(axis=0).min()
    tol = 2.0 * max(xi_max, eta_max) / (n - 1)
    if abs(grid_maximin - maximin) > tol or abs(grid_minimax - minimax) > tol:
        raise AssertionError(
            f"grid search disagrees: maximin {grid_maximin} vs {maximin}, minimax {grid_minimax} vs {minimax}"
        )
    return maximin, minimax


def reduce_game(c: CornerPoints) -> ReducedGame:
    require_conditions(c)
    edge = c.big_omega_r - c.small_delta_r
    if edge <= DEGENERATE_EDGE:
        raise DegenerateGame(f"edge length {edge!r} is not positive")
    skew = (c.small_delta_s - c.big_omega_s) / edge
    # the case gate allows 1e-12 slack; keep skew inside [0, 1]
    skew = min(max(skew, 0.0), 1.0)
    return ReducedGame(origin_xi=c.big_omega_s, origin_eta=c.small_delta_r, edge=edge, skew=skew)


def kernel_unit_square(u, v, rg: ReducedGame):
    """Payoff on the normalized square, ``L (u + v - a)`` on ``a < u + v <= 1``."""
    s = np.asarray(u, dtype=float) + np.asarray(v, dtype=float)
    tol = RATE_TOL / rg.edge
    return np.where((s > rg.skew + tol) & (s <= 1.0 + tol), rg.edge * (s - rg.skew), 0.0)[()]
