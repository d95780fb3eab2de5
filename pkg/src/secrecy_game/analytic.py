"""Closed-form mixed equilibrium of the square game for skew a <= 2/3.

On the normalized square both equilibrium laws share one c.d.f. in the
stretched coordinate ``y = x / (1 - a)``::

    F(y) = alpha * S(y),   S(y) = sum_{j <= floor(y)} (-1)^j (y - j)^j e^(y - j) / j!

with an atom of mass ``alpha`` at the left endpoint and ``alpha`` fixed by
``F(1 / (1 - a)) = 1``.  Only the pieces j = 0, 1, 2 are implemented, which
covers the interval indices k = 0 and k = 1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

import numpy as np

from .errors import DomainError, NormalizationFailure, SkewAtOne, UnsupportedK
from .payoff import ReducedGame

E1 = math.exp(-1.0)
E2 = math.exp(-2.0)

SEAM_TOL = 1e-9
RESIDUAL_ATOM_MIN = 1e-6
RESIDUAL_ATOM_MAX = 0.05
MONOTONE_TOL = 1e-12


def _piece0(y):
    return np.exp(y)


def _piece1(y):
    return np.exp(y) * (1.0 + E1 - y * E1)


def _piece2(y):
    return np.exp(y) * (1.0 + E1 + 2.0 * E2 - y * (E1 + 2.0 * E2) + y * y * E2 / 2.0)


_PIECES = (_piece0, _piece1, _piece2)


def interval_index(a: float) -> int:
    """Index k with k/(k+1) < a <= (k+1)/(k+2); a = 0 maps to k = 0."""
    if not 0.0 <= a:
        raise DomainError(f"skew must be >= 0, got {a!r}")
    if a >= 1.0 - 1e-12:
        raise SkewAtOne(f"skew {a!r} has no finite interval index")
    ratio = a / (1.0 - a)
    return max(0, math.ceil(ratio - SEAM_TOL) - 1)


def alpha_g0(a: float) -> float:
    if not -SEAM_TOL <= a <= 0.5 + SEAM_TOL:
        raise DomainError(f"g0 is defined on [0, 1/2], got a={a!r}")
    s = 1.0 / (1.0 - a)
    return math.exp(-s) / (1.0 - a * s * E1)


def alpha_g1(a: float) -> float:
    if not 0.5 < a <= 2.0 / 3.0 + SEAM_TOL:
        raise DomainError(f"g1 is defined on (1/2, 2/3], got a={a!r}")
    s = 1.0 / (1.0 - a)
    denom = 1.0 + E1 + 2.0 * E2 - (E1 + 2.0 * E2) * s + E2 * s * s / 2.0
    return math.exp(-s) / denom


@dataclass(frozen=True)
class Segment:
    """``value(x)`` gives F on ``[x0, x1]`` in the normalized coordinate."""

    x0: float
    x1: float
    value: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PiecewiseCdf:
    support_start: float
    edge: float
    segments: tuple[Segment, ...]
    atoms: tuple[tuple[float, float], ...] = ()
    role: str = "source"

    @property
    def support_end(self) -> float:
        return self.support_start + self.edge

    @property
    def seams(self) -> np.ndarray:
        """Rates where one analytic piece hands over to the next."""
        return self.support_start + self.edge * np.array([s.x1 for s in self.segments[:-1]])

    def _eval_normalized(self, x: np.ndarray) -> np.ndarray:
        out = np.where(x < 0.0, 0.0, 1.0)
        inside = (x >= 0.0) & (x < 1.0)
        for seg in self.segments:
            sel = inside & (x >= seg.x0) & (x <= seg.x1)
            if sel.any():
                out[sel] = seg.value(x[sel])
            inside &= ~sel
        return out

    def __call__(self, rate):
        x = (np.asarray(rate, dtype=float) - self.support_start) / self.edge
        return self._eval_normalized(np.atleast_1d(x)).reshape(np.shape(x))[()]

    def continuous_part(self, rate):
        """F minus the atoms located at or left of ``rate``."""
        rate = np.asarray(rate, dtype=float)
        out = np.asarray(self(rate), dtype=float).copy()
        for loc, mass in self.atoms:
            out = out - mass * (rate >= loc)
        return out[()]

    def right_limit_before_end(self) -> float:
        return float(self.segments[-1].value(np.array([1.0]))[0])

    def atom_mass_at(self, rate: float) -> float:
        return sum(m for loc, m in self.atoms if loc == rate)


def cdf_eval(cdf: PiecewiseCdf, rate):
    return cdf(rate)


def finalize_cdf(
    support_start: float,
    edge: float,
    segments: tuple[Segment, ...],
    role: str,
    grid: int = 10_001,
) -> PiecewiseCdf:
    """Attach atoms to ``segments`` and check the distribution invariants.

    The jump at the left endpoint becomes an explicit atom.  A small shortfall
    at the right endpoint is assigned as a right atom with a warning, anything
    larger (or any decrease of F) is a NormalizationFailure.
    """
    probe = PiecewiseCdf(support_start, edge, segments, (), role)
    x = np.linspace(0.0, 1.0, grid)
    vals = probe._eval_normalized(x)
    vals[-1] = probe.right_limit_before_end()
    if not np.all(np.isfinite(vals)):
        raise NormalizationFailure("c.d.f. is not finite on its support")
    drops = np.diff(vals)
    if drops.min() < -MONOTONE_TOL:
        at = x[int(np.argmin(drops))]
        raise NormalizationFailure(f"c.d.f. decreases by {-drops.min():.3g} near x={at:.4f}")
    if vals[0] < -MONOTONE_TOL:
        raise NormalizationFailure(f"c.d.f. starts below zero ({vals[0]:.3g})")

    atoms = []
    if vals[0] > 0.0:
        atoms.append((support_start, float(vals[0])))
    residual = 1.0 - float(vals[-1])
    if residual < -RESIDUAL_ATOM_MIN:
        raise NormalizationFailure(f"c.d.f. exceeds one at the right endpoint by {-residual:.3g}")
    if residual >= RESIDUAL_ATOM_MAX:
        raise NormalizationFailure(f"c.d.f. misses {residual:.3g} of mass at the right endpoint")
    if residual > RESIDUAL_ATOM_MIN:
        warnings.warn(f"assigning residual mass {residual:.3g} to the right endpoint", RuntimeWarning)
        atoms.append((support_start + edge, residual))
    return PiecewiseCdf(support_start, edge, segments, tuple(atoms), role)


def _scaled_piece(piece, alpha, stretch, x):
    return alpha * piece(x * stretch)


def equilibrium_segments(skew: float, k: int, alpha: float) -> tuple[Segment, ...]:
    width = 1.0 - skew
    stretch = 1.0 / width
    segments = []
    # interval index k spans k + 2 pieces
    for j in range(k + 2):
        x1 = (j + 1) * width if j <= k else 1.0
        segments.append(Segment(j * width, x1, partial(_scaled_piece, _PIECES[j], alpha, stretch)))
    return tuple(segments)


@dataclass(frozen=True)
class AnalyticSolution:
    k: int
    alpha: float
    value: float
    cdf_source: PiecewiseCdf
    cdf_jammer: PiecewiseCdf
    game: ReducedGame = field(repr=False)

    def as_dict(self) -> dict:
        return {"k": self.k, "alpha": self.alpha, "value": self.value, **self.game.as_dict()}


def solve_analytic(rg: ReducedGame, alpha: float | None = None) -> AnalyticSolution:
    """Closed-form equilibrium for k in {0, 1}.

    ``alpha`` overrides the normalizing constant; it exists for negative
    controls and will usually fail normalization.
    """
    k = interval_index(rg.skew)
    if k > 1:
        raise UnsupportedK(k)
    if alpha is None:
        alpha = alpha_g0(rg.skew) if k == 0 else alpha_g1(rg.skew)
    segments = equilibrium_segments(rg.skew, k, alpha)
    cdf_source = finalize_cdf(rg.origin_xi, rg.edge, segments, "source")
    cdf_jammer = finalize_cdf(rg.origin_eta, rg.edge, segments, "jammer")
    value = rg.edge * alpha * (1.0 - rg.skew)
    return AnalyticSolution(k, alpha, value, cdf_source, cdf_jammer, rg)


def sample(cdf: PiecewiseCdf, uniform):
    """Generalized inverse of ``cdf`` at ``uniform`` (scalar or array)."""
    u = np.atleast_1d(np.asarray(uniform, dtype=float))
    x_lo = np.zeros_like(u)
    x_hi = np.ones_like(u)
    left_mass = sum(m for loc, m in cdf.atoms if loc == cdf.support_start)
    at_left = u < left_mass
    at_right = u >= cdf.right_limit_before_end()
    # bisection on the continuous part; 55 halvings exhaust double precision
    for _ in range(55):
        mid = 0.5 * (x_lo + x_hi)
        below = cdf._eval_normalized(mid) < u
        x_lo = np.where(below, mid, x_lo)
        x_hi = np.where(below, x_hi, mid)
    x = x_hi
    x[at_left] = 0.0
    x[at_right] = 1.0
    out = cdf.support_start + cdf.edge * x
    return out.reshape(np.shape(uniform))[()]
