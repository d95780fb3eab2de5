import dataclasses

import numpy as np
import pytest

from secrecy_game import (
    REFERENCE_CHANNEL,
    ReceivedPowers,
    corner_points,
    load_channel,
    reduce_game,
    solve_analytic,
    solve_grid_game,
)
from secrecy_game.analytic import AnalyticSolution, Segment, equilibrium_segments, finalize_cdf

# g_se values that put the reference channel (g_sd=10, g_rd=2.5, g_re=40/9)
# at a prescribed skew; found once with a root finder and frozen here
SKEW_CHANNELS = {
    0.0: 2.857142857142857,
    0.25: 3.435187564918445,
    0.6: 4.818842991262482,
    0.7: 5.412703046731233,
}


def powers_with_skew(a):
    return ReceivedPowers(g_sd=10.0, g_rd=2.5, g_se=SKEW_CHANNELS[a], g_re=40.0 / 9.0)


@pytest.fixture(scope="session")
def powers():
    return load_channel(REFERENCE_CHANNEL)


@pytest.fixture(scope="session")
def corners(powers):
    return corner_points(powers)


@pytest.fixture(scope="session")
def game(corners):
    return reduce_game(corners)


@pytest.fixture(scope="session")
def solution(game):
    return solve_analytic(game)


@pytest.fixture(scope="session")
def lp400(game, corners):
    return solve_grid_game(game, corners, 400)


@pytest.fixture(scope="session")
def lp100(game, corners):
    return solve_grid_game(game, corners, 100)


def corrupted_solution(sol: AnalyticSolution, factor: float) -> AnalyticSolution:
    """Scale alpha by ``factor``; the c.d.f. is capped at one to stay a distribution."""
    rg = sol.game
    alpha = sol.alpha * factor
    segments = tuple(
        Segment(s.x0, s.x1, lambda x, f=s.value: np.minimum(f(x), 1.0))
        for s in equilibrium_segments(rg.skew, sol.k, alpha)
    )
    src = finalize_cdf(rg.origin_xi, rg.edge, segments, "source")
    jam = finalize_cdf(rg.origin_eta, rg.edge, segments, "jammer")
    return dataclasses.replace(
        sol, alpha=alpha, value=rg.edge * alpha * (1 - rg.skew), cdf_source=src, cdf_jammer=jam
    )
