"""Helpers for randomized self-checks; also used by the test suite."""

from __future__ import annotations

import numpy as np

from .grids import TimeGrid, TwoTimeMatrix

__all__ = ["random_defective_df"]


def random_defective_df(
    rng: np.random.Generator,
    n_points: int,
    origin: float = 0.0,
    step_h: float = 1.0,
    min_mass: float = 0.3,
) -> TwoTimeMatrix:
    """Random waiting-time distribution matrix with defective rows.

    Each row spreads a random total mass in [min_mass, 1] over its lags via
    a flat Dirichlet draw, so every reachable cell keeps non-negligible
    probability (which keeps Monte Carlo comparisons well-conditioned).
    The last row is identically zero, as it has no lags left on the grid.
    """
    values = np.zeros((n_points, n_points))
    for s in range(n_points - 1):
        mass = rng.uniform(min_mass, 1.0)
        inc = rng.dirichlet(np.ones(n_points - 1 - s)) * mass
        values[s, s + 1 :] = np.cumsum(inc)
    grid = TimeGrid(origin, step_h, n_points)
    return TwoTimeMatrix(grid, values, "distribution")
