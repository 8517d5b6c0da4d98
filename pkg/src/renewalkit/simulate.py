"""Monte Carlo sampling of non-homogeneous renewal paths.

Used as an independent oracle for the solvers: simulate many paths, count
renewals, compare the empirical mean with the solved renewal function.
Sampling is plain inverse transform on the cumulative rows of F; rows may
be defective, in which case the draw can land beyond the row total and the
path ends there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import TwoTimeMatrix

__all__ = ["RNG_NAME", "RenewalEstimate", "SimConfig", "estimate_renewal_function", "sample_path"]

RNG_NAME = "PCG64"


@dataclass(frozen=True)
class SimConfig:
    n_paths: int
    seed: int
    start_idx: int
    horizon_idx: int

    def __post_init__(self) -> None:
        if self.n_paths < 1:
            raise ValueError(f"n_paths must be >= 1, got {self.n_paths}")
        if self.start_idx > self.horizon_idx:
            raise ValueError(
                f"start_idx {self.start_idx} must not exceed horizon_idx {self.horizon_idx}"
            )
        if self.start_idx < 0:
            raise ValueError(f"start_idx must be >= 0, got {self.start_idx}")


@dataclass(frozen=True)
class RenewalEstimate:
    """Per-t Monte Carlo estimates of H(start, t), t = start..horizon."""

    start_idx: int
    horizon_idx: int
    means: np.ndarray = field(repr=False)
    std_errs: np.ndarray = field(repr=False)
    #: empirical pmf of the renewal count at the horizon
    terminal_pmf: np.ndarray = field(repr=False)
    n_paths: int = 0
    seed: int = 0
    rng_name: str = RNG_NAME

    def t_indices(self) -> np.ndarray:
        return np.arange(self.start_idx, self.horizon_idx + 1)


def _next_index(row: np.ndarray, u: float) -> int | None:
    """Smallest t with F(cur, t) >= u, or None when u is past the row total."""
    if u > row[-1]:
        return None
    return int(np.searchsorted(row, u, side="left"))


def sample_path(
    F: TwoTimeMatrix, start_idx: int, horizon_idx: int, rng: np.random.Generator
) -> list[int]:
    """One renewal path: strictly increasing indices in (start, horizon].

    Each step inverts the cumulative row of the current renewal age with a
    uniform draw on (0, 1]; a draw past the row total means no further
    renewal on the grid.
    """
    n = F.n_points
    if not 0 <= start_idx <= horizon_idx < n:
        raise ValueError(f"need 0 <= start <= horizon < {n}, got ({start_idx}, {horizon_idx})")
    vals = F.values
    path: list[int] = []
    cur = start_idx
    while True:
        u = 1.0 - rng.random()  # uniform on (0, 1]
        nxt = _next_index(vals[cur], u)
        if nxt is None or nxt > horizon_idx:
            return path
        path.append(nxt)
        cur = nxt


def estimate_renewal_function(F: TwoTimeMatrix, cfg: SimConfig) -> RenewalEstimate:
    """Monte Carlo estimate of H(start, t) for every t up to the horizon.

    Vectorised over paths: all uniforms are drawn up front as one
    seed-derived block indexed by (path, step), so the result is
    bit-identical for a given seed no matter how the work is scheduled.
    """
    n = F.n_points
    if not cfg.horizon_idx < n:
        raise ValueError(f"horizon_idx {cfg.horizon_idx} outside the grid of size {n}")
    start, horizon = cfg.start_idx, cfg.horizon_idx
    span = horizon - start + 1
    vals = F.values
    totals = vals[:, -1]

    rng = np.random.default_rng(cfg.seed)
    # a path makes at most span - 1 renewals, plus one terminating draw
    draws = 1.0 - rng.random((cfg.n_paths, span))

    counts = np.zeros((cfg.n_paths, span), dtype=np.int32)
    cur = np.full(cfg.n_paths, start, dtype=np.int64)
    active = np.arange(cfg.n_paths)
    for step in range(span):
        if len(active) == 0:
            break
        u = draws[active, step]
        c = cur[active]
        nxt = np.zeros(len(active), dtype=np.int64)
        alive = u <= totals[c]
        for cv in np.unique(c[alive]):
            m = alive & (c == cv)
            nxt[m] = np.searchsorted(vals[cv], u[m], side="left")
        ok = alive & (nxt <= horizon)
        counts[active[ok], nxt[ok] - start] += 1
        cur[active[ok]] = nxt[ok]
        active = active[ok]

    totals_per_t = np.cumsum(counts, axis=1)
    means = totals_per_t.mean(axis=0)
    if cfg.n_paths > 1:
        std_errs = totals_per_t.std(axis=0, ddof=1) / np.sqrt(cfg.n_paths)
    else:
        std_errs = np.zeros(span)
    pmf = np.bincount(totals_per_t[:, -1]) / cfg.n_paths
    return RenewalEstimate(
        start_idx=start,
        horizon_idx=horizon,
        means=means,
        std_errs=std_errs,
        terminal_pmf=pmf,
        n_paths=cfg.n_paths,
        seed=cfg.seed,
    )
