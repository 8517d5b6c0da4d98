"""Discrete convolutions of two-time-variable functions.

Two forms live here.  The measure-theoretic form integrates a function
against the increments of a distribution,

    (G * F)(s, t) = sum_{x = s+1..t} G(x, t) v(s, x),   v = increments of F,

and the density form integrates two densities against each other,

    (f * g)(s, t) ~= sum_{tau = s..t} w_tau g(s, tau) f(tau, t),

with quadrature weights w chosen by rule.  Note the slot order of the
density form: the SECOND operand takes the (s, tau) slot.  Both reduce to
ordinary one-variable convolution when the operands depend only on t - s.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

from .grids import TwoTimeMatrix, require_same_grid

__all__ = [
    "QuadratureRule",
    "density_convolve",
    "increments_from_df",
    "nfold_convolution",
    "stieltjes_convolve",
]

QuadratureRule = Literal["rect-left", "rect-right", "trapezoid"]

_NEG_TOL = 1e-9


def increments_from_df(F: TwoTimeMatrix) -> TwoTimeMatrix:
    """One-step backward differences of a distribution matrix.

    v(s, s) = 0 and v(s, t) = F(s, t) - F(s, t-1) for t > s, so the row sums
    telescope back to F(s, T).  Rejects non-monotone rows with the offending
    location; differences within float noise of zero are clamped to zero.
    """
    if F.kind != "distribution":
        raise ValueError(f"expected a distribution matrix, got kind {F.kind!r}")
    vals = F.values
    v = np.zeros_like(vals)
    v[:, 1:] = vals[:, 1:] - vals[:, :-1]
    n = F.n_points
    v[np.arange(n), np.arange(n)] = 0.0
    neg = np.triu(v < 0.0, k=1)
    if np.any(neg):
        worst = v[neg].min()
        if worst < -_NEG_TOL:
            s, t = np.argwhere(np.triu(v < -_NEG_TOL, k=1))[0]
            raise ValueError(
                f"non-monotone distribution row: F({s},{t}) < F({s},{t - 1}) "
                f"(increment {v[s, t]})"
            )
        v[neg] = 0.0
    return TwoTimeMatrix(F.grid, v, "increment")


def stieltjes_convolve(G: TwoTimeMatrix, F: TwoTimeMatrix) -> TwoTimeMatrix:
    """(G * F)(s, t) = sum_{x=s+1..t} G(x, t) v(s, x) with v from ``F``.

    The half-open sum starts at x = s + 1 (no renewal can happen at lag 0);
    the x = t term multiplies G(t, t), which is zero for renewal-type G, and
    is kept for uniformity.  Convolving two distributions yields another
    distribution (the law of the two-stage renewal time) and is tagged so.
    """
    require_same_grid(G, F)
    v = increments_from_df(F)
    out = v.values @ G.values
    if G.kind == "distribution":
        return TwoTimeMatrix(G.grid, np.clip(out, 0.0, 1.0), "distribution")
    return TwoTimeMatrix(G.grid, out, "generic")


def nfold_convolution(F: TwoTimeMatrix, n: int) -> TwoTimeMatrix:
    """n-fold convolution power of a distribution matrix.

    F^(1) = F and F^(n) = F^(n-1) * F; this is the distribution of the n-th
    renewal time, so the sequence is pointwise nonincreasing in n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if F.kind != "distribution":
        raise ValueError(f"expected a distribution matrix, got kind {F.kind!r}")
    if n == 1:
        return F
    v = increments_from_df(F).values
    out = F.values
    for _ in range(n - 1):
        out = v @ out
    # clip float dust so the result still validates as a distribution
    out = np.clip(out, 0.0, 1.0)
    return TwoTimeMatrix(F.grid, out, "distribution")


def density_convolve(
    f: TwoTimeMatrix, g: TwoTimeMatrix, rule: QuadratureRule = "trapezoid"
) -> TwoTimeMatrix:
    """Quadrature approximation of (f * g)(s, t) = int_s^t g(s, tau) f(tau, t) dtau.

    ``rule`` picks the node set on [s, t]: left rectangles (tau = s..t-1),
    right rectangles (tau = s+1..t) or the trapezoid rule.  The (s, s)
    diagonal is exactly zero for every rule.
    """
    require_same_grid(f, g)
    h = f.grid.step_h
    fv, gv = f.values, g.values
    full = gv @ fv  # sum over tau = s..t of g(s,tau) f(tau,t)
    first = np.diagonal(gv)[:, None] * fv  # tau = s term
    last = gv * np.diagonal(fv)[None, :]  # tau = t term
    if rule == "rect-left":
        out = (full - last) * h
    elif rule == "rect-right":
        out = (full - first) * h
    elif rule == "trapezoid":
        out = (full - 0.5 * first - 0.5 * last) * h
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    return TwoTimeMatrix(f.grid, out, "generic")
