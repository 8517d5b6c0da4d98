"""Solvers for the non-homogeneous renewal equation.

The discrete-time equation

    H(s, t) = F(s, t) + sum_{x = s+1..t} v(s, x) H(x, t)

is a unit upper-triangular linear system (determinant 1), solved exactly by
backward substitution column by column.  The continuous-time equation

    H(s, t) = F(s, t) + int_s^t f(s, tau) H(tau, t) dtau

is discretised with rectangle, trapezoid or composite Simpson weights; when
the weight stencil touches tau = s the diagonal term is resolved
algebraically rather than iteratively.  The convolution series
H = sum_n F^(n) provides an independent cross-check of both.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .convolve import increments_from_df
from .grids import TimeGrid, TwoTimeMatrix, require_same_grid

__all__ = [
    "CountingPmf",
    "SeriesResult",
    "SolverMethod",
    "counting_pmf",
    "density_from_differences",
    "homogeneous_lift",
    "lift_duration_function",
    "solve_discrete",
    "solve_quadrature",
    "solve_series",
]

QUADRATURE_TAGS = ("rect-right", "rect-left", "trapezoid", "simpson")
METHOD_TAGS = ("exact-discrete",) + QUADRATURE_TAGS

#: Below this, 1 - w0 * f(u, u) counts as singular: the step is too large
#: relative to the density at zero lag.
SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class SolverMethod:
    """Solver selection: the exact discrete solve or a quadrature rule.

    ``step_h`` is optional for quadrature tags; when given it must match the
    native step of the matrices being solved (there is no resampling).
    """

    tag: str
    step_h: float | None = None

    def __post_init__(self) -> None:
        if self.tag not in METHOD_TAGS:
            raise ValueError(f"unknown method tag {self.tag!r}; expected one of {METHOD_TAGS}")
        if self.step_h is not None:
            if self.tag == "exact-discrete":
                raise ValueError("exact-discrete uses the matrix's native grid; step_h must be None")
            if not self.step_h > 0:
                raise ValueError(f"step_h must be positive, got {self.step_h}")


@dataclass(frozen=True)
class SeriesResult:
    renewal: TwoTimeMatrix
    n_terms: int


@dataclass(frozen=True)
class CountingPmf:
    """Distribution of the number of renewals N(t) - N(s).

    ``probs[n]`` is P[N(t) - N(s) = n] for n = 0..n_max; ``truncation_mass``
    bounds the tail beyond n_max, and the total mass telescopes to 1.
    """

    s_idx: int
    t_idx: int
    probs: np.ndarray = field(repr=False)
    truncation_mass: float

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=np.float64)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        if np.any(p < 0.0):
            raise ValueError(f"negative pmf value at n = {int(np.argwhere(p < 0)[0][0])}")
        total = p.sum() + self.truncation_mass
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"pmf mass {total} is not 1 within 1e-12")

    @property
    def n_max(self) -> int:
        return len(self.probs) - 1

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.probs)), self.probs))


def solve_discrete(F: TwoTimeMatrix) -> TwoTimeMatrix:
    """Exact solve of the discrete renewal equation by back-substitution.

    For each fixed t the column H(., t) is filled backwards from s = t - 1
    to 0; H(t, t) = 0, so the x = t term never appears and the recursion
    never divides.
    """
    if F.kind != "distribution":
        raise ValueError(f"expected a distribution matrix, got kind {F.kind!r}")
    v = increments_from_df(F).values
    Fv = F.values
    n = F.n_points
    H = np.zeros_like(Fv)
    for t in range(1, n):
        for s in range(t - 1, -1, -1):
            H[s, t] = Fv[s, t] + np.dot(v[s, s + 1 : t], H[s + 1 : t, t])
    return TwoTimeMatrix(F.grid, H, "renewal")


def solve_series(F: TwoTimeMatrix, tol: float = 1e-12) -> SeriesResult:
    """Sum the convolution series H = F^(1) + F^(2) + ... as a solver oracle.

    Terms are accumulated while their maximum exceeds ``tol``; the count of
    summed terms is reported.  Because every renewal takes at least one grid
    step, F^(n) vanishes identically for n >= n_points, so convergence is
    guaranteed for any valid F; the iteration cap is an internal-error guard.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if F.kind != "distribution":
        raise ValueError(f"expected a distribution matrix, got kind {F.kind!r}")
    v = increments_from_df(F).values
    term = F.values
    H = term.copy()
    n_terms = 1
    cap = 10 * F.n_points
    while term.max() >= tol:
        if n_terms > cap:
            raise RuntimeError(f"convolution series did not fall below {tol} in {cap} terms")
        term = v @ term
        if term.max() < tol:
            break
        H += term
        n_terms += 1
    return SeriesResult(TwoTimeMatrix(F.grid, H, "renewal"), n_terms)


def _weights(rule: str, h: float, m: int) -> np.ndarray:
    """Quadrature weights over tau = u..u+m for an interval of m subintervals."""
    w = np.zeros(m + 1)
    if m == 0:
        return w
    if rule == "rect-right":
        w[1:] = h
    elif rule == "rect-left":
        w[:-1] = h
    elif rule == "trapezoid":
        w[:] = h
        w[0] = w[-1] = 0.5 * h
    elif rule == "simpson":
        if m == 1:
            w[0] = w[-1] = 0.5 * h
        elif m % 2 == 0:
            w[:] = 2.0 * h / 3.0
            w[1::2] = 4.0 * h / 3.0
            w[0] = w[-1] = h / 3.0
        else:
            # odd subinterval count: one trapezoid step, then composite
            # Simpson on the remaining even stretch
            w[0] = 0.5 * h
            w[1] = 0.5 * h + h / 3.0
            w[2::2] = 4.0 * h / 3.0
            w[3::2] = 2.0 * h / 3.0
            w[-1] = h / 3.0
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    return w


def solve_quadrature(
    f: TwoTimeMatrix, F: TwoTimeMatrix, method: SolverMethod
) -> TwoTimeMatrix:
    """Quadrature solve of the continuous renewal equation on the native grid.

    For each column k the recursion runs backwards over u.  Rules whose
    stencil includes tau = u produce an implicit term; the equation is then
    solved algebraically for H(u, k) by dividing by 1 - w0 f(u, u).  A
    near-zero divisor aborts with the offending location.
    """
    if method.tag not in QUADRATURE_TAGS:
        raise ValueError(f"method {method.tag!r} is not a quadrature rule; use solve_discrete")
    if f.kind not in ("density", "generic"):
        raise ValueError(f"expected a density matrix, got kind {f.kind!r}")
    if F.kind != "distribution":
        raise ValueError(f"expected a distribution matrix, got kind {F.kind!r}")
    require_same_grid(f, F)
    h = f.grid.step_h
    if method.step_h is not None and abs(method.step_h - h) > 1e-12 * h:
        raise ValueError(
            f"method step_h = {method.step_h} does not match the grid step {h}; "
            "resampling is not supported"
        )
    n = f.n_points
    fv, Fv = f.values, F.values
    wtab = [_weights(method.tag, h, m) for m in range(n)]
    H = np.zeros_like(Fv)
    for k in range(1, n):
        for u in range(k - 1, -1, -1):
            w = wtab[k - u]
            rhs = Fv[u, k] + np.dot(w[1:] * fv[u, u + 1 : k + 1], H[u + 1 : k + 1, k])
            d = 1.0 - w[0] * fv[u, u]
            if d < SINGULAR_TOL:
                raise ValueError(
                    f"singular diagonal at (u={u}, k={k}): 1 - w0*f(u,u) = {d:.3e} "
                    f"(step h = {h} too large relative to the density at zero lag)"
                )
            H[u, k] = rhs / d
    return TwoTimeMatrix(f.grid, H, "renewal")


def counting_pmf(
    F: TwoTimeMatrix, s_idx: int, t_idx: int, tol: float = 1e-10
) -> CountingPmf:
    """Pmf of N(t) - N(s) from the n-fold convolution chain at one cell.

    p_0 = 1 - F(s, t) and p_n = F^(n)(s, t) - F^(n+1)(s, t); the chain is
    truncated at the first order whose mass at (s, t) drops below ``tol``,
    which bounds the discarded tail by that same value.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    n = F.n_points
    if not (0 <= s_idx <= t_idx < n):
        raise ValueError(f"need 0 <= s <= t < {n}, got ({s_idx}, {t_idx})")
    v = increments_from_df(F).values
    col = F.values[:, t_idx].copy()  # F^(1)(., t)
    probs = [1.0 - col[s_idx]]
    cap = 10 * n
    order = 1
    while col[s_idx] >= tol:
        if order > cap:
            raise RuntimeError(f"counting pmf did not truncate below {tol} in {cap} orders")
        nxt = v @ col  # F^(order+1)(., t)
        probs.append(max(col[s_idx] - nxt[s_idx], 0.0))
        col = nxt
        order += 1
    return CountingPmf(s_idx, t_idx, np.array(probs), truncation_mass=float(col[s_idx]))


def lift_duration_function(values: np.ndarray, grid: TimeGrid, kind: str = "generic") -> TwoTimeMatrix:
    """Spread a one-variable function of the lag onto the grid: a(s, t) = values[t - s]."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (grid.n_points,):
        raise ValueError(
            f"need one value per grid point ({grid.n_points}), got shape {values.shape}"
        )
    n = grid.n_points
    out = np.zeros((n, n))
    for s in range(n):
        out[s, s:] = values[: n - s]
    return TwoTimeMatrix(grid, out, kind)


def homogeneous_lift(F1: np.ndarray, grid: TimeGrid) -> TwoTimeMatrix:
    """Lift a one-variable d.f. to the two-time form F(s, t) = F1(t - s)."""
    F1 = np.asarray(F1, dtype=np.float64)
    if F1.ndim != 1:
        raise ValueError("F1 must be a one-dimensional d.f. vector")
    if F1[0] != 0.0:
        raise ValueError(f"F1(0) must be 0 (no renewal at lag 0), got {F1[0]}")
    if np.any(np.diff(F1) < 0):
        k = int(np.argwhere(np.diff(F1) < 0)[0][0])
        raise ValueError(f"F1 decreases between lag {k} and {k + 1}")
    if np.any(F1 > 1.0) or np.any(F1 < 0.0):
        raise ValueError("F1 values must lie in [0, 1]")
    return lift_duration_function(F1, grid, "distribution")


def density_from_differences(F: TwoTimeMatrix) -> TwoTimeMatrix:
    """Step-function density from backward differences: f = v / h, f(u, u) = 0.

    This is the density stand-in for empirical distributions; with the
    right-rectangle rule and h = 1 it makes the quadrature solve coincide
    with the exact discrete solve.
    """
    v = increments_from_df(F)
    return TwoTimeMatrix(F.grid, v.values / F.grid.step_h, "density")
