"""Sharp lower bound for line integrals of coordinate-wise monotone
functions on the unit square, with an explicit extremal surface.

The class under study consists of coordinate-wise non-decreasing functions
f: [0,1]^2 -> [0,1] whose super-level sets are large enough:
mu{f > u} >= 1 - m(u) for an increasing bijection m.  For a non-decreasing
path t the integral of f(t(s), s) over s is at least the integral of
m^{-1}(t(s) * s), and the bound is attained by an explicit surface whose
level regions are the growth increments of the rectangles
[0, t(s)] x [0, s].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidGrid, MembershipViolation, OutOfDomain
from .func1d import MonotoneMap1D, _clamp_unit, integrate
from .poset import grid_poset, QuerySet
from .solver import chain_bounds, scale_from_m

REGION_TOL = 1e-12


def _require_bijection(m: MonotoneMap1D) -> None:
    if not m.is_increasing_bijection:
        raise OutOfDomain("m must be an increasing bijection of [0, 1]")


def line_integral_bound(
    m: MonotoneMap1D, t: MonotoneMap1D, tol: float = 1e-9
) -> float:
    """Integral of m^{-1}(t(s) * s) over [0, 1], to tolerance ``tol``.

    This is the sharp lower bound for the line integral along s -> (t(s), s)
    over the whole class.
    """
    _require_bijection(m)
    return integrate(
        lambda s: float(m.inverse(t.eval(s) * s)), 0.0, 1.0, tol
    )


def _path_lower_inverse(t: MonotoneMap1D, x: float, tol: float = REGION_TOL) -> float:
    """Least s with t(s) >= x, by monotone bisection; assumes x <= t(1).

    For x1 <= x2 the returned values are ordered, because the surviving
    bisection intervals stay ordered step by step.
    """
    if t.eval(0.0) >= x:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if t.eval(mid) >= x:
            hi = mid
        else:
            lo = mid
    return hi


def eval_extremal_surface(
    m: MonotoneMap1D, t: MonotoneMap1D, x: float, y: float
) -> float:
    """Value of the extremal surface at (x, y) in the unit square.

    Left of the path's final abscissa the point belongs to the level region
    indexed by the least s whose rectangle [0, t(s)] x [0, s] contains it,
    i.e. s = max(y, min{s : t(s) >= x}), and the value is m^{-1}(t(s)*s).
    Right of it the surface climbs linearly in y from m^{-1}(t(1)) to 1.
    """
    _require_bijection(m)
    x = _clamp_unit(x, "x")
    y = _clamp_unit(y, "y")
    t1 = t.eval(1.0)
    if x > t1:
        return float(m.inverse(t1 + (1.0 - t1) * y))
    s = max(float(y), _path_lower_inverse(t, float(x)))
    return float(m.inverse(t.eval(s) * s))


@dataclass(frozen=True)
class MembershipReport:
    grid_n: int
    monotone_ok: bool
    max_distribution_deviation: float
    worst_u: float
    budget: float

    @property
    def ok(self) -> bool:
        return bool(
            self.monotone_ok and self.max_distribution_deviation <= self.budget
        )


def _surface_grid(m, t, xs, ys) -> np.ndarray:
    """Surface values at the grid xs x ys; rows index x, columns index y."""
    t1 = t.eval(1.0)
    grid = np.empty((len(xs), len(ys)))
    left = xs <= t1
    if left.any():
        tinv = np.array([_path_lower_inverse(t, float(x)) for x in xs[left]])
        s_star = np.maximum(tinv[:, None], ys[None, :])
        w = t.eval_many(s_star) * s_star
        grid[left] = m.inverse_many(w)
    if (~left).any():
        grid[~left] = m.inverse_many(t1 + (1.0 - t1) * ys)[None, :]
    return grid


def verify_membership(
    m: MonotoneMap1D,
    t: MonotoneMap1D,
    grid_n: int,
    surface=None,
    u_count: int = 101,
) -> MembershipReport:
    """Grid check that the extremal surface belongs to the class.

    On an ``grid_n x grid_n`` grid of cell centers: (a) coordinate-wise
    monotonicity must hold under exact <= comparisons; (b) for each level u
    the cell-counting estimate of mu{f > m^{-1}(u)} must equal 1 - u within
    2/grid_n + 1e-9 (a monotone level boundary crosses at most 2*grid_n
    cells).  ``surface`` overrides the evaluator, e.g. for negative
    controls.  Raises :class:`MembershipViolation` with witness points on
    failure; otherwise returns the worst deviation observed.
    """
    _require_bijection(m)
    if grid_n < 2:
        raise InvalidGrid("grid_n must be at least 2")
    xs = (np.arange(grid_n) + 0.5) / grid_n
    ys = (np.arange(grid_n) + 0.5) / grid_n
    if surface is None:
        grid = _surface_grid(m, t, xs, ys)
    else:
        grid = np.array([[float(surface(x, y)) for y in ys] for x in xs])

    dx = np.diff(grid, axis=0)
    if (dx < 0).any():
        i, j = map(int, np.argwhere(dx < 0)[0])
        raise MembershipViolation(
            "surface decreases in x",
            witness=((xs[i], ys[j], grid[i, j]), (xs[i + 1], ys[j], grid[i + 1, j])),
        )
    dy = np.diff(grid, axis=1)
    if (dy < 0).any():
        i, j = map(int, np.argwhere(dy < 0)[0])
        raise MembershipViolation(
            "surface decreases in y",
            witness=((xs[i], ys[j], grid[i, j]), (xs[i], ys[j + 1], grid[i, j + 1])),
        )

    flat = np.sort(grid.ravel())
    budget = 2.0 / grid_n + 1e-9
    worst = 0.0
    worst_u = 0.0
    for u in np.linspace(0.0, 1.0, u_count):
        thr = float(m.inverse(u))
        count_gt = int(flat.size - np.searchsorted(flat, thr, side="right"))
        dev = abs(count_gt / flat.size - (1.0 - u))
        if dev > worst:
            worst, worst_u = dev, float(u)
    if worst > budget:
        raise MembershipViolation(
            f"distribution deviation {worst:.3g} at u={worst_u} "
            f"exceeds budget {budget:.3g}",
            witness=(worst_u, worst),
        )
    return MembershipReport(grid_n, True, worst, worst_u, budget)


def line_integral_on_surface(
    m: MonotoneMap1D, t: MonotoneMap1D, tol: float = 1e-9
) -> float:
    """Line integral of the extremal surface along s -> (t(s), s).

    Goes through the region-lookup evaluator, so agreement with
    :func:`line_integral_bound` (within 2*tol) exercises the whole
    construction, not just the closed form.
    """
    return integrate(
        lambda s: eval_extremal_surface(m, t, t.eval(s), s), 0.0, 1.0, tol
    )


@dataclass(frozen=True)
class GridExperiment:
    """Outcome of the square-grid discretization of the constant-path bound."""

    alpha: float
    n: int
    k: int
    column: int
    discrete_sum: Fraction      # (1/n) * sum of column values, equals discrete_bound / n
    discrete_bound: Fraction    # closed-form column-sum bound s(n+1)/(2n)
    continuous_target: Fraction  # alpha / 2
    abs_error: Fraction
    c_fit: Fraction             # abs_error * n

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "n": self.n,
            "k": self.k,
            "column": self.column,
            "discrete_sum": str(self.discrete_sum),
            "discrete_bound": str(self.discrete_bound),
            "continuous_target": str(self.continuous_target),
            "abs_error": str(self.abs_error),
            "c_fit": str(self.c_fit),
        }


def grid_experiment(alpha: float, n: int, k: int) -> GridExperiment:
    """Discretize the constant-path problem on an n x n grid.

    Builds the explicit column-filling bijection on the grid (values
    1..n^2, scaled by 1/n^2): the s leftmost columns are filled row by
    row with 1..s*n, the rest row by row with s*n+1..n^2, where s is the
    column containing x = alpha.  Returns the observed column average at
    column s, the closed-form bound s(n+1)/(2n), and the distance to the
    continuum target alpha/2.  ``k`` is the level-count of the refinement
    scheme and must divide n.
    """
    fa = Fraction(alpha)
    if not 0 < fa <= 1:
        raise InvalidGrid("alpha must lie in (0, 1]")
    if n < 2:
        raise InvalidGrid("n must be at least 2")
    if k < 1 or n % k != 0:
        raise InvalidGrid("k must be a positive divisor of n")
    s = math.ceil(fa * n)

    # val[i-1][j-1], i column, j row; integer values 1..n^2.
    val = [[0] * n for _ in range(n)]
    for j in range(1, n + 1):
        for i in range(1, s + 1):
            val[i - 1][j - 1] = (j - 1) * s + i
    base = s * n
    for j in range(1, n + 1):
        for i in range(s + 1, n + 1):
            val[i - 1][j - 1] = base + (j - 1) * (n - s) + (i - s)

    seen = sorted(v for col in val for v in col)
    assert seen == list(range(1, n * n + 1)), "grid filling is not a bijection"
    for i in range(n):
        for j in range(n):
            if i + 1 < n:
                assert val[i][j] < val[i + 1][j], "grid filling not monotone in x"
            if j + 1 < n:
                assert val[i][j] < val[i][j + 1], "grid filling not monotone in y"

    column_total = sum(val[s - 1][j] for j in range(n))
    discrete_sum = Fraction(column_total, n**3)
    discrete_bound = Fraction(s * (n + 1), 2 * n)
    target = fa / 2
    err = abs(discrete_sum - target)
    return GridExperiment(
        alpha=float(alpha),
        n=n,
        k=k,
        column=s,
        discrete_sum=discrete_sum,
        discrete_bound=discrete_bound,
        continuous_target=target,
        abs_error=err,
        c_fit=err * n,
    )


def column_chain_bound(n: int, s: int) -> Fraction:
    """Column-sum lower bound on the n x n product grid via the chain
    closed form, with the identity scale i/n^2.  Ties the grid experiment
    to the discrete solver; must equal s(n+1)/(2n) exactly.
    """
    poset = grid_poset(n, "product")
    scale = scale_from_m(MonotoneMap1D.identity(), n)
    column = QuerySet(poset, [(s, v) for v in range(1, n + 1)])
    mn, _ = chain_bounds(poset, scale, column)
    return mn
