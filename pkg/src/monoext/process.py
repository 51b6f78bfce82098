"""Sharp lower bound for the expected value of a monotone random process
at a random time, with the explicit extremal process.

Processes live on [0,1] with almost-surely non-decreasing trajectories in
[0,1] and expected super-level-set measure at least 1 - m(s).  For a random
time tau with non-increasing rearrangement r, the expectation at tau is at
least the integral over y of m^{-1}(R(y)) with R(y) the integral of r over
[1-y, 1].  The sample space is parameterized by the rank fraction
y = P(tau' <= tau(omega)), which is uniform once ties are broken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    InvalidGrid,
    MembershipViolation,
    OutOfDomain,
    ValidationError,
)
from .func1d import EmpiricalRV, MonotoneMap1D, _clamp_unit, integrate
from .poset import QuerySet, grid_poset
from .solver import disjoint_bound, scale_from_m


def _tail_sums(tau: EmpiricalRV):
    """(ascending samples, descending samples, suffix sums of descending)."""
    asc = np.array(tau.samples, dtype=float)
    dsc = asc[::-1].copy()
    tail = np.zeros(len(dsc) + 1)
    tail[:-1] = np.cumsum(dsc[::-1])[::-1]
    return asc, dsc, tail


def _rearrangement_tail_integral(dsc, tail, y: float) -> float:
    """Integral of the non-increasing rearrangement over [1 - y, 1]."""
    m_count = len(dsc)
    p = 1.0 - y
    if p >= 1.0:
        return 0.0
    if p <= 0.0:
        return float(tail[0]) / m_count
    i = min(int(p * m_count), m_count - 1)
    return ((i + 1) / m_count - p) * dsc[i] + tail[i + 1] / m_count


def expectation_bound(
    m: MonotoneMap1D, tau: EmpiricalRV, tol: float = 1e-9
) -> float:
    """Integral over y of m^{-1}(R(y)), R(y) = tail integral of the
    rearrangement of tau.  The inner integral is exact (the rearrangement
    is a step function); the outer one is adaptive to ``tol``.
    """
    if not m.is_increasing_bijection:
        raise ValidationError("m must be an increasing bijection")
    _, dsc, tail = _tail_sums(tau)

    def integrand(y: float) -> float:
        return float(m.inverse(_rearrangement_tail_integral(dsc, tail, y)))

    return integrate(integrand, 0.0, 1.0, tol)


def simplified_bound(tau: EmpiricalRV) -> Fraction:
    """Exact integral of r(s) * s over [0, 1] for the identity map.

    Piecewise closed form against the step rearrangement: piece i of width
    1/M contributes its value times (2i+1)/(2M^2).
    """
    m_count = tau.m
    dsc = sorted(tau.samples, reverse=True)
    total = Fraction(0)
    for i, v in enumerate(dsc):
        total += Fraction(v) * Fraction(2 * i + 1, 2 * m_count * m_count)
    return total


def fubini_check(tau: EmpiricalRV, tol: float = 1e-9) -> float:
    """|expectation_bound(identity, tau) - simplified_bound(tau)|.

    The two sides differ only by the order of integration, so the
    deviation is bounded by twice the quadrature tolerance.
    """
    direct = expectation_bound(MonotoneMap1D.identity(), tau, tol)
    return abs(direct - float(simplified_bound(tau)))


@dataclass(frozen=True)
class ExtremalProcess:
    """The process attaining the expectation bound.

    A trajectory indexed by rank fraction y holds the constant value
    m^{-1}(R(y)) up to the y-quantile of tau and the constant
    m^{-1}(E tau + y - R(y)) after it; both branches are non-decreasing in
    y and the second dominates the first, so trajectories are monotone.
    Ties in tau are broken by jitter at construction so that ranks are
    well defined.
    """

    m: MonotoneMap1D
    tau: EmpiricalRV

    def __post_init__(self):
        if not self.m.is_increasing_bijection:
            raise ValidationError("m must be an increasing bijection")
        asc, dsc, tail = _tail_sums(self.tau)
        object.__setattr__(self, "_asc", asc)
        object.__setattr__(self, "_dsc", dsc)
        object.__setattr__(self, "_tail", tail)

    @property
    def sample_count(self) -> int:
        return self.tau.m

    @property
    def mean_time(self) -> float:
        return float(self._tail[0]) / self.tau.m

    def tail_integral(self, y: float) -> float:
        return _rearrangement_tail_integral(self._dsc, self._tail, y)

    def quantile(self, y: float) -> float:
        """Value of tau at the sample of rank fraction y."""
        rank = min(max(math.ceil(y * self.tau.m), 1), self.tau.m)
        return float(self._asc[rank - 1])

    def lower_branch(self, y: float) -> float:
        return float(self.m.inverse(self.tail_integral(y)))

    def upper_branch(self, y: float) -> float:
        r = self.tail_integral(y)
        return float(self.m.inverse(_clamp_unit(self.mean_time + y - r, "level")))


def jitter_tau(tau: EmpiricalRV, delta: float = 1e-9, seed: int = 0) -> EmpiricalRV:
    """Break ties among samples by adding tiny distinct offsets.

    Tied groups are spread over a window of width at most ``delta``,
    bounded by the next distinct sample and by 1 (exclusive), so sort
    order is preserved and all samples end up pairwise distinct and in
    [0, 1).  Untied inputs are returned unchanged.
    """
    if delta <= 0:
        raise ValidationError("delta must be positive")
    xs = list(tau.samples)
    m_count = len(xs)
    if len(set(xs)) == m_count:
        return tau
    rng = np.random.Generator(np.random.Philox(key=seed))
    out: list[float] = []
    i = 0
    while i < m_count:
        j = i
        while j < m_count and xs[j] == xs[i]:
            j += 1
        g = j - i
        v = xs[i]
        if g == 1:
            out.append(v)
        else:
            nxt = xs[j] if j < m_count else 1.0
            draws = rng.random(g)
            if v < nxt:
                span = min(delta, nxt - v)
                offs = [(kk + draws[kk]) / (g + 1) * span for kk in range(g)]
                out.extend(v + o for o in offs)
            else:
                # v == 1 (or crowded from above): spread just below v.
                floor = out[-1] if out else max(0.0, v - delta)
                span = min(delta, v - floor)
                offs = [(kk + draws[kk]) / (g + 1) * span for kk in range(g)]
                out.extend(v - span + o for o in offs)
        i = j
    if len(set(out)) != m_count:
        raise ValidationError("could not separate ties within delta")
    return EmpiricalRV.from_samples(out)


def make_extremal_process(
    m: MonotoneMap1D,
    tau: EmpiricalRV,
    delta: float = 1e-9,
    seed: int = 0,
) -> ExtremalProcess:
    """Construct the extremal process, jittering tied samples first."""
    return ExtremalProcess(m, jitter_tau(tau, delta, seed))


def eval_extremal_process(proc: ExtremalProcess, t: float, y: float) -> float:
    """Trajectory value at time t for the outcome of rank fraction y."""
    t = _clamp_unit(t, "t")
    y = _clamp_unit(y, "y")
    if t <= proc.quantile(y):
        return proc.lower_branch(y)
    return proc.upper_branch(y)


def expectation_at_tau(
    proc: ExtremalProcess,
    mode: str = "quadrature",
    trials: int = 10**6,
    seed: int = 0,
    tol: float = 1e-9,
):
    """Expected value of the extremal process at the random time.

    ``"quadrature"`` integrates the trajectory value at its own time over
    the (uniform) rank fraction and reports (value, 0.0).  ``"montecarlo"``
    draws outcomes uniformly among the samples with a counter-based
    generator keyed by ``seed`` (deterministic regardless of scheduling)
    and reports (mean, standard error).
    """
    if mode == "quadrature":
        value = integrate(
            lambda y: eval_extremal_process(proc, proc.quantile(y), y),
            0.0,
            1.0,
            tol,
        )
        return value, 0.0
    if mode != "montecarlo":
        raise ValidationError(f"mode must be 'quadrature' or 'montecarlo', got {mode!r}")
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    m_count = proc.sample_count
    # At its own time each outcome sits on the lower branch; rank i has
    # R = tail[M - i] / M exactly (a whole number of rearrangement pieces).
    tail = proc._tail
    by_rank = proc.m.inverse_many(tail[:m_count][::-1] / m_count)
    rng = np.random.Generator(np.random.Philox(key=seed))
    ranks = rng.integers(1, m_count + 1, size=trials)
    draws = by_rank[ranks - 1]
    mean = float(draws.mean())
    stderr = float(draws.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return mean, stderr


@dataclass(frozen=True)
class ProcessMembershipReport:
    grid_t: int
    grid_y: int
    monotone_ok: bool
    max_deviation: float
    worst_level: float
    budget: float

    @property
    def ok(self) -> bool:
        return bool(self.monotone_ok and self.max_deviation <= self.budget)


def verify_process_membership(
    proc: ExtremalProcess,
    grid_t: int,
    grid_y: int,
    s_count: int = 101,
    evaluator=None,
) -> ProcessMembershipReport:
    """Grid check that the extremal process belongs to the class.

    (a) Along each sampled trajectory the value must be non-decreasing in
    t under exact comparisons.  (b) For levels s on a grid, the
    cell-counting estimate of (mu x P){xi <= m^{-1}(s)} must equal s within
    2*(1/grid_t + 1/grid_y) + 1/M + 1e-9.  ``evaluator`` overrides the
    trajectory evaluator for negative controls.  Raises
    :class:`MembershipViolation` on failure.
    """
    if grid_t < 2 or grid_y < 2:
        raise InvalidGrid("grids must be at least 2")
    t_centers = (np.arange(grid_t) + 0.5) / grid_t
    y_centers = (np.arange(grid_y) + 0.5) / grid_y

    if evaluator is None:
        lows = np.array([proc.lower_branch(float(y)) for y in y_centers])
        ups = np.array([proc.upper_branch(float(y)) for y in y_centers])
        taus = np.array([proc.quantile(float(y)) for y in y_centers])
        values = np.where(t_centers[None, :] <= taus[:, None],
                          lows[:, None], ups[:, None])
    else:
        values = np.array(
            [[float(evaluator(t, y)) for t in t_centers] for y in y_centers]
        )

    steps = np.diff(values, axis=1)
    if (steps < 0).any():
        j, a = map(int, np.argwhere(steps < 0)[0])
        raise MembershipViolation(
            "trajectory decreases in t",
            witness=(
                (t_centers[a], y_centers[j], values[j, a]),
                (t_centers[a + 1], y_centers[j], values[j, a + 1]),
            ),
        )

    flat = np.sort(values.ravel())
    budget = 2.0 * (1.0 / grid_t + 1.0 / grid_y) + 1.0 / proc.sample_count + 1e-9
    worst = 0.0
    worst_level = 0.0
    for s in np.linspace(0.0, 1.0, s_count):
        thr = float(proc.m.inverse(s))
        count_le = int(np.searchsorted(flat, thr, side="right"))
        dev = abs(count_le / flat.size - float(s))
        if dev > worst:
            worst, worst_level = dev, float(s)
    if worst > budget:
        raise MembershipViolation(
            f"level-set deviation {worst:.3g} at s={worst_level} exceeds "
            f"budget {budget:.3g}",
            witness=(worst_level, worst),
        )
    return ProcessMembershipReport(grid_t, grid_y, True, worst, worst_level, budget)


def rows_grid_cross_check(m: MonotoneMap1D, n: int, s_indices) -> dict:
    """Row-order grid instance of the disjoint-down-set closed form.

    For non-decreasing time indices 1 <= s_1 <= ... <= s_n <= n, queries
    the nodes (s_v, v) of the n x n rows-order grid with the scale
    m^{-1}(i/n^2).  The closed form sums m^{-1}((s_1+...+s_v)/n^2); the
    dict reports both sides so callers can assert exact (rational) or
    near-exact (float) agreement.
    """
    s_list = list(s_indices)
    if len(s_list) != n:
        raise ValidationError("need exactly n time indices")
    prev = 1
    for s in s_list:
        if not prev <= s <= n:
            raise ValidationError("indices must be non-decreasing within 1..n")
        prev = s
    poset = grid_poset(n, "rows")
    scale = scale_from_m(m, n)
    query = QuerySet(poset, [(s, v) for v, s in enumerate(s_list, start=1)])
    bound = disjoint_bound(poset, scale, query, "min")
    n2 = n * n
    prefix = 0
    closed = Fraction(0) if m.kind == "identity" else 0.0
    for s in s_list:
        prefix += s
        closed += m.inverse(Fraction(prefix, n2))
    return {"poset": poset, "scale": scale, "query": query,
            "bound": bound, "closed_form": closed}
