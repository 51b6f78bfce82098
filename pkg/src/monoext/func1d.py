"""Monotone maps of the unit interval, step functions, rearrangements,
and adaptive quadrature.

Three map kinds are shipped: identity, power, and piecewise linear.  All
three have exact inverses, so no root finding is involved; a bisection
fallback is provided for hypothetical kinds without a closed form.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import (
    NotIncreasing,
    OutOfDomain,
    ToleranceNotMet,
    ValidationError,
)

_UNIT_SLACK = 1e-9


def _clamp_unit(x, what: str = "argument"):
    """Clamp values a hair outside [0, 1] (float noise); reject the rest."""
    if x < 0:
        if x < -_UNIT_SLACK:
            raise OutOfDomain(f"{what} {x!r} outside [0, 1]")
        return 0.0
    if x > 1:
        if x > 1 + _UNIT_SLACK:
            raise OutOfDomain(f"{what} {x!r} outside [0, 1]")
        return 1.0
    return x


@dataclass(frozen=True)
class MonotoneMap1D:
    """Non-decreasing map of [0, 1] into itself.

    Kinds: ``"identity"``; ``"power"`` with exponent p > 0 (x -> x**p);
    ``"pwl"``, piecewise linear through ``points``.  Identity and power
    maps are increasing bijections; a pwl map may contain flat pieces, in
    which case it can serve as a path but has no inverse.
    """

    kind: str
    p: float = 0.0
    points: tuple = ()

    def __post_init__(self):
        if self.kind == "identity":
            return
        if self.kind == "power":
            if not self.p > 0:
                raise ValidationError("power exponent must be positive")
            return
        if self.kind != "pwl":
            raise ValidationError(f"unknown map kind {self.kind!r}")
        pts = tuple((float(x), float(y)) for x, y in self.points)
        if len(pts) < 2:
            raise ValidationError("piecewise-linear map needs >= 2 points")
        xs = tuple(x for x, _ in pts)
        ys = tuple(y for _, y in pts)
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise ValidationError("breakpoints must span [0, 1]")
        for a, b in zip(xs, xs[1:]):
            if a >= b:
                raise NotIncreasing("breakpoint abscissae must strictly increase")
        for y in ys:
            if not 0.0 <= y <= 1.0:
                raise OutOfDomain(f"breakpoint ordinate {y} outside [0, 1]")
        for a, b in zip(ys, ys[1:]):
            if a > b:
                raise NotIncreasing("breakpoint ordinates must not decrease")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_ys", ys)
        object.__setattr__(self, "_xs_np", np.array(xs))
        object.__setattr__(self, "_ys_np", np.array(ys))

    @staticmethod
    def identity() -> "MonotoneMap1D":
        return MonotoneMap1D("identity")

    @staticmethod
    def power(p: float) -> "MonotoneMap1D":
        return MonotoneMap1D("power", p=float(p))

    @staticmethod
    def piecewise_linear(points: Iterable) -> "MonotoneMap1D":
        return MonotoneMap1D("pwl", points=tuple(points))

    @staticmethod
    def constant(alpha: float) -> "MonotoneMap1D":
        """Constant path t(s) = alpha (usable as a path, not invertible)."""
        return MonotoneMap1D.piecewise_linear([(0.0, alpha), (1.0, alpha)])

    @property
    def is_increasing_bijection(self) -> bool:
        if self.kind in ("identity", "power"):
            return True
        ys = self._ys
        if ys[0] != 0.0 or ys[-1] != 1.0:
            return False
        return all(a < b for a, b in zip(ys, ys[1:]))

    def eval(self, x):
        """Evaluate at x in [0, 1].

        Exact passthrough for the identity (Fractions stay Fractions).
        The pwl evaluation clamps each piece into its ordinate range so the
        float result is non-decreasing in x, piece boundaries included.
        """
        x = _clamp_unit(x)
        if self.kind == "identity":
            return x
        if self.kind == "power":
            return float(x) ** self.p
        xs, ys = self._xs, self._ys
        i = bisect.bisect_right(xs, x) - 1
        i = min(max(i, 0), len(xs) - 2)
        x0, x1 = xs[i], xs[i + 1]
        y0, y1 = ys[i], ys[i + 1]
        v = y0 + (float(x) - x0) * (y1 - y0) / (x1 - x0)
        return min(max(v, y0), y1)

    def inverse(self, y):
        """Exact inverse at y in [0, 1]; requires an increasing bijection."""
        y = _clamp_unit(y, "value")
        if self.kind == "identity":
            return y
        if self.kind == "power":
            fy = float(y)
            return math.sqrt(fy) if self.p == 2.0 else fy ** (1.0 / self.p)
        if not self.is_increasing_bijection:
            raise NotIncreasing("map is not an increasing bijection")
        xs, ys = self._xs, self._ys
        i = bisect.bisect_right(ys, y) - 1
        i = min(max(i, 0), len(ys) - 2)
        x0, x1 = xs[i], xs[i + 1]
        y0, y1 = ys[i], ys[i + 1]
        v = x0 + (float(y) - y0) * (x1 - x0) / (y1 - y0)
        return min(max(v, x0), x1)

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`eval` with the same arithmetic as the scalar path."""
        xs = np.asarray(xs, dtype=float)
        if self.kind == "identity":
            return xs.copy()
        if self.kind == "power":
            return xs**self.p
        bx, by = self._xs_np, self._ys_np
        i = np.clip(np.searchsorted(bx, xs, side="right") - 1, 0, len(bx) - 2)
        x0, x1 = bx[i], bx[i + 1]
        y0, y1 = by[i], by[i + 1]
        v = y0 + (xs - x0) * (y1 - y0) / (x1 - x0)
        return np.minimum(np.maximum(v, y0), y1)

    def inverse_many(self, ys: np.ndarray) -> np.ndarray:
        ys = np.asarray(ys, dtype=float)
        if self.kind == "identity":
            return ys.copy()
        if self.kind == "power":
            return np.sqrt(ys) if self.p == 2.0 else ys ** (1.0 / self.p)
        if not self.is_increasing_bijection:
            raise NotIncreasing("map is not an increasing bijection")
        bx, by = self._xs_np, self._ys_np
        i = np.clip(np.searchsorted(by, ys, side="right") - 1, 0, len(by) - 2)
        x0, x1 = bx[i], bx[i + 1]
        y0, y1 = by[i], by[i + 1]
        v = x0 + (ys - y0) * (x1 - x0) / (y1 - y0)
        return np.minimum(np.maximum(v, x0), x1)


def inverse_by_bisection(m: MonotoneMap1D, y, tol: float = 1e-12) -> float:
    """Generic monotone inverse on [0, 1] to absolute tolerance ``tol``.

    Contract: ``m.eval(inverse_by_bisection(m, y))`` is within 1e-11 of y
    for any increasing bijection.  Exists as the fallback for map kinds
    without a closed-form inverse.
    """
    y = _clamp_unit(y, "value")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if m.eval(mid) < y:
            lo = mid
        else:
            hi = mid
    return hi


@dataclass(frozen=True)
class StepFunction1D:
    """Piecewise-constant function on [0, 1] with left-closed pieces.

    ``breaks`` has K+1 entries running from 0 to 1; piece k covers
    ``[breaks[k], breaks[k+1])`` and the final piece also contains 1, so
    the function is right-continuous at every interior jump.  Breakpoints
    and values may be exact Fractions or floats.
    """

    breaks: tuple
    values: tuple
    orientation: str = "non-increasing"

    def __post_init__(self):
        brs = tuple(self.breaks)
        vals = tuple(self.values)
        if len(brs) != len(vals) + 1 or not vals:
            raise ValidationError("need K+1 breakpoints for K >= 1 pieces")
        if brs[0] != 0 or brs[-1] != 1:
            raise ValidationError("breakpoints must span [0, 1]")
        for a, b in zip(brs, brs[1:]):
            if a >= b:
                raise NotIncreasing("breakpoints must strictly increase")
        for v in vals:
            if v < 0 or v > 1:
                raise OutOfDomain(f"piece value {v} outside [0, 1]")
        if self.orientation == "non-increasing":
            ok = all(a >= b for a, b in zip(vals, vals[1:]))
        elif self.orientation == "non-decreasing":
            ok = all(a <= b for a, b in zip(vals, vals[1:]))
        else:
            raise ValidationError(f"unknown orientation {self.orientation!r}")
        if not ok:
            raise ValidationError("piece values inconsistent with orientation")
        object.__setattr__(self, "breaks", brs)
        object.__setattr__(self, "values", vals)

    def eval(self, x):
        if x < 0 or x > 1:
            raise OutOfDomain(f"argument {x!r} outside [0, 1]")
        i = bisect.bisect_right(self.breaks, x) - 1
        return self.values[min(max(i, 0), len(self.values) - 1)]

    def __call__(self, x):
        return self.eval(x)

    def integral(self, a=0, b=1) -> Fraction:
        """Exact integral over [a, b] as a Fraction."""
        fa, fb = Fraction(a), Fraction(b)
        if fa > fb:
            raise ValidationError("integration bounds out of order")
        total = Fraction(0)
        for k, v in enumerate(self.values):
            lo = max(Fraction(self.breaks[k]), fa)
            hi = min(Fraction(self.breaks[k + 1]), fb)
            if hi > lo:
                total += Fraction(v) * (hi - lo)
        return total

    def canonical(self) -> "StepFunction1D":
        """Merge adjacent pieces with equal values."""
        brs = [self.breaks[0]]
        vals = []
        for k, v in enumerate(self.values):
            if vals and v == vals[-1]:
                brs[-1] = self.breaks[k + 1]
            else:
                vals.append(v)
                brs.append(self.breaks[k + 1])
        return StepFunction1D(tuple(brs), tuple(vals), self.orientation)

    def same_function(self, other: "StepFunction1D") -> bool:
        """Pointwise equality, exact (compares canonical forms)."""
        a, b = self.canonical(), other.canonical()
        if len(a.values) != len(b.values):
            return False
        return all(x == y for x, y in zip(a.breaks, b.breaks)) and all(
            x == y for x, y in zip(a.values, b.values)
        )


@dataclass(frozen=True)
class EmpiricalRV:
    """Random variable given by equally weighted samples in [0, 1]."""

    samples: tuple

    def __post_init__(self):
        xs = tuple(float(x) for x in self.samples)
        if not xs:
            raise ValidationError("need at least one sample")
        for x in xs:
            if not 0.0 <= x <= 1.0:
                raise OutOfDomain(f"sample {x} outside [0, 1]")
        for a, b in zip(xs, xs[1:]):
            if a > b:
                raise ValidationError("samples must be sorted ascending")
        object.__setattr__(self, "samples", xs)

    @classmethod
    def from_samples(cls, xs: Iterable[float]) -> "EmpiricalRV":
        return cls(tuple(sorted(float(x) for x in xs)))

    @classmethod
    def constant(cls, alpha: float, m: int = 1) -> "EmpiricalRV":
        return cls(tuple([float(alpha)] * m))

    @classmethod
    def uniform_grid(cls, m: int) -> "EmpiricalRV":
        """Midpoint grid (i - 1/2)/m, an m-sample stand-in for Uniform[0,1]."""
        return cls(tuple((i + 0.5) / m for i in range(m)))

    @classmethod
    def two_point(cls, a: float, b: float, m: int = 2) -> "EmpiricalRV":
        lo, hi = sorted((float(a), float(b)))
        k = m // 2
        return cls(tuple([lo] * k + [hi] * (m - k)))

    @property
    def m(self) -> int:
        return len(self.samples)

    @property
    def mean(self) -> Fraction:
        return sum((Fraction(x) for x in self.samples), Fraction(0)) / len(
            self.samples
        )


def _weighted_values(f) -> list:
    """(value, exact weight) pairs for an empirical RV or a step function."""
    if isinstance(f, EmpiricalRV):
        w = Fraction(1, f.m)
        return [(v, w) for v in f.samples]
    if isinstance(f, StepFunction1D):
        return [
            (v, Fraction(f.breaks[k + 1]) - Fraction(f.breaks[k]))
            for k, v in enumerate(f.values)
        ]
    raise ValidationError(f"unsupported input {type(f).__name__}")


def distribution_function(f, grid: Sequence = ()) -> StepFunction1D:
    """Measure of the super-level sets {f > t}, t in [0, 1].

    Exact, right-continuous, non-increasing.  ``grid`` may list extra
    breakpoints to refine the representation (values are unchanged).  When
    1 itself is an atom of f the reported value at t = 1 is the left limit,
    since a left-closed piece cannot carry a single-point drop.
    """
    pairs = _weighted_values(f)
    weight_above = {}
    for v, w in pairs:
        weight_above[v] = weight_above.get(v, Fraction(0)) + w
    distinct = sorted(weight_above)
    total = sum(weight_above.values())

    cuts = [Fraction(0)]
    for v in distinct:
        if 0 < v < 1:
            cuts.append(v)
    for g in grid:
        if 0 < g < 1:
            cuts.append(g)
    cuts = sorted(set(cuts)) + [Fraction(1)]

    vals = []
    for t in cuts[:-1]:
        above = sum(w for v, w in weight_above.items() if v > t)
        vals.append(above)
    return StepFunction1D(tuple(cuts), tuple(vals), "non-increasing")


def rearrangement(f) -> StepFunction1D:
    """Non-increasing rearrangement on [0, 1].

    For an empirical RV this is the descending sort laid out on pieces of
    width 1/M (equal neighbours merged); step functions are rearranged by
    sorting pieces by value.
    """
    pairs = sorted(_weighted_values(f), key=lambda vw: vw[0], reverse=True)
    breaks = [Fraction(0)]
    vals = []
    acc = Fraction(0)
    for v, w in pairs:
        acc += w
        if vals and v == vals[-1]:
            breaks[-1] = acc
        else:
            vals.append(v)
            breaks.append(acc)
    if breaks[-1] != 1:
        raise ValidationError("total weight must be 1 for a rearrangement")
    return StepFunction1D(tuple(breaks), tuple(vals), "non-increasing")


def _simpson_estimate(g, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = g(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


# Per-level tolerance decay.  1/sqrt(2) instead of the textbook 1/2 so that
# integrands with sqrt-type endpoint singularities (local Simpson error
# ~ h^1.5) still converge within the depth cap.
_TOL_DECAY = 0.7071067811865476


def _adaptive(g, a, fa, b, fb, m, fm, whole, tol, depth):
    lm, flm, left = _simpson_estimate(g, a, fa, m, fm)
    rm, frm, right = _simpson_estimate(g, m, fm, b, fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise ToleranceNotMet(
            f"quadrature did not reach tolerance on [{a}, {b}]"
        )
    half_tol = tol * _TOL_DECAY
    return _adaptive(
        g, a, fa, m, fm, lm, flm, left, half_tol, depth - 1
    ) + _adaptive(g, m, fm, b, fb, rm, frm, right, half_tol, depth - 1)


MAX_QUAD_DEPTH = 40


def integrate(g, a=0.0, b=1.0, tol: float = 1e-9):
    """Integral of ``g`` over [a, b].

    Step functions integrate exactly (Fraction result); callables go
    through adaptive Simpson quadrature with absolute tolerance ``tol``
    and refinement depth capped at :data:`MAX_QUAD_DEPTH`.
    """
    if isinstance(g, StepFunction1D):
        return g.integral(a, b)
    a, b = float(a), float(b)
    if a > b:
        raise ValidationError("integration bounds out of order")
    if a == b:
        return 0.0
    fa, fb = g(a), g(b)
    m, fm, whole = _simpson_estimate(g, a, fa, b, fb)
    return _adaptive(g, a, fa, b, fb, m, fm, whole, tol, MAX_QUAD_DEPTH)
