"""Recursive bounds on the monomer-dimer entropy in dimension d from d - 1.

The lower family is rigorous; the two upper bounds assume the finite-subset
entropy conjecture in dimension ``d - 1`` and are therefore rigorous only
for ``d = 2`` (where the ``d = 1`` case of the conjecture holds).

Maximisations scan a dense grid and then polish the best cell with golden
section search; no unimodality is assumed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable, Iterable, List, Sequence

import numpy as np

from .closed_forms import expansion_eval, lambda1_exact, lamc_omega, mean_field, xlogx

GRID_POINTS = 2048
CURVE_SAMPLES = 4097
INVPHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class BaseCurve:
    """A stand-in for the entropy in dimension ``d - 1``; vectorised in ``p``."""

    name: str
    fn: Callable

    def __call__(self, p):
        return self.fn(p)


class SampledCurve:
    """Piecewise-linear interpolant of curve values on ``[0, 1]``.

    Interpolating a pointwise lower bound of a concave function stays a lower
    bound, which is what makes the chained lower bound rigorous.
    """

    def __init__(self, xs: Sequence[float], ys: Sequence[float], name: str = "chained"):
        self.xs = np.asarray(xs, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        self.name = name

    def __call__(self, p):
        out = np.interp(p, self.xs, self.ys)
        return float(out) if np.ndim(p) == 0 else out


class MaxCurve:
    """Pointwise maximum of several lower-bound curves."""

    def __init__(self, *curves, name: str = "chained"):
        self.curves = curves
        self.name = name

    def __call__(self, p):
        out = self.curves[0](p)
        for c in self.curves[1:]:
            out = np.maximum(out, c(p))
        return float(out) if np.ndim(p) == 0 else out


EXACT_LAMBDA1 = BaseCurve("exact-lambda1", lambda1_exact)


def lamc_curve(d: int) -> BaseCurve:
    return BaseCurve(f"lamc-{d}", partial(lamc_omega, d))


def mean_field_curve(d: int) -> BaseCurve:
    return BaseCurve(f"mean-field-{d}", partial(mean_field, d))


def expansion_curve(d: int, kmax: int = 6) -> BaseCurve:
    return BaseCurve("expansion", partial(expansion_eval, d, kmax=kmax))


def _check(d, p, lo=None, name="q"):
    if int(d) != d or d < 2:
        raise ValueError("recursive bounds need d >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if lo is not None and not 0.0 <= lo <= p + 1e-15:
        raise ValueError(f"{name} must lie in [0, p]")


def _ratio(num, den):
    den = np.asarray(den, dtype=float)
    return np.clip(np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0), 0.0, 1.0)


# ------------------------------------------------------------- bound families


def _lower_family(p, q, base):
    r = (p - q) / 2
    return base(q) + xlogx(1 - q) - xlogx(r) + xlogx(1 - r) - xlogx(1 - p)


def brace_A(p, u, base):
    """Bracketed expression of the first upper bound at vertical density ``u``."""
    h = u / 2
    return xlogx(1 - h) - xlogx(h) - xlogx(1 - u) + (1 - u) * base(_ratio(p - u, 1 - u))


def brace_B(p, u, base):
    """Bracketed expression of the alternate upper bound at vertical density ``u``."""
    h = u / 2
    return xlogx(1 - p + h) - xlogx(h) - xlogx(1 - p) + (1 - h) * base(_ratio(p - u, 1 - h))


def brace_gap(p: float, u: float) -> float:
    """``(p - u)/2 * log((1 - u/2)/(1 - u))``: brace A minus brace B under mean field."""
    if not 0.0 <= u <= p <= 1.0:
        raise ValueError("need 0 <= u <= p <= 1")
    if p == u:
        return 0.0
    return 0.5 * (p - u) * math.log((1 - u / 2) / (1 - u))


# ---------------------------------------------------------------- maximiser


def golden_max(f, a, b, tol: float = 1e-13, maxiter: int = 200):
    """Golden-section search for a maximum, elementwise over arrays of brackets."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    for _ in range(maxiter):
        if np.all(b - a <= tol):
            break
        c = b - INVPHI * (b - a)
        e = a + INVPHI * (b - a)
        left = f(c) >= f(e)
        a, b = np.where(left, a, c), np.where(left, e, b)
    x = (a + b) / 2
    return f(x), x


def maximize(F, p, lo, hi, grid: int = GRID_POINTS, extra=None, chunk: int = 1 << 21):
    """Maximise ``F(p, x)`` over ``x in [lo, hi]`` for each entry of ``p``.

    Returns ``(values, argmax)``.  ``extra`` holds candidate points that are
    always evaluated (e.g. the closed-form choice of the recursion).
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    lo = np.broadcast_to(np.asarray(lo, dtype=float), p.shape)
    hi = np.broadcast_to(np.asarray(hi, dtype=float), p.shape)
    ts = np.linspace(0.0, 1.0, grid)
    best_v = np.empty_like(p)
    best_x = np.empty_like(p)
    step = max(1, chunk // grid)
    for s in range(0, p.size, step):
        sl = slice(s, s + step)
        X = lo[sl, None] + (hi[sl] - lo[sl])[:, None] * ts
        V = F(p[sl, None], X)
        i = np.argmax(V, axis=1)
        rows = np.arange(X.shape[0])
        best_v[sl] = V[rows, i]
        best_x[sl] = X[rows, i]
        a = X[rows, np.maximum(i - 1, 0)]
        b = X[rows, np.minimum(i + 1, grid - 1)]
        gv, gx = golden_max(lambda x, pp=p[sl]: F(pp, x), a, b)
        better = gv > best_v[sl]
        best_v[sl] = np.where(better, gv, best_v[sl])
        best_x[sl] = np.where(better, gx, best_x[sl])
    if extra is not None:
        ex = np.clip(np.broadcast_to(np.asarray(extra, dtype=float), p.shape), lo, hi)
        ev = F(p, ex)
        better = ev > best_v
        best_v = np.where(better, ev, best_v)
        best_x = np.where(better, ex, best_x)
    return best_v, best_x


def _u_interval(p, d, u_range):
    p = np.asarray(p, dtype=float)
    if u_range == "low":
        return np.zeros_like(p), p / d
    if u_range == "high":
        return p / d, p
    raise ValueError("u_range must be 'low' or 'high'")


# --------------------------------------------------------------- public API


def lower_bound_at_q(d: int, p: float, q: float, base=EXACT_LAMBDA1) -> float:
    """Member ``q`` of the lower family built from the ``d - 1`` curve ``base``."""
    _check(d, p, q)
    if q > p:
        raise ValueError("q must not exceed p")
    return float(_lower_family(float(p), float(q), base))


def recur_bound(d: int, p: float, base=EXACT_LAMBDA1) -> float:
    """Lower family at ``q = p (1 - 1/d)``."""
    _check(d, p)
    return lower_bound_at_q(d, p, p * (1 - 1 / d), base)


def lower_bound(d: int, p: float, base=EXACT_LAMBDA1, grid: int = GRID_POINTS) -> tuple[float, float]:
    """Best member of the lower family: ``(value, q*)``."""
    _check(d, p)
    v, x = maximize(lambda pp, q: _lower_family(pp, q, base), p, 0.0, p, grid, extra=p * (1 - 1 / d))
    return float(v[0]), float(x[0])


def upper_bound_A(d: int, p: float, base=EXACT_LAMBDA1, grid: int = GRID_POINTS, u_range: str = "low"):
    """First upper bound: ``(value, u*)`` with ``u`` in ``[0, p/d]`` by default."""
    _check(d, p)
    lo, hi = _u_interval(p, d, u_range)
    v, x = maximize(lambda pp, u: brace_A(pp, u, base), p, lo, hi, grid)
    return float(v[0]), float(x[0])


def upper_bound_B(d: int, p: float, base=EXACT_LAMBDA1, grid: int = GRID_POINTS, u_range: str = "low"):
    """Alternate upper bound: ``(value, u*)`` with ``u`` in ``[0, p/d]`` by default."""
    _check(d, p)
    lo, hi = _u_interval(p, d, u_range)
    v, x = maximize(lambda pp, u: brace_B(pp, u, base), p, lo, hi, grid)
    return float(v[0]), float(x[0])


# ------------------------------------------------------------------- chain


@dataclass(frozen=True)
class BoundReport:
    d: int
    p: float
    lower_value: float
    lower_q_star: float
    recur_value: float
    upperA_value: float
    upperA_u_star: float
    upperB_value: float
    upperB_u_star: float
    base_curve_id: str

    @property
    def conditional(self) -> bool:
        """Upper bounds rest on the subset-entropy conjecture when ``d >= 3``."""
        return self.d >= 3

    CSV_HEADER = ("d", "p", "lb", "q_star", "recur", "ubA", "uA_star", "ubB", "uB_star", "conditional_flag")

    def csv_row(self, fmt: Callable[[float], str] = repr) -> list[str]:
        return [
            str(self.d),
            fmt(self.p),
            fmt(self.lower_value),
            fmt(self.lower_q_star),
            fmt(self.recur_value),
            fmt(self.upperA_value),
            fmt(self.upperA_u_star),
            fmt(self.upperB_value),
            fmt(self.upperB_u_star),
            "conditional" if self.conditional else "rigorous",
        ]


def _level(d, ps, lower_base, upper_base, grid, u_range="low"):
    ps = np.asarray(ps, dtype=float)
    q_rec = ps * (1 - 1 / d)
    lv, lq = maximize(lambda pp, q: _lower_family(pp, q, lower_base), ps, 0.0, ps, grid, extra=q_rec)
    rec = _lower_family(ps, q_rec, lower_base)
    lo, hi = _u_interval(ps, d, u_range)
    av, au = maximize(lambda pp, u: brace_A(pp, u, upper_base), ps, lo, hi, grid)
    bv, bu = maximize(lambda pp, u: brace_B(pp, u, upper_base), ps, lo, hi, grid)
    return lv, lq, rec, av, au, bv, bu


def chain(
    d_target: int,
    p_grid: Iterable[float],
    samples: int = CURVE_SAMPLES,
    grid: int = GRID_POINTS,
    u_range: str = "low",
    all_levels: bool = False,
) -> List[BoundReport]:
    """Iterate the bounds from the exact line entropy up to ``d_target``.

    Between levels the lower curve is replaced by the maximum of the
    lower-bound interpolant and ``omega_{2d}`` and the upper curve by the interpolant
    of ``min(upper A, upper B)``, both sampled on ``samples`` points.  With
    ``all_levels`` every dimension ``2..d_target`` is reported.
    """
    if int(d_target) != d_target or d_target < 2:
        raise ValueError("d_target must be >= 2")
    ps = np.asarray(list(p_grid), dtype=float)
    if ps.size and (ps.min() < 0 or ps.max() > 1):
        raise ValueError("p values must lie in [0, 1]")
    lower_base = upper_base = EXACT_LAMBDA1
    xs = np.linspace(0.0, 1.0, samples)
    reports: List[BoundReport] = []
    for d in range(2, int(d_target) + 1):
        if all_levels or d == d_target:
            lv, lq, rec, av, au, bv, bu = _level(d, ps, lower_base, upper_base, grid, u_range)
            base_id = EXACT_LAMBDA1.name if d == 2 else "chained"
            reports += [
                BoundReport(d, float(ps[i]), float(lv[i]), float(lq[i]), float(rec[i]),
                            float(av[i]), float(au[i]), float(bv[i]), float(bu[i]), base_id)
                for i in range(ps.size)
            ]
        if d < d_target:
            lv, _, _, av, _, bv, _ = _level(d, xs, lower_base, upper_base, grid, u_range)
            # omega_{2d} is evaluated exactly, not interpolated, so the next
            # level's recursion reproduces omega_{2(d+1)} at q = p(1 - 1/d)
            lower_base = MaxCurve(SampledCurve(xs, lv), lamc_curve(d))
            upper_base = SampledCurve(xs, np.minimum(av, bv))
    return reports


def chained_upper_curve(d: int, samples: int = CURVE_SAMPLES, grid: int = GRID_POINTS) -> SampledCurve:
    """``min(upper A, upper B)`` in dimension ``d`` as a sampled curve."""
    xs = np.linspace(0.0, 1.0, samples)
    reps = chain(d, xs, samples, grid)
    return SampledCurve(xs, [min(r.upperA_value, r.upperB_value) for r in reps], name=f"upper-{d}")
