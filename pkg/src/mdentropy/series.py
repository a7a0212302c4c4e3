"""Formal series in ``1/d`` and the largest-term saddle point.

A ``DSeries`` is a truncated power series in ``1/d`` whose coefficients are
``RationalPoly`` objects in ``p``.  Series may additionally be truncated in
``p`` (``pmax``), which is what lets the regrouped coefficients ``a_k(d)``
be computed from finitely many cluster coefficients.

The saddle point works with the fixed-point form of the stationarity
condition.  Writing ``j = sum_k k alpha_k`` and ``H`` for the free-tile
exponent,

    alpha_k = Jbar_k exp(k dH/dj) = Jbar_k ((p - 2j) / (1 - 2j)**2)**k

and, at the stationary point, the exponent of ``Z*`` collapses to

    sum_k alpha_k + log(1 - 2j) + j - (p/2) log(1 - 2j/p),

so ``log p`` never appears and everything stays polynomial in ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional

from . import closed_forms
from .constants import JBAR
from .polys import DPoly, P, RationalPoly, as_fraction, fmt_fraction, join_terms

HEADS: Dict[str, Callable[[int, float], float]] = {"mean_field": closed_forms.mean_field}


class SeriesError(ValueError):
    """Invalid formal-series operation (bad constant term, head misuse)."""


class InsufficientOrdersError(ValueError):
    """Not enough cluster coefficients or series orders for the request."""


def _min_pmax(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class DSeries:
    """Truncated series ``sum_{k=0}^{order} coeff_k(p) / d**k``."""

    __slots__ = ("order", "pmax", "head", "_c")

    def __init__(
        self,
        coeffs: Mapping[int, RationalPoly | int | Fraction] | None = None,
        order: int = 3,
        pmax: Optional[int] = None,
        head: Optional[str] = None,
    ):
        if order < 0:
            raise SeriesError("order must be non-negative")
        if head is not None and head not in HEADS:
            raise SeriesError(f"unknown head {head!r}")
        self.order = order
        self.pmax = pmax
        self.head = head
        c: Dict[int, RationalPoly] = {}
        for k, v in (coeffs or {}).items():
            if k < 0:
                raise SeriesError("negative power of 1/d")
            if k > order:
                continue
            poly = (v if isinstance(v, RationalPoly) else RationalPoly.const(v)).truncate(pmax)
            if not poly.is_zero():
                c[k] = poly
        self._c = c

    # construction helpers
    @classmethod
    def const(cls, value, order: int = 3, pmax: Optional[int] = None) -> "DSeries":
        return cls({0: value}, order, pmax)

    @classmethod
    def inv_d(cls, order: int = 3, pmax: Optional[int] = None) -> "DSeries":
        return cls({1: 1}, order, pmax)

    @classmethod
    def from_dpoly(cls, poly: DPoly, order: int = 3, pmax: Optional[int] = None) -> "DSeries":
        return cls({r: c for r, c in poly.coeffs.items()}, order, pmax)

    def _like(self, coeffs, order=None, pmax="same", head=None) -> "DSeries":
        return DSeries(coeffs, self.order if order is None else order, self.pmax if pmax == "same" else pmax, head)

    # access
    def coeff(self, k: int) -> RationalPoly:
        return self._c.get(k, RationalPoly())

    @property
    def coeffs(self) -> Dict[int, RationalPoly]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c and self.head is None

    def valuation(self) -> int:
        """Lowest power of ``1/d`` present (``order + 1`` for zero)."""
        return min(self._c) if self._c else self.order + 1

    # arithmetic
    def _coerce(self, other) -> "DSeries":
        if isinstance(other, DSeries):
            return other
        if isinstance(other, (int, Fraction, RationalPoly)):
            return DSeries.const(other, self.order, self.pmax)
        raise TypeError(f"cannot combine DSeries with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        if self.head and other.head:
            raise SeriesError("cannot add two series that both carry a head")
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, RationalPoly()) + v
        return DSeries(out, min(self.order, other.order), _min_pmax(self.pmax, other.pmax), self.head or other.head)

    __radd__ = __add__

    def __neg__(self):
        if self.head:
            raise SeriesError("cannot negate a series with a head")
        return self._like({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.head or other.head:
            raise SeriesError("multiplication is not defined for series with a head")
        order = min(self.order, other.order)
        pmax = _min_pmax(self.pmax, other.pmax)
        out: Dict[int, RationalPoly] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                if i + j <= order:
                    out[i + j] = out.get(i + j, RationalPoly()) + (a * b).truncate(pmax)
        return DSeries(out, order, pmax)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise SeriesError("negative powers are not supported; use compose")
        out = DSeries.const(1, self.order, self.pmax)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def div_pow(self, k: int) -> "DSeries":
        """Divide every coefficient by ``p**k`` exactly."""
        pmax = None if self.pmax is None else self.pmax - k
        return DSeries({r: v.div_pow(k) for r, v in self._c.items()}, self.order, pmax)

    def truncate(self, order: Optional[int] = None, pmax: Optional[int] = None) -> "DSeries":
        return DSeries(self._c, self.order if order is None else min(order, self.order),
                       _min_pmax(self.pmax, pmax), self.head)

    def compose(self, taylor: Iterable[Fraction | int]) -> "DSeries":
        """Evaluate ``sum_n taylor[n] * self**n``; requires zero ``d**0`` term."""
        if self.head:
            raise SeriesError("cannot compose a series with a head")
        if not self.coeff(0).is_zero():
            raise SeriesError("composition needs a series that is O(1/d)")
        taylor = list(taylor)[: self.order + 1]
        out = DSeries({}, self.order, self.pmax)
        power = DSeries.const(1, self.order, self.pmax)
        for n, t in enumerate(taylor):
            if n:
                power = power * self
            if t:
                out = out + power * as_fraction(t)
        return out

    def exp(self) -> "DSeries":
        if not self.coeff(0).is_zero():
            raise SeriesError("exp needs a series that is O(1/d)")
        return self.compose(Fraction(1, math.factorial(n)) for n in range(self.order + 1))

    def log(self) -> "DSeries":
        if self.coeff(0) != RationalPoly.const(1):
            raise SeriesError("log needs constant term 1")
        x = self - 1
        return x.compose([0] + [Fraction((-1) ** (n + 1), n) for n in range(1, self.order + 1)])

    # comparison / evaluation / io
    def __eq__(self, other):
        if not isinstance(other, DSeries):
            return NotImplemented
        return self._c == other._c and self.head == other.head

    def __hash__(self):
        return hash((tuple(sorted((k, hash(v)) for k, v in self._c.items())), self.head))

    def evaluate(self, d, p) -> float:
        val = sum(float(v(Fraction(p) if isinstance(p, Fraction) else p)) / d**k for k, v in self._c.items())
        if self.head:
            val += HEADS[self.head](d, p)
        return float(val)

    def terms(self):
        """``(d_power, p_power, coeff)`` triples in sorted order."""
        for k in sorted(self._c):
            for s, c in sorted(self._c[k].coeffs.items()):
                yield k, s, c

    def __str__(self):
        parts = [f"{self.head}(d, p)"] if self.head else []
        for k, s, c in self.terms():
            term = fmt_fraction(c)
            if s:
                term += f" * p^{s}"
            if k:
                term += " / d" if k == 1 else f" / d^{k}"
            parts.append(term)
        return join_terms(parts)

    def __repr__(self):
        return f"DSeries({self}; order={self.order}, pmax={self.pmax})"

    def to_json(self) -> dict:
        return {
            "schema": "1",
            "order": self.order,
            "pmax": self.pmax,
            "head": self.head,
            "terms": [{"d_power": k, "p_power": s, "coef": fmt_fraction(c)} for k, s, c in self.terms()],
        }


def series_arith(a: DSeries, b: Optional[DSeries], op: str) -> DSeries:
    """Dispatch ``add``, ``sub``, ``mul``, ``exp``, ``log`` on formal series."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    raise SeriesError(f"unknown op {op!r}")


# --------------------------------------------------------------- saddle point


@dataclass(frozen=True)
class SaddleState:
    alphas: Dict[int, DSeries]
    j: DSeries
    exp_F: Dict[int, DSeries]  # exp(F_k) = ((p - 2j) / (1 - 2j)^2)^k


def _saddle_inputs(jbars: Mapping[int, DPoly] | None, K: int, pmax: Optional[int]):
    jbars = dict(JBAR if jbars is None else jbars)
    if K < 1:
        raise InsufficientOrdersError("K must be >= 1")
    need = 2 * K if pmax is None else min(2 * K, pmax)
    missing = [s for s in range(2, need + 1) if s not in jbars]
    if missing:
        raise InsufficientOrdersError(
            f"order K={K} (pmax={pmax}) needs Jbar_s for s <= {need}; missing {missing}"
        )
    # p-division in the log term consumes up to K - 1 powers of p
    inner_pmax = None if pmax is None else pmax + K
    series = {
        s: DSeries.from_dpoly(v, K, inner_pmax) for s, v in jbars.items() if s >= 2 and v.coeffs
    }
    return series, inner_pmax


def _exp_F(j: DSeries, k: int) -> DSeries:
    # (1 - 2j)^(-2k) = sum_n C(2k + n - 1, n) (2j)^n
    inv = (j * 2).compose(math.comb(2 * k + n - 1, n) for n in range(j.order + 1))
    return ((P - j * 2) ** k) * inv


def saddle_iterate(jbars: Mapping[int, DSeries], state: SaddleState) -> SaddleState:
    """One sweep of ``alpha_k <- Jbar_k exp(F_k(alpha))``."""
    exp_F = {k: _exp_F(state.j, k) for k in jbars}
    alphas = {k: jbars[k] * exp_F[k] for k in jbars}
    order = next(iter(jbars.values())).order
    pmax = next(iter(jbars.values())).pmax
    j = DSeries({}, order, pmax)
    for k, a in alphas.items():
        j = j + a * k
    return SaddleState(alphas, j, exp_F)


def saddle_state(jbars: Mapping[int, DPoly] | None = None, K: int = 3, pmax: Optional[int] = None) -> SaddleState:
    """Iterate the stationarity condition to its fixed point in formal series."""
    series, inner_pmax = _saddle_inputs(jbars, K, pmax)
    zero = DSeries({}, K, inner_pmax)
    state = SaddleState({k: zero for k in series}, zero, {})
    # each sweep fixes one more order of 1/d; allow one spare sweep
    for _ in range(K + 2):
        nxt = saddle_iterate(series, state)
        if nxt.alphas == state.alphas:
            return nxt
        state = nxt
    raise SeriesError("saddle-point iteration did not stabilise")


def saddle_exponent(state: SaddleState) -> DSeries:
    """Per-site exponent of ``Z*`` at the stationary point."""
    j = state.j
    K = j.order
    total = DSeries({}, K, j.pmax)
    for a in state.alphas.values():
        total = total + a
    # log(1 - 2j) + j
    total = total + j.compose([0, -1] + [Fraction(-(2**n), n) for n in range(2, K + 1)])
    # -(p/2) log(1 - 2j/p) = sum_n 2^(n-1) j^n / (n p^(n-1))
    power = DSeries.const(1, K, j.pmax)
    for n in range(1, K + 1):
        power = power * j
        total = total + power.div_pow(n - 1) * Fraction(2 ** (n - 1), n)
    return total


def saddle_solve(jbars: Mapping[int, DPoly] | None = None, K: int = 3, pmax: Optional[int] = None) -> DSeries:
    """``sum_{k=1}^{K} c_k(p) / d**k`` with the mean-field term as symbolic head.

    With the default cluster coefficients (through ``Jbar_6``) the result is
    complete for ``K <= 3``; larger ``K`` requires ``pmax <= 6``.
    """
    state = saddle_state(jbars, K, pmax)
    exponent = saddle_exponent(state).truncate(pmax=pmax)
    if pmax is not None:
        exponent = DSeries(exponent.coeffs, K, pmax)
    return DSeries(exponent.coeffs, K, pmax, head="mean_field")


def rearrange_in_p(series: DSeries, kmax: int) -> Dict[int, DPoly]:
    """Regroup ``sum_k c_k(p)/d^k`` as ``sum_s a_s(d) p^s`` for ``s = 2..kmax``."""
    if kmax < 2:
        raise InsufficientOrdersError("kmax must be >= 2")
    # p^s only appears in c_k with s/2 <= k < s
    if series.order < kmax - 1 or (series.pmax is not None and series.pmax < kmax):
        raise InsufficientOrdersError(
            f"kmax={kmax} needs order >= {kmax - 1} and pmax >= {kmax}; "
            f"got order={series.order}, pmax={series.pmax}"
        )
    out: Dict[int, DPoly] = {}
    for s in range(2, kmax + 1):
        out[s] = DPoly({k: series.coeff(k).coeff(s) for k in range(series.order + 1)})
    return out


def expansion_coefficients(kmax: int = 6, jbars: Mapping[int, DPoly] | None = None) -> Dict[int, DPoly]:
    """``a_k(d)`` for ``k = 2..kmax`` derived from the cluster coefficients."""
    return rearrange_in_p(saddle_solve(jbars, K=kmax - 1, pmax=kmax), kmax)


# ------------------------------------------------------------ ansatz residual


def residual_check(a, b, c, order: int = 3) -> DSeries:
    """Right minus left side of the heuristic recursion under the two-term ansatz.

    The ansatz is mean field + ``a p^2/d + (b p^4 + c p^3)/(96 d^2)``.  The
    mean-field pieces of both sides (including every ``log p`` and
    ``log 2d``) cancel to ``x + (1 - x) log(1 - x)`` with ``x = p/(2d)``;
    what remains is a polynomial series in ``1/d``.
    """
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    eps = DSeries.inv_d(order)
    inv_1m = eps.compose([1] * (order + 1))  # 1/(1 - 1/d)
    q = P * (1 - eps)
    x = eps * (P * Fraction(1, 2))
    head_part = x.compose([0, 0] + [Fraction(1, n * (n - 1)) for n in range(2, order + 1)])
    tail_prev = (q**2 * a) * eps * inv_1m + (q**4 * b + q**3 * c) * Fraction(1, 96) * (eps * inv_1m) ** 2
    tail_here = eps * (P**2 * a) + (eps**2) * ((P**4 * b + P**3 * c) * Fraction(1, 96))
    return head_part + tail_prev - tail_here


@dataclass(frozen=True)
class Theorem62Verdict:
    a: Fraction
    b: Fraction
    c: Fraction
    A: bool
    B: bool
    C: bool

    @property
    def all_pass(self) -> bool:
        return self.A and self.B and self.C

    def as_dict(self) -> dict:
        return {"a": fmt_fraction(self.a), "b": fmt_fraction(self.b), "c": fmt_fraction(self.c),
                "A": self.A, "B": self.B, "C": self.C}


def theorem62_conditions(a, b, c) -> Theorem62Verdict:
    """Sign conditions the lower recursion imposes on the ansatz coefficients.

    A) ``a >= 1/8``; B) if ``a = 1/8``, ``-2 + 2bp + c >= 0`` on ``[0, 1]``
    (linear in ``p``, so checked at the endpoints); C) if ``a = 1/8`` and
    ``c = 2``, ``b >= 0``.  Implications with a false premise pass.
    """
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    eighth = Fraction(1, 8)
    A = a >= eighth
    B = a != eighth or (c - 2 >= 0 and 2 * b + c - 2 >= 0)
    C = not (a == eighth and c == 2) or b >= 0
    return Theorem62Verdict(a, b, c, A, B, C)
