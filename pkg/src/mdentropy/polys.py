"""Exact polynomial primitives over the rationals.

``RationalPoly`` is a polynomial in the dimer density ``p``; ``DPoly`` is a
polynomial in ``1/d``.  Both keep only nonzero coefficients and use
``fractions.Fraction`` throughout.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

Number = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"num/den"`` strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals; pass 'num/den'")
    return Fraction(x)


def fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def join_terms(parts) -> str:
    """``a + b`` with ``+ -c`` rendered as ``- c``."""
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _clean(coeffs: Mapping[int, Number]) -> Dict[int, Fraction]:
    return {int(k): Fraction(v) for k, v in coeffs.items() if v != 0}


class RationalPoly:
    """Polynomial in ``p`` with exact rational coefficients.

    Exponents are non-negative; ``div_pow`` raises rather than produce a
    negative power.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Number] | None = None):
        c = _clean(coeffs or {})
        if any(k < 0 for k in c):
            raise ValueError("negative exponent in RationalPoly")
        self._c = c

    @classmethod
    def const(cls, value: Number) -> "RationalPoly":
        return cls({0: value})

    @classmethod
    def monomial(cls, power: int, coeff: Number = 1) -> "RationalPoly":
        return cls({power: coeff})

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._c)

    def coeff(self, power: int) -> Fraction:
        return self._c.get(power, Fraction(0))

    def powers(self) -> Tuple[int, ...]:
        return tuple(sorted(self._c))

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def low_degree(self) -> int:
        return min(self._c) if self._c else -1

    def truncate(self, pmax: int | None) -> "RationalPoly":
        if pmax is None:
            return self
        return RationalPoly({k: v for k, v in self._c.items() if k <= pmax})

    def __add__(self, other):
        if not isinstance(other, _SCALARS):
            return NotImplemented
        other = _lift(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return RationalPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, _SCALARS):
            return NotImplemented
        return self + (-_lift(other))

    def __rsub__(self, other):
        if not isinstance(other, _SCALARS):
            return NotImplemented
        return _lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, _SCALARS):
            return NotImplemented
        other = _lift(other)
        out: Dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = RationalPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def div_pow(self, k: int) -> "RationalPoly":
        """Exact division by ``p**k``."""
        if self._c and min(self._c) < k:
            raise ValueError(f"polynomial is not divisible by p^{k}")
        return RationalPoly({e - k: v for e, v in self._c.items()})

    def __call__(self, p):
        return sum(v * p**e for e, v in self._c.items()) if self._c else 0 * p

    def __eq__(self, other):
        try:
            other = _lift(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __repr__(self):
        return f"RationalPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c):
            c = fmt_fraction(self._c[e])
            parts.append(c if e == 0 else (f"{c} * p^{e}" if e > 1 else f"{c} * p"))
        return join_terms(parts)


_SCALARS = (int, Fraction, RationalPoly)


def _lift(x) -> RationalPoly:
    if isinstance(x, RationalPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a RationalPoly")


P = RationalPoly.monomial(1)


class DPoly:
    """Polynomial in ``1/d``: ``{r: C_r}`` means ``sum C_r / d**r``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Number] | None = None):
        self._c = _clean(coeffs or {})

    @classmethod
    def from_strings(cls, coeffs: Mapping[int, str]) -> "DPoly":
        return cls({r: as_fraction(v) for r, v in coeffs.items()})

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._c)

    def coeff(self, r: int) -> Fraction:
        return self._c.get(r, Fraction(0))

    def powers(self) -> Tuple[int, ...]:
        return tuple(sorted(self._c))

    def __call__(self, d):
        if isinstance(d, int):
            return sum((v / Fraction(d) ** r for r, v in self._c.items()), Fraction(0))
        return sum(float(v) / d**r for r, v in self._c.items())

    def __add__(self, other: "DPoly"):
        out = dict(self._c)
        for r, v in other._c.items():
            out[r] = out.get(r, 0) + v
        return DPoly(out)

    def __sub__(self, other: "DPoly"):
        return self + DPoly({r: -v for r, v in other._c.items()})

    def __eq__(self, other):
        if not isinstance(other, DPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __repr__(self):
        return f"DPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for r in sorted(self._c):
            c = fmt_fraction(self._c[r])
            parts.append(c if r == 0 else (f"{c} * 1/d" if r == 1 else f"{c} * 1/d^{r}"))
        return join_terms(parts)

    def to_json(self) -> Dict[str, str]:
        return {str(r): fmt_fraction(v) for r, v in sorted(self._c.items())}


def solve_exact(rows: Iterable[Iterable[Fraction]], rhs: Iterable[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over Fractions for a square nonsingular system."""
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    n = len(m)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]
