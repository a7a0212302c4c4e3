"""Closed-form entropy functions.

Every function takes the convention ``0 log 0 = 0`` and accepts either a
scalar or a numpy array for the density argument; scalars come back as
Python floats.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .constants import A_K


class DomainError(ValueError):
    """Argument outside the domain of a closed form."""


def xlogx(x):
    """``x * log(x)`` with ``0 log 0 = 0``; scalar or array."""
    if np.ndim(x) == 0:
        x = float(x)
        return x * math.log(x) if x > 0 else 0.0
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log(safe), 0.0)


def _unit(p, name="p", tol=0.0):
    arr = np.asarray(p, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < -tol) or np.any(arr > 1 + tol):
        raise DomainError(f"{name} must lie in [0, 1]")
    return p


def _dim(d):
    if int(d) != d or d < 1:
        raise DomainError("dimension d must be a positive integer")
    return int(d)


def _out(value, like):
    return float(value) if np.ndim(like) == 0 else value


def lambda1_exact(p):
    """Exact monomer-dimer p-entropy of the line ``Z``."""
    _unit(p)
    h = np.asarray(p, dtype=float) / 2
    return _out(xlogx(1 - h) - xlogx(h) - xlogx(1 - 2 * h), p)


def lambda1_series_coeff(k: int) -> Fraction:
    """Coefficient of ``p**k`` in the power series of ``lambda_1`` beyond mean field."""
    if int(k) != k or k < 2:
        raise DomainError("k must be an integer >= 2")
    return Fraction(1, (k - 1) * k * 2**k)


def mean_field(d, p):
    """``(p log 2d - p log p - 2(1-p) log(1-p) - p) / 2``."""
    d = _dim(d)
    _unit(p)
    q = np.asarray(p, dtype=float)
    return _out(0.5 * (q * math.log(2 * d) - xlogx(q) - 2 * xlogx(1 - q) - q), p)


def expansion_eval(d, p, kmax: int = 6):
    """Mean field plus ``sum_{k=2}^{kmax} a_k(d) p**k``."""
    if kmax not in range(2, max(A_K) + 1):
        raise DomainError(f"kmax must be in 2..{max(A_K)}")
    d = _dim(d)
    q = np.asarray(p, dtype=float)
    total = mean_field(d, p) + sum(float(A_K[k](d)) * q**k for k in range(2, kmax + 1))
    return _out(total, p)


def lamc_omega(d, p):
    """Lower asymptotic matching function ``omega_{2d}(p)``."""
    d = _dim(d)
    _unit(p)
    q = np.asarray(p, dtype=float)
    two_d = 2 * d
    val = 0.5 * (
        q * math.log(two_d) - xlogx(q) - 2 * xlogx(1 - q) + (two_d - q) * np.log1p(-q / two_d)
    )
    return _out(val, p)


def minc_bounds(d) -> tuple[float, float, float]:
    """Dimer-entropy sandwich: van der Waerden lower, Bregman upper, Stirling upper."""
    d = _dim(d)
    two_d = 2 * d
    lower = 0.5 * math.log(two_d) - 0.5
    bregman = math.lgamma(two_d + 1) / (4 * d)
    stirling = lower + math.log(2 * math.pi * two_d) / (4 * d) + 1 / (48 * d * d)
    return lower, bregman, stirling


def intro_bounds(d, p):
    """Density-resolved version of the Minc sandwich: ``(lower, upper)``."""
    d = _dim(d)
    _unit(p)
    q = np.asarray(p, dtype=float)
    rest = -xlogx(q) - 2 * xlogx(1 - q)
    lower = 0.5 * (q * math.log(2 * d) + rest - q)
    upper = 0.5 * (q * math.lgamma(2 * d + 1) / (2 * d) + rest)
    return _out(lower, p), _out(upper, p)


def H(p, j):
    """Large-N exponent of the free-tile normalisation factor.

    ``(1-2j) log(1-2j) + j + (p/2) log p - (p/2 - j) log(p - 2j)``,
    defined for ``0 <= 2j <= p <= 1``.
    """
    _unit(p)
    p_arr = np.asarray(p, dtype=float)
    j_arr = np.asarray(j, dtype=float)
    if np.any(j_arr < 0) or np.any(2 * j_arr > p_arr + 1e-15):
        raise DomainError("j must lie in [0, p/2]")
    val = xlogx(1 - 2 * j_arr) + j_arr + 0.5 * xlogx(p_arr) - 0.5 * xlogx(np.maximum(p_arr - 2 * j_arr, 0.0))
    return _out(val, p if np.ndim(p) else j)


def H_slope(p, j):
    """``dH/dj = log(p - 2j) - 2 log(1 - 2j)`` for ``0 <= 2j < p``."""
    return math.log(p - 2 * j) - 2 * math.log(1 - 2 * j)
