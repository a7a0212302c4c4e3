"""Published reference values, stored exactly where they are exact.

The tables are re-derived elsewhere in the package (cluster enumeration,
saddle-point series, bounds); these copies are what the derivations are
checked against and what the CLI reports as reference columns.
"""
from __future__ import annotations

from fractions import Fraction as F

from .polys import DPoly, RationalPoly

# Per-site cluster coefficients Jbar_s as polynomials in 1/d.
JBAR: dict[int, DPoly] = {
    1: DPoly(),
    2: DPoly({1: F(1, 8)}),
    3: DPoly({2: F(1, 12)}),
    4: DPoly({2: F(-3, 32), 3: F(3, 64)}),
    5: DPoly({3: F(-1, 8), 4: F(-3, 80)}),
    6: DPoly({3: F(7, 48), 4: F(-5, 64), 5: F(-1, 6)}),
}

# Coefficients c_k(p) of 1/d^k beyond the mean-field term.
C_K: dict[int, RationalPoly] = {
    1: RationalPoly({2: F(1, 8)}),
    2: RationalPoly({3: F(2, 96), 4: F(3, 96)}),
    3: RationalPoly({4: F(-5, 192), 5: F(12, 192), 6: F(8, 192)}),
}

# a_k(d): coefficient of p^k after regrouping the 1/d series by powers of p.
A_K: dict[int, DPoly] = {
    2: DPoly({1: F(1, 8)}),
    3: DPoly({2: F(1, 48)}),
    4: DPoly({2: F(1, 32), 3: F(-5, 192)}),
    5: DPoly({3: F(1, 16), 4: F(-39, 640)}),
    6: DPoly({3: F(1, 24), 4: F(-1, 32), 5: F(-19, 1920)}),
}

# Table of lambda_2(p): (p, expansion, lower bound, reference, upper bound).
# The reference column comes from Baxter's corner-transfer values via
# p = 2 c3, lambda = ln c2 - (1 - p) ln c1; only the published 5-digit
# results are kept.
TABLE_LAMBDA2: tuple[tuple[float, float, float, float, float], ...] = (
    (0.0, 0.0, 0.0, 0.0, 0.0),
    (0.14870, 0.30887, 0.30887, 0.30887, 0.31030),
    (0.26030, 0.45283, 0.45281, 0.45284, 0.45734),
    (0.50426, 0.63492, 0.63449, 0.63495, 0.65274),
    (0.77053, 0.62983, 0.62678, 0.63086, 0.67319),
    (1.0, 0.27236, 0.26162, 0.29156, 0.34657),
)

BAXTER_REFERENCE: tuple[tuple[float, float], ...] = tuple((row[0], row[3]) for row in TABLE_LAMBDA2)

# Partial sums of the p-power expansion at p = 1 for kmax = 2..6.
SEQUENCES: dict[int, tuple[float, ...]] = {
    2: (0.2556, 0.2609, 0.2654, 0.2694, 0.2724),
    3: (0.4375, 0.4399, 0.4424, 0.4439, 0.4450),
}

LAMBDA2_DIMER = 0.29156  # Fisher / Kasteleyn, 5 d.p.
LAMBDA3_DIMER_RANGE = (0.440075, 0.457547)

__all__ = [
    "JBAR",
    "C_K",
    "A_K",
    "TABLE_LAMBDA2",
    "BAXTER_REFERENCE",
    "SEQUENCES",
    "LAMBDA2_DIMER",
    "LAMBDA3_DIMER_RANGE",
]


def manifest() -> dict:
    """Machine-readable dump of the constants, rationals as ``num/den``."""
    return {
        "schema": "1",
        "jbar": {str(s): v.to_json() for s, v in JBAR.items()},
        "c_k": {str(k): {str(e): str(c) for e, c in sorted(v.coeffs.items())} for k, v in C_K.items()},
        "a_k": {str(k): v.to_json() for k, v in A_K.items()},
        "table_lambda2": [list(row) for row in TABLE_LAMBDA2],
        "sequences": {str(d): list(v) for d, v in SEQUENCES.items()},
    }
