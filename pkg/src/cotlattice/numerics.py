"""Small numeric building blocks: compensated accumulation, integer
powers, zeta-style tail estimates, and Richardson extrapolation."""

from __future__ import annotations

import math
from typing import Sequence

__all__ = [
    "ipow",
    "Kahan",
    "zeta_tail",
    "zeta_tail_upper",
    "richardson",
]

EPS = 2.0 ** -52


def ipow(base, e: int):
    """base**e for integer e >= 0 by binary exponentiation.

    Works for float and complex alike and preserves exact conjugate
    symmetry (only multiplications are used).
    """
    if e < 0:
        raise ValueError("ipow expects e >= 0")
    result = 1.0 if isinstance(base, float) else type(base)(1)
    b = base
    m = e
    while m:
        if m & 1:
            result = result * b
        m >>= 1
        if m:
            b = b * b
    return result


class Kahan:
    """Compensated (Kahan) accumulator.

    Works componentwise for complex values since complex +/- are exact
    per component whenever the float operations are.
    """

    __slots__ = ("total", "_c")

    def __init__(self, start: complex = 0j) -> None:
        self.total = start
        self._c = 0j

    def add(self, x: complex) -> None:
        y = x - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


def zeta_tail(s: float, cutoff: int) -> tuple[float, float]:
    """Estimate sum_{k > cutoff} k**-s with a certified remainder bound.

    Uses Euler-Maclaurin through the third derivative term:

        sum_{k>K} k^-s = a^(1-s)/(s-1) + a^-s/2 + s a^-(s+1)/12
                         - s(s+1)(s+2) a^-(s+3)/720 + R,   a = K + 1,

    where |R| is at most the first omitted term because the derivatives
    of x^-s alternate in sign.  Returns (estimate, remainder_bound).
    """
    if s <= 1.0:
        raise ValueError(f"zeta_tail needs s > 1, got {s}")
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    a = cutoff + 1.0
    est = (
        a ** (1.0 - s) / (s - 1.0)
        + 0.5 * a ** (-s)
        + s * a ** (-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * a ** (-s - 3.0) / 720.0
    )
    rem = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * a ** (-s - 5.0) / 30240.0
    return est, rem


def zeta_tail_upper(s: float, cutoff: int) -> float:
    """Crude upper bound on sum_{k > cutoff} k**-s by integral comparison."""
    if s <= 1.0:
        raise ValueError(f"zeta_tail_upper needs s > 1, got {s}")
    return float(cutoff) ** (1.0 - s) / (s - 1.0)


def richardson(values: Sequence[float], step_ratio: float,
               noise: Sequence[float] | None = None) -> tuple[float, float]:
    """Extrapolate a sequence v_i = L + c1 h_i + c2 h_i^2 + ... to h -> 0.

    ``values[i]`` corresponds to step h_i = h_0 / step_ratio**i.  Builds
    the standard triangular table

        T[i][m] = (r^m T[i+1][m-1] - T[i][m-1]) / (r^m - 1)

    and returns the entry with the smallest combined difference from its
    parents (a Ridders-style stopping rule), so samples whose refinement
    has sunk below the noise floor do not poison the answer.  ``noise``
    optionally supplies a per-sample noise magnitude that is propagated
    through the table and added to the reported error.

    Returns (best_value, err_estimate).
    """
    n = len(values)
    if n < 2:
        raise ValueError("richardson needs at least 2 values")
    if step_ratio <= 1.0:
        raise ValueError(f"step_ratio must exceed 1, got {step_ratio}")
    col = list(values)
    ncol = list(noise) if noise is not None else [0.0] * n
    best = col[-1]
    best_err = abs(col[-1] - col[-2]) + ncol[-1]
    for m in range(1, n):
        factor = step_ratio ** m
        nxt: list[float] = []
        nnxt: list[float] = []
        for i in range(n - m):
            t = (factor * col[i + 1] - col[i]) / (factor - 1.0)
            tn = (factor * ncol[i + 1] + ncol[i]) / (factor - 1.0)
            err = abs(t - col[i + 1]) + abs(t - col[i]) + tn
            if err < best_err:
                best, best_err = t, err
            nxt.append(t)
            nnxt.append(tn)
        col, ncol = nxt, nnxt
    # The samples are rounded doubles, so a perfectly collapsed table
    # still cannot certify below their ulp scale.
    floor = 4.0 * EPS * max(abs(v) for v in values)
    return best, max(best_err, floor)
