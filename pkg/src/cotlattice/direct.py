"""Direct evaluation of U_n(z) = sum over all integers k of 1/(k^n + z^n).

The sum is always taken as the symmetric limit of partial sums over
|k| <= K.  For even n the terms at +-k coincide and the series converges
absolutely.  For odd n the +-k terms are combined algebraically,

    1/(k^n + z^n) + 1/((-k)^n + z^n) = 2 z^n / (z^(2n) - k^(2n)),

which turns the conditionally convergent series into an absolutely
convergent one with O(k^(-2n)) terms; partial sums of the paired form
reproduce the symmetric limit by construction.

Truncation is certified by an integral-comparison majorant (see
:func:`tail_bound`); no tail refinement beyond the bound is attempted
here, so slowly converging cases (n = 1, 2 at tight tolerances) demand
large K and are better served by the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidCutoffError, NonConvergentError
from .numerics import EPS, Kahan, ipow
from .types import (
    DEFAULT_TOLERANCE,
    DomainStatus,
    EvalResult,
    Method,
    Tolerance,
    require_finite_scalar,
    require_order,
    validate_domain,
)

__all__ = ["TruncationPlan", "tail_bound", "plan_truncation", "u_direct"]

_CHUNK = 2_000_000


@dataclass(frozen=True)
class TruncationPlan:
    """A symmetric cutoff K together with its certified tail majorant."""

    cutoff: int
    tail: float


def _decay_power(n: int) -> int:
    # Modulus decay exponent of the summed terms: k^(-n) for even n,
    # k^(-2n) for the paired odd form.
    return n if n % 2 == 0 else 2 * n


def tail_bound(n: int, z: complex, cutoff: int) -> float:
    """Upper bound on the modulus of the discarded tail beyond ``cutoff``.

    For decay power p (= n even, 2n odd) and K > |z| the comparison

        sum_{k>K} 1/(k^p - |z|^p) <= 1/(1 - (|z|/K)^p) * K^(1-p)/(p-1)

    holds because x^p - |z|^p >= x^p (1 - (|z|/K)^p) on [K, inf).  When
    K >= 2^(1/p) |z| this reduces to the crude bound 2 * K^(1-p)/(p-1),
    i.e. integrating 2/x^p; near K ~ |z| the sharper prefactor keeps the
    bound valid.  The result is multiplied by 2 for the +-k pairing
    (even n) or by 2|z|^n for the paired odd numerator.
    """
    require_order(n)
    z = require_finite_scalar(z)
    az = abs(z)
    if cutoff != int(cutoff) or cutoff <= math.ceil(az) + 1:
        raise InvalidCutoffError(
            f"cutoff K={cutoff} must be an integer > ceil(|z|) + 1 = {math.ceil(az) + 1}"
        )
    k = float(cutoff)
    p = _decay_power(n)
    ratio = (az / k) ** p
    mult = 2.0 if n % 2 == 0 else 2.0 * az**n
    return mult / (1.0 - ratio) * k ** (1 - p) / (p - 1)


def plan_truncation(
    n: int, z: complex, tol: Tolerance = DEFAULT_TOLERANCE, value_scale: float = 0.0
) -> TruncationPlan:
    """Pick the doubling cutoff at which :func:`tail_bound` meets tolerance.

    Starts from K0 = max(16, 2*ceil(|z|)) and doubles.  ``value_scale``
    feeds the relative target; pass an estimate of |U_n(z)| when known.
    Raises NonConvergentError if no K within max_terms works.
    """
    require_order(n)
    z = require_finite_scalar(z)
    target = tol.target(value_scale)
    k = max(16, 2 * math.ceil(abs(z)))
    while True:
        bound = tail_bound(n, z, k)
        if bound <= target:
            return TruncationPlan(cutoff=k, tail=bound)
        if 2 * (2 * k) + 1 > tol.max_terms:
            raise NonConvergentError(
                f"direct tail bound {bound:.3g} > target {target:.3g} at K={k}; "
                f"doubling K would exceed max_terms={tol.max_terms} "
                f"(closed-form evaluation has no such limit)"
            )
        k *= 2


def _pair_sums_even(n: int, z: complex, lo: int, hi: int) -> complex:
    """Sum of 2/(k^n + z^n) for lo <= k <= hi (even n), vectorized."""
    acc = Kahan()
    w = ipow(z, n)
    a, b = w.real, w.imag
    for start in range(lo, hi + 1, _CHUNK):
        stop = min(start + _CHUNK - 1, hi)
        ks = np.arange(start, stop + 1, dtype=np.float64)
        with np.errstate(over="ignore", invalid="ignore"):
            kn = ks * ks if n == 2 else ks**n
            if b == 0.0:
                acc.add(complex(2.0 * float(np.sum(1.0 / (kn + a))), 0.0))
            else:
                # 2/(kn + a + ib) expanded over real arrays; terms whose
                # k^n overflowed contribute exactly 0.
                dre = kn + a
                m = 1.0 / (dre * dre + b * b)
                re_t = np.where(np.isfinite(dre), dre * m, 0.0)
                acc.add(complex(2.0 * float(np.sum(re_t)), -2.0 * b * float(np.sum(m))))
    return acc.total


def _pair_sums_odd(n: int, z: complex, lo: int, hi: int) -> complex:
    """Sum of 2 z^n / (z^(2n) - k^(2n)) for lo <= k <= hi (odd n)."""
    acc = Kahan()
    w = ipow(z, n)
    w2 = w * w
    p, q = w.real, w.imag
    cp, cq = w2.real, w2.imag
    for start in range(lo, hi + 1, _CHUNK):
        stop = min(start + _CHUNK - 1, hi)
        ks = np.arange(start, stop + 1, dtype=np.float64)
        with np.errstate(over="ignore", invalid="ignore"):
            k2n = ks ** (2 * n)
            dre = cp - k2n
            if q == 0.0 and cq == 0.0:
                acc.add(complex(2.0 * p * float(np.sum(1.0 / dre)), 0.0))
            else:
                m = 1.0 / (dre * dre + cq * cq)
                sr = float(np.sum(np.where(np.isfinite(dre), dre * m, 0.0)))
                si = float(np.sum(m))  # common factor of the imaginary part
                # 2(p + iq)(dre - i cq) * m summed over k.
                acc.add(
                    complex(
                        2.0 * (p * sr + q * cq * si),
                        2.0 * (q * sr - p * cq * si),
                    )
                )
    return acc.total


def u_direct(n: int, z: complex, tol: Tolerance = DEFAULT_TOLERANCE) -> EvalResult:
    """Evaluate U_n(z) by compensated symmetric summation.

    The cutoff doubles from K0 = max(16, 2*ceil(|z|)) until the analytic
    tail majorant meets ``max(abs_tol, rel_tol * |partial sum|)``; each
    doubling extends the previous partial sum, so the total work equals
    one pass over the final range.  ``err_estimate`` is the tail bound
    plus a small rounding allowance; ``work`` counts lattice terms
    covered (2K + 1).

    Raises DomainError at poles and excluded points, NonConvergentError
    if max_terms is hit first.
    """
    require_order(n)
    z = require_finite_scalar(z)
    status = validate_domain(n, z)
    if status is DomainStatus.EXCLUDED:
        raise DomainError("domain: z=0 excluded for even n")
    if status is not DomainStatus.OK:
        raise DomainError(f"domain: U_{n} at z={z}: {status.value}")

    pair = _pair_sums_even if n % 2 == 0 else _pair_sums_odd
    k = max(16, 2 * math.ceil(abs(z)))
    if 2 * k + 1 > tol.max_terms:
        raise NonConvergentError(
            f"u_direct(n={n}, z={z}): starting cutoff K={k} already exceeds "
            f"max_terms={tol.max_terms}"
        )
    w0 = ipow(z, n)
    if w0 == 0:
        raise DomainError(
            f"domain: z^{n} underflows double range at z={z}; the k=0 term "
            "1/z^n is not representable"
        )
    if not (math.isfinite(w0.real) and math.isfinite(w0.imag)):
        k0_term = 0j  # |z|^n overflowed, so the true k=0 term underflows
    else:
        k0_term = 1.0 / w0
    acc = Kahan()
    acc.add(pair(n, z, 1, k))
    while True:
        bound = tail_bound(n, z, k)
        value_scale = abs(acc.total + k0_term)
        if bound <= tol.target(value_scale):
            break
        if 2 * (2 * k) + 1 > tol.max_terms:
            raise NonConvergentError(
                f"u_direct(n={n}, z={z}): tail bound {bound:.3g} still above "
                f"target {tol.target(value_scale):.3g} at K={k} and doubling "
                f"would exceed max_terms={tol.max_terms}"
            )
        acc.add(pair(n, z, k + 1, 2 * k))
        k *= 2
    acc.add(k0_term)  # added last so compensation absorbs the large term
    value = acc.total
    err = bound + 4.0 * EPS * abs(value)
    return EvalResult(value=value, err_estimate=err, method=Method.DIRECT_SUM, work=2 * k + 1)
