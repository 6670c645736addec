"""Derived quantities: even zeta values and lattice product ratios.

Two families of consequences of the closed forms live here.

* ``zeta_even(n)`` returns zeta(2n).  The limit
  (1/2) lim_{z->0} (U_2n(z) - z^(-2n)) equals the k != 0 half of the
  lattice sum evaluated at z = 0, i.e. sum_{k>=1} 1/k^(2n), so we sum
  that series directly with an Euler-Maclaurin tail instead of
  subtracting two nearly equal numbers.  ``zeta_limit_diagnostic``
  keeps the literal limit path alive as a regression check: it
  evaluates U_2n(z_j) - z_j^(-2n) on a dyadic ladder z_j = 2^-j and
  Richardson-extrapolates, reporting how much accuracy the
  cancellation costs.

* ``product_ratio(query)`` evaluates

      prod_{k in Z} ((y^n + k^n) / (x^n + k^n))^2

  two ways: a truncated symmetric product accumulated in log space
  (the cross-check), and the closed form

      prod_{k=1}^n (cosh(2 pi y b_k) - cos(2 pi y a_k))
                 / (cosh(2 pi x b_k) - cos(2 pi x a_k))

  over the unit-circle kernel table (the reported value).  Each factor
  uses the cancellation-free half-angle form
  cosh(2w) - cos(2v) = 2 sinh(w)^2 + 2 sin(v)^2; with x, y in (0, 1)
  and |a|, |b| <= 1 the arguments stay below 2 pi, so no scaling is
  needed.  The reported err_estimate is |LHS - RHS| plus the
  truncation tail, so disagreement between the two routes is never
  hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed import kernel_table, u_closed
from .errors import DomainError, NonConvergentError
from .numerics import EPS, zeta_tail, zeta_tail_upper, richardson
from .types import (
    DEFAULT_TOLERANCE,
    EvalResult,
    Method,
    Tolerance,
    require_order,
)

__all__ = [
    "ZetaExtraction",
    "ProductQuery",
    "zeta_even",
    "zeta_limit_diagnostic",
    "product_parts",
    "compose_ratio",
    "product_ratio",
]


def zeta_even(n: int, tol: Tolerance = DEFAULT_TOLERANCE) -> EvalResult:
    """zeta(2n) as half the z -> 0 limit of U_2n(z) - z^(-2n).

    The limit quantity is exactly 2 sum_{k>=1} k^(-2n), so the series
    is summed to a cutoff K with an Euler-Maclaurin estimate of the
    rest; no cancellation occurs.  ``work`` is K.

    Raises NonConvergentError if the tail bound cannot meet tolerance
    within ``tol.max_terms`` terms (cannot happen for n >= 1 with sane
    budgets; kept for contract symmetry with the direct summator).
    """
    require_order(n)
    s = float(2 * n)
    cutoff = 16
    partial = float(np.sum(np.arange(cutoff, 0, -1, dtype=np.float64) ** (-s)))
    while True:
        est, rem = zeta_tail(s, cutoff)
        value = partial + est
        if rem <= 0.25 * tol.target(value):
            break
        if 2 * cutoff > int(tol.max_terms):
            raise NonConvergentError(
                f"zeta tail bound {rem:.3g} above target {tol.target(value):.3g} "
                f"at cutoff {cutoff} with max_terms={tol.max_terms}"
            )
        ks = np.arange(2 * cutoff, cutoff, -1, dtype=np.float64)
        partial += float(np.sum(ks ** (-s)))
        cutoff *= 2
    err = rem + EPS * value * (4.0 + math.log2(cutoff))
    return EvalResult(value=complex(value), err_estimate=err,
                      method=Method.DIRECT_SUM, work=cutoff)


@dataclass(frozen=True)
class ZetaExtraction:
    """Diagnostic record for the literal-limit route to zeta(2n).

    Attributes:
        n: target index, the extracted value approximates zeta(2n).
        samples: (z_j, U_2n(z_j) - z_j^(-2n)) pairs with z_j strictly
            decreasing toward 0; the second entries tend to 2 zeta(2n).
        extrapolated: Richardson limit of the ladder, divided by 2.
        err_estimate: extrapolation error plus the propagated
            cancellation noise (~eps * z_j^(-2n) per sample).
    """

    n: int
    samples: tuple[tuple[float, float], ...]
    extrapolated: float
    err_estimate: float

    def __post_init__(self) -> None:
        require_order(self.n)
        if len(self.samples) < 2:
            raise ValueError("need at least two limit samples")
        zs = [z for z, _ in self.samples]
        if any(b >= a for a, b in zip(zs, zs[1:])) or zs[-1] <= 0.0:
            raise ValueError("sample points must decrease strictly toward 0")
        if not math.isfinite(self.extrapolated):
            raise ValueError(f"non-finite extrapolated value {self.extrapolated!r}")


def zeta_limit_diagnostic(n: int, tol: Tolerance = DEFAULT_TOLERANCE) -> ZetaExtraction:
    """Demonstrational limit path to zeta(2n); less accurate on purpose.

    Evaluates g_j = U_2n(z_j) - z_j^(-2n) at z_j = 2^-j, j = 3..10, via
    the closed form.  Since g(z) = 2 zeta(2n) - 2 zeta(4n) z^(2n) + ...
    is a series in h = z^(2n), halving z divides h by 2^(2n), so
    Richardson extrapolation runs with step ratio 2^(2n).  The
    subtraction loses a factor ~z^(-2n)/zeta(2n) in relative accuracy;
    that loss is fed to the extrapolator as per-sample noise and lands
    in err_estimate.  Kept as a cross-check on ``zeta_even``, which
    avoids the subtraction entirely.
    """
    require_order(n)
    s = 2 * n
    samples: list[tuple[float, float]] = []
    noise: list[float] = []
    for j in range(3, 11):
        if s * j > 1000:
            break
        zj = 2.0 ** -j
        power = math.ldexp(1.0, s * j)
        res = u_closed(s, zj, tol)
        g = res.value.real - power
        if not math.isfinite(g):
            break
        samples.append((zj, g))
        noise.append(res.err_estimate + EPS * power)
    if len(samples) < 2:
        raise NonConvergentError(
            f"limit diagnostic for n={n} cannot form two finite samples: "
            f"z^(-{s}) leaves double range"
        )
    best, err = richardson([g for _, g in samples], step_ratio=2.0 ** s, noise=noise)
    return ZetaExtraction(n=n, samples=tuple(samples),
                          extrapolated=0.5 * best, err_estimate=0.5 * err)


@dataclass(frozen=True)
class ProductQuery:
    """Endpoints for the squared lattice product ratio.

    Invariant 0 < x <= y < 1.  The open unit interval keeps every
    factor positive for both parities of n: for even n the denominators
    y^n + k^n are positive outright, and for odd n the only candidate
    zero k = -x (or -y) would need an integer in (0, 1).
    """

    n: int
    x: float
    y: float

    def __post_init__(self) -> None:
        require_order(self.n)
        x = float(self.x)
        y = float(self.y)
        if not (math.isfinite(x) and math.isfinite(y) and 0.0 < x <= y < 1.0):
            raise DomainError(
                f"domain: product endpoints need 0 < x <= y < 1, "
                f"got x={self.x!r}, y={self.y!r}"
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


def _rhs_closed(n: int, x: float, y: float) -> EvalResult:
    # Factor k of the closed form, in the half-angle form that never
    # cancels: cosh(2 pi t b) - cos(2 pi t a) = 2 sinh(pi t b)^2
    # + 2 sin(pi t a)^2.  The common factors of 2 cancel in the ratio.
    total = 1.0
    for root in kernel_table(n):
        sh_y = math.sinh(math.pi * y * root.b)
        sn_y = math.sin(math.pi * y * root.a)
        sh_x = math.sinh(math.pi * x * root.b)
        sn_x = math.sin(math.pi * x * root.a)
        total *= (sh_y * sh_y + sn_y * sn_y) / (sh_x * sh_x + sn_x * sn_x)
    if not (math.isfinite(total) and total > 0.0):
        raise DomainError(
            f"domain: closed product for n={n} on ({x}, {y}) left double range"
        )
    err = total * EPS * (10.0 * n + 4.0)
    return EvalResult(value=complex(total), err_estimate=err,
                      method=Method.CLOSED_FORM, work=n)


def _lhs_series(n: int, x: float, y: float, tol: Tolerance,
                scale: float) -> EvalResult:
    """Truncated symmetric product, accumulated as 2 sum of log ratios.

    The k = 0 factor contributes n log(y/x) analytically.  Pairs
    (k, -k) combine to an absolutely convergent term for both parities:

        even n:  2 log1p((y^n - x^n) / (x^n + k^n))        ~ k^-n
        odd n:   log1p((x^(2n) - y^(2n)) / (k^(2n)-x^(2n))) ~ k^-2n

    so the tail after K obeys sum_{k>K} |term| <= C * zeta-tail with
    C = 2(y^n - x^n) (even) or (y^(2n) - x^(2n))/(1 - y^(2n)) (odd).
    The cutoff doubles until the tail meets 0.25 * tol.target(scale) or
    the term budget is exhausted; a budget stop is not an error, it
    just leaves a larger (honest) err_estimate on the cross-check.
    """
    xn = x ** n
    yn = y ** n
    if n % 2 == 0:
        tail_coeff = 2.0 * (yn - xn)
        tail_power = n
    else:
        tail_coeff = (yn * yn - xn * xn) / (1.0 - yn * yn)
        tail_power = 2 * n
    target = 0.25 * tol.target(scale) / max(scale, 1e-300)
    pair_sum = 0.0
    cutoff = 16
    lo = 1
    while True:
        ks = np.arange(lo, cutoff + 1, dtype=np.float64)
        with np.errstate(over="ignore"):
            if n % 2 == 0:
                u = (yn - xn) / (xn + ks ** n)
                pair_sum += 2.0 * float(np.sum(np.log1p(u)))
            else:
                u = (xn * xn - yn * yn) / (ks ** (2 * n) - xn * xn)
                pair_sum += float(np.sum(np.log1p(u)))
        tail = tail_coeff * zeta_tail_upper(float(tail_power), cutoff)
        if tail <= target or 2 * cutoff > int(tol.max_terms):
            break
        lo = cutoff + 1
        cutoff *= 2
    log_lhs = 2.0 * (n * (math.log(y) - math.log(x)) + pair_sum)
    value = math.exp(log_lhs)
    err = value * (math.expm1(2.0 * tail)
                   + EPS * (abs(log_lhs) + 2.0 * math.log2(cutoff + 2.0) + 8.0))
    return EvalResult(value=complex(value), err_estimate=err,
                      method=Method.DIRECT_SUM, work=2 * cutoff + 1)


def product_parts(query: ProductQuery,
                  tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[EvalResult, EvalResult]:
    """Both routes to the product ratio: (series LHS, closed-form RHS).

    Exposed so callers can report the cross-check alongside the value.
    At x == y both sides are the empty product, returned exactly.
    """
    if query.x == query.y:
        one = EvalResult(value=complex(1.0), err_estimate=0.0,
                         method=Method.DIRECT_SUM, work=0)
        return one, EvalResult(value=complex(1.0), err_estimate=0.0,
                               method=Method.CLOSED_FORM, work=0)
    rhs = _rhs_closed(query.n, query.x, query.y)
    lhs = _lhs_series(query.n, query.x, query.y, tol, abs(rhs.value))
    return lhs, rhs


def compose_ratio(lhs: EvalResult, rhs: EvalResult) -> EvalResult:
    """Fold the two product routes into the reported result.

    Value comes from the closed form; the error estimate charges the
    full disagreement against the truncated route plus both routes' own
    bounds, so it certifies the identity as well as the value.
    """
    err = abs(lhs.value.real - rhs.value.real) + lhs.err_estimate + rhs.err_estimate
    return EvalResult(value=rhs.value, err_estimate=err,
                      method=Method.CLOSED_FORM, work=lhs.work + rhs.work)


def product_ratio(query: ProductQuery,
                  tol: Tolerance = DEFAULT_TOLERANCE) -> EvalResult:
    """prod_{k in Z} ((y^n + k^n)/(x^n + k^n))^2, a real number >= 0.

    See :func:`compose_ratio` for how the two routes combine.
    ``product_ratio`` at x == y returns exactly 1.0 with zero error and
    zero work (the empty ratio).
    """
    lhs, rhs = product_parts(query, tol)
    return compose_ratio(lhs, rhs)
