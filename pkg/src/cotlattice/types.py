"""Shared value types and domain validation.

Conventions used throughout the package:

* Scalars are ordinary Python ``complex`` (``float`` inputs are accepted
  everywhere and treated as complex numbers with zero imaginary part).
  Every value returned by a public operation has finite real and
  imaginary parts; anything else raises instead of propagating inf/nan.
* The series order n is a plain ``int`` >= 1, validated at entry.
* Every evaluator takes a :class:`Tolerance` and returns an
  :class:`EvalResult` whose ``err_estimate`` is a justified bound, never
  a guess.

All types here are immutable and all functions are pure, so everything
is safe to share across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "Method",
    "DomainStatus",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "EvalResult",
    "validate_domain",
    "require_order",
    "require_finite_scalar",
]

#: Relative proximity at which a lattice denominator k^n + z^n is treated
#: as an exact pole by validate_domain.
POLE_EPS = 1e-12


class Method(enum.Enum):
    """Identifies which evaluation route produced a value."""

    DIRECT_SUM = "direct"
    CLOSED_FORM = "closed"
    DYADIC_RECURSION = "dyadic"
    THETA_INTEGRAL = "theta"


class DomainStatus(enum.Enum):
    """Outcome of :func:`validate_domain` for a point (n, z)."""

    OK = "ok"
    POLE = "pole"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class Tolerance:
    """Accuracy targets and work budgets shared by all evaluators.

    An evaluator meets tolerance when its error bound is at most
    ``max(abs_tol, rel_tol * |value|)``.  At least one of the two
    targets must be positive.

    Attributes:
        abs_tol: absolute error target.
        rel_tol: relative error target.
        max_terms: cap on series terms a direct summation may consume.
        max_nodes: cap on quadrature nodes an integration may consume.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_terms: int = 10_000_000
    max_nodes: int = 100_000

    def __post_init__(self) -> None:
        if not (math.isfinite(self.abs_tol) and self.abs_tol >= 0.0):
            raise ValueError(f"abs_tol must be finite and >= 0, got {self.abs_tol!r}")
        if not (math.isfinite(self.rel_tol) and self.rel_tol >= 0.0):
            raise ValueError(f"rel_tol must be finite and >= 0, got {self.rel_tol!r}")
        if self.abs_tol + self.rel_tol <= 0.0:
            raise ValueError("at least one of abs_tol, rel_tol must be positive")
        if int(self.max_terms) < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms!r}")
        if int(self.max_nodes) < 1:
            raise ValueError(f"max_nodes must be >= 1, got {self.max_nodes!r}")

    def target(self, value_scale: float) -> float:
        """Error bound that counts as meeting tolerance at magnitude
        ``value_scale``."""
        return max(self.abs_tol, self.rel_tol * abs(value_scale))


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class EvalResult:
    """A computed value together with its accountable error bound.

    Attributes:
        value: the computed sum, always stored as ``complex``.
        err_estimate: certified upper-ish bound on ``|value - truth|``;
            combines the analytic truncation bound with a rounding model.
        method: which route produced the value.
        work: series terms summed or quadrature nodes used.
    """

    value: complex
    err_estimate: float
    method: Method
    work: int

    def __post_init__(self) -> None:
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"non-finite value {v!r}")
        if not (math.isfinite(self.err_estimate) and self.err_estimate >= 0.0):
            raise ValueError(f"err_estimate must be finite and >= 0, got {self.err_estimate!r}")


def require_order(n: int, minimum: int = 1) -> int:
    """Validate a series order.  Returns n as a plain int."""
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"order n must be an int, got {type(n).__name__}")
    if n < minimum:
        raise ValueError(f"order n must be >= {minimum}, got {n}")
    return n


def require_finite_scalar(z: complex, name: str = "z") -> complex:
    """Coerce to complex and reject non-finite input."""
    w = complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise ValueError(f"{name} must be finite, got {w!r}")
    return w


def _pole_candidates(az: float) -> list[int]:
    # A vanishing k^n + z^n forces |k| = |z|, so only integers near |z|
    # (and near 0 when |z| is small) can witness a pole.
    hi = az + 2.0
    if hi <= 64.0:
        return list(range(-int(hi), int(hi) + 1))
    lo_band = max(0, int(math.floor(az)) - 2)
    hi_band = min(int(hi), int(math.ceil(az)) + 2)
    ks = {0}
    for k in range(lo_band, hi_band + 1):
        ks.add(k)
        ks.add(-k)
    return sorted(ks)


def validate_domain(n: int, z: complex, pole_eps: float = POLE_EPS) -> DomainStatus:
    """Classify the point (n, z) for the lattice sum over 1/(k^n + z^n).

    Returns ``EXCLUDED`` for even n at z = 0 (the singular point of the
    closed forms), ``POLE`` when k^n + z^n vanishes for some integer k
    (at z = 0 with odd n the k = 0 denominator is the witness), and
    ``OK`` otherwise.

    A pole requires |k| = |z|, so only integers in the window
    |k| <= |z| + 2 are scanned.  Vanishing is tested relative to the
    size of the candidate addends,

        |k^n + z^n| < pole_eps * max(|k|^n, |z|^n),

    which catches the near-cancellations that would destroy accuracy
    while never flagging a small-but-honest denominator (for |z| < 1
    and large n, |z|^n alone is tiny at the harmless k = 0).  For even
    n and real z != 0 every denominator is at least z^n > 0, so the
    outcome is always OK.
    """
    require_order(n)
    z = require_finite_scalar(z)
    if z == 0:
        return DomainStatus.EXCLUDED if n % 2 == 0 else DomainStatus.POLE
    if n % 2 == 0 and z.imag == 0.0:
        return DomainStatus.OK
    az = abs(z)
    # Work with z/s and k/s so no power overflows for candidates with
    # |k| close to |z|; far-out candidates overflow to inf harmlessly.
    s = max(1.0, az)
    zsn = _ipow_complex(z / s, n)
    azn = abs(zsn)
    for k in _pole_candidates(az):
        if k == 0 or abs(k) > az + 2.0:
            continue
        ksn = _ipow_complex(k / s, n)
        t = ksn + zsn
        if abs(t) < pole_eps * max(abs(ksn), azn):
            return DomainStatus.POLE
    return DomainStatus.OK


def _ipow_complex(base: complex, e: int) -> complex:
    # Binary exponentiation; float multiply overflow yields inf without
    # raising, which the caller's magnitude test handles correctly.
    result = complex(1.0)
    b = complex(base)
    m = e
    while m:
        if m & 1:
            result *= b
        b *= b
        m >>= 1
    return result
