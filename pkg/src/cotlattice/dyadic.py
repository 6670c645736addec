"""Dyadic recursion for U_(2^m)(z).

The scalar factorization 1/(a^2 + b^2) = [1/(a - ib) - 1/(a + ib)]/(2ib)
applied with a = k^(2^(m-1)), b = z^(2^(m-1)) turns the order-2^m
lattice sum into a difference of two order-2^(m-1) sums at rotated
arguments:

    phi_m(z) = [phi_(m-1)(r_neg z) - phi_(m-1)(r_pos z)] / (2i z^(2^(m-1)))

with r_pos = exp(i pi 2^-m) and r_neg = exp(3 i pi 2^-m), so that
(r_pos z)^(2^(m-1)) = +i z^(2^(m-1)) and (r_neg z)^(2^(m-1)) =
-i z^(2^(m-1)).  Fractional powers of i are taken on the principal
branch, i^t = exp(i pi t / 2); the orientation (which rotation is the
minuend) is fixed by that branch choice and cross-checked against
direct summation in the test suite.

The base case phi_1 = U_2 is evaluated by a selectable method; the
recursion itself costs 2^(m-1) base evaluations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .closed import u_closed
from .direct import u_direct
from .errors import DomainError, RecursionPoleError
from .numerics import EPS, ipow
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

__all__ = ["DyadicLevel", "MAX_LEVEL", "dyadic_level", "phi"]

#: Deepest supported level; the series exponent 2^m reaches 1024 here and
#: z^(2^(m-1)) would under/overflow doubles soon after.
MAX_LEVEL = 10


@dataclass(frozen=True)
class DyadicLevel:
    """Rotations used to descend from level m to level m - 1."""

    m: int
    rotation_pos: complex  # exp(i pi 2^-m): maps to +i z^(2^(m-1))
    rotation_neg: complex  # exp(3 i pi 2^-m): maps to -i z^(2^(m-1))


@lru_cache(maxsize=None)
def dyadic_level(m: int) -> DyadicLevel:
    """Rotation pair for level m >= 1."""
    require_order(m)
    ang = math.pi * 2.0**-m
    return DyadicLevel(
        m=m,
        rotation_pos=cmath.exp(1j * ang),
        rotation_neg=cmath.exp(3j * ang),
    )


def _base_eval(z: complex, tol: Tolerance, base: Method) -> EvalResult:
    if base is Method.CLOSED_FORM:
        res = u_closed(2, z, tol)
    else:
        res = u_direct(2, z, tol)
    return res


def _phi_rec(m: int, z: complex, tol: Tolerance, base: Method) -> EvalResult:
    if m == 1:
        return _base_eval(z, tol, base)
    level = dyadic_level(m)
    half = 2 ** (m - 1)
    zp = ipow(z, half)
    denom = 2j * zp
    if denom == 0 or not (math.isfinite(zp.real) and math.isfinite(zp.imag)):
        raise DomainError(
            f"domain: z^{half} under/overflows at recursion level m={m}; "
            "evaluate via u_closed instead"
        )
    try:
        res_neg = _phi_rec(m - 1, level.rotation_neg * z, tol, base)
        res_pos = _phi_rec(m - 1, level.rotation_pos * z, tol, base)
    except RecursionPoleError:
        raise
    except DomainError as exc:
        raise RecursionPoleError(
            f"recursion: rotated argument at level m={m - 1} hits a pole "
            f"of U_{2 ** (m - 1)} ({exc})"
        ) from exc
    a, b = res_neg.value, res_pos.value
    diff = a - b
    abs_sum = abs(a) + abs(b)
    value = diff / denom
    scale = abs(denom)
    # Child errors propagate through the division; the subtraction adds
    # rounding at the abs-sum scale, which is what inflates the estimate
    # when a and b nearly cancel.
    err = (res_neg.err_estimate + res_pos.err_estimate + 2.0 * EPS * abs_sum) / scale
    err += 4.0 * EPS * abs(value)
    return EvalResult(
        value=value,
        err_estimate=err,
        method=Method.DYADIC_RECURSION,
        work=res_neg.work + res_pos.work,
    )


def phi(
    m: int,
    z: complex,
    tol: Tolerance = DEFAULT_TOLERANCE,
    base: Method = Method.CLOSED_FORM,
) -> EvalResult:
    """Evaluate phi_m(z) = U_(2^m)(z) by the halving recursion.

    Args:
        m: recursion level, 1 <= m <= 10; the series order is 2^m.
        z: evaluation point, z != 0.
        tol: tolerance forwarded to the base evaluations.
        base: method for the phi_1 = U_2 base case; DIRECT_SUM or
            CLOSED_FORM.

    Returns:
        EvalResult tagged DYADIC_RECURSION; work is the summed base
        work, err_estimate the propagated child bound including
        cancellation inflation of the level subtractions.

    Raises:
        DomainError: z = 0, z a pole of U_(2^m), or z^(2^(m-1)) not
            representable.
        RecursionPoleError: a rotated intermediate argument hits a pole
            of a lower level.
        ValueError: m outside 1..10 (use u_closed for higher orders:
            its cost is n kernel terms with no depth limit).
    """
    require_order(m)
    if m > MAX_LEVEL:
        raise ValueError(
            f"recursion level m={m} exceeds {MAX_LEVEL} (exponent 2^{m}); "
            "z^(2^(m-1)) under/overflows doubles there -- use u_closed, "
            "whose cost is linear in the order"
        )
    z = require_finite_scalar(z)
    if z == 0:
        raise DomainError("domain: z=0 excluded for even n")
    status = validate_domain(2**m, z)
    if status is not DomainStatus.OK:
        raise DomainError(f"domain: U_{2 ** m} at z={z}: {status.value}")
    if not isinstance(base, Method):
        raise TypeError(f"base must be a Method, got {base!r}")
    if base not in (Method.CLOSED_FORM, Method.DIRECT_SUM):
        raise ValueError(f"base must be CLOSED_FORM or DIRECT_SUM, got {base}")
    res = _phi_rec(m, complex(z), tol, base)
    if m == 1:
        # Base case carries the base method's tag; the contract is that
        # phi always reports the recursion method.
        res = EvalResult(
            value=res.value,
            err_estimate=res.err_estimate,
            method=Method.DYADIC_RECURSION,
            work=res.work,
        )
    return res
