"""Exception hierarchy for the cotlattice package.

Two broad families matter to callers:

* ``DomainError`` and its subclasses mean the requested point is outside
  the domain of the series (a pole was hit or an excluded point was
  requested).  The CLI maps these to exit code 2.
* ``ToleranceError`` and its subclasses mean the point is fine but the
  requested accuracy could not be certified within the configured work
  budget.  The CLI maps these to exit code 1.
"""

from __future__ import annotations


class CotlatticeError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CotlatticeError):
    """The evaluation point is a pole or an excluded point of the series."""


class KernelSingularError(DomainError):
    """A closed-form kernel denominator cosh - cos vanished to working
    precision, which signals a pole (or a near-pole too close to resolve)."""


class RecursionPoleError(DomainError):
    """An intermediate rotated argument of the dyadic recursion landed on a
    pole of a lower level."""


class InvalidCutoffError(CotlatticeError, ValueError):
    """A truncation cutoff K does not satisfy K > ceil(|z|) + 1, so no valid
    tail majorant exists for it."""


class ToleranceError(CotlatticeError):
    """Requested tolerance could not be certified within the work budget."""


class NonConvergentError(ToleranceError):
    """Direct summation hit max_terms before the tail bound met tolerance."""


class QuadratureFailureError(ToleranceError):
    """Adaptive quadrature hit max_nodes before its error sum met tolerance."""
