"""Exception types shared across the package."""

from __future__ import annotations


class CapacityError(ValueError):
    """A requested computation exceeds a hard combinatorial size guard."""


class NumericalError(RuntimeError):
    """A numerical identity that should hold (e.g. a real-valued permanent) failed."""


class TruncationError(ValueError):
    """A Fock-space cutoff is too small for the requested state or operator power."""


class ZeroProbabilityError(ValueError):
    """A conditioning event has zero probability (e.g. projecting the vacuum)."""


class AccumulatorOverflowError(RuntimeError):
    """A Monte Carlo accumulator left the finite floating-point range."""
