"""Exception types shared across the package."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (e.g. a probability left [0, 1]).

    These are never silenced: two supposedly-equivalent computation routes
    disagreed, so the result cannot be trusted.  The command line maps this
    to exit status 2.
    """


class PairingAlarm(ConsistencyError):
    """A forest realized a leg pairing that should be geometrically impossible."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class InsufficientCutoffError(ValueError):
    """A truncated series was asked for a coefficient beyond its cutoff."""
