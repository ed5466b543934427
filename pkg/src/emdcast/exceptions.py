"""Exception types shared across the package."""


class DegenerateEnvelopeError(Exception):
    """Too few extrema to build both spline envelopes.

    During sifting this is a signal, not a failure: the current candidate
    is the residue and decomposition stops.
    """


class UndefinedScaleError(ValueError):
    """MASE scale denominator is zero (constant estimation sample)."""
