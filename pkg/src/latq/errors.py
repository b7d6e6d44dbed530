"""Exception types shared across the package."""


class LatticeInputError(ValueError):
    """Malformed lattice data (non-symmetric gram, bad entry, rank mismatch)."""


class NotPositiveDefinite(ValueError):
    pass


class CapExhausted(RuntimeError):
    """A configured search/stream cap was hit before the answer was decided."""


class PrecisionExhausted(RuntimeError):
    """A local decision could not be certified at the working precision."""


class EmptyDSetError(Exception):
    """Signals that the nonsplit-extension set of a sublattice is empty."""
