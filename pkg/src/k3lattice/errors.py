class LatticeError(Exception):
    """Base class for every error raised by k3lattice."""


class DegenerateSpace(LatticeError):
    pass


class NonIntegralPairing(LatticeError):
    pass


class OddNorm(LatticeError):
    pass


class NotSublattice(LatticeError):
    pass


class NotIsotropic(LatticeError):
    pass


class NotEmbedding(LatticeError):
    pass


class TooLarge(LatticeError):
    pass


class RealizationNotFound(LatticeError):
    pass


class AmbiguousMatch(LatticeError):
    pass


class NoSection(LatticeError):
    pass


class NotFound(LatticeError):
    pass
