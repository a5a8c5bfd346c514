"""Exception hierarchy shared by all gridfloer modules."""


class GridFloerError(Exception):
    """Base class for every error raised by this package."""


class InputError(GridFloerError):
    """Malformed user input (bad files, bad flags)."""


class DomainError(GridFloerError):
    """Well-formed input on which an operation cannot proceed."""


class ParseError(InputError):
    pass


class NotAPermutation(InputError):
    pass


class OverlappingMarkings(InputError):
    pass


class SameComponent(DomainError):
    pass


class InvalidComponent(DomainError):
    pass


class LastComponent(DomainError):
    pass


class GridTooLarge(DomainError):
    pass


class NotDivisible(DomainError):
    """Exact polynomial division failed; indicates a computation bug."""


class NotChainMap(DomainError):
    """The chain-level action does not commute with the differential."""


class DimensionTooLarge(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class EmptyErosion(DomainError):
    pass


class NotASummand(DomainError):
    """Erosion produced a non-lattice polytope, so the cube is not a summand."""
