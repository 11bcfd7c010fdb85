"""Exception hierarchy."""


class CrystalRepError(Exception):
    """Base class for all errors raised by crystalrep."""


class DimensionMismatch(CrystalRepError, ValueError):
    pass


class LatticeNotInvariant(CrystalRepError):
    def __init__(self, L, i):
        super().__init__(f"point-group element {L} does not map basis vector b_{i} into the lattice")
        self.L = L
        self.i = i


class CocycleNotInLattice(CrystalRepError):
    def __init__(self, L, M, detail=""):
        msg = f"cocycle alpha({L}, {M}) is not a lattice translation"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.L = L
        self.M = M


class BadCrossSection(CrystalRepError):
    pass


class UnknownGroupName(CrystalRepError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PointGroupNotClosed(CrystalRepError):
    pass


class DegenerateBisector(CrystalRepError):
    pass


class NontrivialStabilizer(CrystalRepError):
    pass


class UnboundedAfterCutoff(CrystalRepError):
    pass


class Unbounded(CrystalRepError):
    pass


class EmptyInterior(CrystalRepError):
    pass


class ReductionFailed(CrystalRepError):
    pass


class NotInOpenCopies(CrystalRepError):
    pass


class ProductNotInTranslations(CrystalRepError):
    pass


class TruncationNotInvariant(CrystalRepError):
    pass


class NonOrthonormalBasis(CrystalRepError):
    pass


class ParseError(CrystalRepError, ValueError):
    pass


class ValidationError(CrystalRepError):
    """Group definition parsed but failed crystal-group validation."""

    def __init__(self, cause):
        super().__init__(f"{type(cause).__name__}: {cause}")
        self.cause = cause


class DimensionUnsupported(CrystalRepError):
    pass
