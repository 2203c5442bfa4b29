"""Exception hierarchy shared by all modules."""


class PrymLatticeError(Exception):
    """Base class for every error raised by this package."""


class EmptyOrNonPositiveModulus(PrymLatticeError, ValueError):
    pass


class GroupMismatch(PrymLatticeError, ValueError):
    pass


class AmbientMismatch(PrymLatticeError, ValueError):
    pass


class InvalidBranchData(PrymLatticeError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(str(v) for v in self.violations) or "invalid branch data"
        super().__init__(text)


class InvalidCopyCount(PrymLatticeError, ValueError):
    pass


class OverrideBelowCertifiedLower(PrymLatticeError, ValueError):
    pass


class TorsionDetected(PrymLatticeError, RuntimeError):
    """H_1 of a closed orientable surface came out with torsion; this is a bug."""


class InvariantViolation(PrymLatticeError, RuntimeError):
    """An internal cross-check failed (oracle mismatch, broken certificate)."""
