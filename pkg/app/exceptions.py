class QcxError(Exception):
    """Base exception for all qcx errors"""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DomainError(QcxError):
    """Raised when an argument lies outside the region an operation trusts."""


class PoleProximityError(DomainError):
    """Raised when a point is closer to the pole than the evaluation guard."""


class NonConvergence(QcxError):
    """Raised when a truncated sum leaves a tail above its threshold"""


class MismatchError(QcxError):
    """Raised when two functions do not share pole location and order"""


class ZeroOnBoundary(QcxError):
    """Raised when the exterior-form derivative vanishes on the unit circle"""


class OmegaBoundViolation(QcxError):
    """Raised when sup|omega'| exceeds k/(1+p)^(m+1)"""


class DegeneratePrincipalPart(QcxError):
    """Raised when the non-degeneracy constant C is zero"""


class DilatationNotContractive(QcxError):
    """Raised when kappa = bound / C is not below one"""


class VanishingDenominator(QcxError):
    """Raised when a dilatation ratio has a vanishing denominator"""

    def __init__(self, message: str, location: complex = None):
        super().__init__(message)
        self.location = location


class CriticalPointError(QcxError):
    """Raised when f' vanishes where a Schwarzian is requested"""


class DegenerateMapError(QcxError):
    """Raised when a Mobius determinant falls below the threshold"""


class DegenerateEta(QcxError):
    """Raised when the comparison map has a (numerically) vanishing derivative"""


class SpecParseError(QcxError):
    """Raised when an input document does not match its schema"""

    def __init__(self, path: str, field: str, detail: str):
        super().__init__(f"{path}: field '{field}': {detail}")
        self.path = path
        self.field = field


class ReportIOError(QcxError):
    """Raised when a report artifact cannot be written"""

    def __init__(self, path, detail: str):
        super().__init__(f"Failed to write {path}: {detail}")
        self.path = path


class SelfIntersectionWarning(UserWarning):
    """Sampled image curve crosses itself at the requested resolution"""
