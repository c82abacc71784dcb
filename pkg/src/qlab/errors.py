"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI reports.
Validation problems (bad input documents, out-of-range options) map to exit
status 2, mathematical obstructions (a dual of a non-quadratic algebra, a
trivial extension that is not quadratic, ...) map to exit status 3.
"""


class QlabError(Exception):
    code = "error"
    exit_status = 3


class ValidationError(QlabError):
    code = "validation"
    exit_status = 2

    def __init__(self, message, element=None):
        if element is not None:
            message = f"{message}: {element!r}"
        super().__init__(message)
        self.element = element


class ParseError(ValidationError):
    code = "parse"


class UnknownVertex(ValidationError):
    code = "unknown-vertex"


class NonHomogeneous(ValidationError):
    code = "non-homogeneous"


class ParameterZero(ValidationError):
    code = "parameter-zero"


class SizeTooSmall(ValidationError):
    code = "size-too-small"


class UnsupportedFamily(ValidationError):
    code = "unsupported-family"


class NonOrthonormalTable(ValidationError):
    code = "non-orthonormal-table"


class NotIntegerMultiplicity(QlabError):
    code = "non-integer-multiplicity"


class NonUnitConstantTerm(QlabError):
    code = "non-unit-constant-term"


class NotQuadratic(QlabError):
    code = "not-quadratic"


class NonQuadratic(QlabError):
    """Degree-2 relations of a trivial extension fail to present it."""

    code = "non-quadratic"

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NotProperlyGraded(QlabError):
    code = "not-properly-graded"


class DegreeCapExceeded(QlabError):
    code = "degree-cap-exceeded"


class NotLoewyBounded(QlabError):
    code = "not-loewy-bounded"


class WindowTooSmall(QlabError):
    code = "window-too-small"


class NotASource(QlabError):
    code = "not-a-source"


class NotASink(QlabError):
    code = "not-a-sink"
