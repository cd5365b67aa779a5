"""Exception types shared across the package."""


class BetweennessError(Exception):
    """Base class for all errors raised by this package."""


class FormulaSyntaxError(BetweennessError):
    """Formula text does not conform to the grammar."""

    def __init__(self, message, position, expected=()):
        detail = f"{message} at position {position}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)
        self.position = position
        self.expected = tuple(expected)


class EmptyFormulaError(BetweennessError):
    """Formula text contains no tokens."""


class UnknownVertexError(BetweennessError):
    """A vertex name does not belong to the signature's universe."""

    def __init__(self, name, position=None):
        detail = f"unknown vertex {name!r}"
        if position is not None:
            detail += f" at position {position}"
        super().__init__(detail)
        self.name = name
        self.position = position


class SignatureMismatchError(BetweennessError):
    """A formula or atom mentions vertices outside the graph's universe."""


class GraphFormatError(BetweennessError):
    """Graph text does not conform to the line-oriented format."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class SubstitutionError(BetweennessError):
    """A schema substitution names the wrong set variables."""


class MissingSubstituentError(SubstitutionError):
    """A schema substitution lacks one of the template's set variables."""


class SideConditionViolatedError(BetweennessError):
    """A schema's side condition fails for the given substitution."""


class TooManyAtomsError(BetweennessError):
    """Tautology check would exceed the configured atom cap."""

    def __init__(self, count, cap):
        super().__init__(f"formula has {count} distinct atoms, cap is {cap}")
        self.count = count
        self.cap = cap


class ProofFormatError(BetweennessError):
    """Proof file is not valid JSON or lacks required structure."""


class UniverseTooLargeError(BetweennessError):
    """Universe exceeds the graph-enumeration cap."""

    def __init__(self, size, cap):
        super().__init__(f"universe has {size} vertices, enumeration cap is {cap}")
        self.size = size
        self.cap = cap
