class ParityError(ValueError):
    """A stem pair whose F1 is not even or whose F2 is not odd in r."""


class PreconditionError(ValueError):
    """An operation's mathematical hypothesis does not hold for its input."""


class VariableMismatch(ValueError):
    """A polynomial's variables fall outside an operator's domain."""
