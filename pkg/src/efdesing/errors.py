"""Exception types shared by all modules."""


class AlgebraError(ValueError):
    """An input violates an operation's precondition.

    The CLI maps these to exit code 2; anything else is an internal error.
    """


class DegenerateChoiceError(AlgebraError):
    def __init__(self, message, achieved_order):
        super().__init__(message)
        self.achieved_order = achieved_order


class InsufficientOrderError(AlgebraError):
    def __init__(self, message, exponents=None):
        super().__init__(message)
        self.exponents = exponents


class ParseError(AlgebraError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
