"""Exception hierarchy.

Structural problems (a table index out of range, a bad document) raise.
Axiom failures never raise; they are returned as report entries.
"""


class OpGpdError(Exception):
    """Base class for every error raised by the package."""


class MalformedTable(OpGpdError, ValueError):
    pass


class SignatureMismatch(OpGpdError, ValueError):
    pass


class UnknownOperationName(OpGpdError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class IdentitySyntaxError(OpGpdError, ValueError):
    def __init__(self, message, text="", column=None):
        self.text = text
        self.column = column
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{where}: {text!r}")


class UnknownObject(OpGpdError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class InvalidMorphism(OpGpdError, ValueError):
    pass


class NotACovering(OpGpdError, ValueError):
    pass


class CharacteristicGroupNotContained(OpGpdError, ValueError):
    pass


class NotTransitive(OpGpdError, ValueError):
    pass


class NotASubgroup(OpGpdError, ValueError):
    pass


class NotASubobject(OpGpdError, ValueError):
    pass


class InvalidAction(OpGpdError, ValueError):
    pass


class ComponentInvalid(OpGpdError, ValueError):
    """A component of a compound structure failed its own validator.

    ``report`` holds the component failures, with check names prefixed by
    the component they came from.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SearchBudgetExceeded(OpGpdError, RuntimeError):
    pass


class ParseError(OpGpdError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class SchemaError(OpGpdError, ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
