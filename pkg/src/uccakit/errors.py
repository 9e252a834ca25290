"""Exception hierarchy shared by all uccakit modules."""


class UccaError(Exception):
    """Base class for every error raised by uccakit."""


class ModelError(UccaError, ValueError):
    """A passage violates a structural invariant.

    ``subject`` names the offending unit or edge when one can be singled out.
    ``context`` is filled in by readers (e.g. the XML line of the offending node).
    """

    def __init__(self, message, subject=None, context=None):
        super().__init__(message)
        self.message = message
        self.subject = subject
        self.context = context

    def __str__(self):
        if self.context:
            return "%s (%s)" % (self.message, self.context)
        return self.message


class CycleError(ModelError):
    """The union of primary and remote edges contains a cycle."""

    def __init__(self, message, subject=None, context=None, remote=False):
        super().__init__(message, subject, context)
        self.remote = remote


class MultiplePrimaryParents(ModelError):
    pass


class UnreachableTerminal(ModelError):
    pass


class DanglingReference(ModelError):
    pass


class NoRootError(ModelError):
    """No unit qualifies as the passage root (e.g. a passage stripped of its annotation)."""


class EmptyPassage(ModelError):
    pass


class InvalidUnit(ModelError):
    """A unit breaks a per-unit invariant (implicit unit with children, empty yield...)."""


class UnknownCategory(ModelError):
    pass


class UnknownUnit(UccaError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown unit"


class XmlSyntaxError(UccaError):
    pass


class SchemaError(UccaError):
    pass


class TokenMismatch(UccaError):
    """Predicted and gold passages do not share the same terminals."""


class MissingPassage(UccaError):
    pass


class IllegalTransition(UccaError):
    pass


class OracleFailure(UccaError):
    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class EmptyCorpus(UccaError):
    pass


class ModelMismatch(UccaError):
    """A serialized model was written with a different feature template registry."""


class HeadlessUnit(UccaError):
    pass


class NonProjectiveOverlap(UserWarning):
    """Issued when a bilexical graph reconstructs into discontinuous units."""
