"""Exception hierarchy.

Every error raised by the package derives from :class:`GaitSymError`. The
``exit_code`` class attribute is what the command-line front end returns
when the error escapes a subcommand.
"""


class GaitSymError(Exception):
    exit_code = 1


class InputError(GaitSymError):
    """Problem with the data handed to the pipeline."""

    exit_code = 2


class ParseError(InputError, ValueError):
    pass


class InsufficientDataError(InputError):
    pass


class MissingDataError(InputError, KeyError):
    def __str__(self):
        # KeyError quotes its message; keep it readable
        return str(self.args[0]) if self.args else ""


class AllOccludedError(MissingDataError):
    pass


class PreconditionError(InputError):
    pass


class AnalysisError(GaitSymError):
    """The data parsed but cannot support the requested analysis."""

    exit_code = 3


class DegenerateSignalError(AnalysisError, ValueError):
    pass


class DegenerateSystemError(DegenerateSignalError):
    pass


class NoPeriodicityError(AnalysisError):
    pass


class AmbiguousCycleError(AnalysisError):
    pass


class InsufficientRecordError(AnalysisError):
    pass


class InvalidSpectrumError(AnalysisError, ValueError):
    pass


class InvalidParameterError(GaitSymError, ValueError):
    exit_code = 4


class InvalidInputError(InvalidParameterError):
    """Kernel called with arguments outside its domain (empty, mismatched)."""
