"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures without a
lookup table: 2 for I/O and configuration problems, 1 for analysis failures.
"""


class EmocoupleError(Exception):
    exit_code = 1


class InputError(EmocoupleError):
    exit_code = 2


class UnreadablePath(InputError):
    def __init__(self, path, reason="cannot be read"):
        self.path = str(path)
        super().__init__(f"{self.path}: {reason}")


class SchemaError(InputError):
    def __init__(self, missing, where=""):
        self.missing = sorted(missing)
        loc = f" in {where}" if where else ""
        super().__init__(f"missing required field(s){loc}: {', '.join(self.missing)}")


class ConfigError(InputError):
    pass


class EmptyCorpus(EmocoupleError):
    pass


class EmptyRegionSpec(EmocoupleError):
    pass


class LexiconError(EmocoupleError):
    pass


class ParseError(LexiconError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class DuplicateCategory(LexiconError):
    pass


class EmptyLexicon(LexiconError):
    pass


class UnknownCategory(LexiconError):
    pass


class SeriesError(EmocoupleError):
    pass


class EmptySelection(SeriesError):
    pass


class TooShort(SeriesError):
    pass


class NoOverlap(SeriesError):
    pass


class CategoryMismatch(SeriesError):
    pass


class EconError(EmocoupleError):
    pass


class SingularDesign(EconError):
    pass


class Underdetermined(EconError):
    pass


class ConstantSeries(EconError):
    pass


class ConstantRegressor(EconError):
    pass


class AnalysisError(EmocoupleError):
    """Failure inside a named pipeline stage; wraps the original error."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
        super().__init__(f"stage '{stage}' failed: {type(cause).__name__}: {cause}")
