"""Exception types shared across the engine.

Two families: structural errors (bugs in machine wiring, registry misuse)
and CommandError, the user-facing failure of a command body or converter.
CommandError aborts the current conversation and is rendered as an Error
response; it never crosses the API boundary as an exception.
"""


class EngineError(Exception):
    """Base class for all engine errors."""


class CommandError(EngineError):
    """A command body or converter failed; message is shown to the user."""


class InvalidName(EngineError):
    """Variable name is empty or contains whitespace."""


class UnknownState(EngineError):
    """set_transition referenced a state id not present in the machine."""


class DanglingTransition(EngineError):
    """A Goto resolved to a state id that is not registered."""


class InputRequired(EngineError):
    """Machine is suspended on input but step() was called without any."""


class InputUnexpected(EngineError):
    """step() received input while the current state takes none."""


class DepthExceeded(CommandError):
    """Nested conversations exceeded the configured depth cap."""


class BadChoice(EngineError):
    """A conversion was applied with a label the plan never offered."""


class UnknownCommand(EngineError):
    """A command id is not present in the registry."""


class ArityMismatch(EngineError):
    """An AST node was built with the wrong number of argument sources."""


class MissingSnippet(EngineError):
    """Script export hit a command without a source snippet."""


class EmptyRegistry(EngineError):
    """A session was started over a registry with no commands."""


class UnknownSession(EngineError):
    """A wire message referenced a session id the service does not know."""


class MalformedTranscript(EngineError):
    """A replay transcript failed to parse."""


class MalformedFrame(EngineError):
    """A wire frame was missing fields, mistyped, or the wrong version."""


class ConfigError(EngineError):
    """A config file or environment override could not be applied."""


class DegenerateStoreWarning(UserWarning):
    """Two identical training utterances map to different commands."""


# Failures raised by data-science command bodies.  All are CommandErrors so
# the interpreter can surface them in chat and keep the session alive.

class TooFew(CommandError):
    """Not enough data points for the requested statistic."""


class LengthMismatch(CommandError):
    """Paired inputs have different lengths."""


class ZeroVariance(CommandError):
    """A statistic required nonzero variance."""


class EmptySample(CommandError):
    """A sample was empty."""


class NonPositive(CommandError):
    """Log transform requires strictly positive values."""


class OutOfRange(CommandError):
    """A p-value fell outside [0, 1]."""


class UnknownColumn(CommandError):
    """A collection has no column with the requested name."""


class TypeMismatch(CommandError):
    """An operation was applied to a column of the wrong kind."""


class MalformedData(CommandError):
    """A data file could not be parsed (ragged rows, bad quoting)."""


class IoFailure(CommandError):
    """A data file could not be read from disk."""


class EmptyHeader(CommandError):
    """A CSV file is missing its header row or has a blank header cell."""


class EmptyLexicon(CommandError):
    """A lexicon has no categories."""


class ZeroTotal(CommandError):
    """Odds ratios need positive group totals."""


class SingleClass(CommandError):
    """Classifier training needs at least two classes."""


class EmptyFeatures(CommandError):
    """Classifier training needs at least one numeric feature column."""


class BadFolds(CommandError):
    """Cross-validation fold count is out of range."""


class UntrainedModel(CommandError):
    """Prediction or inspection was asked of a model that was never fit."""


class BadN(CommandError):
    """Requested sample size must be at least 1."""
