"""Exception hierarchy shared across the package."""


class MfnasError(Exception):
    """Base class for all package errors."""


class InvalidGenotype(MfnasError):
    """Genotype has the wrong length or an out-of-range slot value."""


class InvalidArchId(MfnasError):
    """Architecture id outside [0, num_configurations - 1]."""


class InvalidSpace(MfnasError):
    """Space description violates its structural invariants."""


class InvalidCost(MfnasError):
    """Cost inputs are inconsistent (e.g. P below the space minimum)."""


class InvalidMetricInput(MfnasError):
    """Metric argument outside its admissible range."""


class InvalidAlpha(MfnasError):
    """Negative trade-off weight."""


class MissingEntry(MfnasError):
    """Lookup-table evaluator has no entry for the requested architecture."""


class EvaluatorTimeout(MfnasError):
    """External evaluator did not answer within the configured timeout."""


class ProtocolError(MfnasError):
    """External evaluator sent a malformed or inconsistent message."""


class EvaluatorDied(MfnasError):
    """External evaluator process exited while a request was pending."""


class EvaluationFailed(MfnasError):
    """External evaluator returned an explicit error response."""


class EmptyRun(MfnasError):
    """Operation requires a non-empty trial log."""


class InsufficientData(MfnasError):
    """Too few trials for the requested analysis."""


class RefusedExpensiveOracle(MfnasError):
    """Brute-force oracle refused to drive an expensive evaluator."""


class ConfigError(MfnasError):
    """Run configuration is invalid or incomplete."""


class RunFailure(MfnasError):
    """Evaluator failure during a run; carries the trial index and partial log."""

    def __init__(self, trial: int, partial_log, cause: Exception):
        super().__init__(f"trial {trial}: {cause}")
        self.trial = trial
        self.partial_log = partial_log
        self.cause = cause
