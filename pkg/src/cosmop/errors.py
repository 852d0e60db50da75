"""Exception hierarchy shared by every layer of the planner."""


class CosmopError(Exception):
    """Base class for all errors raised by this package."""


class SceneError(CosmopError):
    """A scene file is malformed or violates a scene invariant."""


class FormulaSyntaxError(CosmopError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class EvaluationError(CosmopError):
    """A term index escaped the trace window during evaluation."""


class EncodingError(CosmopError):
    """A formula cannot be compiled at the requested horizon."""


class DecodeError(CosmopError):
    """A solver model does not cover the declared variables."""


class SolverError(CosmopError):
    """Misuse of a solver session or a malformed solver term."""


class PlanningError(CosmopError):
    pass


class Infeasible(PlanningError):
    def __init__(self, horizons):
        self.horizons = tuple(horizons)
        super().__init__(f"specification unsatisfiable for K in {list(self.horizons)}")


class SolveTimeout(PlanningError):
    def __init__(self, K, reason="timeout"):
        self.K = K
        self.reason = reason
        super().__init__(f"solver gave no verdict at K={K}: {reason}")


class ValidationFailure(PlanningError):
    """The solver returned a model the independent checker rejects.

    This always indicates a disagreement between the encoder and the
    evaluator and is never swallowed.
    """

    def __init__(self, report):
        self.report = report
        super().__init__(f"synthesized plan failed validation: {report.summary()}")
