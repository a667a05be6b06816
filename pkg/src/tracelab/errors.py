"""Exception types shared across the package."""


class TraceLabError(Exception):
    """Base class for all tracelab errors."""


class DimensionMismatchError(TraceLabError, ValueError):
    """Operands have incompatible matrix dimensions."""


class EigenvalueFloorError(TraceLabError, ValueError):
    """An eigenvalue fell at or below the functional-calculus domain floor."""

    def __init__(self, eigenvalue: float, floor: float, context: str = ""):
        self.eigenvalue = eigenvalue
        self.floor = floor
        msg = f"eigenvalue {eigenvalue:.6e} is below the domain floor {floor:.1e}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class EigenDecompositionError(TraceLabError, RuntimeError):
    """The spectral decomposition did not converge."""


class PositivityCertificateError(TraceLabError, RuntimeError):
    """A map failed its strict-positivity certificate."""


class SpecValidationError(TraceLabError, ValueError):
    """A functional specification violates its mode's hypotheses."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ConvergenceError(TraceLabError, RuntimeError):
    """An iterative solver hit its iteration cap without converging."""


class ConfigError(TraceLabError, ValueError):
    """An experiment configuration failed to parse or validate."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
