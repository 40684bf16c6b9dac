class ParameterError(ValueError):
    """Bad or infeasible parameters; the CLI maps this to exit code 2."""


class GraphFormatError(ValueError):
    pass


class LimitExceeded(ValueError):
    pass


class CertificationError(RuntimeError):
    pass


class SamplingError(RuntimeError):
    pass
