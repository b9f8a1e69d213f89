"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A precondition on user-supplied parameters was violated."""


class GraphFormatError(ValueError):
    """A graph, point-set, or class file failed to parse."""
