class SpatialIvError(Exception):
    exit_code = 3


class ConfigError(SpatialIvError):
    exit_code = 2


class DataError(SpatialIvError):
    exit_code = 3


class EstimationError(SpatialIvError):
    exit_code = 3


class UnknownCommandException(ConfigError):
    def __init__(self, command_name: str):
        super().__init__(f"could not handle command (command={command_name})")


class MissingColumn(DataError):
    def __init__(self, column: str, path=None):
        super().__init__(f"missing column '{column}' (file={path})")
        self.column = column


class NonNumericValue(DataError):
    def __init__(self, column: str, row: int, value, path=None):
        super().__init__(
            f"non-numeric value {value!r} in column '{column}' "
            f"(file={path}, row={row})"
        )
        self.column = column
        self.row = row


class EmptyAfterFiltering(DataError):
    pass


class InvalidDataset(DataError):
    pass


class InvalidEdgeList(DataError):
    pass


class KTooLarge(DataError):
    def __init__(self, k: int, n: int):
        super().__init__(f"k={k} must be smaller than n={n}")


class NoRegionLabels(DataError):
    pass


class DegenerateCoordinates(DataError):
    pass


class NotPositiveDefinite(EstimationError):
    def __init__(self, jitter_ladder):
        super().__init__(
            f"matrix is not positive definite for any jitter in "
            f"{list(jitter_ladder)}"
        )
        self.jitter_ladder = list(jitter_ladder)


class NoConvergence(EstimationError):
    pass


class DimensionMismatch(EstimationError):
    pass


class DomainError(EstimationError):
    pass


class DfOutOfRange(EstimationError):
    pass


class MOutOfRange(EstimationError):
    pass


class ZeroInstrumentVariance(EstimationError):
    pass


class BasisWithoutConstant(EstimationError):
    pass


class SingularDesign(EstimationError):
    pass


class EmptySubpopulation(EstimationError):
    pass


class DegenerateWindow(EstimationError):
    pass


class InsufficientData(EstimationError):
    pass


class ZeroDenominator(EstimationError):
    pass


class InvalidInterval(EstimationError):
    pass


class ZeroInstrumentWarning(UserWarning):
    pass


class PositivityWarning(UserWarning):
    pass
