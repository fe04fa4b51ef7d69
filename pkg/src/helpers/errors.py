"""Exception hierarchy shared by every prime-ratio-lab component."""

INT64_MAX = 2 ** 63 - 1


class PrimeRatioError(Exception):
    """Base class for all library errors."""


class BoundExceededError(PrimeRatioError):
    def __init__(self, value: int, bound: int, what: str = "value"):
        super().__init__(f"{what} {value} exceeds the configured bound {bound}")
        self.value = value
        self.bound = bound


class CorruptCheckpointError(PrimeRatioError):
    pass


class CutoffNotReachedError(PrimeRatioError):
    pass


class ArithmeticOverflowError(PrimeRatioError, OverflowError):
    pass


class InvalidArgumentError(PrimeRatioError, ValueError):
    pass


class ConfigurationError(PrimeRatioError):
    pass


def check_int64(value: int, what: str = "value") -> int:
    if not -INT64_MAX - 1 <= value <= INT64_MAX:
        raise ArithmeticOverflowError(f"{what} {value} leaves the signed 64-bit range")
    return value
