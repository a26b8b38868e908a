class BaseAppException(Exception):
    pass


class InvalidInputException(BaseAppException, ValueError):
    pass


class DimensionMismatchException(InvalidInputException):
    pass


class MalformedStateException(InvalidInputException):
    pass


class UnsupportedParameterException(InvalidInputException):
    pass


class ConsistencyException(BaseAppException):
    """Two independent checks of the same property disagreed."""


class DatabaseException(BaseAppException):
    pass
