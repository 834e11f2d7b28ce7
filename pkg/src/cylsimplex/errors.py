"""Exception hierarchy shared by all modules."""


class CylinderError(Exception):
    """Base class for errors raised by this package."""


class InputError(CylinderError):
    """Malformed or geometrically invalid input (CLI exit code 1)."""


class NumericalError(CylinderError):
    """A numerical procedure failed to deliver a verified result (CLI exit code 2)."""


class DegenerateError(InputError):
    pass


class SingularMatrix(DegenerateError):
    pass


class DimensionMismatch(InputError):
    pass


class DimensionTooLarge(InputError):
    pass


class SchemaError(InputError):
    pass


class ShapeError(InputError):
    pass


class NotEquifacial(InputError):
    pass


class EmptyInput(InputError):
    pass


class EmptyFamily(CylinderError):
    pass


class NoCriticalPointFound(NumericalError):
    pass
