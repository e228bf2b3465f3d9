"""Exception types shared across the package."""


class PdkernelError(Exception):
    """Base class for package errors."""


class NumericalError(PdkernelError):
    """A computation cannot proceed for numerical reasons (CLI exit code 3)."""


class EssentialClassAboveRmax(NumericalError):
    """A homology class never dies within the filtration truncation radius.

    Raised when a class of dimension >= 1 (or a second connected component)
    survives past r_max; the caller must rebuild the filtration with a larger
    truncation radius.
    """
