"""Package-specific exception types."""

__all__ = ["DegeneracyError"]


class DegeneracyError(ValueError):
    """Raised when an exact formula degenerates for the given parameters.

    Typical causes: coincident shape parameters where a determinant formula
    divides by their differences, or an eigenvalue collision in the
    triangular solve for the polynomial eigenfunctions.
    """
