"""Exception types shared across the package."""


class LoopsurfError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(LoopsurfError, ValueError):
    """Operands have incompatible or unsupported dimensions."""


class PoleError(LoopsurfError, ZeroDivisionError):
    """Evaluation at a pole (lambda = 0 with negative degrees, or a rational pole)."""


class PoleDenseError(LoopsurfError):
    """Repeated sampling kept hitting poles; the input is pole-dense."""


class NotInvertibleError(LoopsurfError):
    """Leading coefficient of a loop is (numerically) singular."""


class UnsupportedAntiderivativeError(LoopsurfError):
    """Antiderivative requested for a rational function with non-constant denominator."""


class BirkhoffCellError(LoopsurfError):
    """The loop lies outside the big Birkhoff cell (Toeplitz system singular)."""


class IwasawaCellError(LoopsurfError):
    """The loop lies outside the open Iwasawa cell through the identity."""


class ChartError(LoopsurfError):
    """Projective point falls outside the affine chart (vanishing 0-th coordinate)."""


class StencilError(LoopsurfError, ValueError):
    """Grid too small for the requested finite-difference stencil."""


class PairingError(LoopsurfError):
    """A sample grid is not closed under the required point symmetry."""
