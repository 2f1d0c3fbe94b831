"""Exception hierarchy shared across the package."""


class LaplaceMultipoleError(Exception):
    """Base class for all package-specific errors."""


class PoleWithoutRegularizer(LaplaceMultipoleError):
    """Gamma requested at a non-positive integer with no epsilon slope."""


class WindowOverflow(LaplaceMultipoleError):
    """A Laurent coefficient fell below the retained pole window."""


class NonConvergence(LaplaceMultipoleError):
    """Hypergeometric series failed the trailing-term test at the term cap."""


class PoleResidueError(LaplaceMultipoleError):
    """Negative-order Laurent residue did not cancel in an assembled element."""


class RegimeError(LaplaceMultipoleError):
    """Closed-form branch called outside its validity region."""


class ZeroWaveVector(LaplaceMultipoleError):
    """Fourier-space operation at k = 0, where the 1/k^2 kernel diverges."""


class NotDiagonal(LaplaceMultipoleError):
    """Canonical-basis input has m != m' entries above tolerance."""


class NotPolynomial(LaplaceMultipoleError):
    """Sampled overlap element failed the polynomial residual check."""


class SingularConfiguration(LaplaceMultipoleError):
    """Surface quadrature could not reach the requested accuracy."""


class TailTooLarge(LaplaceMultipoleError):
    """Estimated semi-infinite integral tail exceeds the tolerance budget."""
