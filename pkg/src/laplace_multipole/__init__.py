"""Multipole matrix elements of the Laplace Green function for two equal
spheres: closed forms in position space (overlap and non-overlap regimes),
Fourier space, the rotation-reduced j-basis, and brute-force quadrature
oracles for validation."""

__version__ = "0.1.0"

from .core import (RadialPolynomial, ReducedElement, ReducedIndex,
                   SphereGeometry, canonical_from_j_basis,
                   fourier_matrix_element, g_reduced, g_tilde,
                   j_basis_from_canonical, matrix_element,
                   matrix_element_zaxis, mu_coefficient, omega_hat,
                   overlap_polynomial, triple_bessel_nonoverlap,
                   triple_bessel_overlap)
from .errors import (LaplaceMultipoleError, NonConvergence, NotDiagonal,
                     NotPolynomial, PoleResidueError, PoleWithoutRegularizer,
                     RegimeError, SingularConfiguration, TailTooLarge,
                     WindowOverflow, ZeroWaveVector)
from .laurent import (LaurentValue, RegularizedArgument, gamma_laurent,
                      hyper4f3_converged, hyper4f3_regularized,
                      pochhammer_laurent, reciprocal_gamma_laurent)
from .oracles import (QuadratureSpec, defining_integral_quadrature,
                      hankel_forward, hankel_inverse, hankel_triple_bessel)
from .specfun import (EulerAngles, MultipoleIndex, ThreeJValue,
                      factorial_exact, spherical_bessel_j, spherical_harmonic,
                      wigner_3j, wigner_3j_float, wigner_D, wigner_small_d)

__all__ = [
    "__version__",
    "MultipoleIndex", "EulerAngles", "ThreeJValue", "ReducedIndex",
    "SphereGeometry", "ReducedElement", "RadialPolynomial",
    "LaurentValue", "RegularizedArgument", "QuadratureSpec",
    "factorial_exact", "wigner_3j", "wigner_3j_float", "wigner_small_d",
    "wigner_D", "spherical_harmonic", "spherical_bessel_j",
    "gamma_laurent", "reciprocal_gamma_laurent", "pochhammer_laurent",
    "hyper4f3_regularized", "hyper4f3_converged",
    "mu_coefficient", "triple_bessel_nonoverlap", "triple_bessel_overlap",
    "g_reduced", "overlap_polynomial", "j_basis_from_canonical",
    "canonical_from_j_basis", "matrix_element_zaxis", "matrix_element",
    "omega_hat", "fourier_matrix_element", "g_tilde",
    "defining_integral_quadrature", "hankel_triple_bessel",
    "hankel_forward", "hankel_inverse",
    "LaplaceMultipoleError", "PoleWithoutRegularizer", "WindowOverflow",
    "NonConvergence", "PoleResidueError", "RegimeError", "ZeroWaveVector",
    "NotDiagonal", "NotPolynomial", "SingularConfiguration", "TailTooLarge",
]
