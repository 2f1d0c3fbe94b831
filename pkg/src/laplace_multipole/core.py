"""Closed-form multipole matrix elements of the Laplace Green function.

Reduced elements g^j_{l,l'}(R) for two spheres of equal radius a, in the
non-overlap (R >= 2a, power law) and overlap (R <= 2a, polynomial) regimes,
the canonical <-> j-basis transforms, Fourier-space elements, and
general-orientation elements assembled through Wigner rotations.

The overlap regime evaluates a three-term regularized 4F3 assembly in
Laurent arithmetic with the shift eps attached to the reduced index j.
The finite part is returned after checking that all negative-order
residues cancel.
"""
from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .errors import (NonConvergence, PoleResidueError, RegimeError,
                     NotDiagonal, NotPolynomial, WindowOverflow,
                     ZeroWaveVector)
from .laurent import (LaurentValue, RegularizedArgument, gamma_laurent,
                      reciprocal_gamma_laurent)
from .specfun import (EulerAngles, MultipoleIndex, spherical_bessel_j,
                      spherical_harmonic, wigner_3j, wigner_3j_float,
                      wigner_D)

_SQRT_PI3 = math.pi ** 1.5


@dataclass(frozen=True)
class ReducedIndex:
    """Reduced-element label (l, l', j) with |l-l'| <= j <= l+l'."""

    l: int
    lp: int
    j: int

    def __post_init__(self):
        if min(self.l, self.lp, self.j) < 0:
            raise ValueError("orders must be non-negative")
        if not abs(self.l - self.lp) <= self.j <= self.l + self.lp:
            raise ValueError(
                f"triangle rule violated: |{self.l}-{self.lp}| <= {self.j} "
                f"<= {self.l}+{self.lp} fails")

    @property
    def parity_even(self) -> bool:
        return (self.l + self.lp + self.j) % 2 == 0


@dataclass(frozen=True)
class SphereGeometry:
    """Separation of the two sphere centres in spherical coordinates plus radius."""

    R: float
    theta: float
    phi: float
    a: float

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("sphere radius must be positive")
        if self.R < 0:
            raise ValueError("separation must be non-negative")

    @classmethod
    def from_vector(cls, Rvec, a: float) -> "SphereGeometry":
        x, y, z = (float(c) for c in Rvec)
        R = math.sqrt(x * x + y * y + z * z)
        theta = math.acos(z / R) if R > 0 else 0.0
        phi = math.atan2(y, x)
        return cls(R=R, theta=theta, phi=phi, a=a)


@dataclass(frozen=True)
class ReducedElement:
    index: ReducedIndex
    R: float
    a: float
    value: float
    regime: str  # overlap | nonoverlap | boundary


@dataclass(frozen=True)
class RadialPolynomial:
    """g^j_{l,l'}(R) = scale * sum_n coefficients[n] * (R/a)^n on the overlap range.

    scale carries the dimensional factor a^(l+l'+1); coefficients are
    dimensionless.  The trailing coefficient is nonzero unless the
    polynomial is identically zero.
    """

    degree: int
    coefficients: tuple
    scale: float
    a: float

    def evaluate(self, R: float) -> float:
        t = R / self.a
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return self.scale * acc


# ---------------------------------------------------------------------------
# mu coefficient
# ---------------------------------------------------------------------------

def mu_coefficient(idx: ReducedIndex) -> float:
    """Prefactor of the triple-Bessel integral in the reduced element.

    mu = (2/pi) (-i)^(-l+l'+j) (-1)^j (2j+1) sqrt((2l+1)(2l'+1)) (l l' j; 0 0 0);
    real because the 3-j forces l+l'+j even, and exactly zero otherwise.
    """
    if not idx.parity_even:
        return 0.0
    tj = wigner_3j(idx.l, idx.lp, idx.j, 0, 0, 0)
    if not tj:
        return 0.0
    e = -idx.l + idx.lp + idx.j  # even here
    phase = (-1 if (e // 2) % 2 else 1) * (-1) ** idx.j
    return (2.0 / math.pi * phase * (2 * idx.j + 1)
            * math.sqrt((2 * idx.l + 1) * (2 * idx.lp + 1)) * tj.to_float())


# ---------------------------------------------------------------------------
# triple-Bessel integral, non-overlap regime
# ---------------------------------------------------------------------------

def triple_bessel_nonoverlap(idx: ReducedIndex, R: float, a: float) -> float:
    """int_0^inf j_j(kR) j_l(ka) j_l'(ka) dk for R >= 2a.

    Vanishes unless j = l + l'; otherwise a pure (a/R)^(l+l'+1) power law.
    """
    if R < 2 * a:
        raise RegimeError(f"non-overlap branch needs R >= 2a, got R={R}, a={a}")
    l, lp, j = idx.l, idx.lp, idx.j
    if j != l + lp:
        return 0.0
    return (_SQRT_PI3 / (8 * a) * (a / R) ** (l + lp + 1)
            * math.gamma(0.5 + l + lp)
            / (math.gamma(1.5 + l) * math.gamma(1.5 + lp)))


# ---------------------------------------------------------------------------
# triple-Bessel integral, overlap regime (regularized 4F3 assembly)
# ---------------------------------------------------------------------------

_SERIES_CAP = 8192
_RESIDUE_TOL = 1e-8
_TRAIL_TOL = 1e-14


class _OverlapSeries:
    """Per-(l, l', j) cache of Laurent coefficient vectors of the three
    4F3 series (coefficient Gammas folded in), extendable in k.

    Orders are stored densely over [wmin, wmax] as float64; the per-term
    construction runs in mpmath and is exact where factors are exactly zero.
    """

    def __init__(self, l: int, lp: int, j: int, window):
        self.l, self.lp, self.j = l, lp, j
        self.window = window
        self.wmin, self.wmax = window
        self.width = self.wmax - self.wmin + 1
        self.lock = threading.Lock()
        A = RegularizedArgument
        half = 0.5
        # upper/lower 4F3 parameters, eps attached to j
        self.params = [
            ([A((-l - lp) / 2), A((1 + l - lp) / 2), A((1 - l + lp) / 2),
              A((2 + l + lp) / 2)],
             [A(half), A((3 - j) / 2, -half), A((4 + j) / 2, half)]),
            ([A((j - l - lp - 1) / 2, half), A((j + l - lp) / 2, half),
              A((j + lp - l) / 2, half), A((l + lp + j + 1) / 2, half)],
             [A((1 + j) / 2, half), A(j / 2, half), A(1.5 + j, 1.0)]),
            ([A((1 - l - lp) / 2), A((2 + l - lp) / 2), A((2 + lp - l) / 2),
              A((3 + l + lp) / 2)],
             [A(1.5), A((4 - j) / 2, -half), A((5 + j) / 2, half)]),
        ]
        with mpmath.workdps(40):
            self.coef = [self._coef_alpha(), self._coef_beta(), self._coef_gamma()]
        # per-series running state: numerator, denominator products; k!
        one = LaurentValue.constant(mpmath.mpf(1), window)
        self.state = [[one, one, mpmath.mpf(1)] for _ in range(3)]
        self.terms = [[], [], []]  # lists of float64 arrays, index k
        self._extend(8)

    # coefficient Laurents; constants corrected against the independent
    # Hankel quadrature oracle (see tests)
    def _coef_alpha(self):
        l, lp, j, w = self.l, self.lp, self.j, self.window
        A = RegularizedArgument
        out = gamma_laurent(A((j - 1) / 2, 0.5), w)
        out = out * reciprocal_gamma_laurent(A((1 + lp - l) / 2), w)
        out = out * reciprocal_gamma_laurent(A((1 + l - lp) / 2), w)
        out = out * reciprocal_gamma_laurent(A((j + 4) / 2, 0.5), w)
        return out * mpmath.mpf(2) ** -3

    def _coef_beta(self):
        l, lp, j, w = self.l, self.lp, self.j, self.window
        A = RegularizedArgument
        out = gamma_laurent(A(1 - j, -1.0), w)
        out = out * gamma_laurent(A((1 + l + lp + j) / 2, 0.5), w)
        out = out * reciprocal_gamma_laurent(A((3 + l + lp - j) / 2, -0.5), w)
        out = out * reciprocal_gamma_laurent(A((2 + lp - l - j) / 2, -0.5), w)
        out = out * reciprocal_gamma_laurent(A((2 + l - lp - j) / 2, -0.5), w)
        out = out * reciprocal_gamma_laurent(A(1.5 + j, 1.0), w)
        return out * mpmath.mpf(2) ** -2

    def _coef_gamma(self):
        l, lp, j, w = self.l, self.lp, self.j, self.window
        A = RegularizedArgument
        out = gamma_laurent(A((j - 2) / 2, 0.5), w)
        out = out * reciprocal_gamma_laurent(A((lp - l) / 2), w)
        out = out * reciprocal_gamma_laurent(A((l - lp) / 2), w)
        out = out * reciprocal_gamma_laurent(A((5 + j) / 2, 0.5), w)
        return out * (mpmath.mpf(2) ** -4 * (l + lp + 1))

    def _to_array(self, lv: LaurentValue) -> np.ndarray:
        out = np.zeros(self.width)
        for p, c in lv.items():
            out[p - self.wmin] = float(c)
        return out

    def _extend(self, upto: int) -> None:
        with mpmath.workdps(40):
            for i in range(3):
                ups, downs = self.params[i]
                num, den, kfact = self.state[i]
                terms = self.terms[i]
                while len(terms) <= upto:
                    k = len(terms)
                    if k == 0:
                        terms.append(self._to_array(self.coef[i]))
                        continue
                    for p in ups:
                        num = num * LaurentValue.linear(
                            mpmath.mpf(p.base) + (k - 1), mpmath.mpf(p.slope),
                            self.window)
                    for p in downs:
                        den = den * LaurentValue.linear(
                            mpmath.mpf(p.base) + (k - 1), mpmath.mpf(p.slope),
                            self.window)
                    kfact *= k
                    if num.is_zero() or self.coef[i].is_zero():
                        terms.append(np.zeros(self.width))
                    else:
                        term = self.coef[i] * num * den.reciprocal() * (1 / kfact)
                        terms.append(self._to_array(term))
                self.state[i] = [num, den, kfact]

    def term(self, i: int, k: int) -> np.ndarray:
        if k >= len(self.terms[i]):
            with self.lock:
                self._extend(max(k, 2 * len(self.terms[i])))
        return self.terms[i][k]

    def series_sum(self, i: int, x: float) -> np.ndarray:
        """sum_k term_k x^k with the trailing-3-terms convergence test."""
        acc = np.zeros(self.width)
        xk = 1.0
        scale = 0.0
        recent = []
        k = 0
        while True:
            t = self.term(i, k) * xk
            acc += t
            tm = float(np.max(np.abs(t)))
            scale = max(scale, float(np.max(np.abs(acc))))
            recent.append(tm)
            if len(recent) > 3:
                recent.pop(0)
            if k >= 3 and max(recent) <= _TRAIL_TOL * max(scale, 1e-300):
                return acc
            if k >= _SERIES_CAP:
                raise NonConvergence(
                    f"overlap 4F3 series for (l={self.l}, l'={self.lp}, "
                    f"j={self.j}) not converged at x={x} after {k} terms")
            k += 1
            xk *= x


_series_cache: dict = {}
_series_cache_lock = threading.Lock()


def _get_series(l: int, lp: int, j: int, window) -> _OverlapSeries:
    key = (l, lp, j, window)
    with _series_cache_lock:
        eng = _series_cache.get(key)
        if eng is None:
            eng = _OverlapSeries(l, lp, j, window)
            _series_cache[key] = eng
        return eng


def overlap_laurent(idx: ReducedIndex, R: float, a: float,
                    window=(-4, 4)) -> LaurentValue:
    """Assembled overlap-regime Laurent value of the triple-Bessel integral
    (before extracting the finite part), in units of 1/a."""
    if not 0 <= R <= 2 * a:
        raise RegimeError(f"overlap branch needs 0 <= R <= 2a, got R={R}, a={a}")
    l, lp, j = idx.l, idx.lp, idx.j
    eng = _get_series(l, lp, j, window)
    wmin, wmax = window
    width = wmax - wmin + 1
    rho = R / a
    if R == 0.0:
        if j > 0:
            return LaurentValue.zero(window)
        # only the k=0 term of the R^j series survives; no log factor
        vec = eng.term(1, 0).copy()
        return LaurentValue(list(_SQRT_PI3 / (2 * a) * vec), wmin, window)
    x = rho * rho / 4.0
    s1 = eng.series_sum(0, x)
    s2 = eng.series_sum(1, x)
    s3 = eng.series_sum(2, x)
    # (R/a)^(j+eps) = (R/a)^j exp(eps ln(R/a)); convolve s2 with the log column
    lr = math.log(rho)
    logcol = np.array([lr ** p / math.factorial(p) for p in range(0, wmax - wmin + 1)])
    s2log = np.zeros(width)
    for p in range(width):
        # order index p receives sum over q <= p of s2[p-q] * lr^q / q!
        s2log[p] = np.dot(s2[: p + 1][::-1], logcol[: p + 1])
    total = rho * s1 + rho ** j * s2log - rho * rho * s3
    total *= _SQRT_PI3 / (2 * a)
    return LaurentValue(list(total), wmin, window)


@lru_cache(maxsize=65536)
def triple_bessel_overlap(idx: ReducedIndex, R: float, a: float) -> float:
    """int_0^inf j_j(kR) j_l(ka) j_l'(ka) dk for 0 <= R <= 2a.

    Three-term regularized 4F3 assembly; returns the finite eps^0 part
    and raises PoleResidueError when the negative orders fail to cancel.
    """
    window = (-4, 4)
    while True:
        try:
            lv = overlap_laurent(idx, R, a, window)
            break
        except WindowOverflow:
            if window[0] <= -16:
                raise
            window = (2 * window[0], 2 * window[1])
    if lv.negative_order_residue() > _RESIDUE_TOL:
        raise PoleResidueError(
            f"pole cancellation failed for {idx} at R={R}, a={a}: "
            f"relative residue {lv.negative_order_residue():.3e}")
    return float(lv.coefficient(0))


# ---------------------------------------------------------------------------
# reduced elements and polynomials
# ---------------------------------------------------------------------------

def g_reduced(idx: ReducedIndex, R: float, a: float) -> ReducedElement:
    """Reduced element g^j_{l,l'}(R) = mu a^(l+l'+2) * triple-Bessel integral."""
    if a <= 0:
        raise ValueError("sphere radius must be positive")
    if R < 0:
        raise ValueError("separation must be non-negative")
    if R < 2 * a:
        regime = "overlap"
    elif R == 2 * a:
        regime = "boundary"
    else:
        regime = "nonoverlap"
    mu = mu_coefficient(idx)
    if mu == 0.0:
        return ReducedElement(idx, R, a, 0.0, regime)
    if regime == "overlap":
        integral = triple_bessel_overlap(idx, R, a)
    else:
        integral = triple_bessel_nonoverlap(idx, R, a)
    value = mu * a ** (idx.l + idx.lp + 2) * integral
    return ReducedElement(idx, R, a, value, regime)


def overlap_polynomial(idx: ReducedIndex, a: float,
                       residual_tol: float = 1e-9,
                       trim_tol: float = 1e-10) -> RadialPolynomial:
    """Exact polynomial representation of the overlap-regime reduced element.

    Interpolates g_reduced at l+l'+4 Chebyshev nodes placed in (0, 1.9a)
    (inside the convergence region of the series, and wide enough that
    the residual points below are interpolative rather than extrapolative),
    then demands that extra sample points match the polynomial to
    residual_tol relative; failure raises NotPolynomial.  Coefficients
    below trim_tol relative to the largest are dropped before reporting
    the degree.
    """
    if not idx.parity_even:
        raise ValueError("overlap polynomial defined for even l+l'+j only")
    l, lp = idx.l, idx.lp
    n = l + lp + 4
    scale = a ** (l + lp + 1)
    # Chebyshev nodes on (0, 1.9a), expressed in t = R/a
    ts = [0.95 * (1.0 + math.cos((2 * i + 1) * math.pi / (2 * n)))
          for i in range(n)]
    vals = [g_reduced(idx, t * a, a).value / scale for t in ts]
    with mpmath.workdps(40):
        A = mpmath.matrix(n, n)
        b = mpmath.matrix(n, 1)
        for i in range(n):
            for c in range(n):
                A[i, c] = mpmath.mpf(ts[i]) ** c
            b[i] = vals[i]
        coef = mpmath.lu_solve(A, b)
        coeffs = [float(coef[c]) for c in range(n)]
    cmax = max((abs(c) for c in coeffs), default=0.0)
    if cmax == 0.0:
        return RadialPolynomial(0, (0.0,), scale, a)
    dropped = [(k, c) for k, c in enumerate(coeffs)
               if 0 < abs(c) <= trim_tol * cmax]
    coeffs = [c if abs(c) > trim_tol * cmax else 0.0 for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    poly = RadialPolynomial(len(coeffs) - 1, tuple(coeffs), scale, a)
    # residual check on extra points away from the nodes; the budget
    # includes what the coefficient trim deliberately discarded
    for t in (0.11, 0.47, 0.93, 1.31, 1.77):
        ref = g_reduced(idx, t * a, a).value
        got = poly.evaluate(t * a)
        denom = max(abs(ref), trim_tol * cmax * scale)
        budget = residual_tol * denom + scale * sum(
            abs(c) * t ** k for k, c in dropped)
        if abs(got - ref) > budget:
            raise NotPolynomial(
                f"residual {abs(got - ref) / denom:.3e} at R/a={t} for {idx}")
    return poly


# ---------------------------------------------------------------------------
# basis transforms
# ---------------------------------------------------------------------------

_DIAG_TOL = 1e-10


def j_basis_from_canonical(l: int, lp: int, values) -> dict:
    """g^j = (2j+1) sum_m (-1)^m (l l' j; m -m 0) G_{lm,l'm} from a
    mapping (m, mp) -> complex of z-axis canonical elements."""
    scale = max((abs(v) for v in values.values()), default=0.0)
    for (m, mp), v in values.items():
        if m != mp and abs(v) > _DIAG_TOL * max(scale, 1e-300):
            raise NotDiagonal(
                f"entry (m={m}, m'={mp}) is {abs(v):.3e}, expected m-diagonal")
    out = {}
    for j in range(abs(l - lp), l + lp + 1):
        acc = 0.0
        for m in range(-min(l, lp), min(l, lp) + 1):
            g = values.get((m, m), 0.0)
            acc += (-1) ** m * wigner_3j_float(l, lp, j, m, -m, 0) * complex(g).real
        out[j] = (2 * j + 1) * acc
    return out


def canonical_from_j_basis(l: int, lp: int, g) -> dict:
    """G_{lm,l'm'}(R e_z) = delta_{m,m'} (-1)^m sum_j (l l' j; m -m 0) g^j."""
    out = {}
    for m in range(-l, l + 1):
        for mp in range(-lp, lp + 1):
            if m != mp:
                out[(m, mp)] = 0.0 + 0.0j
                continue
            acc = 0.0
            for j, gj in g.items():
                acc += wigner_3j_float(l, lp, j, m, -m, 0) * gj
            out[(m, mp)] = complex((-1) ** m * acc)
    return out


# ---------------------------------------------------------------------------
# matrix elements
# ---------------------------------------------------------------------------

def matrix_element_zaxis(lm: MultipoleIndex, lpmp: MultipoleIndex,
                         R: float, a: float) -> complex:
    """Canonical element G_{lm,l'm'}(R e_z); m-diagonal and real."""
    if lm.m != lpmp.m:
        return 0.0 + 0.0j
    l, lp, m = lm.l, lpmp.l, lm.m
    acc = 0.0
    for j in range(abs(l - lp), l + lp + 1):
        tj = wigner_3j_float(l, lp, j, m, -m, 0)
        if tj == 0.0:
            continue
        acc += tj * g_reduced(ReducedIndex(l, lp, j), R, a).value
    return complex((-1) ** m * acc)


def matrix_element(lm: MultipoleIndex, lpmp: MultipoleIndex,
                   geom: SphereGeometry) -> complex:
    """General-orientation element.  The plane-wave expansion of the
    Fourier form reduces the orientation dependence to one spherical
    harmonic of the separation direction per reduced channel:

        G = sum_j (-1)^m' sqrt(4 pi/(2j+1)) (j l l'; m'-m, m, -m')
            g^j(R) Y_{j, m'-m}(theta, phi),

    which collapses to the m-diagonal z-axis form at theta = 0."""
    l, m = lm.l, lm.m
    lp, mp = lpmp.l, lpmp.m
    m1 = mp - m
    acc = 0.0 + 0.0j
    for j in range(abs(l - lp), l + lp + 1):
        if abs(m1) > j:
            continue
        tj = wigner_3j_float(j, l, lp, m1, m, -mp)
        if tj == 0.0:
            continue
        gj = g_reduced(ReducedIndex(l, lp, j), geom.R, geom.a).value
        if gj == 0.0:
            continue
        acc += ((-1) ** mp * math.sqrt(4 * math.pi / (2 * j + 1)) * tj * gj
                * spherical_harmonic(MultipoleIndex(j, m1),
                                     geom.theta, geom.phi))
    return acc


# ---------------------------------------------------------------------------
# Fourier space
# ---------------------------------------------------------------------------

def _khat_angles(kvec):
    kx, ky, kz = (float(c) for c in kvec)
    k = math.sqrt(kx * kx + ky * ky + kz * kz)
    if k == 0.0:
        return 0.0, 0.0, 0.0
    return k, math.acos(kz / k), math.atan2(ky, kx)


def omega_hat(lm: MultipoleIndex, kvec, a: float) -> complex:
    """Fourier transform of the surface multipole density:
    4 pi a^(l+1) (-i)^l j_l(ka) Y_lm(khat)."""
    k, theta, phi = _khat_angles(kvec)
    l = lm.l
    if k == 0.0:
        return math.sqrt(4 * math.pi) * a if l == 0 else 0.0 + 0.0j
    return (4 * math.pi * a ** (l + 1) * (-1j) ** l
            * spherical_bessel_j(l, k * a)
            * spherical_harmonic(lm, theta, phi))


def fourier_matrix_element(lm: MultipoleIndex, lpmp: MultipoleIndex,
                           kvec, a: float) -> complex:
    """Fourier-space element (4pi)^2 (-i)^(-l+l') a^(l+l'+2)
    j_l(ka) j_l'(ka) / k^2 * conj(Y_lm(khat)) Y_l'm'(khat)."""
    k, theta, phi = _khat_angles(kvec)
    if k == 0.0:
        raise ZeroWaveVector("Fourier element diverges as 1/k^2 at k = 0")
    l, lp = lm.l, lpmp.l
    return ((4 * math.pi) ** 2 * (-1j) ** (lp - l) * a ** (l + lp + 2)
            * spherical_bessel_j(l, k * a) * spherical_bessel_j(lp, k * a)
            / (k * k)
            * spherical_harmonic(lm, theta, phi).conjugate()
            * spherical_harmonic(lpmp, theta, phi))


def g_tilde(idx: ReducedIndex, k: float, a: float) -> complex:
    """Fourier-space reduced element
    4 pi (-i)^(-l+l') (2j+1) sqrt((2l+1)(2l'+1)) a^(l+l'+2) (l l' j;000)
    j_l(ka) j_l'(ka) / k^2."""
    if k <= 0.0:
        raise ZeroWaveVector("g_tilde requires k > 0")
    l, lp, j = idx.l, idx.lp, idx.j
    tj = wigner_3j_float(l, lp, j, 0, 0, 0)
    if tj == 0.0:
        return 0.0 + 0.0j
    return (4 * math.pi * (-1j) ** (lp - l) * (2 * j + 1)
            * math.sqrt((2 * l + 1) * (2 * lp + 1)) * a ** (l + lp + 2)
            * tj * spherical_bessel_j(l, k * a) * spherical_bessel_j(lp, k * a)
            / (k * k))
