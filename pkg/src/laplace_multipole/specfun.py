"""Angular-momentum special functions under Condon-Shortley phase conventions.

Provides exact factorials and Wigner 3-j symbols (arbitrary-precision
rational arithmetic under the square root), Wigner d/D rotation matrices,
spherical harmonics, and spherical Bessel functions.  Conventions are fixed
so that

    D^(l)_{m,0}(alpha, beta, 0) = sqrt(4 pi / (2l+1)) * conj(Y_lm(beta, alpha))

which the test suite pins numerically.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from scipy.special import sph_harm_y


@dataclass(frozen=True)
class MultipoleIndex:
    """A spherical-harmonic channel (l, m) with -l <= m <= l."""

    l: int
    m: int

    def __post_init__(self):
        if self.l < 0:
            raise ValueError(f"multipole order must be non-negative, got l={self.l}")
        if abs(self.m) > self.l:
            raise ValueError(f"azimuthal number out of range: |{self.m}| > {self.l}")


@dataclass(frozen=True)
class EulerAngles:
    """z-y-z Euler angles in radians; any real values are accepted."""

    alpha: float
    beta: float
    gamma: float


def factorial_exact(n: int) -> int:
    """n! as an exact arbitrary-precision integer."""
    if n < 0:
        raise ValueError(f"factorial of negative integer: {n}")
    return math.factorial(n)


# ---------------------------------------------------------------------------
# Wigner 3-j symbols, exact
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThreeJValue:
    """Exact 3-j value sign * sqrt(radicand), radicand a non-negative rational."""

    sign: int
    radicand: Fraction

    def to_float(self) -> float:
        return self.sign * math.sqrt(self.radicand)

    def __bool__(self) -> bool:
        return self.sign != 0


_THREEJ_ZERO = ThreeJValue(0, Fraction(0))


def _selection_rules_ok(l1, l2, l3, m1, m2, m3) -> bool:
    if m1 + m2 + m3 != 0:
        return False
    if not abs(l1 - l2) <= l3 <= l1 + l2:
        return False
    return abs(m1) <= l1 and abs(m2) <= l2 and abs(m3) <= l3


@cache
def wigner_3j(l1: int, l2: int, l3: int, m1: int, m2: int, m3: int) -> ThreeJValue:
    """Exact Wigner 3-j symbol via the Racah single-sum formula.

    Inputs violating the selection rules (including |m| > l) return an
    exact zero rather than raising, so rectangular index sweeps can rely
    on the zeros.
    """
    if min(l1, l2, l3) < 0:
        raise ValueError("3-j orders must be non-negative")
    if not _selection_rules_ok(l1, l2, l3, m1, m2, m3):
        return _THREEJ_ZERO

    f = math.factorial
    # triangle coefficient and magnetic factorials, kept under the root
    radical = Fraction(
        f(l1 + l2 - l3) * f(l1 - l2 + l3) * f(-l1 + l2 + l3)
        * f(l1 + m1) * f(l1 - m1) * f(l2 + m2) * f(l2 - m2)
        * f(l3 + m3) * f(l3 - m3),
        f(l1 + l2 + l3 + 1),
    )
    tmin = max(0, l2 - l3 - m1, l1 - l3 + m2)
    tmax = min(l1 + l2 - l3, l1 - m1, l2 + m2)
    s = Fraction(0)
    for t in range(tmin, tmax + 1):
        den = (
            f(t) * f(l3 - l2 + t + m1) * f(l3 - l1 + t - m2)
            * f(l1 + l2 - l3 - t) * f(l1 - t - m1) * f(l2 + m2 - t)
        )
        s += Fraction((-1) ** t, den)
    if s == 0:
        return _THREEJ_ZERO
    phase = -1 if (l1 - l2 - m3) % 2 else 1
    signed = phase * (1 if s > 0 else -1)
    return ThreeJValue(signed, s * s * radical)


def wigner_3j_float(l1, l2, l3, m1, m2, m3) -> float:
    return wigner_3j(l1, l2, l3, m1, m2, m3).to_float()


# ---------------------------------------------------------------------------
# Wigner rotation matrices
# ---------------------------------------------------------------------------

def wigner_small_d(l: int, m: int, mp: int, beta: float) -> float:
    """Small Wigner matrix d^l_{m,mp}(beta); d^l_{m,mp}(0) = delta_{m,mp}."""
    if abs(m) > l or abs(mp) > l:
        raise ValueError("require |m|, |mp| <= l")
    f = math.factorial
    pref = math.sqrt(f(l + m) * f(l - m) * f(l + mp) * f(l - mp))
    c = math.cos(beta / 2.0)
    s = math.sin(beta / 2.0)
    kmin = max(0, mp - m)
    kmax = min(l + mp, l - m)
    total = 0.0
    for k in range(kmin, kmax + 1):
        den = f(l + mp - k) * f(k) * f(l - m - k) * f(k - mp + m)
        total += ((-1) ** (k - mp + m)
                  * c ** (2 * l + mp - m - 2 * k)
                  * s ** (2 * k + m - mp)) / den
    return pref * total


def wigner_D(l: int, m: int, mp: int, angles: EulerAngles) -> complex:
    """Full Wigner matrix D^l_{m,mp} = e^{-i m alpha} d^l_{m,mp}(beta) e^{-i mp gamma}."""
    d = wigner_small_d(l, m, mp, angles.beta)
    return cmath.exp(-1j * m * angles.alpha) * d * cmath.exp(-1j * mp * angles.gamma)


def spherical_harmonic(idx: MultipoleIndex, theta: float, phi: float) -> complex:
    """Y_lm(theta, phi), Condon-Shortley phase; Y_lm(0, .) = delta_{m,0} sqrt((2l+1)/4pi)."""
    return complex(sph_harm_y(idx.l, idx.m, theta, phi))


# ---------------------------------------------------------------------------
# Spherical Bessel functions
# ---------------------------------------------------------------------------

def _bessel_series(l: int, x: float) -> float:
    # ascending power series; all terms positive-decreasing after alternation,
    # stable for x below ~l
    x2 = -0.5 * x * x
    # leading x^l / (2l+1)!!
    term = 1.0
    for i in range(1, l + 1):
        term *= x / (2 * i + 1)
    total = term
    k = 1
    while True:
        term *= x2 / (k * (2 * l + 2 * k + 1))
        total += term
        if abs(term) <= 1e-18 * abs(total):
            return total
        k += 1


def _bessel_upward(l: int, x: float) -> float:
    jm, j0 = math.sin(x) / x, math.sin(x) / (x * x) - math.cos(x) / x
    if l == 0:
        return jm
    for n in range(1, l):
        jm, j0 = j0, (2 * n + 1) / x * j0 - jm
    return j0


def _bessel_miller(l: int, x: float) -> float:
    # downward recurrence from a padded start order, normalised by j_0
    nstart = l + 16 + int(1.5 * math.sqrt(max(l, 1)) * 4)
    jp, jc = 0.0, 1e-30
    out = 0.0
    for n in range(nstart, -1, -1):
        jm = (2 * n + 3) / x * jc - jp
        if n == l:
            out = jm
        jp, jc = jc, jm
        if abs(jc) > 1e250:
            jp *= 1e-250
            jc *= 1e-250
            out *= 1e-250
    return out * (math.sin(x) / x) / jc


def spherical_bessel_j(l: int, x: float) -> float:
    """Spherical Bessel j_l(x) for x >= 0; j_l(0) = delta_{l,0}.

    Ascending series for x < l/2, downward Miller recurrence for
    intermediate x, plain upward recurrence once x exceeds l (where it
    is stable).  Tested to 1e-13 relative for l <= 30, x <= 1e3.
    """
    if l < 0:
        raise ValueError("order must be non-negative")
    if x < 0:
        raise ValueError("argument must be non-negative")
    if x == 0.0:
        return 1.0 if l == 0 else 0.0
    if l == 0:
        return math.sin(x) / x
    if x < 0.5 * l:
        return _bessel_series(l, x)
    if x > l:
        return _bessel_upward(l, x)
    return _bessel_miller(l, x)
