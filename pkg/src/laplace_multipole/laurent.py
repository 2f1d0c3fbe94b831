"""Truncated Laurent-series arithmetic in a regularization parameter.

Values are finite windows of coefficients of powers of a small shift
``eps`` that is attached to otherwise-integer parameters.  Gamma and
Pochhammer factors with poles become Laurent values with negative-order
coefficients; physically meaningful assemblies must end up with the
negative orders cancelling, which callers check via :meth:`LaurentValue.is_finite`.

Coefficients are kept as ``mpmath.mpf`` when produced by the Gamma
machinery (40 significant digits by default) but the arithmetic is
agnostic and works with plain floats too.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp

from .errors import NonConvergence, PoleWithoutRegularizer, WindowOverflow

DEFAULT_WINDOW = (-4, 2)
_DPS = 40


@dataclass(frozen=True)
class RegularizedArgument:
    """A parameter base + slope * eps; the slope is kept even when zero."""

    base: float
    slope: float = 0.0

    def is_nonpositive_integer(self) -> bool:
        b = self.base
        return b <= 0 and float(b) == int(b)


class LaurentValue:
    """Sum of c_p * eps^p for p in [window_min, window_max].

    Orders above the window top are truncated; a nonzero coefficient
    falling below the window bottom raises :class:`WindowOverflow`.
    """

    __slots__ = ("pmin", "coeffs", "window")

    def __init__(self, coeffs, pmin: int, window=DEFAULT_WINDOW):
        wmin, wmax = window
        if wmin > wmax:
            raise ValueError("empty Laurent window")
        # clip to window, complain about lost poles
        out = {}
        for i, c in enumerate(coeffs):
            p = pmin + i
            if c == 0:
                continue
            if p < wmin:
                raise WindowOverflow(
                    f"coefficient at order {p} below window bottom {wmin}")
            if p > wmax:
                continue
            out[p] = c
        if out:
            lo = min(out)
            hi = max(out)
            self.pmin = lo
            self.coeffs = tuple(out.get(p, 0) for p in range(lo, hi + 1))
        else:
            self.pmin = 0
            self.coeffs = (0,)
        self.window = (wmin, wmax)

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, value, window=DEFAULT_WINDOW):
        return cls([value], 0, window)

    @classmethod
    def zero(cls, window=DEFAULT_WINDOW):
        return cls([], 0, window)

    @classmethod
    def linear(cls, base, slope, window=DEFAULT_WINDOW):
        """base + slope * eps."""
        return cls([base, slope], 0, window)

    # -- access -------------------------------------------------------------
    def coefficient(self, p: int):
        i = p - self.pmin
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def items(self):
        return [(self.pmin + i, c) for i, c in enumerate(self.coeffs)]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def max_abs(self):
        return max((abs(c) for c in self.coeffs), default=0)

    def is_finite(self, tol: float = 1e-8) -> bool:
        """True when every negative-order coefficient is below tol relative
        to the order-0 coefficient (or to the overall scale when that is 0)."""
        scale = abs(self.coefficient(0))
        if scale == 0:
            scale = self.max_abs()
        if scale == 0:
            return True
        return all(abs(c) <= tol * scale
                   for p, c in self.items() if p < 0)

    def negative_order_residue(self) -> float:
        """Largest |coefficient| at negative order, relative to order 0."""
        neg = max((abs(c) for p, c in self.items() if p < 0), default=0)
        scale = abs(self.coefficient(0))
        if scale == 0:
            scale = self.max_abs()
        if scale == 0:
            return 0.0
        return float(neg / scale)

    # -- arithmetic ---------------------------------------------------------
    def _merged_window(self, other):
        w1, w2 = self.window, other.window
        return (min(w1[0], w2[0]), max(w1[1], w2[1]))

    def __add__(self, other):
        if not isinstance(other, LaurentValue):
            other = LaurentValue.constant(other, self.window)
        window = self._merged_window(other)
        lo = min(self.pmin, other.pmin)
        hi = max(self.pmin + len(self.coeffs), other.pmin + len(other.coeffs))
        out = [self.coefficient(p) + other.coefficient(p) for p in range(lo, hi)]
        return LaurentValue(out, lo, window)

    __radd__ = __add__

    def __neg__(self):
        return LaurentValue([-c for c in self.coeffs], self.pmin, self.window)

    def __sub__(self, other):
        if not isinstance(other, LaurentValue):
            other = LaurentValue.constant(other, self.window)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentValue):
            out = [c * other for c in self.coeffs]
            return LaurentValue(out, self.pmin, self.window)
        window = self._merged_window(other)
        if self.is_zero() or other.is_zero():
            return LaurentValue.zero(window)
        n1, n2 = len(self.coeffs), len(other.coeffs)
        out = [0] * (n1 + n2 - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for k, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + k] += a * b
        return LaurentValue(out, self.pmin + other.pmin, window)

    __rmul__ = __mul__

    def reciprocal(self):
        """1 / self by power-series inversion about the leading order."""
        lead = None
        for i, c in enumerate(self.coeffs):
            if c != 0:
                lead = i
                break
        if lead is None:
            raise ZeroDivisionError("reciprocal of zero Laurent value")
        p0 = self.pmin + lead
        a = self.coeffs[lead:]
        wmin, wmax = self.window
        n = wmax - wmin + 1
        inv = [0] * n
        inv[0] = 1 / a[0]
        for k in range(1, n):
            acc = 0
            for i in range(1, min(k, len(a) - 1) + 1):
                acc += a[i] * inv[k - i]
            inv[k] = -acc / a[0]
        return LaurentValue(inv, -p0, self.window)

    def __truediv__(self, other):
        if not isinstance(other, LaurentValue):
            return self * (1 / other)
        return self * other.reciprocal()

    def widened(self, window):
        return LaurentValue(list(self.coeffs), self.pmin, window)

    def __repr__(self):
        terms = ", ".join(f"eps^{p}: {c}" for p, c in self.items())
        return f"LaurentValue({terms or '0'}; window={self.window})"


# ---------------------------------------------------------------------------
# Regularized Gamma / Pochhammer / 4F3
# ---------------------------------------------------------------------------

def _gamma_taylor(base, nterms):
    with mpmath.workdps(_DPS):
        return mpmath.taylor(mpmath.gamma, mpmath.mpf(base), nterms - 1)


def gamma_laurent(arg: RegularizedArgument, window=DEFAULT_WINDOW) -> LaurentValue:
    """Gamma(base + slope*eps) expanded as a Laurent value.

    At base = -n (integer n >= 0) the leading term is
    (-1)^n / (n! * slope) at order -1; away from poles it is the plain
    Taylor expansion with Gamma(base) at order 0.
    """
    wmin, wmax = window
    nterms = wmax - wmin + 2
    with mpmath.workdps(_DPS):
        s = mpmath.mpf(arg.slope)
        if arg.is_nonpositive_integer():
            if arg.slope == 0:
                raise PoleWithoutRegularizer(
                    f"Gamma at {arg.base} needs a nonzero eps slope")
            n = int(-arg.base)
            # Gamma(-n + s eps) = Gamma(1 + s eps) / (s eps * prod_{m=1}^{n} (s eps - m))
            num_taylor = _gamma_taylor(1, nterms + 1)
            num = LaurentValue([c * s ** k for k, c in enumerate(num_taylor)],
                               0, window)
            den = LaurentValue([0, s], 0, window)
            for mdiv in range(1, n + 1):
                den = den * LaurentValue.linear(mpmath.mpf(-mdiv), s, window)
            return num * den.reciprocal()
        coeffs = _gamma_taylor(arg.base, nterms)
        return LaurentValue([c * s ** k for k, c in enumerate(coeffs)], 0, window)


def reciprocal_gamma_laurent(arg: RegularizedArgument,
                             window=DEFAULT_WINDOW) -> LaurentValue:
    """1/Gamma(base + slope*eps); exactly zero at an unregularized pole."""
    if arg.is_nonpositive_integer() and arg.slope == 0:
        return LaurentValue.zero(window)
    return gamma_laurent(arg, window).reciprocal()


def pochhammer_laurent(arg: RegularizedArgument, k: int,
                       window=DEFAULT_WINDOW) -> LaurentValue:
    """(base + slope*eps)_k as an exact product of linear factors."""
    if k < 0:
        raise ValueError("Pochhammer order must be non-negative")
    with mpmath.workdps(_DPS):
        out = LaurentValue.constant(mpmath.mpf(1), window)
        base = mpmath.mpf(arg.base)
        slope = mpmath.mpf(arg.slope)
        for i in range(k):
            out = out * LaurentValue.linear(base + i, slope, window)
    return out


def hyper4f3_regularized(alphas, betas, x, kmax: int,
                         window=DEFAULT_WINDOW) -> LaurentValue:
    """Truncated 4F3 sum with Laurent-valued Pochhammer factors.

    alphas: four RegularizedArguments, betas: three; |x| <= 1.
    Raises WindowOverflow when a term's pole order exceeds the window.
    """
    if len(alphas) != 4 or len(betas) != 3:
        raise ValueError("4F3 takes four upper and three lower parameters")
    if abs(x) > 1:
        raise ValueError("series evaluated only for |x| <= 1")
    if kmax < 0:
        raise ValueError("kmax must be non-negative")
    with mpmath.workdps(_DPS):
        xm = mpmath.mpf(x)
        num = LaurentValue.constant(mpmath.mpf(1), window)
        den = LaurentValue.constant(mpmath.mpf(1), window)
        total = LaurentValue.constant(mpmath.mpf(1), window)
        kfact = mpmath.mpf(1)
        for k in range(1, kmax + 1):
            for a in alphas:
                num = num * LaurentValue.linear(
                    mpmath.mpf(a.base) + (k - 1), mpmath.mpf(a.slope), window)
            for b in betas:
                den = den * LaurentValue.linear(
                    mpmath.mpf(b.base) + (k - 1), mpmath.mpf(b.slope), window)
            kfact *= k
            if num.is_zero():
                break
            total = total + num * den.reciprocal() * (xm ** k / kfact)
    return total


def hyper4f3_converged(alphas, betas, x, kmax_start: int,
                       window=DEFAULT_WINDOW, rel_tol: float = 1e-14,
                       kmax_cap: int = 8192) -> LaurentValue:
    """4F3 with the trailing-term convergence test and kmax doubling.

    The last three retained terms must contribute less than rel_tol of
    the running total (checked across all retained orders); otherwise
    kmax doubles up to kmax_cap, after which NonConvergence is raised.
    """
    kmax = max(kmax_start, 3)
    while True:
        total = hyper4f3_regularized(alphas, betas, x, kmax, window)
        trail = hyper4f3_regularized(alphas, betas, x, kmax - 3, window)
        diff = (total - trail).max_abs()
        scale = total.max_abs()
        if scale == 0 or diff <= rel_tol * scale:
            return total
        if kmax >= kmax_cap:
            raise NonConvergence(
                f"4F3 trailing terms still {float(diff / scale):.2e} of total "
                f"at kmax={kmax}")
        kmax *= 2
