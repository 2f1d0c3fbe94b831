"""Brute-force quadrature oracles for the closed forms in :mod:`.core`.

These evaluators are deliberately independent of the production code
paths: the defining double-surface integral is done by graded
Gauss-Legendre product quadrature, and the semi-infinite Hankel
integrals by zero-aligned panels plus analytic oscillatory tails.
They are slow by design and exist only to earn trust (tests and the
``verify`` CLI command).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import sph_harm_y, spherical_jn

from .core import ReducedIndex, SphereGeometry
from .errors import SingularConfiguration, TailTooLarge
from .specfun import MultipoleIndex


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature controls: Gauss-Legendre nodes per panel, truncation of
    semi-infinite integrals (units of 1/a), and the number of analytic
    oscillatory tail terms."""

    node_count: int = 12
    k_max: float = 80.0
    tail_order: int = 14

    def __post_init__(self):
        if self.node_count < 8:
            raise ValueError("node_count must be at least 8")
        if self.k_max <= 0:
            raise ValueError("k_max must be positive")
        if self.tail_order < 0:
            raise ValueError("tail_order must be non-negative")


# ---------------------------------------------------------------------------
# graded Gauss-Legendre meshes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _gl(n: int):
    return leggauss(n)

def _panel_nodes(lo: float, hi: float, n: int):
    x, w = _gl(n)
    mid, hw = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return mid + hw * x, hw * w


def _graded_mesh(lo: float, hi: float, focus: float, n: int, levels: int):
    """Panels on [lo, hi] geometrically refined toward the focus point."""
    nodes, weights = [], []
    cuts = []
    focus = min(max(focus, lo), hi)
    if focus - lo > 0:
        widths = [(focus - lo) * 0.5 ** i for i in range(1, levels)]
        edges = [lo] + [focus - wd for wd in widths] + [focus]
        cuts += list(zip(edges[:-1], edges[1:]))
    if hi - focus > 0:
        widths = [(hi - focus) * 0.5 ** i for i in range(1, levels)]
        edges = [focus] + [focus + wd for wd in reversed(widths)] + [hi]
        cuts += list(zip(edges[:-1], edges[1:]))
    for a_, b_ in cuts:
        x, w = _panel_nodes(a_, b_, n)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


# ---------------------------------------------------------------------------
# defining double-surface integral
# ---------------------------------------------------------------------------

def _theta_profile(l: int, m: int, thetas: np.ndarray) -> np.ndarray:
    # Y_lm(theta, 0) is real under the Condon-Shortley convention
    return sph_harm_y(l, m, thetas, 0.0).real


def _surface_integral(l: int, lp: int, m: int, R: float, a: float,
                      n: int, levels: int) -> float:
    # reduced 3-D form: the azimuthal integrals collapse to one relative
    # angle u with a 2*pi prefactor and an even integrand on [0, pi]
    # the surfaces touch where a*n + R e_z = a*n': cos(theta) = -R/2a,
    # cos(theta') = +R/2a, u = 0
    if R < 2 * a:
        th_star = math.acos(-R / (2 * a))
        th, wth = _graded_mesh(0.0, math.pi, th_star, n, levels)
        tp, wtp = _graded_mesh(0.0, math.pi, math.pi - th_star, n, levels)
        uu, wu = _graded_mesh(0.0, math.pi, 0.0, n, levels)
    else:
        th, wth = _graded_mesh(0.0, math.pi, math.pi, n, max(levels // 2, 4))
        tp, wtp = _graded_mesh(0.0, math.pi, 0.0, n, max(levels // 2, 4))
        uu, wu = _graded_mesh(0.0, math.pi, 0.0, n, max(levels // 2, 4))
    f_th = _theta_profile(l, m, th) * np.sin(th) * wth
    f_tp = _theta_profile(lp, m, tp) * np.sin(tp) * wtp
    f_u = np.cos(m * uu) * wu
    cos_th, sin_th = np.cos(th), np.sin(th)
    cos_tp, sin_tp = np.cos(tp), np.sin(tp)
    cos_u = np.cos(uu)
    total = 0.0
    for i in range(len(th)):
        # d^2 = |a n - a n' + R e_z|^2 on the (theta', u) mesh
        d2 = (2 * a * a * (1.0 - cos_th[i] * cos_tp[:, None]
                           - sin_th[i] * sin_tp[:, None] * cos_u[None, :])
              + R * R + 2 * a * R * (cos_th[i] - cos_tp[:, None]))
        np.maximum(d2, 1e-300, out=d2)
        inner = f_tp @ (1.0 / np.sqrt(d2)) @ f_u
        total += f_th[i] * inner
    # 2*pi from the overall azimuth, 2 from u-parity, 1/(4*pi) kernel
    return total / (4 * math.pi) * 2 * math.pi * 2


def defining_integral_quadrature(lm: MultipoleIndex, lpmp: MultipoleIndex,
                                 geom: SphereGeometry, spec: QuadratureSpec,
                                 rel_tol: float = 1e-4) -> complex:
    """Direct quadrature of the double surface-convolution
    a^(l+l'+2) * int dn dn' conj(Y_lm(n)) Y_l'm'(n') / (4 pi |a n - R - a n'|)
    for a separation along e_z.

    The relative azimuth reduces the integral to three angles; it vanishes
    identically for m != m'.  Raises SingularConfiguration when the two-
    resolution error estimate exceeds rel_tol.
    """
    if geom.theta != 0.0 or geom.phi != 0.0:
        raise ValueError("oracle implemented for separations along e_z; "
                         "rotate the indices instead")
    if lm.m != lpmp.m:
        return 0.0 + 0.0j
    l, lp, m = lm.l, lpmp.l, lm.m
    R, a = geom.R, geom.a
    levels = 12
    coarse = _surface_integral(l, lp, m, R, a, spec.node_count, levels)
    fine = _surface_integral(l, lp, m, R, a, spec.node_count + 4, levels + 2)
    scale = a ** (l + lp + 2)
    # floor the scale so genuine zeros (cancelling channels) are accepted
    err = abs(fine - coarse)
    if err > rel_tol * max(abs(fine), 1e-4):
        raise SingularConfiguration(
            f"surface quadrature error estimate {err * scale:.3e} "
            f"({err / max(abs(fine), 1e-300):.2e} relative) exceeds {rel_tol:.1e}")
    return complex(scale * fine)


# ---------------------------------------------------------------------------
# oscillatory Hankel machinery
# ---------------------------------------------------------------------------

def _bessel_trig_terms(n: int, c: float):
    """Exact finite decomposition j_n(c k) = sum_s [t e^{ick} + conj] / k^(s+1).

    Coefficients from the terminating half-integer-order asymptotic series
    a_s(n) = (n+s)! / (2^s s! (n-s)!).
    """
    out = []
    for s in range(n + 1):
        a_s = (math.factorial(n + s)
               / (2 ** s * math.factorial(s) * math.factorial(n - s)))
        t = a_s * (-1) ** (s // 2) / c ** (s + 1)
        phase = (-1j) ** n
        if s % 2 == 0:  # sin(ck - n pi/2) term
            coef = t * phase / 2j
        else:           # cos(ck - n pi/2) term
            coef = t * phase / 2
        out.append((s + 1, coef))
    return out


@lru_cache(maxsize=4096)
def _expint_scaled(p: int, omK: float) -> complex:
    """E_p(-i omK) via mpmath, for the slowly-oscillating cases."""
    with mpmath.workdps(30):
        return complex(mpmath.expint(p, mpmath.mpc(0, -omK)))


def _osc_power_integral(p: int, om: float, K: float) -> complex:
    """int_K^inf e^{i om k} k^-p dk.

    Repeated integration by parts gives the asymptotic series
    -(e^{i om K}/(i om)) sum_t (p)_t / ((i om)^t K^(p+t)); it converges
    geometrically once |om| K is well above p, otherwise fall back to the
    incomplete-gamma evaluation."""
    if om == 0.0:
        return K ** (1 - p) / (p - 1) if p > 1 else complex("inf")
    x = abs(om) * K
    if x < max(40.0, 3.0 * p + 20.0):
        return _expint_scaled(p, om * K) * K ** (1 - p)
    iw = 1j * om
    pref = -cmath.exp(iw * K) / iw
    term = K ** float(-p)
    total = 0.0 + 0.0j
    for t in range(40):
        total += term
        term *= (p + t) / (iw * K)
        if abs(term) < 1e-18 * abs(total):
            break
    return pref * total


def _tail_exact(terms_list, K: float, tail_order: int):
    """Analytic tail int_K^inf prod_i j_{n_i}(c_i k) dk.

    terms_list: per factor, (frequency scale c_i, [(power, coef)]).
    Returns (tail value, bound on the part omitted beyond tail_order).
    """
    omitted = 0.0
    # expand the product into (power, frequency) -> coefficient
    collected = {}
    stack = [(1.0 + 0.0j, 0, 0.0)]
    for c, terms in terms_list:
        new = []
        for coef0, p0, om0 in stack:
            for p, coef in terms:
                new.append((coef0 * coef, p0 + p, om0 + c))
                new.append((coef0 * coef.conjugate(), p0 + p, om0 - c))
        stack = new
    nfac = len(terms_list)
    for coef, p, om in stack:
        if p - nfac > tail_order:
            omitted += abs(coef) * K ** (1 - p) / max(p - 1, 1)
            continue
        collected[(p, round(om, 12))] = collected.get((p, round(om, 12)), 0j) + coef
    total = 0.0
    for (p, om), coef in collected.items():
        total += (coef * _osc_power_integral(p, om, K)).real
    return total, omitted


def hankel_triple_bessel(idx: ReducedIndex, R: float, a: float,
                         spec: QuadratureSpec) -> float:
    """Numerical int_0^inf j_j(kR) j_l(ka) j_l'(ka) dk.

    Zero-aligned Gauss-Legendre panels on [0, k_max/a], then the exact
    oscillatory tail from the terminating trigonometric forms of the
    spherical Bessel functions.
    """
    if R < 0:
        raise ValueError("separation must be non-negative")
    if R == 0.0 and idx.j != 0:
        return 0.0  # j_j(0) = 0 kills the integrand
    factors = [(idx.l, a), (idx.lp, a)]
    if R > 0:
        factors.append((idx.j, R))
    K = spec.k_max / a
    freq = sum(c for _, c in factors)
    width = math.pi / freq
    nper = max(int(math.ceil(K / width)), 1)
    K = nper * width
    x, w = _gl(spec.node_count)
    mids = width * (np.arange(nper) + 0.5)
    kk = (mids[:, None] + 0.5 * width * x[None, :]).ravel()
    f = np.ones_like(kk)
    for n, c in factors:
        f *= spherical_jn(n, c * kk)
    total = 0.5 * width * float(np.sum(f.reshape(nper, -1) @ w))
    terms_list = [(c, _bessel_trig_terms(n, c)) for n, c in factors]
    tail, omitted = _tail_exact(terms_list, K, spec.tail_order)
    budget = 1e-9 * max(abs(total), 1e-10)
    if omitted > budget:
        raise TailTooLarge(
            f"omitted tail bound {omitted:.3e} exceeds budget {budget:.3e}; "
            f"raise tail_order")
    return total + tail


def _euler_sum(terms):
    """Accelerated sum of a (near-)alternating sequence of panel integrals
    by iterated averaging of partial sums."""
    partial = np.cumsum(terms)
    rows = partial
    best = partial[-1]
    for _ in range(len(terms) - 1):
        rows = 0.5 * (rows[1:] + rows[:-1])
        best = rows[-1]
    return best


def _panel_integrate(f, lo: float, hi: float, n: int) -> complex:
    x, w = _gl(n)
    kk = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
    vals = np.array([f(float(k)) for k in kk])
    return 0.5 * (hi - lo) * complex(np.dot(w, vals))


def _oscillatory_integral(f, freq: float, start: float, K0: float, n: int,
                          accel_panels: int = 48):
    """int_start^inf f, with f oscillating at frequency freq: direct
    half-period panels to beyond K0, then accelerated summation of
    further panels; error estimated by shortening the accelerated run."""
    width = math.pi / freq
    ndirect = max(int(math.ceil((K0 - start) / width)), 2)
    total = 0.0 + 0.0j
    for p in range(ndirect):
        total += _panel_integrate(f, start + p * width,
                                  start + (p + 1) * width, n)
    base = start + ndirect * width
    tail_terms = np.array(
        [_panel_integrate(f, base + p * width, base + (p + 1) * width, n)
         for p in range(accel_panels)])
    tail = complex(_euler_sum(tail_terms))
    est = abs(tail - complex(_euler_sum(tail_terms[:-8])))
    return total + tail, est


def hankel_forward(idx: ReducedIndex, k: float, a: float, g_samples,
                   spec: QuadratureSpec) -> complex:
    """Forward transform 4 pi (-i)^j int_0^inf dR R^2 j_j(kR) g(R).

    The integrand decays only algebraically (g ~ R^-(l+l'+1) beyond
    contact), so the semi-infinite part is summed by panel acceleration.
    """
    if k <= 0:
        raise ValueError("wave number must be positive")
    j = idx.j

    def f(R):
        return R * R * spherical_jn(j, k * R) * complex(g_samples(R))

    # the overlap region [0, 2a] is polynomial but only piecewise smooth
    # at contact, so it gets its own panels before the oscillatory run
    head = 0.0 + 0.0j
    for p in range(4):
        head += _panel_integrate(f, 0.5 * p * a, 0.5 * (p + 1) * a,
                                 spec.node_count)
    val, est = _oscillatory_integral(f, k, 2 * a, 2 * a + 8 * math.pi / k,
                                     spec.node_count)
    val = val + head
    if est > 1e-6 * max(abs(val), 1e-300):
        raise TailTooLarge(
            f"forward-transform tail estimate {est:.3e} not negligible "
            f"against {abs(val):.3e}")
    return 4 * math.pi * (-1j) ** j * val


def hankel_inverse(idx: ReducedIndex, R: float, a: float, gtilde_samples,
                   spec: QuadratureSpec) -> float:
    """Inverse transform (1/2 pi^2) i^j int_0^inf dk k^2 j_j(kR) gtilde(k)."""
    if R <= 0:
        raise ValueError("separation must be positive")
    j = idx.j

    def f(k):
        return k * k * spherical_jn(j, k * R) * complex(gtilde_samples(k))

    K0 = spec.k_max / a
    val, est = _oscillatory_integral(f, R + 2 * a, 0.0, K0, spec.node_count)
    if est > 1e-6 * max(abs(val), 1e-300):
        raise TailTooLarge(
            f"inverse-transform tail estimate {est:.3e} not negligible "
            f"against {abs(val):.3e}")
    out = (1j) ** j / (2 * math.pi ** 2) * val
    return out.real
