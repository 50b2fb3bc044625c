"""Quadrature for the two tail integrals behind the p/(1 + ln p) growth.

Both integrands are ``exp(g(t))`` with ``g`` concave beyond its peak, so the
integral over ``[T, inf)`` is at most ``exp(g(T)) / |g'(T)|`` once
``g'(T) < 0``; the cut ``T`` is pushed out by doubling until that remainder
is negligible.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

from scipy import integrate, optimize

from ..errors import DomainError, NumericError

REL_TOL = 1e-8
CUT_TOL = 1e-16
REMAINDER_TOL = 1e-10


class TailQuadrature(NamedTuple):
    value: float
    abs_error: float
    cutoff: float
    remainder_bound: float


class Cc1Result(NamedTuple):
    value: float
    lower: float
    upper: float
    abs_error: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.value <= self.upper


class CalcResult(NamedTuple):
    value: float
    bound: float
    branch: str
    abs_error: float

    @property
    def holds(self) -> bool:
        return self.value <= self.bound


def _tail_integral(
    log_f: Callable[[float], float], dlog_f: Callable[[float], float], lo: float
) -> TailQuadrature:
    if dlog_f(lo) > 0:
        hi = lo * 2.0
        while dlog_f(hi) > 0:
            hi *= 2.0
        peak = optimize.brentq(dlog_f, lo, hi, xtol=1e-14, rtol=1e-14)
    else:
        peak = lo
    g_peak = log_f(peak)

    # pilot estimate near the peak; the full integral only exceeds it, so cuts chosen against it are safe
    cut = max(2.0 * peak, lo + 1.0)
    pilot, _ = _quad(log_f, g_peak, lo, cut, peak)
    for _ in range(200):
        slope = dlog_f(cut)
        if slope < 0:
            g_cut = log_f(cut) - g_peak
            remainder = math.exp(g_cut) / -slope
            if g_cut <= math.log(CUT_TOL * pilot) and remainder <= REMAINDER_TOL * pilot:
                break
        cut *= 2.0
    else:
        raise NumericError("could not place the truncation point")
    estimate, err = _quad(log_f, g_peak, lo, cut, peak)
    if err > REL_TOL * estimate:
        raise NumericError(f"quadrature error {err:.3g} above the relative target for value {estimate:.3g}")
    scale = math.exp(g_peak)
    return TailQuadrature(estimate * scale, err * scale, cut, remainder * scale)


def _quad(log_f, g_peak: float, lo: float, hi: float, peak: float) -> tuple[float, float]:
    pts = [peak] if lo < peak < hi else None
    val, err = integrate.quad(
        lambda t: math.exp(log_f(t) - g_peak), lo, hi, points=pts, epsabs=0.0, epsrel=1e-11, limit=500
    )
    return val, err


def integral_cc1(a: float, b: float) -> Cc1Result:
    """``int_b^inf t^a (b/t)^t dt`` with its two-sided bound.

    Requires ``b >= 1`` and ``a >= max(e^{e-1} b / 2, 4 b^2)``. The bounds are
    ``e^{-2a-1} (a/(1+ln a))^{a+1}`` and ``(a+1) (2a/(1+ln a))^a``.
    """
    if b < 1 or a < max(math.exp(math.e - 1) * b / 2, 4 * b * b):
        raise DomainError(f"need b >= 1 and a >= max(e^(e-1) b/2, 4 b^2); got a={a}, b={b}")
    lb = math.log(b)
    quad = _tail_integral(
        lambda t: a * math.log(t) + t * (lb - math.log(t)),
        lambda t: a / t + lb - math.log(t) - 1.0,
        b,
    )
    la = 1.0 + math.log(a)
    lower = math.exp(-2 * a - 1) * (a / la) ** (a + 1)
    upper = (a + 1) * (2 * a / la) ** a
    return Cc1Result(quad.value, lower, upper, quad.abs_error + quad.remainder_bound)


def integral_calc(a: float, b: float, d: float, r: float) -> CalcResult:
    """``int_d^inf (b/t)^{t r} t^a dt`` against ``(2/r) e^{-dr} d^a`` or ``(2/r) e^{-dr} 2 (2a/r)^a``.

    The first form applies when ``2a <= rd``, the second otherwise.
    """
    if b < 1 or not a > 0 or d < b * math.e or not r > 0:
        raise DomainError(f"need b >= 1, a > 0, d >= b e, r > 0; got a={a}, b={b}, d={d}, r={r}")
    lb = math.log(b)
    quad = _tail_integral(
        lambda t: a * math.log(t) + t * r * (lb - math.log(t)),
        lambda t: a / t + r * (lb - math.log(t) - 1.0),
        d,
    )
    if 2 * a <= r * d:
        branch, shape = "small_a", d**a
    else:
        branch, shape = "large_a", 2 * (2 * a / r) ** a
    bound = (2 / r) * math.exp(-d * r) * shape
    return CalcResult(quad.value, bound, branch, quad.abs_error + quad.remainder_bound)
