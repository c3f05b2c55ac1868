"""Special functions and constants: gamma, zeta(3), modified Bessel K0, 2F1.

The constant algorithms are chosen so that each value admits two genuinely
independent computations inside this package (series vs. integral, series
vs. asymptotic), which the test suite exploits as cross-checks:

* Euler's constant comes from the exponentially convergent Bessel-quotient
  scheme  gamma = A(n)/B(n) - ln n + O(e^{-4n})  with
  A(n) = sum_k H_k (n^k/k!)^2,  B(n) = sum_k (n^k/k!)^2 = I0(2n);
  the independent route is the integral  -int_0^inf e^{-t} ln t dt.
* zeta(3) uses the accelerated alternating series
  (5/2) * sum_{n>=1} (-1)^{n-1} / (n^3 binom(2n,n)),
  which gains ~0.6 decimal digits per term.
* K0(t) switches between the ascending series (small t, cancellation
  absorbed by extra working bits) and the divergent asymptotic series
  truncated at its smallest term (large t); the always-valid integral
  representation  K0(t) = int_0^inf exp(-t cosh u) du  serves as the
  arbiter between the two routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .precision import (
    BigReal,
    ConvergenceError,
    DomainError,
    PrecisionContext,
    as_mpf,
    make_real,
)

_LN10_OVER_4 = math.log(10) / 4.0

#: Decimal magnitude beyond which K0 values are reported in log form only.
K0_UNDERFLOW_LOG10 = 10 ** 6

#: Empirical series/asymptotic switch: the asymptotic tail error ~ e^{-2t}
#: drops below 10^{-d} once t exceeds ~1.16*d; correctness is enforced by the
#: cross-check against the integral representation, not by this constant.
K0_SWITCH_SLOPE = 1.16


def _digits_for_bits(bits: int) -> int:
    return int(bits * math.log10(2.0))


@lru_cache(maxsize=64)
def _euler_gamma_raw(prec: int) -> mpf:
    """Euler's constant at `prec` bits via the A(n)/B(n) - ln n scheme."""
    d = _digits_for_bits(prec) + 4
    n = int(_LN10_OVER_4 * d) + 3  # pi*e^{-4n} < 10^{-d} with margin
    with mp.workprec(prec + 32):
        A = mpf(0)
        B = mpf(0)
        H = mpf(0)
        term = mpf(1)
        n2 = mpf(n) ** 2
        floor_shift = -(mp.prec + 8)
        k = 0
        while True:
            A += term * H
            B += term
            k += 1
            term = term * n2 / (k * k)
            H += mpf(1) / k
            if k > n and term < mpmath.ldexp(B, floor_shift):
                break
            if k > 64 * n:
                raise ConvergenceError("gamma series failed to terminate")
        g = +(A / B - mpmath.ln(n))
    return g


def euler_gamma(ctx: PrecisionContext) -> BigReal:
    """Euler's constant gamma, correct to the context's target digits."""
    return make_real(_euler_gamma_raw(ctx.bits), ctx)


@lru_cache(maxsize=64)
def _zeta3_raw(prec: int) -> mpf:
    """zeta(3) by the accelerated central-binomial series."""
    with mp.workprec(prec + 16):
        acc = mpf(0)
        binom = 2  # binom(2n, n) at n = 1
        n = 1
        sign = 1
        floor_shift = -(mp.prec + 8)
        while True:
            term = mpf(1) / (binom * n ** 3)
            acc += sign * term
            if term < mpmath.ldexp(1, floor_shift):
                break
            sign = -sign
            binom = binom * 2 * (2 * n + 1) // (n + 1)
            n += 1
            if n > 10 ** 6:
                raise ConvergenceError("zeta(3) series failed to terminate")
        v = +(mpf(5) / 2 * acc)
    return v


def zeta3(ctx: PrecisionContext) -> BigReal:
    """Apery's constant zeta(3)."""
    return make_real(_zeta3_raw(ctx.bits), ctx)


@dataclass(frozen=True)
class BesselK0(BigReal):
    """K0 result carrying the log-space value and an underflow flag.

    When `below_threshold` is set the linear `value` is 0 by convention
    (the true value has decimal exponent below -K0_UNDERFLOW_LOG10) and
    `log_value` is the meaningful field.
    """

    log_value: mpf = mpf(0)
    below_threshold: bool = False


def _k0_series_raw(t: mpf, prec: int) -> mpf:
    """Ascending series K0 = -(ln(t/2)+gamma) I0(t) + sum H_k (t^2/4)^k / (k!)^2.

    The two pieces cancel to ~0.87*t decimal digits, absorbed by widening
    the working precision by 2*t*log2(e) bits.
    """
    cancel_bits = int(2.8854 * float(t)) + 16
    wp = prec + cancel_bits
    with mp.workprec(wp):
        gamma = _euler_gamma_raw(wp)
        q = t * t / 4
        u = mpf(1)
        s_plain = mpf(1)
        s_weighted = mpf(0)
        H = mpf(0)
        k = 0
        floor_shift = -(mp.prec + 6)
        while True:
            k += 1
            u = u * q / (k * k)
            H += mpf(1) / k
            s_plain += u
            s_weighted += u * H
            if u * (H + 1) < mpmath.ldexp(s_plain, floor_shift):
                break
        v = +(-(mpmath.ln(t / 2) + gamma) * s_plain + s_weighted)
    return v


def _k0_asymptotic_terms(t: mpf, prec: int):
    """Sum of the asymptotic correction series 1 - 1/(8t) + 9/(128 t^2) - ...

    Truncated at the smallest term; returns (sum, smallest |term|).  Only
    meaningful when that smallest term is below the needed accuracy, i.e.
    t is past the switch point.
    """
    with mp.workprec(prec + 12):
        a = mpf(1)
        s = mpf(1)
        smallest = mpf(1)
        floor_ = mpmath.ldexp(1, -(prec + 10))
        k = 0
        while True:
            k += 1
            a = a * (-((2 * k - 1) ** 2)) / (8 * k * t)
            mag = abs(a)
            if mag >= smallest:  # divergence onset: stop before the terms grow back
                break
            s += a
            smallest = mag
            if mag < floor_:
                break
        return +s, +smallest


def _k0_switch(prec: int) -> float:
    return K0_SWITCH_SLOPE * _digits_for_bits(prec) + 4.0


def bessel_k0(t, ctx: PrecisionContext) -> BesselK0:
    """Modified Bessel function K0(t) for t > 0.

    Returns a BigReal carrying, additionally, ln K0(t) and a flag for
    arguments so large that the linear value is reported as 0 (decimal
    exponent below -10^6).
    """
    tv = as_mpf(t, ctx)
    if not tv > 0:
        raise DomainError("K0 requires t > 0")
    prec = ctx.bits + 16
    if float(tv) * math.log10(math.e) > K0_UNDERFLOW_LOG10:
        logv = _log_k0_raw(tv, prec)
        return BesselK0(
            value=mpf(0), computed_at_bits=ctx.bits, log_value=logv, below_threshold=True
        )
    if float(tv) < _k0_switch(prec):
        v = _k0_series_raw(tv, prec)
    else:
        s, _ = _k0_asymptotic_terms(tv, prec)
        with mp.workprec(prec + 12):
            v = mpmath.sqrt(mpmath.pi / (2 * tv)) * mpmath.exp(-tv) * s
            v = +v
    with mp.workprec(prec):
        logv = mpmath.ln(v)
    return BesselK0(value=v, computed_at_bits=ctx.bits, log_value=logv)


def _log_k0_raw(t: mpf, prec: int) -> mpf:
    if float(t) < _k0_switch(prec):
        with mp.workprec(prec + 8):
            return +mpmath.ln(_k0_series_raw(t, prec))
    s, _ = _k0_asymptotic_terms(t, prec)
    with mp.workprec(prec + 8):
        v = +(-t + mpmath.ln(mpmath.pi / (2 * t)) / 2 + mpmath.ln(s))
    return v


def log_bessel_k0(t, ctx: PrecisionContext) -> BigReal:
    """ln K0(t), stable for arbitrarily large t (no underflow)."""
    tv = as_mpf(t, ctx)
    if not tv > 0:
        raise DomainError("K0 requires t > 0")
    return make_real(_log_k0_raw(tv, ctx.bits + 16), ctx)


def bessel_k0_integral(t, ctx: PrecisionContext) -> BigReal:
    """Arbiter route: K0(t) = int_0^inf exp(-t cosh u) du by quadrature.

    Slower than the series/asymptotic routes but valid for every t > 0;
    used to referee between them.
    """
    from . import quadrature  # local import keeps the dependency one-way

    tv = as_mpf(t, ctx)
    if not tv > 0:
        raise DomainError("K0 requires t > 0")
    work = ctx.widened(8)
    with mp.workprec(work.bits):
        eps = mpf(10) ** (-(ctx.target_digits + 4))
    # exp(-t cosh u) dives doubly-exponentially; certify the tail so the
    # engine can skip far nodes instead of materializing their exponents
    certificate = quadrature.DecayCertificate(
        beyond=2.0, log_bound=lambda u: -tv * mpmath.cosh(u)
    )
    res = quadrature.integrate_semi_infinite(
        lambda u: mpmath.exp(-tv * mpmath.cosh(u)), 0, eps, work, tail_bound=certificate
    )
    return make_real(res.value.value, ctx)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, tuple) and len(x) == 2:
        return Fraction(x[0], x[1])
    raise TypeError(
        "hypergeometric parameters must be exact rationals "
        "(int, Fraction, or (numerator, denominator))"
    )


def hyp2f1(a, b, c, z, ctx: PrecisionContext) -> BigReal:
    """Gauss hypergeometric series 2F1(a, b; c; z) for |z| < 1.

    Parameters a, b, c are exact rationals; the term recurrence keeps them
    in integer arithmetic so no parameter roundoff enters the sum.
    """
    fa, fb, fc = _as_fraction(a), _as_fraction(b), _as_fraction(c)
    if fc.denominator == 1 and fc <= 0:
        raise DomainError("2F1 is undefined for c a nonpositive integer")
    ctx_bits = ctx.bits
    zv = as_mpf(z, ctx)
    az = abs(zv)
    if not az < 1:
        raise DomainError("2F1 series requires |z| < 1")
    # Terms decay like |z|^k; slow decay near |z|=1 costs log2(#terms) bits.
    if az > 0:
        est_terms = ctx_bits * math.log(2) / min(1.0, -math.log(float(az)) + 1e-12) + 16
    else:
        est_terms = 4
    wp = ctx_bits + 16 + int(math.log2(est_terms + 4))
    an, ad = fa.numerator, fa.denominator
    bn, bd = fb.numerator, fb.denominator
    cn, cd = fc.numerator, fc.denominator
    with mp.workprec(wp):
        term = mpf(1)
        acc = mpf(1)
        floor_shift = -(mp.prec + 6)
        small_streak = 0
        k = 0
        while True:
            p = (an + k * ad) * (bn + k * bd) * cd
            q = (cn + k * cd) * (k + 1) * ad * bd
            if p == 0:
                break  # terminating (polynomial) case
            term = term * p / q * zv
            acc += term
            k += 1
            if abs(term) < mpmath.ldexp(max(abs(acc), mpf(1)), floor_shift):
                small_streak += 1
                if small_streak >= 3:
                    break
            else:
                small_streak = 0
            if k > 20_000_000:
                raise ConvergenceError("2F1 series did not converge (z too close to 1)")
        acc = +acc
    return make_real(acc, ctx)


def _unary(ctx: PrecisionContext, fn, x) -> BigReal:
    xv = as_mpf(x, ctx)
    with mp.workprec(ctx.bits + 8):
        v = +fn(xv)
    return make_real(v, ctx)


def exp(x, ctx: PrecisionContext) -> BigReal:
    return _unary(ctx, mpmath.exp, x)


def ln(x, ctx: PrecisionContext) -> BigReal:
    xv = as_mpf(x, ctx)
    if not xv > 0:
        raise DomainError("ln requires a positive argument")
    return _unary(ctx, mpmath.ln, xv)


def sqrt(x, ctx: PrecisionContext) -> BigReal:
    xv = as_mpf(x, ctx)
    if xv < 0:
        raise DomainError("sqrt requires a nonnegative argument")
    return _unary(ctx, mpmath.sqrt, xv)


def sin(x, ctx: PrecisionContext) -> BigReal:
    return _unary(ctx, mpmath.sin, x)


def nthroot(x, n: int, ctx: PrecisionContext) -> BigReal:
    if not isinstance(n, int) or n < 1:
        raise DomainError("nthroot order must be a positive integer")
    xv = as_mpf(x, ctx)
    if xv < 0 and n % 2 == 0:
        raise DomainError("even-order root of a negative number")
    with mp.workprec(ctx.bits + 8):
        if xv < 0:
            v = -mpmath.root(-xv, n)
        else:
            v = mpmath.root(xv, n)
        v = +v
    return make_real(v, ctx)


def power(x, y, ctx: PrecisionContext) -> BigReal:
    xv = as_mpf(x, ctx)
    yv = as_mpf(y, ctx)
    if xv < 0 and yv != mpmath.floor(yv):
        raise DomainError("negative base requires an integer exponent")
    if xv == 0 and yv < 0:
        raise DomainError("zero cannot be raised to a negative power")
    with mp.workprec(ctx.bits + 8):
        v = +mpmath.power(xv, yv)
    return make_real(v, ctx)


def elementary(op: str, x, ctx: PrecisionContext, operand=None) -> BigReal:
    """Dispatch on an operation name: exp, ln, sqrt, nthroot, sin, power.

    `operand` supplies the root order for nthroot and the exponent for power.
    """
    if op in ("exp", "ln", "sqrt", "sin"):
        if operand is not None:
            raise DomainError(f"{op} takes a single operand")
        return {"exp": exp, "ln": ln, "sqrt": sqrt, "sin": sin}[op](x, ctx)
    if op == "nthroot":
        if operand is None:
            raise DomainError("nthroot needs a root order")
        return nthroot(x, operand, ctx)
    if op == "power":
        if operand is None:
            raise DomainError("power needs an exponent")
        return power(x, operand, ctx)
    raise DomainError(f"unknown elementary operation {op!r}")
