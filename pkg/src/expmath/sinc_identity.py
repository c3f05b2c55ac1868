"""Products of sinc(x/(2k+1)): sum-vs-integral identity and its breakdown.

Both sides of the identity

    1/2 + sum_{n>=1} prod_{k=0}^{N} sinc(n/(2k+1))
        = int_0^inf prod_{k=0}^{N} sinc(x/(2k+1)) dx

are computed independently.  The identity holds exactly while the total
frequency sum_{k=0}^{N} 1/(2k+1) stays below 2*pi (a Poisson-summation
aliasing criterion) and first fails at N = 40249.

Evaluation strategy.  The product of N+1 sines expands exactly into
2^N cosines (N+1 even) or sines (N+1 odd) at frequencies
sum_k (+/-)1/(2k+1), all lying in (0, 2*pi) for N <= 12.  That turns the
infinite sum into finitely many Fourier series sum cos(n*theta)/n^s resp.
sum sin(n*theta)/n^s with known Bernoulli-polynomial closed forms - no
truncation at all.  For larger N the terms die off so fast (D/n^{N+1} with
D = (2N+1)!!) that direct summation with that rigorous tail bound is cheap;
the two routes cross-check each other on overlapping cases.

The integral side uses panel quadrature on [0, T] and, in the expansion
range, closes the tail int_T^inf exactly via cosine/sine-integral
recurrences; beyond the expansion range an envelope truncation with the same
D/(N T^N) bound applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from . import quadrature
from .precision import (
    BigReal,
    ConvergenceError,
    DomainError,
    PrecisionContext,
    PrecisionError,
    as_mpf,
    make_real,
)

#: Largest N handled by the exact trigonometric expansion (2^N terms).
EXPANSION_LIMIT = 12

#: Direct summation refuses more terms than this.
_DIRECT_TERM_CAP = 5_000_000


@dataclass(frozen=True)
class SincIdentityReport:
    N: int
    lhs: BigReal
    rhs: BigReal
    difference: BigReal
    truncation_bound: BigReal


def sinc(x, ctx: PrecisionContext | None = None) -> BigReal:
    """sin(x)/x extended continuously by sinc(0) = 1."""
    bits = ctx.bits if ctx is not None else None
    if bits is None:
        bits = x.computed_at_bits if isinstance(x, BigReal) else 113
    xv = x.value if isinstance(x, BigReal) else as_mpf(x, PrecisionContext(max(64, bits), 15))
    with mp.workprec(bits + 8):
        if xv == 0:
            v = mpf(1)
        elif abs(xv) < mpf(2) ** -12:
            # tiny arguments: alternating series 1 - x^2/6 + x^4/120 - ...
            x2 = xv * xv
            term = mpf(1)
            v = mpf(1)
            k = 0
            floor_ = mpmath.ldexp(1, -(mp.prec + 4))
            while abs(term) > floor_:
                k += 1
                term = term * (-x2) / ((2 * k) * (2 * k + 1))
                v += term
        else:
            v = mpmath.sin(xv) / xv
        v = +v
    return BigReal(value=v, computed_at_bits=bits)


@lru_cache(maxsize=32)
def _expansion(N: int):
    """Exact expansion of prod_{k=0}^{N} sin(x/(2k+1)).

    Returns (terms, constant) where terms maps (kind, frequency: Fraction)
    to a Fraction coefficient, kind is 'cos' or 'sin', and constant is the
    coefficient of 1 (arising from any zero frequency).  Built by repeated
    product-to-sum rewriting; all arithmetic exact.
    """
    terms = {("sin", Fraction(1)): Fraction(1)}
    constant = Fraction(0)
    for k in range(1, N + 1):
        w = Fraction(1, 2 * k + 1)
        new: dict = {}
        new_constant = Fraction(0)

        def put(kind, freq, coeff):
            nonlocal new_constant
            if freq < 0:
                freq = -freq
                if kind == "sin":
                    coeff = -coeff
            if freq == 0:
                if kind == "cos":
                    new_constant += coeff
                return
            key = (kind, freq)
            new[key] = new.get(key, Fraction(0)) + coeff

        for (kind, freq), coeff in terms.items():
            if kind == "sin":
                put("cos", freq - w, coeff / 2)
                put("cos", freq + w, -coeff / 2)
            else:
                put("sin", freq + w, coeff / 2)
                put("sin", freq - w, -coeff / 2)
        if constant:
            key = ("sin", w)
            new[key] = new.get(key, Fraction(0)) + constant
        terms = {key: val for key, val in new.items() if val != 0}
        constant = new_constant
    return terms, constant


@lru_cache(maxsize=None)
def _bernoulli_number(m: int) -> Fraction:
    if m == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(m):
        acc += math.comb(m + 1, j) * _bernoulli_number(j)
    return -acc / (m + 1)


def _bernoulli_poly(s: int, x: mpf) -> mpf:
    acc = mpf(0)
    for j in range(s + 1):
        c = Fraction(math.comb(s, j)) * _bernoulli_number(j)
        acc += mpf(c.numerator) / c.denominator * x ** (s - j)
    return acc


def _fourier_power_series(kind: str, s: int, theta: mpf) -> mpf:
    """sum_{n>=1} cos(n theta)/n^s (s even) or sin(n theta)/n^s (s odd).

    Valid for theta in [0, 2*pi]; closed Bernoulli-polynomial forms.
    """
    if kind == "cos":
        if s % 2 != 0 or s < 2:
            raise ValueError("cosine series needs even s >= 2")
        sign = -1 if (1 + s // 2) % 2 else 1
    else:
        if s % 2 != 1 or s < 1:
            raise ValueError("sine series needs odd s >= 1")
        if s == 1:
            return (mpmath.pi - theta) / 2
        sign = -1 if ((s + 1) // 2) % 2 else 1
    two_pi = 2 * mpmath.pi
    x = theta / two_pi
    return sign * two_pi ** s / (2 * mpmath.factorial(s)) * _bernoulli_poly(s, x)


def _odd_double_factorial(N: int) -> int:
    out = 1
    for k in range(N + 1):
        out *= 2 * k + 1
    return out


def _frac_to_mpf(fr: Fraction) -> mpf:
    return mpf(fr.numerator) / fr.denominator


def sinc_sum(N: int, eps, ctx: PrecisionContext) -> BigReal:
    """1/2 + sum_{n>=1} prod_{k=0}^{N} sinc(n/(2k+1)).

    For N <= EXPANSION_LIMIT the sum is evaluated in closed form (the only
    error is roundoff, far below any admissible eps); beyond that, by
    direct summation truncated under the D/(N n^N) tail bound.
    """
    if N < 1:
        raise DomainError("N must be at least 1")
    if N <= EXPANSION_LIMIT:
        terms, constant = _expansion(N)
        s = N + 1
        D = _odd_double_factorial(N)
        wp = ctx.bits + 96
        with mp.workprec(wp):
            acc = mpf(0)
            for (kind, freq), coeff in sorted(terms.items(), key=lambda kv: (kv[0][1], kv[0][0])):
                theta = _frac_to_mpf(freq)
                acc += _frac_to_mpf(coeff) * _fourier_power_series(kind, s, theta)
            if constant:
                acc += _frac_to_mpf(constant) * _fourier_power_series("cos", s, mpf(0))
            total = +(mpf(1) / 2 + D * acc)
        return make_real(total, ctx)
    value, _bound = _direct_sum(N, eps, ctx)
    return make_real(value, ctx)


def sinc_sum_direct(N: int, eps, ctx: PrecisionContext) -> BigReal:
    """The truncated-summation route, exposed as an independent cross-check."""
    if N < 1:
        raise DomainError("N must be at least 1")
    value, _bound = _direct_sum(N, eps, ctx)
    return make_real(value, ctx)


def _direct_terms_needed(N: int, eps_tail: float) -> int:
    D = _odd_double_factorial(N)
    # tail past M: sum_{n>M} D/n^{N+1} < D/(N*M^N)
    log_m = (math.log10(D) - math.log10(N) - math.log10(eps_tail)) / N
    return int(math.ceil(10 ** log_m)) + 2


def _direct_sum(N: int, eps, ctx: PrecisionContext):
    with mp.workprec(ctx.bits + 48):
        eps_v = mpf(eps)
        if not eps_v > 0:
            raise ValueError("eps must be positive")
        M = _direct_terms_needed(N, float(eps_v) / 2)
        if M > _DIRECT_TERM_CAP:
            raise ConvergenceError(
                f"direct summation would need {M} terms for N={N} at eps={mpmath.nstr(eps_v, 3)}"
            )
        recip = [mpf(1) / (2 * k + 1) for k in range(N + 1)]
        total = mpf(1) / 2
        for n in range(1, M + 1):
            prod = mpf(1)
            for r in recip:
                x = n * r
                prod *= mpmath.sin(x) / x
                if prod == 0:
                    break
            total += prod
        D = _odd_double_factorial(N)
        bound = +(mpf(D) / (N * mpf(M) ** N))
        return +total, bound


def _tail_integral_pair(v: mpf, s: int):
    """(I_s, J_s) with I_s = int_v^inf cos(u)/u^s du, J_s the sine version.

    Built upward from I_1 = -Ci(v), J_1 = pi/2 - Si(v) via integration by
    parts; each step loses ~log10(v) digits to cancellation, which the
    caller's widened precision absorbs.
    """
    I = -mpmath.ci(v)
    J = mpmath.pi / 2 - mpmath.si(v)
    if s == 1:
        return I, J
    cos_v = mpmath.cos(v)
    sin_v = mpmath.sin(v)
    for m in range(2, s + 1):
        vp = v ** (m - 1)
        I_next = cos_v / ((m - 1) * vp) - J / (m - 1)
        J_next = sin_v / ((m - 1) * vp) + I / (m - 1)
        I, J = I_next, J_next
    return I, J


def _product_integrand(N: int):
    recip_idx = list(range(N + 1))

    def f(x: mpf) -> mpf:
        prod = mpf(1)
        for k in recip_idx:
            arg = x / (2 * k + 1)
            if arg == 0:
                continue
            prod *= mpmath.sin(arg) / arg
        return prod

    return f


def sinc_integral(N: int, eps, ctx: PrecisionContext) -> BigReal:
    """int_0^inf prod_{k=0}^{N} sinc(x/(2k+1)) dx to within eps."""
    if N < 1:
        raise DomainError("N must be at least 1")
    exact_tail = N <= EXPANSION_LIMIT
    with mp.workprec(ctx.bits + 32):
        eps_v = mpf(eps)
        if not eps_v > 0:
            raise ValueError("eps must be positive")
    if exact_tail:
        T = 48
    else:
        D = _odd_double_factorial(N)
        log_t = (math.log10(2 * D) - math.log10(N) - math.log10(float(eps_v))) / N
        T = int(math.ceil(10 ** log_t)) + 1
    f = _product_integrand(N)
    panel_len = 3
    n_panels = (T + panel_len - 1) // panel_len
    panel_eps = eps_v / (4 * n_panels)
    total_err_budget = mpf(0)
    with mp.workprec(ctx.bits + 32):
        acc = mpf(0)
    for i in range(n_panels):
        lo = i * panel_len
        hi = min(T, lo + panel_len)
        res = quadrature.integrate_finite(f, lo, hi, panel_eps, ctx)
        if not res.converged:
            raise ConvergenceError(f"panel [{lo},{hi}] of the sinc integral did not converge")
        with mp.workprec(ctx.bits + 32):
            acc += res.value.value
            total_err_budget += abs(res.error_estimate.value)
    if exact_tail:
        tail = _expansion_tail(N, T, ctx)
        with mp.workprec(ctx.bits + 32):
            acc = +(acc + tail)
    with mp.workprec(ctx.bits + 32):
        acc = +acc
    return make_real(acc, ctx)


def _expansion_tail(N: int, T: int, ctx: PrecisionContext) -> mpf:
    """Exact int_T^inf of the product via the trigonometric expansion."""
    terms, constant = _expansion(N)
    s = N + 1
    D = _odd_double_factorial(N)
    # the by-parts recurrence cancels ~ (omega*T)^{s-1} per component
    vmax = 3.0 * T
    wp = ctx.bits + 96 + int(s * math.log2(max(4.0, vmax)))
    with mp.workprec(wp):
        Tm = mpf(T)
        acc = mpf(0)
        for (kind, freq), coeff in sorted(terms.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            w = _frac_to_mpf(freq)
            v = w * Tm
            I, J = _tail_integral_pair(v, s)
            piece = I if kind == "cos" else J
            acc += _frac_to_mpf(coeff) * w ** (s - 1) * piece
        if constant:
            acc += _frac_to_mpf(constant) / ((s - 1) * Tm ** (s - 1))
        return +(D * acc)


def identity_report(N: int, eps, ctx: PrecisionContext) -> SincIdentityReport:
    """Evaluate both sides and package the comparison."""
    lhs = sinc_sum(N, eps, ctx)
    rhs = sinc_integral(N, eps, ctx)
    with mp.workprec(ctx.bits + 16):
        diff = +(lhs.value - rhs.value)
        rounding = mpmath.ldexp(max(1, abs(lhs.value)), -(ctx.bits - 8))
        if N <= EXPANSION_LIMIT:
            # sum side is exact; the integral side still carries its eps
            bound = +(mpf(eps) + rounding)
        else:
            bound = +(2 * mpf(eps) + rounding)
    return SincIdentityReport(
        N=N,
        lhs=lhs,
        rhs=rhs,
        difference=make_real(diff, ctx),
        truncation_bound=make_real(bound, ctx),
    )


def threshold_scan(threshold, ctx: PrecisionContext) -> int:
    """Smallest N with sum_{k=0}^{N} 1/(2k+1) > threshold (strict).

    The running sum carries extra precision; any comparison too close to
    call at working precision is retried at higher precision, or decided by
    exact rational arithmetic when the threshold is an exact Fraction and
    the crossing happens early enough for that to be affordable.
    """
    exact = threshold if isinstance(threshold, Fraction) else None
    base = exact if exact is not None else as_mpf(threshold, ctx)
    with mp.workprec(ctx.bits + 16):
        probe = _frac_to_mpf(exact) if exact is not None else base
        if not probe > 1:
            raise DomainError("threshold must exceed 1 (the first term)")
    prec = ctx.bits + 48
    for _attempt in range(4):
        result = _scan_once(base, prec)
        if result is not None:
            return result
        prec *= 2
    raise PrecisionError("threshold comparison remained ambiguous at escalated precision")


def _scan_once(threshold, prec: int):
    exact = threshold if isinstance(threshold, Fraction) else None
    with mp.workprec(prec):
        # A Fraction re-rounds at each scan precision; a plain mpf is taken
        # verbatim, making the given binary value the threshold by definition.
        thr = _frac_to_mpf(exact) if exact is not None else mpf(threshold)
        total = mpf(0)
        margin_unit = mpmath.ldexp(1, -(prec - 6))
        k = 0
        while True:
            total += mpf(1) / (2 * k + 1)
            gap = total - thr
            if abs(gap) <= (k + 4) * margin_unit * max(1, total):
                if exact is not None and k <= 4000:
                    exact_sum = sum((Fraction(1, 2 * j + 1) for j in range(k + 1)), Fraction(0))
                    if exact_sum > exact:
                        return k
                else:
                    return None  # too close to call; caller escalates precision
            elif gap > 0:
                return k
            k += 1
            if k > 10_000_000:
                raise ConvergenceError("threshold scan ran away; threshold too large")
