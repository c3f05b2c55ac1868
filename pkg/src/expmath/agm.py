"""Quadratic and cubic arithmetic-geometric means, and AGM-based pi.

The classical mean iterates a' = (a+b)/2, b' = sqrt(ab); the cubic variant
iterates a' = (a+2b)/3, b' = cbrt(b (a^2+ab+b^2)/3).  Both converge to a
common limit, quadratically resp. cubically.  The pi algorithm is the
Gauss-Legendre/Brent-Salamin scheme whose error roughly squares each
iteration:

    a0=1, b0=1/sqrt(2), t0=1/4, x0=1
    a' = (a+b)/2, b' = sqrt(ab), t' = t - x (a-a')^2, x' = 2x
    pi ~ (a'+b')^2 / (4 t')
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
    PrecisionError,
    as_mpf,
    make_real,
)


@dataclass(frozen=True)
class AGMState:
    a: mpf
    b: mpf
    iteration: int


@dataclass(frozen=True)
class PiResult:
    value: BigReal
    iterations: int
    per_iteration_error: tuple


def _agm_states(a: mpf, b: mpf, prec: int, stop: mpf, cubic: bool):
    with mp.workprec(prec):
        if a < b:
            a, b = b, a
        states = [AGMState(a=+a, b=+b, iteration=0)]
        for it in range(1, 24 * int(math.log2(prec)) + 64):
            if abs(a - b) <= stop * a:
                break
            if cubic:
                a, b = (a + 2 * b) / 3, mpmath.cbrt(b * (a * a + a * b + b * b) / 3)
            else:
                a, b = (a + b) / 2, mpmath.sqrt(a * b)
            states.append(AGMState(a=+a, b=+b, iteration=it))
        else:
            raise ConvergenceError("AGM iteration failed to close its gap")
    return states


def agm_states(a, b, ctx: PrecisionContext, *, cubic: bool = False):
    """The full iteration trajectory, for inspection and property tests."""
    av, bv = as_mpf(a, ctx), as_mpf(b, ctx)
    if not (av > 0 and bv > 0):
        raise DomainError("AGM requires strictly positive starting values")
    with mp.workprec(ctx.bits + 16):
        stop = mpf(10) ** (-(ctx.target_digits + 2))
    return tuple(_agm_states(av, bv, ctx.bits + 16, stop, cubic))


def agm2(a, b, ctx: PrecisionContext) -> BigReal:
    """Common limit of the classical (quadratic) mean iteration."""
    states = agm_states(a, b, ctx, cubic=False)
    last = states[-1]
    with mp.workprec(ctx.bits + 16):
        v = +((last.a + last.b) / 2)
    return make_real(v, ctx)


def agm3(a, b, ctx: PrecisionContext) -> BigReal:
    """Common limit of the cubic mean iteration."""
    states = agm_states(a, b, ctx, cubic=True)
    last = states[-1]
    with mp.workprec(ctx.bits + 16):
        v = +((last.a + last.b) / 2)
    return make_real(v, ctx)


def _gl_approximations(iterations: int, prec: int):
    """List of pi approximations after 1..iterations Gauss-Legendre steps."""
    with mp.workprec(prec):
        a = mpf(1)
        b = 1 / mpmath.sqrt(2)
        t = mpf(1) / 4
        x = mpf(1)
        out = []
        for _ in range(iterations):
            an = (a + b) / 2
            b = mpmath.sqrt(a * b)
            t = t - x * (a - an) ** 2
            x = 2 * x
            a = an
            out.append(+((a + b) ** 2 / (4 * t)))
    return out


def _max_useful_iterations(ref_bits: int) -> int:
    # error after k iterations ~ 10^(-0.6 * 2^(k+1)); the internal reference
    # must still resolve it, so cap k before the error hits the reference's floor
    ref_digits = ref_bits * math.log10(2.0)
    cap = max(1.0, (ref_digits - 4) / 0.6)
    return max(1, int(math.log2(cap)) - 1)


def gauss_legendre_pi(iterations: int, ctx: PrecisionContext) -> PiResult:
    """Run the quadratically convergent pi iteration with error tracking.

    Per-iteration errors are measured against an internal reference computed
    at ctx.bits + 64 with two extra iterations, so they remain meaningful
    without any externally supplied value of pi.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    ref_bits = ctx.bits + 64
    if iterations > _max_useful_iterations(ref_bits):
        raise PrecisionError(
            f"precision exhausted: {iterations} iterations would converge past "
            f"what {ctx.bits}-bit arithmetic can resolve"
        )
    approx = _gl_approximations(iterations, ctx.bits)
    reference = _gl_approximations(iterations + 2, ref_bits)[-1]
    errors = []
    with mp.workprec(ref_bits):
        for apx in approx:
            errors.append(+abs(apx - reference))
    for earlier, later in zip(errors, errors[1:]):
        if not later < earlier:
            raise PrecisionError(
                "per-iteration errors stopped decreasing; working precision "
                "cannot support the requested iteration count"
            )
    return PiResult(
        value=make_real(approx[-1], ctx),
        iterations=iterations,
        per_iteration_error=tuple(BigReal(e, ref_bits) for e in errors),
    )


def archimedes_bounds() -> tuple[Fraction, Fraction]:
    """The classical rational bracket 223/71 < pi < 22/7."""
    return (Fraction(223, 71), Fraction(22, 7))


@lru_cache(maxsize=64)
def pi_raw(prec: int) -> mpf:
    """pi at `prec` bits from the Gauss-Legendre iteration (cached)."""
    work = prec + 32
    digits = work * math.log10(2.0)
    iterations = max(3, int(math.log2(digits / 0.6)) + 2)
    return _gl_approximations(iterations, work)[-1]


def pi_value(ctx: PrecisionContext) -> BigReal:
    """pi as a BigReal at the context's precision."""
    return make_real(pi_raw(ctx.bits), ctx)
