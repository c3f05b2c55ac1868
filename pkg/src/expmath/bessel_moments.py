"""The Bessel-moment integrals C_n = (2^n/n!) int_0^inf t K0^n(t) dt.

These one-dimensional moments equal the n-fold lattice-style integrals

    C_n = (4/n!) int_0^inf ... int_0^inf (sum_j (u_j + 1/u_j))^{-2} du_1/u_1 ... du_n/u_n,

a reduction this module exploits computationally; the n-fold form is kept
only as a two-dimensional consistency oracle (`c2_double_integral`).  The
sequence decreases monotonically from C_1 = 2 toward the limit 2 e^{-2 gamma}.

For large n the integrand t K0^n(t) underflows any fixed-exponent window long
before it stops mattering, so the product is accumulated in log space,
exp(ln t + n ln K0(t)), with the constant prefactor folded in to keep the
integrand O(1).  A decay certificate derived from the strict bound
K0(t) < sqrt(pi/(2t)) e^{-t} (valid for t >= 2) lets the quadrature engine
skip far-tail nodes without evaluating them.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from . import functions, quadrature
from .precision import (
    BigReal,
    ConvergenceError,
    PrecisionContext,
    make_real,
)

#: ln K0 memo shared across integrals and across n, keyed by the exact
#: binary argument and working precision.
_LOG_K0_CACHE: dict = {}
_LOG_K0_CACHE_LIMIT = 400_000


def _log_k0_cached(t: mpf, prec: int) -> mpf:
    key = (t._mpf_, prec)
    hit = _LOG_K0_CACHE.get(key)
    if hit is None:
        hit = functions._log_k0_raw(t, prec)
        if len(_LOG_K0_CACHE) < _LOG_K0_CACHE_LIMIT:
            _LOG_K0_CACHE[key] = hit
    return hit


@dataclass(frozen=True)
class CnRecord:
    n: int
    value: BigReal
    error_estimate: BigReal

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        v = self.value.value
        slack = max(abs(self.error_estimate.value) * 4, mpf(10) ** -18)
        if not (mpf("0.63") < v <= 2 + slack):
            raise ValueError(
                f"C_{self.n} = {v} falls outside the (0.63, 2] bracket "
                "implied by C_1 and the limit"
            )


def _default_eps(ctx: PrecisionContext) -> mpf:
    with mp.workprec(64):
        return mpf(10) ** (-min(25, ctx.target_digits - 5))


def c_n(n: int, ctx: PrecisionContext, eps=None) -> CnRecord:
    """One Bessel moment C_n to absolute accuracy eps.

    Raises ConvergenceError if the quadrature cannot reach eps within its
    level budget at this context's precision.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    prec = ctx.bits + 16
    with mp.workprec(prec):
        eps_v = _default_eps(ctx) if eps is None else mpf(eps)
        ln2 = mpmath.ln(2)
        prefactor = n * ln2 - mpmath.loggamma(n + 1)
        half_log = mpmath.ln(mpmath.pi) / 2
        exp_floor = -(mpf(prec) * ln2 + 64)

        def integrand(t: mpf) -> mpf:
            arg = prefactor + mpmath.ln(t) + n * _log_k0_cached(t, prec)
            if arg < exp_floor:
                return mpf(0)
            return mpmath.exp(arg)

        def log_bound(t: mpf) -> mpf:
            # K0(t) < sqrt(pi/(2t)) e^{-t} for t >= 2 (alternating-tail bracket)
            return prefactor + mpmath.ln(t) + n * (half_log - mpmath.ln(2 * t) / 2 - t)

    certificate = quadrature.DecayCertificate(beyond=2.0, log_bound=log_bound)
    result = quadrature.integrate_semi_infinite(integrand, 0, eps_v, ctx, certificate)
    if not result.converged:
        raise ConvergenceError(
            f"C_{n} quadrature did not reach eps={mpmath.nstr(eps_v, 4)} "
            f"(best estimate {mpmath.nstr(result.error_estimate.value, 4)})"
        )
    return CnRecord(n=n, value=result.value, error_estimate=result.error_estimate)


def c_infinity(ctx: PrecisionContext) -> BigReal:
    """The limit of the C_n sequence: 2 e^{-2 gamma}."""
    work = ctx.widened(5)
    with mp.workprec(work.bits):
        g = functions.euler_gamma(work).value
        v = +(2 * mpmath.exp(-2 * g))
    return make_real(v, ctx)


def monotonicity_scan(n_max: int, ctx: PrecisionContext, eps=None):
    """CnRecords for n = 1..n_max, in order."""
    if n_max < 2:
        raise ValueError("a scan needs n_max >= 2")
    return [c_n(n, ctx, eps) for n in range(1, n_max + 1)]


def find_monotonicity_violations(records) -> list:
    """Adjacent pairs whose decrease is not resolved beyond combined error bars."""
    out = []
    for first, second in zip(records, records[1:]):
        gap = first.value.value - second.value.value
        bar = abs(first.error_estimate.value) + abs(second.error_estimate.value)
        if not gap > bar:
            out.append((first.n, second.n))
    return out


#: cosh memo for the 2-D oracle's inner integrand.
_COSH_CACHE: dict = {}


def _cosh_cached(s: mpf, prec: int) -> mpf:
    key = (s._mpf_, prec)
    hit = _COSH_CACHE.get(key)
    if hit is None:
        hit = mpmath.cosh(s)
        if len(_COSH_CACHE) < _LOG_K0_CACHE_LIMIT:
            _COSH_CACHE[key] = hit
    return hit


def c2_double_integral(ctx: PrecisionContext, eps=None) -> BigReal:
    """C_2 straight from its 2-fold definition, with no Bessel reduction.

    Substituting u_j = e^{s_j} in the defining integral and folding the
    fourfold even symmetry gives

        C_2 = 2 int_0^inf int_0^inf (cosh s1 + cosh s2)^{-2} ds1 ds2,

    evaluated as nested one-dimensional quadratures.  Serves as the
    independent consistency oracle for c_n(2).
    """
    prec = ctx.bits + 16
    with mp.workprec(prec):
        eps_v = _default_eps(ctx) if eps is None else mpf(eps)
        inner_eps = eps_v / 64

    def outer(s1: mpf) -> mpf:
        c1 = _cosh_cached(s1, prec)

        def inner(s2: mpf) -> mpf:
            c2 = _cosh_cached(s2, prec)
            return 1 / (c1 + c2) ** 2

        res = quadrature.integrate_semi_infinite(inner, 0, inner_eps, ctx)
        if not res.converged:
            raise ConvergenceError("inner integral of the 2-D oracle did not converge")
        return res.value.value

    result = quadrature.integrate_semi_infinite(outer, 0, eps_v, ctx)
    if not result.converged:
        raise ConvergenceError("outer integral of the 2-D oracle did not converge")
    with mp.workprec(prec):
        v = +(2 * result.value.value)
    return make_real(v, ctx)


def records_to_csv(records, digits: int) -> str:
    """CSV export: header n,value,error_estimate with decimal-string cells."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "value", "error_estimate"])
    for rec in records:
        err = rec.error_estimate.value
        err_digits = max(3, min(digits, 6))
        writer.writerow(
            [
                rec.n,
                rec.value.to_decimal(digits),
                "0" if err == 0 else rec.error_estimate.to_decimal(err_digits),
            ]
        )
    return buf.getvalue()
