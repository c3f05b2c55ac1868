"""Integer-relation detection and identification of decimals as closed forms.

A from-scratch PSLQ implementation drives everything: given reals
(v_1, ..., v_n) it either finds a nonzero integer vector m with
sum m_i v_i ~ 0, or certifies that no relation exists with coefficients
below a cap.  On top of that, `recognize` plays miniature inverse symbolic
calculator: it scans subsets of a basis of named constants, keeps relations
that involve the target value, re-verifies each at higher precision, and
renders the implied closed form ("2*exp(-2*gamma)").
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
from mpmath import mp, mpf

from . import agm, functions
from .precision import (
    BigReal,
    DomainError,
    PrecisionContext,
    PrecisionError,
    as_mpf,
    make_real,
)

#: No relation with any coefficient beyond this is ever reported.
COEFFICIENT_CAP = 10 ** 6

#: Residuals must sit at least this many digits below the precision budget.
SAFETY_DIGITS = 15


@dataclass(frozen=True)
class BasisConstant:
    """A named constant that can be regenerated at any precision."""

    name: str
    render: str
    make: Callable[[PrecisionContext], BigReal]
    value: BigReal = field(compare=False)

    def at(self, ctx: PrecisionContext) -> BigReal:
        return self.make(ctx)


def basis_constant(name: str, render: str, make, ctx: PrecisionContext) -> BasisConstant:
    return BasisConstant(name=name, render=render, make=make, value=make(ctx))


@dataclass(frozen=True)
class RecognitionMatch:
    coefficients: tuple
    residual: BigReal
    confidence_digits: int
    rendering: str

    def __post_init__(self):
        if not any(self.coefficients):
            raise ValueError("a recognition match needs a nonzero coefficient vector")
        g = math.gcd(*(abs(int(c)) for c in self.coefficients))
        if g != 1:
            raise ValueError("coefficients must be in lowest terms")


def _normalize_relation(rel: Sequence[int]) -> tuple:
    g = math.gcd(*(abs(int(c)) for c in rel))
    if g > 1:
        rel = [c // g for c in rel]
    for c in rel:
        if c != 0:
            if c < 0:
                rel = [-x for x in rel]
            break
    return tuple(int(c) for c in rel)


def _coerce_values(values, precision_digits: int):
    need_bits = int(math.ceil(precision_digits * math.log2(10)))
    ctx = PrecisionContext.from_digits(precision_digits + 10)
    out = []
    for v in values:
        if isinstance(v, BigReal):
            if v.computed_at_bits < need_bits:
                raise PrecisionError(
                    f"value carries {v.computed_at_bits} bits, below the "
                    f"{need_bits} needed for {precision_digits} digits"
                )
            out.append(v.value)
        else:
            out.append(as_mpf(v, ctx))
    return out


def find_integer_relation(
    values,
    precision_digits: int,
    coefficient_cap: int = COEFFICIENT_CAP,
):
    """Integer vector m with |sum m_i v_i| below 10^-(digits-safety), or None.

    None means: no relation with all |m_i| <= coefficient_cap detectable at
    this precision.  A residual that plateaus above the acceptance threshold
    while the iteration floor is reached raises PrecisionError instead of
    guessing.
    """
    if len(values) < 2:
        raise DomainError("integer-relation detection needs at least two values")
    if precision_digits < 10:
        raise DomainError("precision budget below 10 digits is meaningless here")
    xs = _coerce_values(values, precision_digits)
    prec = int((precision_digits + 20) * 3.33) + 32
    rel = _pslq(xs, prec, precision_digits, coefficient_cap)
    return None if rel is None else tuple(rel)


def _pslq(xs, prec: int, precision_digits: int, cap: int):
    n = len(xs)
    with mp.workprec(prec):
        scale = max(abs(x) for x in xs)
        if scale == 0:
            raise DomainError("all-zero input has every vector as a relation")
        accept = mpf(10) ** (-(precision_digits - SAFETY_DIGITS)) * max(1, scale)
        detect = mpf(10) ** (-(precision_digits - SAFETY_DIGITS + 3))
        noise_floor = mpmath.ldexp(1, -(prec - 24))
        gamma = mpmath.sqrt(mpf(4) / 3) + mpf(1) / 128

        norm = mpmath.sqrt(mpmath.fsum(x * x for x in xs))
        y = [x / norm for x in xs]
        s = [mpf(0)] * n
        acc = mpf(0)
        for k in range(n - 1, -1, -1):
            acc += y[k] * y[k]
            s[k] = mpmath.sqrt(acc)
        H = [[mpf(0)] * (n - 1) for _ in range(n)]
        for j in range(n - 1):
            H[j][j] = s[j + 1] / s[j]
            for i in range(j + 1, n):
                H[i][j] = -y[i] * y[j] / (s[j] * s[j + 1])
        A = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        B = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

        def reduce_rows():
            for i in range(1, n):
                for j in range(i - 1, -1, -1):
                    if H[j][j] == 0:
                        continue
                    t = mpmath.nint(H[i][j] / H[j][j])
                    if t == 0:
                        continue
                    ti = int(t)
                    y[j] += ti * y[i]
                    for k in range(j + 1):
                        H[i][k] -= ti * H[j][k]
                    for k in range(n):
                        A[i][k] -= ti * A[j][k]
                        B[k][j] += ti * B[k][i]

        def candidate(col: int):
            """Verdicts: ('accept', rel), ('cap', None) for a verified
            relation with a coefficient above the cap, ('reject', None)."""
            rel = [B[k][col] for k in range(n)]
            if not any(rel):
                return "reject", None
            with mp.workprec(prec + 32):
                resid = abs(mpmath.fsum(mpf(c) * x for c, x in zip(rel, xs)))
            if resid >= accept:
                return "reject", None
            if max(abs(c) for c in rel) > cap:
                return "cap", None
            return "accept", list(_normalize_relation(rel))

        reduce_rows()
        max_iter = 64 * n * n + 256 * precision_digits
        for _ in range(max_iter):
            small = min(range(n), key=lambda i: abs(y[i]))
            if abs(y[small]) < detect:
                verdict, rel = candidate(small)
                if verdict == "accept":
                    return rel
                if abs(y[small]) < noise_floor:
                    if verdict == "cap":
                        # a genuine relation exists but lies outside the cap;
                        # nothing within the cap remains detectable
                        return None
                    raise PrecisionError(
                        "residual plateau: working precision exhausted before a "
                        "relation could be confirmed or excluded"
                    )
            diag_max = max(abs(H[j][j]) for j in range(n - 1))
            if diag_max > 0 and 1 / diag_max > cap:
                # every surviving relation would need a coefficient above the cap
                return None

            powg = mpf(1)
            m, best = 0, None
            for i in range(n - 1):
                powg *= gamma
                v = powg * abs(H[i][i])
                if best is None or v > best:
                    best, m = v, i
            y[m], y[m + 1] = y[m + 1], y[m]
            A[m], A[m + 1] = A[m + 1], A[m]
            H[m], H[m + 1] = H[m + 1], H[m]
            for k in range(n):
                B[k][m], B[k][m + 1] = B[k][m + 1], B[k][m]
            if m < n - 2:
                t0 = mpmath.hypot(H[m][m], H[m][m + 1])
                if t0 != 0:
                    t1 = H[m][m] / t0
                    t2 = H[m][m + 1] / t0
                    for i in range(m, n):
                        t3, t4 = H[i][m], H[i][m + 1]
                        H[i][m] = t1 * t3 + t2 * t4
                        H[i][m + 1] = t1 * t4 - t2 * t3
            reduce_rows()
        raise PrecisionError(
            "relation search exhausted its iteration budget without a verdict"
        )


# ---------------------------------------------------------------------------
# the constant vocabulary


def _make_one(ctx: PrecisionContext) -> BigReal:
    return make_real(1, ctx)


def _make_gamma(ctx: PrecisionContext) -> BigReal:
    return functions.euler_gamma(ctx)


def _make_em2gamma(ctx: PrecisionContext) -> BigReal:
    wide = ctx.widened(10)
    g = functions.euler_gamma(wide)
    with mp.workprec(wide.bits):
        return make_real(mpmath.exp(-2 * g.value), ctx)


def _make_zeta3(ctx: PrecisionContext) -> BigReal:
    return functions.zeta3(ctx)


def _make_pi(ctx: PrecisionContext) -> BigReal:
    return agm.pi_value(ctx)


def _make_pi2(ctx: PrecisionContext) -> BigReal:
    wide = ctx.widened(10)
    p = agm.pi_value(wide)
    with mp.workprec(wide.bits):
        return make_real(p.value * p.value, ctx)


def _make_e(ctx: PrecisionContext) -> BigReal:
    return functions.exp(1, ctx)


_BASIS_FACTORIES = {
    "one": ("1", _make_one),
    "gamma": ("gamma", _make_gamma),
    "em2gamma": ("exp(-2*gamma)", _make_em2gamma),
    "zeta3": ("zeta(3)", _make_zeta3),
    "pi": ("pi", _make_pi),
    "pi2": ("pi^2", _make_pi2),
    "e": ("exp(1)", _make_e),
}


def basis_names() -> list:
    return sorted(_BASIS_FACTORIES)


def standard_basis(names, ctx: PrecisionContext) -> list:
    """Build BasisConstant records for the given registry names."""
    out = []
    for name in names:
        try:
            render, make = _BASIS_FACTORIES[name]
        except KeyError:
            raise DomainError(
                f"unknown basis constant {name!r}; available: {', '.join(basis_names())}"
            ) from None
        out.append(BasisConstant(name=name, render=render, make=make, value=make(ctx)))
    return out


def default_basis(ctx: PrecisionContext) -> list:
    return standard_basis(["one", "gamma", "em2gamma", "zeta3", "pi2"], ctx)


# ---------------------------------------------------------------------------
# recognition


def _render_match(rel, basis) -> str:
    """Express value = -(sum_i m_i b_i)/m_0 as a readable closed form."""
    m0 = rel[0]
    pieces = []
    for mi, b in zip(rel[1:], basis):
        if mi == 0:
            continue
        q = Fraction(-mi, m0)
        mag = abs(q)
        if b.name == "one" or b.render == "1":
            body = f"{mag.numerator}" if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        elif mag == 1:
            body = b.render
        elif mag.denominator == 1:
            body = f"{mag.numerator}*{b.render}"
        else:
            body = f"{mag.numerator}/{mag.denominator}*{b.render}"
        pieces.append(("-" if q < 0 else "+", body))
    if not pieces:
        return "0"
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def recognize(value, basis, precision_digits: int):
    """Identify `value` as a rational combination of basis constants.

    Scans subsets of the basis smallest-first, keeps integer relations in
    which the value itself participates, re-verifies every candidate with
    the basis regenerated at precision_digits + 20, and returns matches
    sorted by (residual, coefficient norm).  Empty list when nothing passes.
    """
    ctx = PrecisionContext.from_digits(precision_digits + 10)
    target = value if isinstance(value, BigReal) else make_real(as_mpf(value, ctx), ctx)
    sharp_ctx = PrecisionContext.from_digits(precision_digits + 30)
    sharp = {b.name: b.at(sharp_ctx) for b in basis}

    found = {}
    for size in range(1, len(basis) + 1):
        for combo in itertools.combinations(range(len(basis)), size):
            subset = [basis[i] for i in combo]
            try:
                rel = find_integer_relation(
                    [target] + [b.value for b in subset], precision_digits
                )
            except PrecisionError:
                continue
            if rel is None or rel[0] == 0:
                continue
            full = [0] * (1 + len(basis))
            full[0] = rel[0]
            for pos, idx in enumerate(combo):
                full[idx + 1] = rel[pos + 1]
            key = _normalize_relation(full)
            if key in found:
                continue
            # soundness: the relation must survive sharper basis values
            with mp.workprec(sharp_ctx.bits):
                resid = abs(
                    mpmath.fsum(
                        [mpf(key[0]) * target.value]
                        + [mpf(c) * sharp[b.name].value for c, b in zip(key[1:], basis)]
                    )
                )
                ok = resid < mpf(10) ** (-(precision_digits - SAFETY_DIGITS))
                resid = +resid
            if ok:
                found[key] = resid

    matches = []
    for key, resid in found.items():
        if resid > 0:
            conf = int(mpmath.floor(-mpmath.log10(resid)))
        else:
            conf = precision_digits
        conf = min(conf, precision_digits)
        matches.append(
            RecognitionMatch(
                coefficients=key,
                residual=make_real(resid, ctx),
                confidence_digits=conf,
                rendering=_render_match(key, basis),
            )
        )
    matches.sort(
        key=lambda m: (
            m.residual.value,
            sum(c * c for c in m.coefficients),
            m.coefficients,
        )
    )
    return matches
