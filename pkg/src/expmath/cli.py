"""Command-line frontend: every capability as a subcommand.

All numeric output is rendered as decimal strings (never raw binary
floats); JSON is emitted in canonical form (sorted keys, tight separators)
so byte-identical round-trips hold.  Exit codes: 0 success, 1 computation
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from . import (
    agm,
    barzilai_borwein,
    bessel_moments,
    digit_walks,
    functions,
    quadrature,
    relations,
    sinc_identity,
)
from .precision import (
    BigReal,
    NumericsError,
    PrecisionContext,
    parse_decimal,
)

_DEFAULT_DIGITS = 30


class _UsageError(Exception):
    """Bad flag combination that argparse alone cannot catch (exit code 2)."""


def _env_default_digits() -> int:
    raw = os.environ.get("EXPMATH_DIGITS", "")
    try:
        value = int(raw)
    except ValueError:
        return _DEFAULT_DIGITS
    return value if value >= 1 else _DEFAULT_DIGITS


def _positive_int(label: str, minimum: int = 1):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{label} must be an integer") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{label} must be >= {minimum}")
        return value

    return parse


def _n_spec(text: str):
    """Parse --n as a single integer or an inclusive range 'a..b'; n >= 1."""
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if lo < 1 or hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        n = int(text)
        if n < 1:
            raise ValueError
        return [n]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "--n takes a positive integer (n >= 1) or a range like 1..32"
        ) from None


def _size_spec(text: str):
    try:
        if "x" in text:
            w_s, h_s = text.lower().split("x", 1)
            return (int(w_s), int(h_s))
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--size takes N or WxH, e.g. 512 or 800x600") from None


def _float_list(text: str):
    try:
        return [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated list of numbers") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expmath",
        description="High-precision constants, integrals, identities, and digit walks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    digits_default = _env_default_digits()

    def common(p, digits=digits_default, fmt="text"):
        p.add_argument(
            "--digits",
            type=_positive_int("--digits"),
            default=digits,
            help=f"significant digits to print (default {digits})",
        )
        p.add_argument(
            "--format",
            choices=("text", "json", "csv"),
            default=fmt,
            help=f"output format (default {fmt})",
        )
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")

    p = sub.add_parser("pi", help="pi via the quadratically convergent mean iteration")
    common(p)
    p.add_argument(
        "--iterations",
        type=_positive_int("--iterations"),
        default=None,
        help="fixed iteration count; reports per-iteration errors",
    )

    p = sub.add_parser("cn", help="Bessel-moment integrals C_n")
    common(p)
    p.add_argument("--n", type=_n_spec, default=[4], help="index or range, e.g. 4 or 1..10")
    p.add_argument("--eps", default=None, help="target accuracy, e.g. 1e-25")

    p = sub.add_parser("cinf", help="the limit value 2*exp(-2*gamma)")
    common(p, digits=50)

    p = sub.add_parser("sinc", help="both sides of the sinc-product identity")
    common(p)
    p.add_argument("--N", type=_positive_int("--N"), default=1, help="number of odd reciprocals past 1")
    p.add_argument("--eps", default=None, help="target accuracy for each side")

    p = sub.add_parser("threshold", help="first N where the sinc identity fails")
    common(p)
    p.add_argument(
        "--threshold",
        default=None,
        help="frequency budget; decimal or p/q (default: 2*pi)",
    )

    p = sub.add_parser("bb", help="two-point gradient descent vs steepest descent")
    common(p)
    p.add_argument(
        "--problem",
        choices=("sphere", "quad", "rosenbrock", "random-spd"),
        default="quad",
    )
    p.add_argument("--variant", choices=("bb1", "bb2"), default="bb2")
    p.add_argument("--tol", type=float, default=1e-8, help="gradient-norm tolerance")
    p.add_argument("--x0", type=_float_list, default=None, help="start point, e.g. 100,1")
    p.add_argument("--max-iter", type=_positive_int("--max-iter"), default=10_000)
    p.add_argument("--seed", type=int, default=17, help="seed for random-spd")
    p.add_argument("--dimension", type=_positive_int("--dimension", 2), default=5)
    p.add_argument(
        "--baseline",
        action="store_true",
        help="also run steepest descent and report both iteration counts",
    )

    p = sub.add_parser("agm", help="arithmetic-geometric mean iterations")
    common(p)
    p.add_argument("--a", default="1", help="first starting value")
    p.add_argument("--b", default="0.5", help="second starting value")
    p.add_argument("--kind", choices=("2", "3"), default="2", help="quadratic or cubic mean")
    p.add_argument("--trajectory", action="store_true", help="print every iterate")

    p = sub.add_parser("recognize", help="identify a decimal as a combination of constants")
    common(p, digits=50, fmt="json")
    p.add_argument("--value", default=None, help="decimal string to identify")
    p.add_argument(
        "--basis",
        default="one,gamma,em2gamma,zeta3,pi2",
        help="comma-separated constant names (see --list-basis)",
    )
    p.add_argument("--list-basis", action="store_true", help="print available constants and exit")

    p = sub.add_parser("quad", help="the double-exponential integrator on reference integrals")
    common(p)
    p.add_argument(
        "--integrand",
        choices=("log-inverse", "inv-sqrt", "gauss", "bessel-moment"),
        default="log-inverse",
    )

    p = sub.add_parser("walk", help="digit walk of a constant, rendered to PPM or SVG")
    common(p)
    p.add_argument("--constant", default="pi")
    p.add_argument("--base", type=_positive_int("--base", 2), default=4)
    p.add_argument("--size", type=_size_spec, default=512)
    p.add_argument("--color", choices=("progress", "mono"), default="progress")
    p.add_argument(
        "--image-format",
        choices=("ppm", "svg"),
        default=None,
        help="defaults to the --out extension, else svg",
    )
    return parser


# ---------------------------------------------------------------------------
# serialization helpers


def _canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _kv_csv(rows) -> str:
    return "".join(f"{k},{v}\n" for k, v in rows)


def _emit(args, text=None, data=None) -> None:
    if data is not None:
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(data)
        else:
            sys.stdout.buffer.write(data)
        return
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ctx(digits: int) -> PrecisionContext:
    return PrecisionContext.from_digits(digits + 5)


def _eps_from(args):
    if args.eps is not None:
        with mp.workprec(64):
            v = mpf(args.eps)
        if not v > 0:
            raise NumericsError("--eps must be positive")
        return v
    # default accuracy backs every printed digit with a little to spare
    with mp.workprec(64):
        return mpf(10) ** (-(args.digits + 3))


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_pi(args) -> str:
    d = args.digits
    if args.iterations is None:
        value = agm.pi_value(_ctx(d)).to_decimal(d)
        if args.format == "json":
            return _canonical_json({"digits": d, "value": value})
        if args.format == "csv":
            return _kv_csv([("value", value)])
        return value + "\n"
    bits = max(PrecisionContext.from_digits(d + 5).bits, 200)
    ctx = PrecisionContext(bits, d)
    result = agm.gauss_legendre_pi(args.iterations, ctx)
    errors = [e.to_decimal(3) for e in result.per_iteration_error]
    value = result.value.to_decimal(d)
    if args.format == "json":
        return _canonical_json(
            {
                "digits": d,
                "iterations": result.iterations,
                "per_iteration_error": errors,
                "value": value,
            }
        )
    if args.format == "csv":
        rows = [("value", value)] + [
            (f"error_{k+1}", e) for k, e in enumerate(errors)
        ]
        return _kv_csv(rows)
    lines = [value]
    lines += [f"iteration {k + 1}: error {e}" for k, e in enumerate(errors)]
    return "\n".join(lines) + "\n"


def _cmd_cn(args) -> str:
    d = args.digits
    ctx = PrecisionContext.from_digits(max(d + 5, 30))
    eps = _eps_from(args)
    records = [bessel_moments.c_n(n, ctx, eps) for n in sorted(set(args.n))]
    if args.format == "csv":
        return bessel_moments.records_to_csv(records, d)
    if args.format == "json":
        return _canonical_json(
            {
                "records": [
                    {
                        "n": r.n,
                        "value": r.value.to_decimal(d),
                        "error_estimate": r.error_estimate.to_decimal(3),
                    }
                    for r in records
                ]
            }
        )
    return "".join(
        f"C_{r.n} = {r.value.to_decimal(d)}  (error <= {r.error_estimate.to_decimal(3)})\n"
        for r in records
    )


def _cmd_cinf(args) -> str:
    d = args.digits
    value = bessel_moments.c_infinity(_ctx(d)).to_decimal(d)
    if args.format == "json":
        return _canonical_json({"digits": d, "value": value})
    if args.format == "csv":
        return _kv_csv([("value", value)])
    return value + "\n"


def _cmd_sinc(args) -> str:
    d = args.digits
    ctx = PrecisionContext.from_digits(max(d + 5, 30))
    eps = _eps_from(args)
    report = sinc_identity.identity_report(args.N, eps, ctx)
    fields = [
        ("N", report.N),
        ("lhs", report.lhs.to_decimal(d)),
        ("rhs", report.rhs.to_decimal(d)),
        ("difference", report.difference.to_decimal(3)),
        ("truncation_bound", report.truncation_bound.to_decimal(3)),
    ]
    if args.format == "json":
        return _canonical_json({k: v for k, v in fields})
    if args.format == "csv":
        return _kv_csv(fields)
    return "".join(f"{k} = {v}\n" for k, v in fields)


def _parse_threshold(text: str, ctx: PrecisionContext):
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return parse_decimal(text, ctx)


def _cmd_threshold(args) -> str:
    ctx = PrecisionContext.from_digits(max(args.digits, 30))
    if args.threshold is None:
        with mp.workprec(ctx.bits + 48):
            threshold = +(2 * agm.pi_value(PrecisionContext(ctx.bits + 48, ctx.target_digits)).value)
        label = "2*pi"
    else:
        threshold = _parse_threshold(args.threshold, ctx)
        label = args.threshold
    n = sinc_identity.threshold_scan(threshold, ctx)
    if args.format == "json":
        return _canonical_json({"threshold": label, "n": n})
    if args.format == "csv":
        return _kv_csv([("threshold", label), ("n", n)])
    return f"{n}\n"


def _bb_problem(args):
    if args.problem == "random-spd":
        return barzilai_borwein.random_spd(args.dimension, args.seed)
    if args.problem == "sphere":
        return barzilai_borwein.sphere(2)
    if args.problem == "quad":
        return barzilai_borwein.diagonal_quadratic([1.0, 100.0])
    return barzilai_borwein.rosenbrock()


_BB_DEFAULT_STARTS = {
    "sphere": [3.0, -4.0],
    "quad": [100.0, 1.0],
    "rosenbrock": [-1.2, 1.0],
}


def _cmd_bb(args) -> str:
    problem = _bb_problem(args)
    x0 = args.x0
    if x0 is None:
        x0 = _BB_DEFAULT_STARTS.get(args.problem, [1.0] * problem.dimension)
    if len(x0) != problem.dimension:
        raise NumericsError(
            f"--x0 needs {problem.dimension} components for problem {args.problem}"
        )
    safeguard = barzilai_borwein.SafeguardConfig(enabled=args.problem == "rosenbrock")
    result = barzilai_borwein.bb_minimize(
        problem, x0, args.tol, max_iter=args.max_iter, variant=args.variant, safeguard=safeguard
    )
    payload = {
        "problem": args.problem,
        "variant": args.variant,
        "tol": repr(args.tol),
        "iterations": result.iterations,
        "converged": result.converged,
        "x": [repr(v) for v in result.x.tolist()],
        "f": repr(result.fx),
        "trace": [
            {"k": k, "f": repr(fv), "grad_norm": repr(gn), "gamma": repr(gm)}
            for k, fv, gn, gm in result.trace
        ],
    }
    if args.baseline:
        base = barzilai_borwein.steepest_descent_baseline(
            problem, x0, args.tol, max_iter=max(args.max_iter, 100_000)
        )
        payload["baseline_iterations"] = base.iterations
        payload["baseline_converged"] = base.converged
    if args.format == "json":
        return _canonical_json(payload)
    if args.format == "csv":
        rows = [("k", "f", "grad_norm", "gamma")] + [
            (k, repr(fv), repr(gn), repr(gm)) for k, fv, gn, gm in result.trace
        ]
        return "".join(",".join(str(c) for c in row) + "\n" for row in rows)
    lines = [
        f"problem {args.problem}, variant {args.variant}",
        f"iterations {result.iterations} (converged: {result.converged})",
        f"minimum {result.fx!r} at {result.x.tolist()!r}",
    ]
    if args.baseline:
        lines.append(
            f"steepest-descent baseline: {payload['baseline_iterations']} iterations"
            f" (converged: {payload['baseline_converged']})"
        )
    return "\n".join(lines) + "\n"


def _cmd_agm(args) -> str:
    d = args.digits
    ctx = PrecisionContext.from_digits(d + 5)
    a = parse_decimal(args.a, ctx)
    b = parse_decimal(args.b, ctx)
    cubic = args.kind == "3"
    states = agm.agm_states(a, b, ctx, cubic=cubic)
    mean = agm.agm3(a, b, ctx) if cubic else agm.agm2(a, b, ctx)
    value = mean.to_decimal(d)
    if args.format == "json":
        payload = {"kind": int(args.kind), "value": value, "iterations": states[-1].iteration}
        if args.trajectory:
            payload["trajectory"] = [
                {"iteration": s.iteration, "a": str(BigReal(s.a, ctx.bits).to_decimal(d)),
                 "b": str(BigReal(s.b, ctx.bits).to_decimal(d))}
                for s in states
            ]
        return _canonical_json(payload)
    if args.format == "csv":
        rows = [("value", value), ("iterations", states[-1].iteration)]
        return _kv_csv(rows)
    lines = [value]
    if args.trajectory:
        for s in states:
            lines.append(
                f"iteration {s.iteration}: a={BigReal(s.a, ctx.bits).to_decimal(d)} "
                f"b={BigReal(s.b, ctx.bits).to_decimal(d)}"
            )
    return "\n".join(lines) + "\n"


def _cmd_recognize(args) -> str:
    if args.list_basis:
        names = relations.basis_names()
        if args.format == "json":
            return _canonical_json({"basis": names})
        return "".join(f"{n}\n" for n in names)
    if args.value is None:
        raise _UsageError("recognize needs --value (or --list-basis)")
    d = args.digits
    ctx = PrecisionContext.from_digits(d + 10)
    value = parse_decimal(args.value, ctx)
    names = [n.strip() for n in args.basis.split(",") if n.strip()]
    basis = relations.standard_basis(names, ctx)
    matches = relations.recognize(value, basis, d)
    payload = {
        "value": args.value,
        "basis": names,
        "matches": [
            {
                "coefficients": list(m.coefficients),
                "confidence_digits": m.confidence_digits,
                "rendering": m.rendering,
                "residual": m.residual.to_decimal(3),
            }
            for m in matches
        ],
    }
    if args.format == "json":
        return _canonical_json(payload)
    if args.format == "csv":
        rows = [("rendering", m.rendering) for m in matches]
        return _kv_csv(rows) if rows else "no-match,\n"
    if not matches:
        return "no match\n"
    return "".join(
        f"{m.rendering}  (coefficients {list(m.coefficients)}, {m.confidence_digits} digits)\n"
        for m in matches
    )


def _cmd_quad(args) -> str:
    d = args.digits
    ctx = PrecisionContext.from_digits(max(d + 5, 30))
    with mp.workprec(ctx.bits + 16):
        eps = mpf(10) ** (-(d + 2))
    if args.integrand == "log-inverse":
        result = quadrature.integrate_finite(lambda x: mpmath.ln(1 / x), 0, 1, eps, ctx)
        reference = "1"
    elif args.integrand == "inv-sqrt":
        result = quadrature.integrate_finite(lambda x: 1 / mpmath.sqrt(x), 0, 1, eps, ctx)
        reference = "2"
    elif args.integrand == "gauss":
        result = quadrature.integrate_semi_infinite(lambda t: mpmath.exp(-t * t), 0, eps, ctx)
        reference = "sqrt(pi)/2"
    else:
        result = quadrature.integrate_semi_infinite(
            lambda t: t * functions.bessel_k0(t, ctx).value if t > 0 else mpf(0), 0, eps, ctx
        )
        reference = "1"
    fields = [
        ("integrand", args.integrand),
        ("value", result.value.to_decimal(d)),
        ("error_estimate", result.error_estimate.to_decimal(3)),
        ("levels_used", result.levels_used),
        ("converged", result.converged),
        ("reference", reference),
    ]
    if args.format == "json":
        return _canonical_json({k: v for k, v in fields})
    if args.format == "csv":
        return _kv_csv(fields)
    return "".join(f"{k} = {v}\n" for k, v in fields)


def _cmd_walk(args):
    fmt = args.image_format
    if fmt is None:
        if args.out and args.out.lower().endswith(".ppm"):
            fmt = "ppm"
        else:
            fmt = "svg"
    count = args.digits
    bits = int(count * (args.base.bit_length())) + 256
    need = int(count * max(1.0, (args.base - 1).bit_length())) + 128
    ctx = PrecisionContext(max(need, bits, 512), 100)
    stream = digit_walks.digits(args.constant, args.base, count, ctx)
    path = digit_walks.walk(stream)
    data = digit_walks.render(path, fmt, args.size, args.color)
    return data


def run(argv) -> int:
    """Parse argv (program name excluded) and execute; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    handlers = {
        "pi": _cmd_pi,
        "cn": _cmd_cn,
        "cinf": _cmd_cinf,
        "sinc": _cmd_sinc,
        "threshold": _cmd_threshold,
        "bb": _cmd_bb,
        "agm": _cmd_agm,
        "recognize": _cmd_recognize,
        "quad": _cmd_quad,
    }
    try:
        if args.subcommand == "walk":
            data = _cmd_walk(args)
            _emit(args, data=data)
        else:
            text = handlers[args.subcommand](args)
            _emit(args, text=text)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (NumericsError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
