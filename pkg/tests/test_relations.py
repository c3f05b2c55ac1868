"""Integer-relation detection and closed-form recognition."""

import mpmath
import pytest
from mpmath import mp, mpf

from expmath import bessel_moments, functions, relations
from expmath.precision import (
    DomainError,
    PrecisionContext,
    make_real,
    parse_decimal,
)

CINF_50 = "0.63047350337438679612204019271087890435458707871273"

# 50 digits drawn from a seeded RNG; serves as the no-relation control
RANDOM_CONTROL = "0.58274630917245181903642775318960163933860131857559"


class TestFindIntegerRelation:
    def test_doubling_relation(self):
        ctx = PrecisionContext.from_digits(45)
        g = functions.euler_gamma(ctx)
        ctx2 = PrecisionContext.from_digits(45)
        with mp.workprec(ctx2.bits):
            g2 = mpf(2) * g.value
        rel = relations.find_integer_relation([g.value, g2], 40)
        assert rel == (2, -1)

    def test_ordering_flips_coefficients(self):
        ctx = PrecisionContext.from_digits(45)
        g = functions.euler_gamma(ctx)
        with mp.workprec(ctx.bits):
            g2 = mpf(2) * g.value
        rel = relations.find_integer_relation([g2, g.value], 40)
        assert rel == (1, -2)

    def test_bessel_moment_against_zeta(self):
        ctx = PrecisionContext.from_digits(60)
        c4 = bessel_moments.c_n(4, ctx, eps=mpf(10) ** -55)
        z3 = functions.zeta3(ctx)
        rel = relations.find_integer_relation([c4.value.value, z3.value], 50)
        assert rel == (12, -7)

    def test_cross_checked_against_library_pslq(self):
        # synthetic three-term relation 5 x0 - 3 x1 + 2 x2 = 0
        with mp.workprec(220):
            x0 = +mpmath.pi
            x1 = +mpmath.e
            x2 = (-5 * x0 + 3 * x1) / 2
            values = [x0, x1, x2]
        rel = relations.find_integer_relation(values, 50)
        assert rel == (5, -3, 2)
        with mp.workdps(60):
            lib = mpmath.pslq(values)
        assert lib is not None
        if lib[0] < 0:
            lib = [-c for c in lib]
        assert tuple(lib) == rel

    def test_no_relation_between_pi_and_e(self):
        with mp.workprec(200):
            values = [+mpmath.pi, +mpmath.e]
        assert relations.find_integer_relation(values, 40) is None

    def test_no_relation_between_surds(self):
        with mp.workprec(200):
            values = [mpmath.sqrt(2), mpmath.sqrt(3), mpmath.sqrt(5)]
        assert relations.find_integer_relation(values, 40) is None

    def test_coefficient_cap_excludes_large_relations(self):
        ctx = PrecisionContext.from_digits(60)
        g = functions.euler_gamma(ctx)
        with mp.workprec(ctx.bits):
            big = mpf(1234567) * g.value
        # the only relation is (1234567, -1); the default cap of 10^6 must
        # refuse it rather than report something else
        assert relations.find_integer_relation([g.value, big], 45) is None
        rel = relations.find_integer_relation(
            [g.value, big], 45, coefficient_cap=10**7
        )
        assert rel == (1234567, -1)

    def test_gcd_and_sign_normalization(self):
        ctx = PrecisionContext.from_digits(45)
        g = functions.euler_gamma(ctx)
        with mp.workprec(ctx.bits):
            g4 = mpf(4) * g.value
            g6 = mpf(6) * g.value
        # raw relation (3, -2) is already reduced; anything like (6, -4)
        # would violate the lowest-terms contract
        rel = relations.find_integer_relation([g4, g6], 40)
        assert rel == (3, -2)

    def test_validation(self):
        with pytest.raises(DomainError):
            relations.find_integer_relation([mpf(1)], 40)
        with pytest.raises(DomainError):
            relations.find_integer_relation([mpf(1), mpf(2)], 5)


class TestBasis:
    def test_registry_contents(self):
        names = relations.basis_names()
        for expected in ("one", "gamma", "em2gamma", "zeta3", "pi", "pi2", "e"):
            assert expected in names

    def test_unknown_name_rejected(self):
        ctx = PrecisionContext.from_digits(30)
        with pytest.raises(DomainError):
            relations.standard_basis(["feigenbaum"], ctx)

    def test_constants_regenerate_at_requested_precision(self):
        ctx40 = PrecisionContext.from_digits(40)
        ctx80 = PrecisionContext.from_digits(80)
        (z3,) = relations.standard_basis(["zeta3"], ctx40)
        sharper = z3.at(ctx80)
        with mp.workprec(ctx80.bits + 32):
            assert abs(sharper.value - mpmath.zeta(3)) < mpf(10) ** -78

    def test_default_basis_composition(self):
        ctx = PrecisionContext.from_digits(30)
        names = [b.name for b in relations.default_basis(ctx)]
        assert names == ["one", "gamma", "em2gamma", "zeta3", "pi2"]


class TestMatchValidation:
    def test_rejects_zero_vector(self):
        ctx = PrecisionContext.from_digits(30)
        with pytest.raises(ValueError):
            relations.RecognitionMatch(
                coefficients=(0, 0),
                residual=parse_decimal("1e-20", ctx),
                confidence_digits=20,
                rendering="",
            )

    def test_rejects_unreduced_coefficients(self):
        ctx = PrecisionContext.from_digits(30)
        with pytest.raises(ValueError):
            relations.RecognitionMatch(
                coefficients=(2, -4),
                residual=parse_decimal("1e-20", ctx),
                confidence_digits=20,
                rendering="",
            )


class TestRecognize:
    def test_limit_constant_from_decimal_string(self):
        ctx = PrecisionContext.from_digits(60)
        value = parse_decimal(CINF_50, ctx)
        basis = relations.default_basis(ctx)
        matches = relations.recognize(value, basis, 50)
        assert matches, "the limit constant went unrecognized"
        top = matches[0]
        assert top.coefficients == (1, 0, 0, -2, 0, 0)
        assert top.rendering == "2*exp(-2*gamma)"
        assert top.confidence_digits >= 45

    def test_moment_as_rational_multiple_of_zeta3(self):
        ctx = PrecisionContext.from_digits(60)
        c4 = bessel_moments.c_n(4, ctx, eps=mpf(10) ** -55)
        basis = relations.standard_basis(["zeta3"], ctx)
        matches = relations.recognize(c4.value, basis, 50)
        assert matches
        assert matches[0].coefficients == (12, -7)
        assert matches[0].rendering == "7/12*zeta(3)"

    def test_three_constant_combination(self):
        # v = (8 pi^2 - 63 zeta(3) - 3)/18, so (18, -8, 63, 3) against the
        # basis (pi^2, zeta(3), 1)
        ctx = PrecisionContext.from_digits(70)
        basis = relations.standard_basis(["pi2", "zeta3", "one"], ctx)
        with mp.workprec(ctx.bits):
            v = (8 * basis[0].value.value - 63 * basis[1].value.value - 3) / 18
        matches = relations.recognize(v, basis, 55)
        assert matches
        assert matches[0].coefficients == (18, -8, 63, 3)

    def test_plain_rational(self):
        ctx = PrecisionContext.from_digits(40)
        basis = relations.standard_basis(["one"], ctx)
        matches = relations.recognize(parse_decimal("0.5", ctx), basis, 30)
        assert matches
        assert matches[0].coefficients == (2, -1)
        assert matches[0].rendering == "1/2"

    def test_random_control_finds_nothing(self):
        ctx = PrecisionContext.from_digits(60)
        value = parse_decimal(RANDOM_CONTROL, ctx)
        basis = relations.default_basis(ctx)
        assert relations.recognize(value, basis, 45) == []

    def test_matches_sorted_by_residual_then_size(self):
        ctx = PrecisionContext.from_digits(60)
        value = parse_decimal(CINF_50, ctx)
        basis = relations.default_basis(ctx)
        matches = relations.recognize(value, basis, 50)
        residuals = [m.residual.value for m in matches]
        assert residuals == sorted(residuals)

    def test_matches_survive_reevaluation_at_higher_precision(self):
        # soundness: rebuild every matched combination from scratch with 20
        # extra digits; a genuine relation keeps its residual tiny, a lucky
        # numerical coincidence would blow up
        digits = 40
        ctx = PrecisionContext.from_digits(digits + 10)
        value = parse_decimal(CINF_50, ctx)
        basis = relations.default_basis(ctx)
        matches = relations.recognize(value, basis, digits)
        assert matches
        hi = PrecisionContext.from_digits(digits + 30)
        hi_value = parse_decimal(CINF_50, hi).value
        with mp.workprec(hi.bits):
            for m in matches:
                acc = m.coefficients[0] * hi_value
                for coeff, const in zip(m.coefficients[1:], basis):
                    acc += coeff * const.at(hi).value
                assert abs(acc) < mpf(10) ** (-(digits - 5))

    def test_scale_coherence(self):
        # multiplying the target and every basis constant by the same factor
        # leaves the relation vector unchanged
        ctx = PrecisionContext.from_digits(60)
        c4 = bessel_moments.c_n(4, ctx, eps=mpf(10) ** -55)
        plain = relations.standard_basis(["zeta3"], ctx)
        with mp.workprec(ctx.bits):
            scale = mpf(3)
            scaled_value = scale * c4.value.value
        def times_three(b):
            def make(c):
                with mp.workprec(c.bits + 8):
                    return make_real(b.at(c).value * 3, c)

            return make

        scaled_basis = [
            relations.basis_constant(b.name, b.render, times_three(b), ctx)
            for b in plain
        ]
        direct = relations.recognize(c4.value, plain, 45)
        scaled = relations.recognize(make_real(scaled_value, ctx), scaled_basis, 45)
        assert direct and scaled
        assert direct[0].coefficients == scaled[0].coefficients == (12, -7)
