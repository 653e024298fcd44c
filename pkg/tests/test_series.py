import math
import random
from fractions import Fraction

import pytest

from premaps.constraint import ALL_NONNEGATIVE, PreimageConstraint
from premaps.series import (
    CompositionRequiresZeroConstant,
    FloatSeries,
    NonInvertibleEpsilon,
    NonInvertibleSeries,
    SeriesError,
    TruncatedSeries,
    exp_compose,
    lagrange_invert,
    lagrange_invert_float,
)

SEED = 20260809


def series(*coeffs):
    return TruncatedSeries(tuple(Fraction(c) for c in coeffs))


def random_series(rng, order, zero_constant=False, invertible=False):
    coeffs = [
        Fraction(rng.randint(-9, 9), rng.choice([1, 1, 1, 2, 3, 4]))
        for _ in range(order + 1)
    ]
    if zero_constant:
        coeffs[0] = Fraction(0)
    if invertible and coeffs[0] == 0:
        coeffs[0] = Fraction(rng.randint(1, 9))
    return TruncatedSeries(tuple(coeffs))


class TestMul:
    def test_difference_of_squares(self):
        assert series(1, 1, 0) * series(1, -1, 0) == series(1, 0, -1)

    def test_geometric_inverse_pair(self):
        geometric = series(*([1] * 6))
        assert geometric * series(1, -1, 0, 0, 0, 0) == series(1, 0, 0, 0, 0, 0)

    def test_squared_constraint_series(self):
        e = TruncatedSeries(tuple(PreimageConstraint.finite([0, 3, 4]).e_coefficients(4)))
        assert (e * e).coefficients == (
            Fraction(1),
            Fraction(0),
            Fraction(0),
            Fraction(1, 3),
            Fraction(1, 12),
        )

    def test_min_order_truncation(self):
        product = series(1, 1, 1, 1, 1) * series(1, 1)
        assert product.order == 1
        assert product == series(1, 2)


class TestMulInverse:
    def test_geometric(self):
        assert series(1, -1, 0, 0).mul_inverse() == series(1, 1, 1, 1)

    def test_constant(self):
        assert series(2, 0).mul_inverse() == series(Fraction(1, 2), 0)

    def test_one_minus_z_from_constraint(self):
        e0 = TruncatedSeries(tuple(PreimageConstraint.finite([0]).e_coefficients(3)))
        f = TruncatedSeries.one(3) - e0.times_z()
        assert f.mul_inverse() == series(1, 1, 1, 1)

    def test_zero_constant_rejected(self):
        with pytest.raises(NonInvertibleSeries):
            series(0, 1, 2).mul_inverse()

    def test_random_identity(self):
        rng = random.Random(SEED)
        one = TruncatedSeries.one(24)
        for _ in range(200):
            f = random_series(rng, 24, invertible=True)
            assert f * f.mul_inverse() == one


class TestCompose:
    def test_geometric_of_z_squared(self):
        geo = series(*([1] * 6))
        inner = TruncatedSeries.from_coefficients([0, 0, 1], 5)
        assert geo.compose(inner) == series(1, 0, 1, 0, 1, 0)

    def test_exp_of_zero(self):
        exp = TruncatedSeries(tuple(ALL_NONNEGATIVE.e_coefficients(4)))
        assert exp.compose(TruncatedSeries.zero(4)) == TruncatedSeries.one(4)

    def test_log_series_of_z(self):
        log = TruncatedSeries(
            (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3))
        )
        assert log.compose(TruncatedSeries.z(3)) == log

    def test_nonzero_constant_rejected(self):
        with pytest.raises(CompositionRequiresZeroConstant):
            series(1, 1).compose(series(1, 1))

    def test_random_linearity(self):
        rng = random.Random(SEED + 1)
        for _ in range(200):
            f1 = random_series(rng, 24)
            f2 = random_series(rng, 24)
            g = random_series(rng, 24, zero_constant=True)
            a = Fraction(rng.randint(-5, 5))
            b = Fraction(rng.randint(-5, 5))
            lhs = (f1.scale(a) + f2.scale(b)).compose(g)
            rhs = f1.compose(g).scale(a) + f2.compose(g).scale(b)
            assert lhs == rhs

    def test_random_product_morphism(self):
        rng = random.Random(SEED + 2)
        for _ in range(50):
            f1 = random_series(rng, 16)
            f2 = random_series(rng, 16)
            g = random_series(rng, 16, zero_constant=True)
            assert (f1 * f2).compose(g) == f1.compose(g) * f2.compose(g)


class TestDerivative:
    def test_exponential_fixed_point(self):
        exp4 = TruncatedSeries(tuple(ALL_NONNEGATIVE.e_coefficients(4)))
        exp3 = TruncatedSeries(tuple(ALL_NONNEGATIVE.e_coefficients(3)))
        assert exp4.derivative() == exp3

    def test_constant(self):
        assert series(5, 0, 0).derivative() == series(0, 0)

    def test_monomial(self):
        assert series(0, 0, 0, 1).derivative() == series(0, 0, 3)


class TestExpCompose:
    def test_unbounded_identity(self):
        result = exp_compose(ALL_NONNEGATIVE, TruncatedSeries.z(3))
        assert result == series(1, 1, Fraction(1, 2), Fraction(1, 6))

    def test_zero_one_is_affine(self):
        g = series(0, 2, -3, 1)
        result = exp_compose(PreimageConstraint.finite([0, 1]), g)
        assert result == TruncatedSeries.one(3) + g

    def test_even_support(self):
        g = TruncatedSeries.from_coefficients([0, 1, 1], 2)
        result = exp_compose(PreimageConstraint.finite([0, 2]), g)
        assert result == series(1, 0, Fraction(1, 2))

    def test_nonzero_constant_rejected(self):
        with pytest.raises(CompositionRequiresZeroConstant):
            exp_compose(ALL_NONNEGATIVE, series(1, 0))

    def test_matches_generic_composition(self):
        rng = random.Random(SEED + 3)
        for _ in range(30):
            p = PreimageConstraint.finite(
                sorted({0} | {rng.randint(1, 6) for _ in range(rng.randint(0, 4))})
            )
            g = random_series(rng, 12, zero_constant=True)
            direct = TruncatedSeries(tuple(p.e_coefficients(12))).compose(g)
            assert exp_compose(p, g) == direct


class TestLagrange:
    def test_unconstrained_trees(self):
        assert lagrange_invert(ALL_NONNEGATIVE, 4) == series(
            0, 1, 1, Fraction(3, 2), Fraction(8, 3)
        )

    def test_paths(self):
        assert lagrange_invert(PreimageConstraint.finite([0, 1]), 5) == series(
            0, 1, 1, 1, 1, 1
        )

    def test_leaves_only(self):
        assert lagrange_invert(PreimageConstraint.finite([0]), 5) == series(
            0, 1, 0, 0, 0, 0
        )

    def test_needs_zero(self):
        with pytest.raises(NonInvertibleEpsilon):
            lagrange_invert(PreimageConstraint.finite([1, 2]), 5)

    def test_random_fixed_point(self):
        rng = random.Random(SEED + 4)
        for _ in range(200):
            p = PreimageConstraint.finite(
                sorted({0} | {rng.randint(1, 6) for _ in range(rng.randint(1, 4))})
            )
            sigma = lagrange_invert(p, 24)
            assert sigma == exp_compose(p, sigma).times_z()


class TestFloatBackend:
    def float_close(self, exact, approx, rel=1e-9):
        for n in range(min(exact.order, approx.order) + 1):
            e = float(exact.coefficient(n))
            a = approx.coefficient(n)
            if e == 0.0:
                assert abs(a) <= 1e-300
            else:
                assert abs(a - e) <= rel * abs(e), (n, e, a)

    def test_lagrange_agreement_to_order_50(self):
        for p in (
            ALL_NONNEGATIVE,
            PreimageConstraint.finite([0, 1, 2]),
            PreimageConstraint.finite([0, 3, 4]),
            PreimageConstraint.finite([0, 2, 4]),
        ):
            self.float_close(lagrange_invert(p, 50), lagrange_invert_float(p, 50))

    def test_exp_compose_agreement(self):
        exact_tree = lagrange_invert(ALL_NONNEGATIVE, 50)
        exact = exp_compose(ALL_NONNEGATIVE, exact_tree)
        approx = exp_compose(ALL_NONNEGATIVE, lagrange_invert_float(ALL_NONNEGATIVE, 50))
        self.float_close(exact, approx)

    def test_rescaled_coefficients_match(self):
        p = PreimageConstraint.finite([0, 1, 2])
        plain = lagrange_invert_float(p, 40, rate=0.0)
        scaled = lagrange_invert_float(p, 40, rate=0.9)
        for n in range(41):
            assert scaled.coefficient(n) == pytest.approx(
                plain.coefficient(n), rel=1e-12, abs=1e-300
            )

    def test_rescaled_pipeline_ops(self):
        rate = 0.7
        tree = lagrange_invert_float(ALL_NONNEEGATIVE if False else ALL_NONNEGATIVE, 30, rate)
        one = FloatSeries.one(30, rate)
        func = (one - exp_compose(ALL_NONNEGATIVE, tree).times_z()).mul_inverse()
        n = 20
        assert func.coefficient(n) == pytest.approx(20 ** 20 / math.factorial(20), rel=1e-11)

    def test_rate_mismatch_rejected(self):
        with pytest.raises(SeriesError):
            FloatSeries.one(3, 0.0) * FloatSeries.one(3, 1.0)

    def test_log_and_derivative_respect_rate(self):
        p = PreimageConstraint.finite([0, 1, 3])
        tree_plain = lagrange_invert_float(p, 30, rate=0.0)
        tree_scaled = lagrange_invert_float(p, 30, rate=0.5)
        f_plain = (FloatSeries.one(30) - exp_compose(p.shift(1), tree_plain).times_z()).mul_inverse()
        f_scaled = (
            FloatSeries.one(30, 0.5) - exp_compose(p.shift(1), tree_scaled).times_z()
        ).mul_inverse()
        for result_plain, result_scaled in (
            (f_plain.log(), f_scaled.log()),
            (f_plain.derivative(), f_scaled.derivative()),
        ):
            for n in range(result_plain.order + 1):
                assert result_scaled.coefficient(n) == pytest.approx(
                    result_plain.coefficient(n), rel=1e-10, abs=1e-290
                )


class TestSerialization:
    def test_json_round_trip(self):
        f = series(1, Fraction(-3, 7), 0, Fraction(5, 2))
        assert f.to_json() == ["1/1", "-3/7", "0/1", "5/2"]
        assert TruncatedSeries.from_json(f.to_json()) == f
