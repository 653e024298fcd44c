import random
from fractions import Fraction

import pytest

from premaps.constraint import (
    ALL_NONNEGATIVE,
    Admissibility,
    EmptyConstraintError,
    PreimageConstraint,
)


def finite(*elements):
    return PreimageConstraint.finite(elements)


class TestParseFormat:
    def test_round_trip(self):
        assert str(PreimageConstraint.parse("0,3,4")) == "0,3,4"
        assert PreimageConstraint.parse("0,3,4") == finite(0, 3, 4)

    def test_all_token(self):
        assert PreimageConstraint.parse("all") is ALL_NONNEGATIVE
        assert str(ALL_NONNEGATIVE) == "all"

    def test_unsorted_input_normalizes(self):
        assert PreimageConstraint.parse("4,0,3") == finite(0, 3, 4)

    def test_empty_rejected(self):
        with pytest.raises(EmptyConstraintError):
            PreimageConstraint.parse("")

    def test_garbage_rejected(self):
        with pytest.raises(ValueError):
            PreimageConstraint.parse("0,x,4")

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            PreimageConstraint.parse("0,-2")


class TestShift:
    def test_drops_negatives(self):
        assert finite(0, 3, 4).shift(1) == finite(2, 3)

    def test_can_empty_out(self):
        assert finite(0, 1).shift(2) == finite()

    def test_all_is_shift_invariant(self):
        assert ALL_NONNEGATIVE.shift(5) is ALL_NONNEGATIVE

    def test_composition(self):
        rng = random.Random(7)
        for _ in range(100):
            p = finite(*(rng.randint(0, 12) for _ in range(rng.randint(1, 6))))
            a, b = rng.randint(0, 5), rng.randint(0, 5)
            assert p.shift(a).shift(b) == p.shift(a + b)


class TestClassify:
    def test_aperiodic(self):
        cls = finite(0, 3, 4).classify()
        assert cls.tag is Admissibility.ADMISSIBLE_APERIODIC
        assert cls.period == 1

    def test_periodic(self):
        cls = finite(0, 2, 4).classify()
        assert cls.tag is Admissibility.ADMISSIBLE
        assert cls.period == 2

    def test_permutations(self):
        cls = finite(0, 1).classify()
        assert cls.tag is Admissibility.FORCES_PERMUTATION
        assert cls.period == 1

    def test_zero_only_forces_permutation(self):
        assert finite(0).classify().tag is Admissibility.FORCES_PERMUTATION
        assert finite(0).classify().period == 1

    def test_missing_zero_forces_permutation(self):
        assert finite(1).classify().tag is Admissibility.FORCES_PERMUTATION
        assert finite(2, 4).classify().tag is Admissibility.FORCES_PERMUTATION

    def test_all_nonnegative(self):
        cls = ALL_NONNEGATIVE.classify()
        assert cls.tag is Admissibility.ADMISSIBLE_APERIODIC
        assert cls.period == 1

    def test_empty_rejected(self):
        with pytest.raises(EmptyConstraintError):
            finite().classify()

    def test_period_divides_every_element(self):
        rng = random.Random(11)
        for _ in range(100):
            p = finite(0, *(rng.randint(1, 12) for _ in range(rng.randint(1, 5))))
            period = p.classify().period
            assert all(e % period == 0 for e in p.elements if e > 0)


class TestECoefficients:
    def test_finite_support(self):
        assert finite(0, 3, 4).e_coefficients(4) == [
            Fraction(1),
            Fraction(0),
            Fraction(0),
            Fraction(1, 6),
            Fraction(1, 24),
        ]

    def test_exponential(self):
        assert ALL_NONNEGATIVE.e_coefficients(3) == [
            Fraction(1),
            Fraction(1),
            Fraction(1, 2),
            Fraction(1, 6),
        ]

    def test_single_term(self):
        assert finite(2).e_coefficients(3) == [0, 0, Fraction(1, 2), 0]

    def test_shift_is_derivative(self):
        rng = random.Random(13)
        candidates = [ALL_NONNEGATIVE] + [
            finite(*(rng.randint(0, 9) for _ in range(rng.randint(1, 5))))
            for _ in range(30)
        ]
        for p in candidates:
            n = 8
            base = p.e_coefficients(n + 1)
            derived = [(i + 1) * base[i + 1] for i in range(n + 1)]
            assert p.shift(1).e_coefficients(n) == derived
