"""Preimage-size constraints and their admissibility classification.

A constraint is a set P of allowed preimage sizes: a function f on a
finite set satisfies P when |f^-1(x)| lies in P for every point x.
P is either an explicit finite set of nonnegative integers or the
unconstrained set of all nonnegative integers.  The building-block
series e_P(z) = sum over n in P of z^n/n! is produced here as a
truncated coefficient list and as a float evaluator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction


class EmptyConstraintError(ValueError):
    """Raised when an operation needs a nonempty finite constraint."""


class Admissibility(enum.Enum):
    FORCES_PERMUTATION = "forces-permutation"
    ADMISSIBLE = "admissible"
    ADMISSIBLE_APERIODIC = "admissible-aperiodic"


@dataclass(frozen=True)
class AdmissibilityClass:
    tag: Admissibility
    period: int


@dataclass(frozen=True)
class PreimageConstraint:
    """A set of allowed preimage sizes, finite or all of Z>=0.

    `elements` is a sorted tuple of distinct nonnegative integers and
    must be empty when `unbounded` is set.  An empty finite set is
    representable (it arises from shifting), but cannot be classified
    or parsed.  Instances are immutable and safe to share.
    """

    elements: tuple[int, ...] = ()
    unbounded: bool = False

    def __post_init__(self) -> None:
        if self.unbounded:
            if self.elements:
                raise ValueError("unbounded constraint carries no explicit elements")
            return
        normalized = tuple(sorted(set(self.elements)))
        if normalized and normalized[0] < 0:
            raise ValueError(f"preimage sizes must be nonnegative, got {normalized[0]}")
        object.__setattr__(self, "elements", normalized)

    # -- construction / formatting ------------------------------------

    @classmethod
    def finite(cls, elements) -> "PreimageConstraint":
        return cls(elements=tuple(elements))

    @classmethod
    def parse(cls, text: str) -> "PreimageConstraint":
        """Parse "0,3,4" into a finite set, or the token "all"."""
        stripped = text.strip()
        if stripped.lower() == "all":
            return ALL_NONNEGATIVE
        if not stripped:
            raise EmptyConstraintError("empty constraint set is not a valid input")
        try:
            elements = tuple(int(part) for part in stripped.split(","))
        except ValueError:
            raise ValueError(f"cannot parse constraint {text!r}") from None
        if any(e < 0 for e in elements):
            raise ValueError(f"negative preimage size in {text!r}")
        return cls.finite(elements)

    def __str__(self) -> str:
        if self.unbounded:
            return "all"
        return ",".join(str(e) for e in self.elements)

    # -- membership and shifting --------------------------------------

    def contains(self, n: int) -> bool:
        if n < 0:
            return False
        return True if self.unbounded else n in self.elements

    def shift(self, i: int) -> "PreimageConstraint":
        """The set P - i: subtract i elementwise, drop negatives."""
        if i < 0:
            raise ValueError("shift amount must be nonnegative")
        if self.unbounded:
            return self
        return PreimageConstraint(tuple(e - i for e in self.elements if e >= i))

    # -- classification ------------------------------------------------

    def classify(self) -> AdmissibilityClass:
        """Admissibility tag plus the period (gcd of nonzero sizes).

        A finite empty set constrains nothing coherently and is
        rejected.  The constraint forces permutations when 0 is absent
        or when no size exceeds 1; otherwise it is admissible, with
        the aperiodic refinement when the period is 1.
        """
        if self.unbounded:
            return AdmissibilityClass(Admissibility.ADMISSIBLE_APERIODIC, 1)
        if not self.elements:
            raise EmptyConstraintError("cannot classify the empty constraint set")
        nonzero = [e for e in self.elements if e > 0]
        period = math.gcd(*nonzero) if nonzero else 1
        if 0 not in self.elements or set(self.elements) <= {0, 1}:
            return AdmissibilityClass(Admissibility.FORCES_PERMUTATION, period)
        if period == 1:
            return AdmissibilityClass(Admissibility.ADMISSIBLE_APERIODIC, period)
        return AdmissibilityClass(Admissibility.ADMISSIBLE, period)

    # -- the series e_P ------------------------------------------------

    def e_coefficients(self, order: int) -> list[Fraction]:
        """Coefficients of e_P(z) through z^order: 1/n! on the support."""
        if order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = [Fraction(0)] * (order + 1)
        if self.unbounded:
            for n in range(order + 1):
                coeffs[n] = Fraction(1, math.factorial(n))
        else:
            for n in self.elements:
                if n <= order:
                    coeffs[n] = Fraction(1, math.factorial(n))
        return coeffs

    def e_value(self, t: float) -> float:
        """e_P evaluated at a real point (exp for the unbounded set)."""
        if self.unbounded:
            return math.exp(t)
        return math.fsum(t ** n / math.factorial(n) for n in self.elements)

    def smallest_above_one(self) -> int | None:
        """Least element exceeding 1, or None; 2 for the unbounded set."""
        if self.unbounded:
            return 2
        for e in self.elements:
            if e > 1:
                return e
        return None

    def sort_key(self) -> tuple:
        """Lexicographic key on the element list; unbounded sorts last."""
        return (1,) if self.unbounded else (0, self.elements)


ALL_NONNEGATIVE = PreimageConstraint(unbounded=True)
