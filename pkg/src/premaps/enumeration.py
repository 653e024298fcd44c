"""Exact series, counts and averages for constrained mapping families.

Every family reduces to a composition pipeline on top of the tree
series T, the unique solution of T = z*e_P(T):

    trees            T
    bounded trees    T_h = z*e_P(T_{h-1}),  T_{-1} = 0
    functions        F = (1 - z*e_{P-1}(T))^-1
    partial fns      F * exp(T)
    connected fns    ln F
    cyclic points    z*e_{P-1}(T) * F^2
    components       F * ln F
    k-image deficit  z*T_{k-1} * e_{P-2}(T) * F^3
    ... for partials T_{k-1} * F^2 * exp(T) * (z*e_{P-2}(T)*F + 1)

When 0 is not in P there are no trees at all and the pipeline
degenerates gracefully: T = 0 makes F the permutation series (or the
bare constant 1), and every deficit series vanishes.

Counts use the cheaper one-shot power formulas

    n! [z^n] T = (n-1)! [z^(n-1)] e_P(z)^n
    n! [z^n] F = n! [z^n] e_P(z)^n
    n! [z^n] Partial = n! [z^n] e_P(z)^n e^z

with the full pipeline kept as an independent cross-check in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import asymptotics
from .constraint import ALL_NONNEGATIVE, PreimageConstraint
from .families import FamilyKind
from .series import (
    FloatSeries,
    TruncatedSeries,
    exp_compose,
    lagrange_invert,
    lagrange_invert_float,
)

COUNTING_FAMILIES = {"tree", "bounded-tree", "function", "partial-function", "connected"}
STATISTIC_FAMILIES = {"xi-image", "xi-partial-image", "xi-cyclic", "xi-component"}

# Above this order the float backend rescales by exp(-n*ln rho) so that
# stored coefficients stay near unity instead of racing toward the
# double-precision overflow threshold around n = 700.
RESCALE_THRESHOLD = 200


class NoFunctionsOfThisSize(ValueError):
    """Raised when an average is requested at a size with no constrained functions."""


@dataclass(frozen=True)
class CountReport:
    """Exact coefficient plus, where meaningful, count and average.

    `count` is n! times the coefficient for the counting families;
    `average` is the coefficient divided by the function coefficient
    for the statistic families (None when no function of size n exists).
    """

    constraint: PreimageConstraint
    family: FamilyKind
    n: int
    coefficient: Fraction
    count: int | None = None
    average: Fraction | None = None

    def to_json(self) -> dict:
        doc: dict = {
            "constraint": str(self.constraint),
            "family": self.family.tag,
        }
        if self.family.param is not None:
            key = "height" if self.family.tag == "bounded-tree" else "k"
            doc[key] = self.family.param
        doc["n"] = self.n
        if self.count is not None:
            doc["count"] = str(self.count)
        doc["coefficient"] = f"{self.coefficient.numerator}/{self.coefficient.denominator}"
        if self.average is not None:
            doc["average"] = f"{self.average.numerator}/{self.average.denominator}"
        return doc


# -- series pipeline ------------------------------------------------------


def _pick_rate(constraint: PreimageConstraint, order: int) -> float:
    if order <= RESCALE_THRESHOLD:
        return 0.0
    try:
        data = asymptotics.solve_singular(constraint)
    except asymptotics.ConstraintNotAdmissible:
        return 0.0
    return -math.log(data.rho)


def _tree_series(constraint, order, backend, rate):
    if not constraint.contains(0):
        return _zero(order, backend, rate)
    if backend == "exact":
        return lagrange_invert(constraint, order)
    return lagrange_invert_float(constraint, order, rate)


def _zero(order, backend, rate):
    if backend == "exact":
        return TruncatedSeries.zero(order)
    return FloatSeries.zero(order, rate)


def _one(order, backend, rate):
    if backend == "exact":
        return TruncatedSeries.one(order)
    return FloatSeries.one(order, rate)


def _bounded_tree_series(constraint, height, order, backend, rate):
    # T_{<= -1} = 0; each step wraps z*e_P(.) around the previous one.
    t = _zero(order, backend, rate)
    for _ in range(height + 1):
        t = exp_compose(constraint, t).times_z()
    return t


def family_series(
    constraint: PreimageConstraint,
    family: FamilyKind,
    order: int,
    *,
    backend: str = "exact",
    rate: float | None = None,
):
    """The named family's series mod z^(order+1), on either backend."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if backend not in ("exact", "float"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "exact":
        rate = 0.0
    elif rate is None:
        rate = _pick_rate(constraint, order)

    tag = family.tag
    if tag == "bounded-tree":
        return _bounded_tree_series(constraint, family.param, order, backend, rate)

    tree = _tree_series(constraint, order, backend, rate)
    if tag == "tree":
        return tree

    cyc_roots = exp_compose(constraint.shift(1), tree).times_z()  # z*e_{P-1}(T)
    func = (_one(order, backend, rate) - cyc_roots).mul_inverse()
    if tag == "function":
        return func
    if tag == "xi-cyclic":
        return cyc_roots * func * func
    if tag == "connected":
        return func.log()
    if tag == "xi-component":
        return func * func.log()
    if tag == "partial-function":
        return func * exp_compose(ALL_NONNEGATIVE, tree)

    bounded = _bounded_tree_series(constraint, family.param - 1, order, backend, rate)
    deficit_core = exp_compose(constraint.shift(2), tree)  # e_{P-2}(T)
    if tag == "xi-image":
        return (bounded * deficit_core * func * func * func).times_z()
    if tag == "xi-partial-image":
        inner = (deficit_core * func).times_z() + _one(order, backend, rate)
        return bounded * func * func * exp_compose(ALL_NONNEGATIVE, tree) * inner
    raise ValueError(f"unknown family tag {tag!r}")


# -- one-shot coefficient formulas ----------------------------------------


def tree_coefficient(constraint: PreimageConstraint, n: int) -> Fraction:
    """[z^n] of the tree series via (1/n)[z^(n-1)] e_P(z)^n."""
    if n == 0:
        return Fraction(0)
    eps = TruncatedSeries(tuple(constraint.e_coefficients(n - 1)))
    return (eps ** n).coefficient(n - 1) / n


def function_coefficient(constraint: PreimageConstraint, n: int) -> Fraction:
    """[z^n] of the function series via [z^n] e_P(z)^n."""
    eps = TruncatedSeries(tuple(constraint.e_coefficients(n)))
    return (eps ** n).coefficient(n)


def partial_function_coefficient(constraint: PreimageConstraint, n: int) -> Fraction:
    """[z^n] of the partial-function series via [z^n] e_P(z)^n e^z."""
    eps = TruncatedSeries(tuple(constraint.e_coefficients(n)))
    power = eps ** n
    return sum(
        (power.coefficient(j) * Fraction(1, math.factorial(n - j)) for j in range(n + 1)),
        Fraction(0),
    )


def count(constraint: PreimageConstraint, family: FamilyKind, n: int) -> CountReport:
    """Exact count report for one family at one size."""
    if n < 0:
        raise ValueError("size must be nonnegative")
    tag = family.tag
    if tag == "tree":
        coeff = tree_coefficient(constraint, n)
    elif tag == "function":
        coeff = function_coefficient(constraint, n)
    elif tag == "partial-function":
        coeff = partial_function_coefficient(constraint, n)
    else:
        coeff = family_series(constraint, family, n).coefficient(n)

    if tag in COUNTING_FAMILIES:
        total = Fraction(math.factorial(n)) * coeff
        if total.denominator != 1:
            raise ArithmeticError(f"non-integer count {total} for {family} at n={n}")
        return CountReport(constraint, family, n, coeff, count=int(total))

    denominator = function_coefficient(constraint, n)
    average = coeff / denominator if denominator != 0 else None
    return CountReport(constraint, family, n, coeff, average=average)


# -- averages ---------------------------------------------------------------

_STAT_TAGS = ("image-deficiency", "image-size", "cyclic-points", "components")


def _statistic_series_family(stat: str, k: int | None) -> FamilyKind:
    if stat in ("image-deficiency", "image-size"):
        if k is None or k < 0:
            raise ValueError(f"statistic {stat!r} needs a nonnegative iteration count k")
        return FamilyKind("xi-image", k)
    if k is not None:
        raise ValueError(f"statistic {stat!r} takes no iteration count")
    if stat == "cyclic-points":
        return FamilyKind("xi-cyclic")
    if stat == "components":
        return FamilyKind("xi-component")
    raise ValueError(f"unknown statistic {stat!r}")


def expected_statistic(
    constraint: PreimageConstraint, stat: str, n: int, k: int | None = None
) -> Fraction:
    """Exact average of a statistic over all constrained functions on n points."""
    family = _statistic_series_family(stat, k)
    denominator = function_coefficient(constraint, n)
    if denominator == 0:
        raise NoFunctionsOfThisSize(
            f"no function on {n} points satisfies the constraint {constraint}"
        )
    numerator = family_series(constraint, family, n).coefficient(n)
    ratio = numerator / denominator
    if stat == "image-size":
        return n - ratio
    return ratio


def expected_statistic_float(
    constraint: PreimageConstraint,
    stat: str,
    n: int,
    k: int | None = None,
    rate: float | None = None,
) -> float:
    """Float-backend twin of expected_statistic for large n.

    Numerator and denominator are built at the same rescaling rate, so
    their ratio is formed on stored values and never overflows.
    """
    family = _statistic_series_family(stat, k)
    if rate is None:
        rate = _pick_rate(constraint, n)
    denominator = family_series(
        constraint, FamilyKind("function"), n, backend="float", rate=rate
    ).coefficients[n]
    if denominator == 0.0:
        raise NoFunctionsOfThisSize(
            f"no function on {n} points satisfies the constraint {constraint}"
        )
    numerator = family_series(
        constraint, family, n, backend="float", rate=rate
    ).coefficients[n]
    ratio = numerator / denominator
    if stat == "image-size":
        return n - ratio
    return ratio
