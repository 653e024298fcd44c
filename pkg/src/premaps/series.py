"""Truncated univariate formal power series arithmetic.

Two backends share one API: `TruncatedSeries` carries exact rationals
and is the ground truth; `FloatSeries` carries doubles for orders in
the hundreds-to-thousands where rational bit growth is prohibitive.

All arithmetic is modulo z^(N+1) for the series order N; binary
operations on mismatched orders truncate to the smaller one.  A
`FloatSeries` may carry an exponential rescaling `rate`: the stored
entry c_n represents the coefficient c_n * exp(n * rate).  Because the
Cauchy product, reciprocal, exponential and powers are all homogeneous
in that rescaling, whole formula pipelines can run at a rate chosen to
keep stored values near unity even when the true coefficients grow
like rho^-n far beyond double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constraint import PreimageConstraint


class SeriesError(ValueError):
    """Base class for series arithmetic errors."""


class NonInvertibleSeries(SeriesError):
    """Multiplicative inverse requested for a series with zero constant term."""


class CompositionRequiresZeroConstant(SeriesError):
    """Composition f(g) requested with g(0) != 0."""


class NonInvertibleEpsilon(SeriesError):
    """Lagrange inversion requested for a constraint without 0."""


@dataclass(frozen=True)
class TruncatedSeries:
    """Dense exact-rational coefficients c_0..c_N, arithmetic mod z^(N+1)."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a truncated series needs at least the constant term")
        object.__setattr__(self, "coefficients", coeffs)

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_coefficients(cls, values, order: int | None = None) -> "TruncatedSeries":
        coeffs = [Fraction(v) for v in values]
        if order is not None:
            if len(coeffs) > order + 1:
                coeffs = coeffs[: order + 1]
            else:
                coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls(tuple([Fraction(0)] * (order + 1)))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.from_coefficients([1], order)

    @classmethod
    def z(cls, order: int) -> "TruncatedSeries":
        return cls.from_coefficients([0, 1], order)

    # -- basics ---------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, n: int) -> Fraction:
        return self.coefficients[n]

    def truncated(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return self
        return TruncatedSeries(self.coefficients[: order + 1])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries(
            tuple(self.coefficients[i] + other.coefficients[i] for i in range(n + 1))
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries(
            tuple(self.coefficients[i] - other.coefficients[i] for i in range(n + 1))
        )

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-c for c in self.coefficients))

    def scale(self, factor) -> "TruncatedSeries":
        f = Fraction(factor)
        return TruncatedSeries(tuple(c * f for c in self.coefficients))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            if a[i] == 0:
                continue
            ai = a[i]
            for j in range(n + 1 - i):
                if b[j] != 0:
                    out[i + j] += ai * b[j]
        return TruncatedSeries(tuple(out))

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        if exponent < 0:
            raise ValueError("negative powers are not defined on truncated series")
        result = TruncatedSeries.one(self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def times_z(self) -> "TruncatedSeries":
        """Multiply by z, keeping the order (top coefficient falls off)."""
        return TruncatedSeries((Fraction(0),) + self.coefficients[:-1])

    def mul_inverse(self) -> "TruncatedSeries":
        """The g with self * g = 1 mod z^(N+1); needs a nonzero constant term."""
        if self.coefficients[0] == 0:
            raise NonInvertibleSeries("series with zero constant term has no reciprocal")
        n = self.order
        a = self.coefficients
        inv0 = 1 / a[0]
        out = [Fraction(0)] * (n + 1)
        out[0] = inv0
        for m in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, m + 1):
                if a[i] != 0:
                    acc += a[i] * out[m - i]
            out[m] = -inv0 * acc
        return TruncatedSeries(tuple(out))

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """f(g(z)) mod z^(N+1); requires g(0) = 0."""
        if inner.coefficients[0] != 0:
            raise CompositionRequiresZeroConstant("inner series must have zero constant term")
        n = min(self.order, inner.order)
        g = inner.truncated(n)
        result = TruncatedSeries.from_coefficients([self.coefficients[n]], n)
        for i in range(n - 1, -1, -1):
            result = result * g
            result = result + TruncatedSeries.from_coefficients([self.coefficients[i]], n)
        return result

    def derivative(self) -> "TruncatedSeries":
        """Formal derivative; the order drops by one."""
        if self.order == 0:
            return TruncatedSeries.zero(0)
        return TruncatedSeries(
            tuple(self.coefficients[i + 1] * (i + 1) for i in range(self.order))
        )

    def integral(self) -> "TruncatedSeries":
        """Formal antiderivative with zero constant term; order grows by one."""
        out = [Fraction(0)] * (self.order + 2)
        for i, c in enumerate(self.coefficients):
            out[i + 1] = c / (i + 1)
        return TruncatedSeries(tuple(out))

    def log(self) -> "TruncatedSeries":
        """ln(self) for a series with constant term 1."""
        if self.coefficients[0] != 1:
            raise SeriesError("log needs constant term 1")
        return (self.derivative() * self.mul_inverse()).integral().truncated(self.order)

    # -- conversions -------------------------------------------------------

    def to_float(self, rate: float = 0.0) -> "FloatSeries":
        return FloatSeries(
            tuple(float(c) * math.exp(-n * rate) for n, c in enumerate(self.coefficients)),
            rate=rate,
        )

    def to_json(self) -> list[str]:
        """Debug form: coefficients as "num/den" strings."""
        return [f"{c.numerator}/{c.denominator}" for c in self.coefficients]

    @classmethod
    def from_json(cls, items: list[str]) -> "TruncatedSeries":
        return cls(tuple(Fraction(item) for item in items))


@dataclass(frozen=True)
class FloatSeries:
    """Double-precision twin of TruncatedSeries with optional rescaling.

    Stored entry c_n stands for the coefficient c_n * exp(n * rate).
    Binary operations demand matching rates; z-atoms and constants are
    built at a given rate via the classmethods.
    """

    coefficients: tuple[float, ...]
    rate: float = 0.0

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a truncated series needs at least the constant term")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def zero(cls, order: int, rate: float = 0.0) -> "FloatSeries":
        return cls(tuple([0.0] * (order + 1)), rate)

    @classmethod
    def one(cls, order: int, rate: float = 0.0) -> "FloatSeries":
        return cls((1.0,) + tuple([0.0] * order), rate)

    @classmethod
    def z(cls, order: int, rate: float = 0.0) -> "FloatSeries":
        coeffs = [0.0] * (order + 1)
        if order >= 1:
            coeffs[1] = math.exp(-rate)
        return cls(tuple(coeffs), rate)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, n: int) -> float:
        """True coefficient value; may overflow for large n * rate."""
        if self.rate == 0.0:
            return self.coefficients[n]
        return self.coefficients[n] * math.exp(n * self.rate)

    def log_abs_coefficient(self, n: int) -> float:
        """ln |c_n| in true scale, -inf for a zero entry."""
        stored = self.coefficients[n]
        if stored == 0.0:
            return float("-inf")
        return math.log(abs(stored)) + n * self.rate

    def truncated(self, order: int) -> "FloatSeries":
        if order >= self.order:
            return self
        return FloatSeries(self.coefficients[: order + 1], self.rate)

    def _check_rate(self, other: "FloatSeries") -> None:
        if self.rate != other.rate:
            raise SeriesError(
                f"rate mismatch: {self.rate} vs {other.rate}; rescale explicitly first"
            )

    def __add__(self, other: "FloatSeries") -> "FloatSeries":
        self._check_rate(other)
        n = min(self.order, other.order)
        return FloatSeries(
            tuple(self.coefficients[i] + other.coefficients[i] for i in range(n + 1)),
            self.rate,
        )

    def __sub__(self, other: "FloatSeries") -> "FloatSeries":
        self._check_rate(other)
        n = min(self.order, other.order)
        return FloatSeries(
            tuple(self.coefficients[i] - other.coefficients[i] for i in range(n + 1)),
            self.rate,
        )

    def __neg__(self) -> "FloatSeries":
        return FloatSeries(tuple(-c for c in self.coefficients), self.rate)

    def scale(self, factor: float) -> "FloatSeries":
        f = float(factor)
        return FloatSeries(tuple(c * f for c in self.coefficients), self.rate)

    def __mul__(self, other: "FloatSeries") -> "FloatSeries":
        self._check_rate(other)
        n = min(self.order, other.order)
        a = np.asarray(self.coefficients[: n + 1])
        b = np.asarray(other.coefficients[: n + 1])
        return FloatSeries(tuple(np.convolve(a, b)[: n + 1].tolist()), self.rate)

    def __pow__(self, exponent: int) -> "FloatSeries":
        if exponent < 0:
            raise ValueError("negative powers are not defined on truncated series")
        result = FloatSeries.one(self.order, self.rate)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def times_z(self) -> "FloatSeries":
        factor = math.exp(-self.rate)
        return FloatSeries(
            (0.0,) + tuple(c * factor for c in self.coefficients[:-1]), self.rate
        )

    def mul_inverse(self) -> "FloatSeries":
        if self.coefficients[0] == 0.0:
            raise NonInvertibleSeries("series with zero constant term has no reciprocal")
        n = self.order
        a = np.asarray(self.coefficients)
        out = np.zeros(n + 1)
        out[0] = 1.0 / a[0]
        for m in range(1, n + 1):
            out[m] = -out[0] * np.dot(a[1 : m + 1], out[m - 1 :: -1][: m])
        return FloatSeries(tuple(out.tolist()), self.rate)

    def compose(self, inner: "FloatSeries") -> "FloatSeries":
        """f(g(z)); uses f's true coefficients, result at g's rate."""
        if inner.coefficients[0] != 0.0:
            raise CompositionRequiresZeroConstant("inner series must have zero constant term")
        n = min(self.order, inner.order)
        g = inner.truncated(n)
        result = FloatSeries.one(n, g.rate).scale(self.coefficient(n))
        for i in range(n - 1, -1, -1):
            result = result * g
            result = result + FloatSeries.one(n, g.rate).scale(self.coefficient(i))
        return result

    def derivative(self) -> "FloatSeries":
        if self.order == 0:
            return FloatSeries.zero(0, self.rate)
        factor = math.exp(self.rate)
        return FloatSeries(
            tuple(self.coefficients[i + 1] * (i + 1) * factor for i in range(self.order)),
            self.rate,
        )

    def integral(self) -> "FloatSeries":
        factor = math.exp(-self.rate)
        out = [0.0] * (self.order + 2)
        for i, c in enumerate(self.coefficients):
            out[i + 1] = c * factor / (i + 1)
        return FloatSeries(tuple(out), self.rate)

    def log(self) -> "FloatSeries":
        if self.coefficients[0] != 1.0:
            raise SeriesError("log needs constant term 1")
        return (self.derivative() * self.mul_inverse()).integral().truncated(self.order)

    def with_rate(self, rate: float) -> "FloatSeries":
        """Restate at another rate; can overflow when magnitudes differ wildly."""
        if rate == self.rate:
            return self
        delta = self.rate - rate
        return FloatSeries(
            tuple(c * math.exp(n * delta) for n, c in enumerate(self.coefficients)), rate
        )


# -- operations parameterized by a preimage constraint -------------------


def exp_compose(constraint: PreimageConstraint, inner):
    """e_P(g(z)) mod z^(N+1) for g(0) = 0, either backend.

    The unbounded set composes the full exponential via the recurrence
    E' = g'E; a finite set sums the few powers g^m/m! directly.
    """
    if isinstance(inner, TruncatedSeries):
        if inner.coefficients[0] != 0:
            raise CompositionRequiresZeroConstant("inner series must have zero constant term")
        return _exp_exact(inner) if constraint.unbounded else _finite_e_exact(constraint, inner)
    if isinstance(inner, FloatSeries):
        if inner.coefficients[0] != 0.0:
            raise CompositionRequiresZeroConstant("inner series must have zero constant term")
        return _exp_float(inner) if constraint.unbounded else _finite_e_float(constraint, inner)
    raise TypeError(f"unsupported series type {type(inner)!r}")


def _exp_exact(g: TruncatedSeries) -> TruncatedSeries:
    n = g.order
    gc = g.coefficients
    out = [Fraction(0)] * (n + 1)
    out[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(1, m + 1):
            if gc[j] != 0:
                acc += j * gc[j] * out[m - j]
        out[m] = acc / m
    return TruncatedSeries(tuple(out))


def _exp_float(g: FloatSeries) -> FloatSeries:
    # The recurrence is homogeneous in the rescaling, so it runs on
    # stored values untouched.
    n = g.order
    weighted = np.asarray([j * c for j, c in enumerate(g.coefficients)])
    out = np.zeros(n + 1)
    out[0] = 1.0
    for m in range(1, n + 1):
        out[m] = np.dot(weighted[1 : m + 1], out[m - 1 :: -1][: m]) / m
    return FloatSeries(tuple(out.tolist()), g.rate)


def _finite_e_exact(constraint: PreimageConstraint, g: TruncatedSeries) -> TruncatedSeries:
    total = TruncatedSeries.zero(g.order)
    power = TruncatedSeries.one(g.order)
    exponent = 0
    for m in constraint.elements:
        for _ in range(m - exponent):
            power = power * g
        exponent = m
        total = total + power.scale(Fraction(1, math.factorial(m)))
    return total


def _finite_e_float(constraint: PreimageConstraint, g: FloatSeries) -> FloatSeries:
    total = FloatSeries.zero(g.order, g.rate)
    power = FloatSeries.one(g.order, g.rate)
    exponent = 0
    for m in constraint.elements:
        for _ in range(m - exponent):
            power = power * g
        exponent = m
        total = total + power.scale(1.0 / math.factorial(m))
    return total


def lagrange_invert(constraint: PreimageConstraint, order: int) -> TruncatedSeries:
    """The unique sigma with sigma(0)=0 and sigma = z*e_P(sigma) mod z^(N+1).

    Coefficient n is (1/n)[z^(n-1)] e_P(z)^n, evaluated by keeping a
    running truncated power of e_P.
    """
    if not constraint.contains(0):
        raise NonInvertibleEpsilon("Lagrange inversion needs 0 in the constraint set")
    if order < 0:
        raise ValueError("order must be nonnegative")
    eps = TruncatedSeries(tuple(constraint.e_coefficients(order)))
    out = [Fraction(0)] * (order + 1)
    power = eps
    for n in range(1, order + 1):
        out[n] = power.coefficients[n - 1] / n
        if n < order:
            power = power * eps
    return TruncatedSeries(tuple(out))


def lagrange_invert_float(
    constraint: PreimageConstraint, order: int, rate: float = 0.0
) -> FloatSeries:
    """Float twin of lagrange_invert, emitted at the requested rate."""
    if not constraint.contains(0):
        raise NonInvertibleEpsilon("Lagrange inversion needs 0 in the constraint set")
    if order < 0:
        raise ValueError("order must be nonnegative")
    eps_true = constraint.e_coefficients(order)
    eps = np.asarray([float(c) * math.exp(-m * rate) for m, c in enumerate(eps_true)])
    out = [0.0] * (order + 1)
    shrink = math.exp(-rate)
    power = eps
    for n in range(1, order + 1):
        out[n] = power[n - 1] / n * shrink
        if n < order:
            power = np.convolve(power, eps)[: order + 1]
    return FloatSeries(tuple(out), rate)
