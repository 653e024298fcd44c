"""Singularity constants and the asymptotic formulas they drive.

For an admissible constraint (0 in P, some element exceeding 1) the
positive number tau solves e_P(tau) = tau * e_P'(tau), and
rho = tau/e_P(tau) = 1/e_{P-1}(tau) is the dominant singularity radius
of every series in the family.  The increasing sequence
tau_0 = 0, tau_{k+1} = rho * e_P(tau_k) climbs to tau and governs the
size of k-th iterated images: on average |f^k| ~ n (1 - tau_k/tau).

Periodic constraints (gcd of the support > 1) get their constants
computed all the same, but every evaluation carries an explicit
warning because the transfer theorems assume aperiodicity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

from .constraint import ALL_NONNEGATIVE, Admissibility, PreimageConstraint
from .families import FamilyKind


class ConstraintNotAdmissible(ValueError):
    """Raised when singular constants are requested without 0 in P or P-2 empty."""


class PeriodicConstraintWarning(UserWarning):
    """The constants exist but the supporting theorems assume gcd(P) = 1."""


@dataclass(frozen=True)
class SingularData:
    constraint: PreimageConstraint
    tau: float
    rho: float
    e_tau: float
    e_m1_tau: float
    e_m2_tau: float
    aperiodic: bool
    period: int

    def to_json(self) -> dict:
        return {
            "constraint": str(self.constraint),
            "tau": self.tau,
            "rho": self.rho,
            "e_tau": self.e_tau,
            "e_m1_tau": self.e_m1_tau,
            "e_m2_tau": self.e_m2_tau,
            "period": self.period,
            "unproven": not self.aperiodic,
        }


@dataclass(frozen=True)
class TauSequence:
    constraint: PreimageConstraint
    values: tuple[float, ...]  # tau_0 .. tau_K

    def to_json(self) -> dict:
        return {"constraint": str(self.constraint), "tau_k": list(self.values)}


@dataclass(frozen=True)
class LogValue:
    """A positive magnitude held in log space; rho^-n overflows doubles early."""

    log: float

    @property
    def value(self) -> float:
        return math.exp(self.log)  # OverflowError past the double range, by design

    def log2(self) -> float:
        return self.log / math.log(2.0)


def slope_gap(constraint: PreimageConstraint, t: float) -> float:
    """f(t) = t*e_P'(t) - (e_P(t) - 1); increasing, hits 1 exactly at tau."""
    return t * constraint.shift(1).e_value(t) - (constraint.e_value(t) - 1.0)


def solver_bracket(constraint: PreimageConstraint) -> float:
    """Upper end of the root bracket, ((k-1)!/(1-1/k))^(1/k) for the least k > 1."""
    k = constraint.smallest_above_one()
    if k is None:
        raise ConstraintNotAdmissible(
            f"constraint {constraint} has no element above 1; constants are undefined"
        )
    return (math.factorial(k - 1) / (1.0 - 1.0 / k)) ** (1.0 / k)


@lru_cache(maxsize=None)
def _solve_singular_cached(constraint: PreimageConstraint, tol: float) -> SingularData:
    cls = constraint.classify()
    if cls.tag is Admissibility.FORCES_PERMUTATION:
        raise ConstraintNotAdmissible(
            f"constraint {constraint} forces permutations; constants are undefined"
        )
    high = solver_bracket(constraint)
    while slope_gap(constraint, high) < 1.0:
        high *= 2.0  # the analytic bound should already suffice
    low = 0.0
    while high - low > tol:
        mid = 0.5 * (low + high)
        if slope_gap(constraint, mid) < 1.0:
            low = mid
        else:
            high = mid
    tau = 0.5 * (low + high)
    shifted2 = constraint.shift(2)
    for _ in range(2):  # Newton polish; f'(t) = t * e_{P-2}(t)
        slope = tau * shifted2.e_value(tau)
        if slope == 0.0:
            break
        tau -= (slope_gap(constraint, tau) - 1.0) / slope

    e_tau = constraint.e_value(tau)
    return SingularData(
        constraint=constraint,
        tau=tau,
        rho=tau / e_tau,
        e_tau=e_tau,
        e_m1_tau=constraint.shift(1).e_value(tau),
        e_m2_tau=shifted2.e_value(tau),
        aperiodic=cls.period == 1,
        period=cls.period,
    )


def solve_singular(constraint: PreimageConstraint, tol: float = 1e-13) -> SingularData:
    """Solve for tau and rho by bisection plus two Newton steps."""
    return _solve_singular_cached(constraint, tol)


def _warn_if_periodic(data: SingularData) -> None:
    if not data.aperiodic:
        warnings.warn(
            f"constraint {data.constraint} has period {data.period} > 1; "
            "the asymptotic formulas are unproven there",
            PeriodicConstraintWarning,
            stacklevel=3,
        )


def tau_sequence(
    constraint: PreimageConstraint, length: int, tol: float = 1e-13
) -> TauSequence:
    """tau_0 = 0 and tau_{k+1} = rho * e_P(tau_k), through index `length`."""
    if length < 0:
        raise ValueError("sequence length must be nonnegative")
    data = solve_singular(constraint, tol)
    values = [0.0]
    current = 0.0
    for _ in range(length):
        current = data.rho * constraint.e_value(current)
        values.append(current)
    return TauSequence(constraint=constraint, values=tuple(values))


def coefficient_asymptote(
    constraint: PreimageConstraint, family: FamilyKind, n: int, tol: float = 1e-13
) -> LogValue:
    """Leading-order coefficient estimate, as a log-space magnitude."""
    data = solve_singular(constraint, tol)
    _warn_if_periodic(data)
    if n <= 0:
        raise ValueError("asymptotic estimates need n >= 1")
    log_growth = -n * math.log(data.rho)
    tag = family.tag
    if tag == "tree":
        const = math.sqrt(data.e_tau / (2.0 * math.pi * data.e_m2_tau))
        return LogValue(math.log(const) - 1.5 * math.log(n) + log_growth)
    if tag in ("function", "partial-function"):
        const = 1.0 / math.sqrt(2.0 * math.pi * data.tau * data.rho * data.e_m2_tau)
        log_value = math.log(const) - 0.5 * math.log(n) + log_growth
        if tag == "partial-function":
            log_value += data.tau
        return LogValue(log_value)
    if tag == "xi-cyclic":
        const = 1.0 / (2.0 * data.tau * data.rho * data.e_m2_tau)
        return LogValue(math.log(const) + log_growth)
    if tag in ("xi-image", "xi-partial-image"):
        tau_k = tau_sequence(constraint, family.param, tol).values[family.param]
        if tau_k == 0.0:
            raise ValueError("the k = 0 image deficit is identically zero")
        const = (tau_k / data.tau ** 2) * math.sqrt(
            data.e_tau / (2.0 * math.pi * data.e_m2_tau)
        )
        log_value = math.log(const) + 0.5 * math.log(n) + log_growth
        if tag == "xi-partial-image":
            log_value += data.tau
        return LogValue(log_value)
    raise ValueError(f"no coefficient asymptote for family {family}")


def average_cyclic_asymptote(
    constraint: PreimageConstraint, n: int, tol: float = 1e-13
) -> float:
    """sqrt(pi / (2 tau rho e_{P-2}(tau))) * sqrt(n)."""
    data = solve_singular(constraint, tol)
    _warn_if_periodic(data)
    constant = math.sqrt(math.pi / (2.0 * data.tau * data.rho * data.e_m2_tau))
    return constant * math.sqrt(n)


def kth_image_asymptote(
    constraint: PreimageConstraint, n: int, k: int, tol: float = 1e-13
) -> float:
    """n (1 - tau_k/tau); the same value serves total and partial functions."""
    data = solve_singular(constraint, tol)
    _warn_if_periodic(data)
    tau_k = tau_sequence(constraint, k, tol).values[k]
    return n * (1.0 - tau_k / data.tau)


def coalescence_metric(constraint: PreimageConstraint, k: int, tol: float = 1e-13) -> float:
    """log2 shrinkage of the k-th image relative to the unconstrained baseline."""
    if k < 1:
        raise ValueError("the coalescence metric needs k >= 1")
    data = solve_singular(constraint, tol)
    _warn_if_periodic(data)
    tau_k = tau_sequence(constraint, k, tol).values[k]
    base = solve_singular(ALL_NONNEGATIVE, tol)
    base_k = tau_sequence(ALL_NONNEGATIVE, k, tol).values[k]
    return math.log2(1.0 - tau_k / data.tau) - math.log2(1.0 - base_k / base.tau)
