"""Brute-force ground truth on small vertex sets.

Exhaustively walks every function (and partial function, and rooted
tree) on up to 8 points, and aggregates the statistics the series side
predicts: counts, cyclic points, components, connectedness, and
iterated-image deficits.

The sweep over all n^n functions is done once per n and bucketed by
the *profile* of preimage sizes that occur (a bitmask over 0..n).
Whether a function satisfies a constraint P depends only on that
profile, so a single cached sweep answers every P at a given n; there
are at most 2^(n+1) buckets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .constraint import PreimageConstraint

MAX_POINTS = 8


class CapExceeded(ValueError):
    """Raised when an enumeration beyond the hard size cap is requested."""


@dataclass(frozen=True)
class OracleSummary:
    n: int
    constraint: PreimageConstraint
    function_count: int
    partial_function_count: int
    tree_count: int
    connected_count: int
    total_cyclic_points: int
    total_components: int
    total_image_deficiency: tuple[int, ...]  # index k = 0..k_max

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "constraint": str(self.constraint),
            "function_count": str(self.function_count),
            "partial_function_count": str(self.partial_function_count),
            "tree_count": str(self.tree_count),
            "connected_count": str(self.connected_count),
            "total_cyclic_points": str(self.total_cyclic_points),
            "total_components": str(self.total_components),
            "total_image_deficiency": [str(v) for v in self.total_image_deficiency],
        }


def _check_cap(n: int) -> None:
    if n < 0:
        raise ValueError("size must be nonnegative")
    if n > MAX_POINTS:
        raise CapExceeded(f"brute force is capped at {MAX_POINTS} points, got {n}")


def _profile_mask(counts) -> int:
    mask = 0
    for c in counts:
        mask |= 1 << c
    return mask


def _mask_allowed(mask: int, constraint: PreimageConstraint) -> bool:
    size = 0
    while mask:
        if mask & 1 and not constraint.contains(size):
            return False
        mask >>= 1
        size += 1
    return True


@lru_cache(maxsize=None)
def _function_buckets(n: int):
    """mask -> [count, cyclic, components, connected, deficits[0..n]]."""
    buckets: dict[int, list] = {}
    points = range(n)
    for f in itertools.product(points, repeat=n):
        counts = [0] * n
        for v in f:
            counts[v] += 1
        mask = _profile_mask(counts)

        # Iterated images; they stabilize on the cyclic core within n steps.
        deficits = [0] * (n + 1)
        image = set(points)
        for k in range(1, n + 1):
            image = {f[x] for x in image}
            deficits[k] = n - len(image)
        cyclic = len(image)

        # Components of the functional graph via union-find (path halving).
        parent = list(points)
        components = n
        for x in points:
            rx = x
            while parent[rx] != rx:
                parent[rx] = parent[parent[rx]]
                rx = parent[rx]
            ry = f[x]
            while parent[ry] != ry:
                parent[ry] = parent[parent[ry]]
                ry = parent[ry]
            if rx != ry:
                parent[rx] = ry
                components -= 1

        bucket = buckets.get(mask)
        if bucket is None:
            bucket = [0, 0, 0, 0, [0] * (n + 1)]
            buckets[mask] = bucket
        bucket[0] += 1
        bucket[1] += cyclic
        bucket[2] += components
        bucket[3] += 1 if components == 1 else 0
        for k in range(n + 1):
            bucket[4][k] += deficits[k]
    return buckets


@lru_cache(maxsize=None)
def _partial_function_buckets(n: int):
    """mask -> count over partial functions; n encodes "unmapped"."""
    buckets: dict[int, int] = {}
    for f in itertools.product(range(n + 1), repeat=n):
        counts = [0] * (n + 1)
        for v in f:
            counts[v] += 1
        mask = _profile_mask(counts[:n])  # the unmapped slot is not a point
        buckets[mask] = buckets.get(mask, 0) + 1
    return buckets


@lru_cache(maxsize=None)
def _tree_buckets(n: int):
    """mask -> count of labeled rooted trees rooted at point 0.

    By relabeling symmetry the per-root counts agree, so totals are n
    times these.  A parent map on points 1..n-1 is a tree iff every
    chain of parents reaches the root.
    """
    buckets: dict[int, int] = {}
    if n == 0:
        return buckets
    for parents in itertools.product(range(n), repeat=n - 1):
        ok = True
        for start in range(1, n):
            x = start
            steps = 0
            while x != 0:
                x = parents[x - 1]
                steps += 1
                if steps > n:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        counts = [0] * n
        for p in parents:
            counts[p] += 1
        mask = _profile_mask(counts)
        buckets[mask] = buckets.get(mask, 0) + 1
    return buckets


def enumerate_trees(constraint: PreimageConstraint, n: int) -> int:
    """Count labeled rooted trees whose every vertex's child count is in P."""
    _check_cap(n)
    if n == 0:
        return 0
    total = sum(
        cnt for mask, cnt in _tree_buckets(n).items() if _mask_allowed(mask, constraint)
    )
    return n * total


def enumerate_mappings(
    constraint: PreimageConstraint, n: int, k_max: int
) -> OracleSummary:
    """Aggregate every statistic over the constrained functions on n points."""
    _check_cap(n)
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")

    function_count = 0
    cyclic = 0
    components = 0
    connected = 0
    deficits = [0] * (n + 1)
    for mask, bucket in _function_buckets(n).items():
        if not _mask_allowed(mask, constraint):
            continue
        function_count += bucket[0]
        cyclic += bucket[1]
        components += bucket[2]
        connected += bucket[3]
        for k in range(n + 1):
            deficits[k] += bucket[4][k]

    partial_count = sum(
        cnt
        for mask, cnt in _partial_function_buckets(n).items()
        if _mask_allowed(mask, constraint)
    )

    # Deficits stabilize at k = n; extend or trim to the requested range.
    full = tuple(deficits[k] if k <= n else deficits[n] for k in range(k_max + 1))

    return OracleSummary(
        n=n,
        constraint=constraint,
        function_count=function_count,
        partial_function_count=partial_count,
        tree_count=enumerate_trees(constraint, n),
        connected_count=connected,
        total_cyclic_points=cyclic,
        total_components=components,
        total_image_deficiency=full,
    )
