"""Tags for the combinatorial families a constraint gives rise to.

Trees, height-bounded trees, functions, partial functions, connected
functions, and the summed-statistic series (cyclic points, components,
points missing from the k-th image, and the partial-function variant).
"""

from __future__ import annotations

from dataclasses import dataclass

_PARAMETRIZED = {"bounded-tree", "xi-image", "xi-partial-image"}
_PLAIN = {"tree", "function", "partial-function", "connected", "xi-cyclic", "xi-component"}


@dataclass(frozen=True)
class FamilyKind:
    tag: str
    param: int | None = None

    def __post_init__(self) -> None:
        if self.tag in _PARAMETRIZED:
            if self.param is None or self.param < 0:
                raise ValueError(f"family {self.tag!r} needs a nonnegative parameter")
        elif self.tag in _PLAIN:
            if self.param is not None:
                raise ValueError(f"family {self.tag!r} takes no parameter")
        else:
            raise ValueError(f"unknown family tag {self.tag!r}")

    def __str__(self) -> str:
        if self.param is None:
            return self.tag
        return f"{self.tag}({self.param})"


TREE = FamilyKind("tree")
FUNCTION = FamilyKind("function")
PARTIAL_FUNCTION = FamilyKind("partial-function")
CONNECTED = FamilyKind("connected")
XI_CYCLIC = FamilyKind("xi-cyclic")
XI_COMPONENT = FamilyKind("xi-component")


def bounded_tree(height: int) -> FamilyKind:
    return FamilyKind("bounded-tree", height)


def xi_image(k: int) -> FamilyKind:
    return FamilyKind("xi-image", k)


def xi_partial_image(k: int) -> FamilyKind:
    return FamilyKind("xi-partial-image", k)


def parse_family(tag: str, param: int | None = None) -> FamilyKind:
    """Build a FamilyKind from CLI-style pieces, validating the pairing."""
    if tag in _PLAIN and param is not None:
        raise ValueError(f"family {tag!r} takes no parameter")
    return FamilyKind(tag, param)
