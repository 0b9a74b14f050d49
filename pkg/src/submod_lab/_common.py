"""Shared primitives: error types, the empty-set marker, size limits, verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class InputError(ValueError):
    """Malformed or inconsistent input (bad moduli, ring mismatch, non-proper ideal...)."""


class ResourceLimitError(RuntimeError):
    """An enumeration would exceed the configured size caps."""


class ContractError(AssertionError):
    """A construction failed one of its self-checks."""


class _EmptyMarker:
    """Stand-in for the value ``∅`` a psi/phi function may return.

    It is a distinct singleton, never an empty ideal/submodule: ``{0}`` and ``∅``
    behave differently under every predicate in the package.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"

    def __str__(self):
        return "∅"

    def __reduce__(self):
        return (_EmptyMarker, ())


EMPTY = _EmptyMarker()


def is_empty(value) -> bool:
    return value is EMPTY


@dataclass(frozen=True)
class Limits:
    max_ring_order: int = 4096
    max_ideals: int = 4096
    max_module_order: int = 1024
    max_submodules: int = 8192

    def __post_init__(self):
        for name in ("max_ring_order", "max_ideals", "max_module_order", "max_submodules"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class ClassificationResult:
    """Verdict of a predicate, with a refuting witness when it is false.

    Truthiness follows ``verdict`` so results can be used directly in conditions.
    """

    verdict: bool
    witness: dict[str, Any] | None = None
    method: str = "def"
    extra: dict[str, Any] = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.verdict


def bits(mask: int):
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def subgroup_join(add, members: set[int], x: int) -> set[int]:
    """The subgroup generated by the subgroup ``members`` and element ``x``."""
    if x in members:
        return members
    cyc = [0]
    y = x
    while y != 0:
        cyc.append(y)
        y = add[y][x]
    return {add[h][c] for h in members for c in cyc}


def span(add, act, seeds) -> int:
    """Mask of the smallest subset containing 0 and ``seeds`` that is closed
    under ``add`` and under every row of the scalar action table ``act``."""
    members = {0}
    for x in {row[g] for row in act for g in seeds}:
        members = subgroup_join(add, members, x)
    return mask_of(members)


def sum_masks(add, a: int, b: int) -> int:
    if a & ~b == 0:
        return b
    if b & ~a == 0:
        return a
    bl = list(bits(b))
    return mask_of(add[x][y] for x in bits(a) for y in bl)
