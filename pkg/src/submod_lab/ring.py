"""Finite commutative rings Z/n1 x ... x Z/nk, their ideals and phi-functions.

Elements are addressed by their index in lexicographic residue order, so the
zero element is always index 0. Ideals are bitmasks over those indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as _cartesian
from math import prod
from typing import Callable, Mapping, Union

from ._common import (
    DEFAULT_LIMITS,
    EMPTY,
    ClassificationResult,
    ContractError,
    InputError,
    Limits,
    ResourceLimitError,
    bits,
    mask_of,
    span,
    sum_masks,
)


@dataclass(frozen=True)
class RingSpec:
    moduli: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(n) for n in self.moduli)
        if not moduli:
            raise InputError("a ring needs at least one modulus")
        if any(n < 2 for n in moduli):
            raise InputError(f"every modulus must be >= 2, got {list(moduli)}")
        object.__setattr__(self, "moduli", moduli)

    @cached_property
    def size(self) -> int:
        return prod(self.moduli)

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for n in reversed(self.moduli):
            out.append(s)
            s *= n
        return tuple(reversed(out))

    @cached_property
    def residue_list(self) -> list[tuple[int, ...]]:
        return list(_cartesian(*(range(n) for n in self.moduli)))

    def index(self, residues) -> int:
        if isinstance(residues, int):
            residues = (residues,)
        residues = tuple(residues)
        if len(residues) != len(self.moduli):
            raise InputError(f"element {residues} has wrong length for {self}")
        return sum((r % n) * s for r, n, s in zip(residues, self.moduli, self._strides))

    def elem(self, residues) -> RingElem:
        return RingElem(self, self.index(residues))

    def elements(self) -> list[RingElem]:
        return [RingElem(self, i) for i in range(self.size)]

    @property
    def zero(self) -> RingElem:
        return RingElem(self, 0)

    @property
    def one(self) -> RingElem:
        return RingElem(self, self.one_index)

    @cached_property
    def one_index(self) -> int:
        return self.index((1,) * len(self.moduli))

    @cached_property
    def add_table(self) -> list[list[int]]:
        res = self.residue_list
        mods = self.moduli
        return [[self.index(tuple((a + b) % n for a, b, n in zip(x, y, mods))) for y in res] for x in res]

    @cached_property
    def mul_table(self) -> list[list[int]]:
        res = self.residue_list
        mods = self.moduli
        return [[self.index(tuple((a * b) % n for a, b, n in zip(x, y, mods))) for y in res] for x in res]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self.index(tuple(-a % n for a, n in zip(x, self.moduli))) for x in self.residue_list]

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def __str__(self):
        return " x ".join(f"Z/{n}" for n in self.moduli)


def _fmt(residues: tuple[int, ...]) -> str:
    return "(" + ",".join(str(r) for r in residues) + ")"


@dataclass(frozen=True, order=True)
class RingElem:
    ring: RingSpec = field(compare=False)
    index: int

    def __eq__(self, other):
        return isinstance(other, RingElem) and self.ring == other.ring and self.index == other.index

    def __hash__(self):
        return hash((self.ring.moduli, self.index))

    @property
    def residues(self) -> tuple[int, ...]:
        return self.ring.residue_list[self.index]

    def _check(self, other):
        if not isinstance(other, RingElem) or other.ring != self.ring:
            raise InputError(f"ring mismatch: {other!r} is not an element of {self.ring}")

    def __add__(self, other):
        self._check(other)
        return RingElem(self.ring, self.ring.add_table[self.index][other.index])

    def __mul__(self, other):
        if not isinstance(other, RingElem):
            return NotImplemented
        self._check(other)
        return RingElem(self.ring, self.ring.mul_table[self.index][other.index])

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg_table[self.index])

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return _fmt(self.residues)

    __str__ = __repr__


def ring_make(moduli) -> RingSpec:
    return RingSpec(tuple(moduli))


def elem_arith(op: str, x: RingElem, y: RingElem | None = None) -> RingElem:
    if op == "neg":
        return -x
    if y is None:
        raise InputError(f"{op} needs two operands")
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise InputError(f"unknown ring operation {op!r}")


class Ideal:
    """An ideal, stored as the canonical set of its elements.

    Two ideals are equal exactly when they have the same elements; the
    generator list is kept only for display.
    """

    __slots__ = ("ring", "mask", "generators")

    def __init__(self, ring: RingSpec, mask: int, generators=None):
        self.ring = ring
        self.mask = mask
        self.generators = tuple(generators) if generators is not None else None

    @property
    def elements(self) -> tuple[RingElem, ...]:
        return tuple(RingElem(self.ring, i) for i in bits(self.mask))

    @property
    def indices(self) -> list[int]:
        return list(bits(self.mask))

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def __len__(self):
        return self.size

    def __contains__(self, x):
        if isinstance(x, RingElem):
            return x.ring == self.ring and bool(self.mask >> x.index & 1)
        return bool(self.mask >> int(x) & 1)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.mask == other.mask

    def __hash__(self):
        return hash((self.ring.moduli, self.mask))

    def __le__(self, other: Ideal):
        return self.mask & ~other.mask == 0

    def __lt__(self, other: Ideal):
        return self <= other and self.mask != other.mask

    def is_proper(self) -> bool:
        return self.mask != self.ring.full_mask

    def is_zero(self) -> bool:
        return self.mask == 1

    def __repr__(self):
        return "{" + ",".join(str(e) for e in self.elements) + "}"

    def short(self) -> str:
        if self.is_zero():
            return "0"
        if not self.is_proper():
            return "R"
        gens = self.generators or minimal_generators(self)
        return "<" + ",".join(str(g) for g in gens) + ">"


def zero_ideal(R: RingSpec) -> Ideal:
    return Ideal(R, 1, ())


def unit_ideal(R: RingSpec) -> Ideal:
    return Ideal(R, R.full_mask, (R.one,))


def ideal_generate(R: RingSpec, gens) -> Ideal:
    gens = [g if isinstance(g, RingElem) else R.elem(g) for g in gens]
    for g in gens:
        if g.ring != R:
            raise InputError(f"generator {g} is not in {R}")
    mask = span(R.add_table, R.mul_table, [g.index for g in gens])
    return Ideal(R, mask, gens)


def minimal_generators(I: Ideal) -> list[RingElem]:
    """A short generating list: greedily adjoin the lowest-index element not yet covered."""
    R = I.ring
    gens: list[RingElem] = []
    cur = 1
    for i in bits(I.mask):
        if not cur >> i & 1:
            gens.append(RingElem(R, i))
            cur = span(R.add_table, R.mul_table, [g.index for g in gens])
            if cur == I.mask:
                break
    return gens


_IDEAL_CACHE: dict[RingSpec, list[Ideal]] = {}


def all_ideals(R: RingSpec, limits: Limits = DEFAULT_LIMITS) -> list[Ideal]:
    """Every ideal of ``R``, ordered by size then by element mask."""
    if R.size > limits.max_ring_order:
        raise ResourceLimitError(f"|R| = {R.size} exceeds max_ring_order {limits.max_ring_order}")
    cached = _IDEAL_CACHE.get(R)
    if cached is not None:
        if len(cached) > limits.max_ideals:
            raise ResourceLimitError(f"{R} has {len(cached)} ideals, above max_ideals {limits.max_ideals}")
        return list(cached)
    add, mul = R.add_table, R.mul_table
    principal = {}
    for x in range(R.size):
        principal.setdefault(span(add, mul, [x]), x)
    seen = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for m in frontier:
            for c in principal:
                if c & ~m == 0:
                    continue
                joined = _ideal_sum_mask(R, m, c)
                if joined not in seen:
                    seen.add(joined)
                    nxt.append(joined)
                    if len(seen) > limits.max_ideals:
                        raise ResourceLimitError(f"{R} has more than {limits.max_ideals} ideals")
        frontier = nxt
    ideals = [Ideal(R, m) for m in sorted(seen, key=lambda m: (m.bit_count(), m))]
    _IDEAL_CACHE[R] = ideals
    return list(ideals)


def _ideal_sum_mask(R: RingSpec, a: int, b: int) -> int:
    return sum_masks(R.add_table, a, b)


def _same_ring(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise InputError(f"ring mismatch: {I.ring} vs {J.ring}")


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(I.ring, _ideal_sum_mask(I.ring, I.mask, J.mask))


def ideal_intersection(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(I.ring, I.mask & J.mask)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    R = I.ring
    mul = R.mul_table
    jl = J.indices
    prods = {mul[i][j] for i in bits(I.mask) for j in jl}
    return Ideal(R, span(R.add_table, mul, prods))


def ideal_power(I: Ideal, k: int) -> Ideal:
    if k < 0:
        raise InputError("ideal powers need k >= 0")
    out = unit_ideal(I.ring)
    for _ in range(k):
        nxt = ideal_product(out, I)
        if nxt == out:
            break
        out = nxt
    return out


def ideal_ops(op: str, I: Ideal, J: Ideal | None = None, k: int | None = None) -> Ideal:
    if op == "sum":
        return ideal_sum(I, J)
    if op == "product":
        return ideal_product(I, J)
    if op == "power":
        return ideal_power(I, 1 if k is None else k)
    if op.startswith("power(") and op.endswith(")"):
        return ideal_power(I, int(op[6:-1]))
    raise InputError(f"unknown ideal operation {op!r}")


def stable_power(I: Ideal) -> Ideal:
    """The intersection of all positive powers of ``I`` (the chain stabilizes)."""
    cur = I
    while True:
        nxt = ideal_product(cur, I)
        if nxt == cur:
            return cur
        cur = nxt


IdealOrEmpty = Union[Ideal, type(EMPTY)]


@dataclass(frozen=True)
class PhiFunction:
    """A function S(R) -> S(R) ∪ {∅}.

    ``kind`` is one of ``empty``, ``zero``, ``identity``, ``power``, ``omega``,
    ``custom``. A custom table is either a mapping keyed by Ideal or a callable.
    """

    kind: str
    power: int = 0
    table: Mapping[Ideal, IdealOrEmpty] | Callable[[Ideal], IdealOrEmpty] | None = field(
        default=None, compare=False, hash=False
    )
    label: str | None = None

    KINDS = ("empty", "zero", "identity", "power", "omega", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InputError(f"unknown phi kind {self.kind!r}")
        if self.kind == "power" and self.power < 1:
            raise InputError("phi power index must be >= 1")
        if self.kind == "custom" and self.table is None:
            raise InputError("custom phi needs a table")

    @classmethod
    def custom(cls, table, label: str = "custom") -> PhiFunction:
        return cls("custom", table=table, label=label)

    def __str__(self):
        if self.kind == "power":
            return f"power:{self.power}"
        if self.kind == "custom":
            return self.label or "custom"
        return self.kind

    def __call__(self, P: Ideal):
        return eval_phi(self, P)


def parse_phi(tag: str) -> PhiFunction:
    tag = tag.strip()
    if tag in ("empty", "zero", "identity", "omega"):
        return PhiFunction(tag)
    if tag.startswith("power:"):
        try:
            i = int(tag.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad phi tag {tag!r}") from None
        return PhiFunction("power", power=i)
    raise InputError(f"unknown phi tag {tag!r}")


def eval_phi(phi: PhiFunction, P: Ideal):
    kind = phi.kind
    if kind == "empty":
        return EMPTY
    if kind == "zero":
        return zero_ideal(P.ring)
    if kind == "identity":
        return P
    if kind == "power":
        return ideal_power(P, phi.power)
    if kind == "omega":
        return stable_power(P)
    table = phi.table
    if callable(table):
        return table(P)
    try:
        return table[P]
    except KeyError:
        raise InputError(f"custom phi {phi} has no value at {P!r}") from None


def is_phi_prime_ideal(P: Ideal, phi: PhiFunction) -> ClassificationResult:
    """rs ∈ P minus phi(P) forces r ∈ P or s ∈ P; an ∅ value excludes nothing."""
    if not P.is_proper():
        raise InputError("phi-primeness is defined for proper ideals only")
    R = P.ring
    value = eval_phi(phi, P)
    excluded = 0 if value is EMPTY else value.mask
    mul = R.mul_table
    outside = [i for i in range(R.size) if not P.mask >> i & 1]
    for r in outside:
        row = mul[r]
        for s in outside:
            t = row[s]
            if P.mask >> t & 1 and not excluded >> t & 1:
                return ClassificationResult(False, {"r": RingElem(R, r), "s": RingElem(R, s)}, "def")
    return ClassificationResult(True, None, "def")


def is_prime_ideal(P: Ideal) -> ClassificationResult:
    return is_phi_prime_ideal(P, PhiFunction("empty"))


@dataclass(frozen=True)
class MultClosedSet:
    ring: RingSpec
    mask: int

    @property
    def elements(self) -> tuple[RingElem, ...]:
        return tuple(RingElem(self.ring, i) for i in bits(self.mask))

    @property
    def indices(self) -> list[int]:
        return list(bits(self.mask))

    def __contains__(self, x: RingElem):
        return bool(self.mask >> x.index & 1)

    def __len__(self):
        return self.mask.bit_count()

    def __repr__(self):
        return "{" + ",".join(str(e) for e in self.elements) + "}"


def saturate(R: RingSpec, S) -> MultClosedSet:
    """Multiplicative closure of ``S`` together with 1."""
    mul = R.mul_table
    members = {R.one_index}
    members.update(s.index if isinstance(s, RingElem) else R.index(s) for s in S)
    frontier = list(members)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(members):
                c = mul[a][b]
                if c not in members:
                    members.add(c)
                    nxt.append(c)
        frontier = nxt
    return MultClosedSet(R, mask_of(members))


def idempotent_power(x: RingElem) -> RingElem:
    """The unique idempotent among the powers x, x^2, x^3, ..."""
    R = x.ring
    mul = R.mul_table
    p = x.index
    seen = []
    while p not in seen:
        seen.append(p)
        p = mul[p][x.index]
    for q in seen:
        if mul[q][q] == q:
            return RingElem(R, q)
    raise ContractError(f"no idempotent power of {x}")  # pragma: no cover


def minimal_idempotent(S: MultClosedSet) -> RingElem:
    """Product of the idempotent powers of the members of ``S``."""
    R = S.ring
    e = R.one_index
    for s in S.indices:
        e = R.mul_table[e][idempotent_power(RingElem(R, s)).index]
    return RingElem(R, e)
