"""Finite modules over product-of-Z/n rings.

Every module is a :class:`ModuleView`: an element count plus an addition
table and a scalar-action table indexed by ring element. Direct sums of cyclic
groups, quotients, localizations, products and submodules-as-modules all end
up in this one form, so the lattice and colon machinery below never needs to
know where a module came from.

Submodules are bitmasks over element indices; index 0 is always zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as _cartesian
from math import prod

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
from .ring import (
    Ideal,
    MultClosedSet,
    RingElem,
    RingSpec,
    all_ideals,
    minimal_idempotent,
    unit_ideal,
)


def _fmt(label: tuple[int, ...]) -> str:
    return "(" + ",".join(str(x) for x in label) + ")"


@dataclass(frozen=True)
class ModuleSpec:
    """Direct sum of cyclic groups Z/d_j, component j acted on by ring coordinate c_j.

    ``coords`` are 1-based, as in the workbench input format.
    """

    ring: RingSpec
    orders: tuple[int, ...]
    coords: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        coords = tuple(int(c) for c in self.coords)
        if len(orders) != len(coords):
            raise InputError("orders and coords must have equal length")
        if not orders:
            raise InputError("a module needs at least one cyclic component")
        k = len(self.ring.moduli)
        for d, c in zip(orders, coords):
            if d < 1:
                raise InputError(f"component order must be >= 1, got {d}")
            if not 1 <= c <= k:
                raise InputError(f"coordinate {c} out of range 1..{k}")
            if self.ring.moduli[c - 1] % d:
                raise InputError(f"order {d} does not divide modulus {self.ring.moduli[c - 1]}")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "coords", coords)

    @property
    def size(self) -> int:
        return prod(self.orders)

    def describe(self) -> str:
        if len(self.ring.moduli) == 1:
            body = "+".join(f"Z/{d}" for d in self.orders)
        else:
            body = "+".join(f"Z/{d}@{c}" for d, c in zip(self.orders, self.coords))
        return f"{body} over {self.ring}"


class ModuleView:
    """A finite R-module given by operation tables."""

    def __init__(self, ring: RingSpec, add, act, labels, origin: str, name: str, spec: ModuleSpec | None = None):
        self.ring = ring
        self.add = add
        self.act = act
        self.labels = labels
        self.origin = origin
        self.name = name
        self.spec = spec
        self.size = len(labels)
        self.full_mask = (1 << self.size) - 1
        self.factors: tuple[ModuleView, ModuleView] | None = None
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._cache: dict = {}
        self._lattice: list[Submodule] | None = None
        self._cyclic: list[int] | None = None

    @classmethod
    def from_spec(cls, spec: ModuleSpec) -> ModuleView:
        return _direct_view(spec)

    def __repr__(self):
        return f"<ModuleView {self.name} |M|={self.size}>"

    def __str__(self):
        return self.name

    # elements

    def index(self, label) -> int:
        if isinstance(label, ModElem):
            if label.module is not self:
                raise InputError(f"{label} is not an element of {self.name}")
            return label.index
        if isinstance(label, int):
            label = (label,)
        label = tuple(label)
        if self.spec is not None:
            if len(label) != len(self.spec.orders):
                raise InputError(f"{_fmt(label)} has {len(label)} coordinates, {self.name} needs {len(self.spec.orders)}")
            label = tuple(x % d for x, d in zip(label, self.spec.orders))
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"{_fmt(label)} is not an element of {self.name}") from None

    def elem(self, label) -> ModElem:
        return ModElem(self, self.index(label))

    def elements(self) -> list[ModElem]:
        return [ModElem(self, i) for i in range(self.size)]

    def neg(self, x: int) -> int:
        return self.act[self.ring.index((-1,) * len(self.ring.moduli))][x]

    def multiple(self, k: int, x: int) -> int:
        """The additive multiple k*x for a non-negative integer k."""
        out = 0
        for _ in range(k):
            out = self.add[out][x]
        return out

    # submodule primitives on masks

    def scale(self, r: int, mask: int) -> int:
        key = ("scale", r, mask)
        out = self._cache.get(key)
        if out is None:
            row = self.act[r]
            out = mask_of(row[m] for m in bits(mask))
            self._cache[key] = out
        return out

    def span(self, seeds) -> int:
        return span(self.add, self.act, list(seeds))

    def sum(self, a: int, b: int) -> int:
        return sum_masks(self.add, a, b)

    @property
    def zero_submodule(self) -> Submodule:
        return Submodule(self, 1, ())

    @property
    def whole(self) -> Submodule:
        return Submodule(self, self.full_mask)

    def submodule(self, mask: int) -> Submodule:
        return Submodule(self, mask)

    def check_axioms(self, exhaustive_budget: int = 2_000_000) -> None:
        """Verify the module axioms by enumeration; large cases sample scalars."""
        R = self.ring
        add, act, n = self.add, self.act, self.size
        for x in range(n):
            if add[0][x] != x:
                raise ContractError(f"{self.name}: 0 is not an additive identity")
            for y in range(n):
                if add[x][y] != add[y][x]:
                    raise ContractError(f"{self.name}: addition not commutative")
        if act[R.one_index] != list(range(n)):
            raise ContractError(f"{self.name}: 1 does not act as identity")
        scalars = range(R.size)
        if R.size * R.size * n > exhaustive_budget:
            scalars = sorted({*range(min(R.size, 32)), R.one_index})
        for r in scalars:
            row = act[r]
            for x in range(n):
                for y in range(n):
                    if row[add[x][y]] != add[row[x]][row[y]]:
                        raise ContractError(f"{self.name}: action not additive in the module")
            for s in scalars:
                rs = R.mul_table[r][s]
                rps = R.add_table[r][s]
                srow = act[s]
                for x in range(n):
                    if act[rs][x] != row[srow[x]]:
                        raise ContractError(f"{self.name}: (rs)m != r(sm)")
                    if act[rps][x] != add[row[x]][srow[x]]:
                        raise ContractError(f"{self.name}: (r+s)m != rm + sm")


@dataclass(frozen=True, order=True)
class ModElem:
    module: ModuleView = field(compare=False)
    index: int

    def __eq__(self, other):
        return isinstance(other, ModElem) and self.module is other.module and self.index == other.index

    def __hash__(self):
        return hash((id(self.module), self.index))

    @property
    def residues(self) -> tuple[int, ...]:
        return self.module.labels[self.index]

    def __add__(self, other):
        if not isinstance(other, ModElem) or other.module is not self.module:
            raise InputError("module mismatch in addition")
        return ModElem(self.module, self.module.add[self.index][other.index])

    def __rmul__(self, r):
        if not isinstance(r, RingElem) or r.ring != self.module.ring:
            return NotImplemented
        return ModElem(self.module, self.module.act[r.index][self.index])

    def __repr__(self):
        return _fmt(self.residues)

    __str__ = __repr__


class Submodule:
    """A submodule as the canonical set of its elements (a bitmask)."""

    __slots__ = ("module", "mask", "generators")

    def __init__(self, module: ModuleView, mask: int, generators=None):
        self.module = module
        self.mask = mask
        self.generators = tuple(generators) if generators is not None else None

    @property
    def elements(self) -> tuple[ModElem, ...]:
        return tuple(ModElem(self.module, i) for i in bits(self.mask))

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def __len__(self):
        return self.size

    def __contains__(self, x):
        idx = x.index if isinstance(x, ModElem) else self.module.index(x)
        return bool(self.mask >> idx & 1)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.module is other.module and self.mask == other.mask

    def __hash__(self):
        return hash((id(self.module), self.mask))

    def _same(self, other):
        if not isinstance(other, Submodule) or other.module is not self.module:
            raise InputError("submodules of different modules")

    def __le__(self, other: Submodule):
        self._same(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: Submodule):
        return self <= other and self.mask != other.mask

    def __ge__(self, other: Submodule):
        return other <= self

    def __gt__(self, other: Submodule):
        return other < self

    def __add__(self, other: Submodule) -> Submodule:
        self._same(other)
        return Submodule(self.module, self.module.sum(self.mask, other.mask))

    def __and__(self, other: Submodule) -> Submodule:
        self._same(other)
        return Submodule(self.module, self.mask & other.mask)

    def is_zero(self) -> bool:
        return self.mask == 1

    def is_whole(self) -> bool:
        return self.mask == self.module.full_mask

    def sort_key(self):
        return (self.size, self.mask)

    def gens(self) -> list[ModElem]:
        if self.generators:
            return list(self.generators)
        return minimal_generators(self)

    def short(self) -> str:
        if self.is_zero():
            return "0"
        if self.is_whole():
            return "M"
        return "<" + ",".join(str(g) for g in self.gens()) + ">"

    def __repr__(self):
        return "{" + ",".join(str(e) for e in self.elements) + "}"


def minimal_generators(N: Submodule) -> list[ModElem]:
    M = N.module
    gens: list[int] = []
    cur = 1
    for i in bits(N.mask):
        if not cur >> i & 1:
            gens.append(i)
            cur = M.sum(cur, cyclic_mask(M, i))
            if cur == N.mask:
                break
    return [ModElem(M, g) for g in gens]


@lru_cache(maxsize=None)
def _direct_view(spec: ModuleSpec) -> ModuleView:
    R = spec.ring
    orders = spec.orders
    labels = list(_cartesian(*(range(d) for d in orders)))
    strides = []
    s = 1
    for d in reversed(orders):
        strides.append(s)
        s *= d
    strides.reverse()

    def idx(lab):
        return sum(x * st for x, st in zip(lab, strides))

    add = [[idx(tuple((a + b) % d for a, b, d in zip(x, y, orders))) for y in labels] for x in labels]
    cols = [c - 1 for c in spec.coords]
    act = []
    for r in R.residue_list:
        act.append([idx(tuple((r[c] * m) % d for m, c, d in zip(x, cols, orders))) for x in labels])
    view = ModuleView(R, add, act, labels, "direct", spec.describe(), spec=spec)
    view.check_axioms()
    return view


def module_make(R: RingSpec, orders, coords=None) -> ModuleView:
    """Build Z/d_1 + ... + Z/d_t over ``R``; ``coords`` default to all 1."""
    orders = tuple(orders)
    if coords is None:
        coords = (1,) * len(orders)
    return _direct_view(ModuleSpec(R, orders, tuple(coords)))


def regular_module(R: RingSpec) -> ModuleView:
    """R as a module over itself."""
    return module_make(R, R.moduli, range(1, len(R.moduli) + 1))


# generation and lattice


def submodule_generate(M: ModuleView, gens) -> Submodule:
    gens = [ModElem(M, M.index(g)) for g in gens]
    return Submodule(M, M.span([g.index for g in gens]), gens)


def cyclic_mask(M: ModuleView, x: int) -> int:
    key = ("cyclic", x)
    out = M._cache.get(key)
    if out is None:
        out = mask_of({row[x] for row in M.act})
        M._cache[key] = out
    return out


def _distinct_cyclics(M: ModuleView) -> list[int]:
    if M._cyclic is None:
        M._cyclic = sorted({cyclic_mask(M, x) for x in range(M.size)}, key=lambda m: (m.bit_count(), m))
    return M._cyclic


def all_submodules(M: ModuleView, limits: Limits = DEFAULT_LIMITS) -> list[Submodule]:
    """Every submodule, ordered by size then mask.

    Fixpoint from {0}: each known N is extended by every cyclic submodule
    not already inside it.
    """
    if M.size > limits.max_module_order:
        raise ResourceLimitError(f"|M| = {M.size} exceeds max_module_order {limits.max_module_order}")
    if M._lattice is not None:
        if len(M._lattice) > limits.max_submodules:
            raise ResourceLimitError(f"{M.name} has {len(M._lattice)} submodules, above the cap")
        return list(M._lattice)
    cyclics = _distinct_cyclics(M)
    seen = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for m in frontier:
            for c in cyclics:
                if c & ~m == 0:
                    continue
                joined = M.sum(m, c)
                if joined not in seen:
                    seen.add(joined)
                    nxt.append(joined)
                    if len(seen) > limits.max_submodules:
                        raise ResourceLimitError(f"{M.name} has more than {limits.max_submodules} submodules")
        frontier = nxt
    M._lattice = [Submodule(M, m) for m in sorted(seen, key=lambda m: (m.bit_count(), m))]
    return list(M._lattice)


def nonzero_submodules(M: ModuleView, limits: Limits = DEFAULT_LIMITS) -> list[Submodule]:
    return [N for N in all_submodules(M, limits) if not N.is_zero()]


# scalar images and colons


def ideal_image(I, N):
    """rN for a single scalar, IN for an ideal; ``∅`` propagates."""
    if N is EMPTY:
        return EMPTY
    M = N.module
    if isinstance(I, RingElem):
        if I.ring != M.ring:
            raise InputError("ring mismatch in scalar image")
        return Submodule(M, M.scale(I.index, N.mask))
    if not isinstance(I, Ideal) or I.ring != M.ring:
        raise InputError("ideal_image needs an ideal of the module's ring")
    key = ("image", I.mask, N.mask)
    out = M._cache.get(key)
    if out is None:
        out = 1
        for i in bits(I.mask):
            part = M.scale(i, N.mask)
            if part & ~out:
                out = M.sum(out, part)
        M._cache[key] = out
    return Submodule(M, out)


def colon_module(N: Submodule, I) -> Submodule:
    """(N :_M I) = {m : Im ⊆ N}; by convention (N :_M ∅) = M."""
    M = N.module
    if I is EMPTY:
        return M.whole
    if isinstance(I, RingElem):
        idx = [I.index]
        key = ("colon_m_elem", N.mask, I.index)
    else:
        if I.ring != M.ring:
            raise InputError("ring mismatch in module colon")
        idx = list(bits(I.mask))
        key = ("colon_m", N.mask, I.mask)
    out = M._cache.get(key)
    if out is None:
        rows = [M.act[i] for i in idx]
        nm = N.mask
        out = mask_of(m for m in range(M.size) if all(nm >> row[m] & 1 for row in rows))
        M._cache[key] = out
    return Submodule(M, out)


def colon_ring(K: Submodule, N) -> Ideal:
    """(K :_R N) = {r : rN ⊆ K}; an ∅ second argument gives R."""
    if N is EMPTY:
        return unit_ideal(K.module.ring)
    K._same(N)
    M = K.module
    key = ("colon_r", K.mask, N.mask)
    out = M._cache.get(key)
    if out is None:
        km = ~K.mask
        out = mask_of(r for r in range(M.ring.size) if M.scale(r, N.mask) & km == 0)
        M._cache[key] = out
    return Ideal(M.ring, out)


def annihilator(N) -> Ideal:
    """Ann_R(N); Ann_R(∅) is taken to be R."""
    if N is EMPTY:
        raise InputError("annihilator of ∅ needs the ring; use annihilator_in")
    return colon_ring(N.module.zero_submodule, N)


def annihilator_in(R: RingSpec, N) -> Ideal:
    if N is EMPTY:
        return unit_ideal(R)
    return annihilator(N)


def residual(N: Submodule) -> Ideal:
    """(N :_R M)."""
    return colon_ring(N, N.module.whole)


# homomorphisms


class ModuleHom:
    """An R-linear map given by its full element table."""

    def __init__(self, source: ModuleView, target: ModuleView, table, images=None, check: bool = True):
        if source.ring != target.ring:
            raise InputError("homomorphism between modules over different rings")
        self.source = source
        self.target = target
        self.table = list(table)
        self.images = images
        if check:
            self._check()

    def _check(self):
        src, tgt, t = self.source, self.target, self.table
        if len(t) != src.size or t[0] != 0:
            raise InputError("map table must send 0 to 0 and cover the source")
        for x in range(src.size):
            for y in range(src.size):
                if t[src.add[x][y]] != tgt.add[t[x]][t[y]]:
                    raise InputError("map is not additive")
        for r in range(src.ring.size):
            srow, trow = src.act[r], tgt.act[r]
            for x in range(src.size):
                if t[srow[x]] != trow[t[x]]:
                    raise InputError("map is not R-linear")

    def __call__(self, x):
        if isinstance(x, ModElem):
            return ModElem(self.target, self.table[x.index])
        return ModElem(self.target, self.table[self.source.index(x)])

    def image(self, N: Submodule | None = None) -> Submodule:
        mask = self.source.full_mask if N is None else N.mask
        return Submodule(self.target, mask_of(self.table[x] for x in bits(mask)))

    def preimage(self, N) -> Submodule:
        if N is EMPTY:
            return EMPTY
        if N.module is not self.target:
            raise InputError("preimage of a submodule of another module")
        t = self.table
        return Submodule(self.source, mask_of(x for x in range(self.source.size) if N.mask >> t[x] & 1))

    def kernel(self) -> Submodule:
        return self.preimage(self.target.zero_submodule)

    def is_mono(self) -> bool:
        return len(set(self.table)) == self.source.size

    def is_epi(self) -> bool:
        return len(set(self.table)) == self.target.size


def hom_make(source: ModuleView, target: ModuleView, images) -> ModuleHom:
    """Homomorphism from a direct-sum module fixed by images of its standard generators."""
    spec = source.spec
    if spec is None:
        raise InputError("hom_make needs a direct-sum source module")
    if source.ring != target.ring:
        raise InputError("source and target rings differ")
    imgs = [target.index(y) for y in images]
    if len(imgs) != len(spec.orders):
        raise InputError("need one image per standard generator")
    R = source.ring
    for j, (d, c, y) in enumerate(zip(spec.orders, spec.coords, imgs)):
        if target.multiple(d, y) != 0:
            raise InputError(f"image of generator {j + 1} is not killed by its order {d}")
        for r, res in enumerate(R.residue_list):
            if target.act[r][y] != target.multiple(res[c - 1] % d, y):
                raise InputError(f"image of generator {j + 1} is not compatible with the ring action")
    table = []
    for lab in source.labels:
        acc = 0
        for k, y in zip(lab, imgs):
            acc = target.add[acc][target.multiple(k, y)]
        table.append(acc)
    return ModuleHom(source, target, table, images=[ModElem(target, y) for y in imgs])


def hom_ops(op: str, f: ModuleHom, N: Submodule | None = None):
    if op == "image":
        return f.image(N)
    if op == "preimage":
        return f.preimage(N)
    if op == "is_mono":
        return f.is_mono()
    if op == "kernel":
        return f.kernel()
    raise InputError(f"unknown hom operation {op!r}")


def _induced_view(M: ModuleView, members: list[int], origin: str, name: str) -> ModuleView:
    """View on the elements ``members`` (ascending, closed under add and act)."""
    pos = {x: i for i, x in enumerate(members)}
    add = [[pos[M.add[x][y]] for y in members] for x in members]
    act = [[pos[row[x]] for x in members] for row in M.act]
    labels = [M.labels[x] for x in members]
    return ModuleView(M.ring, add, act, labels, origin, name)


def submodule_view(N: Submodule) -> tuple[ModuleView, ModuleHom]:
    """N as a module in its own right, with its inclusion into the ambient module."""
    M = N.module
    members = list(bits(N.mask))
    view = _induced_view(M, members, "submodule", f"{N.short()} in {M.name}")
    return view, ModuleHom(view, M, members, check=False)


# quotients


class QuotientMap(ModuleHom):
    """Projection M -> M/K together with the submodule correspondence."""

    def __init__(self, source, target, table, K: Submodule):
        super().__init__(source, target, table, check=False)
        self.K = K

    def coset(self, x) -> frozenset[ModElem]:
        i = x.index if isinstance(x, ModElem) else self.source.index(x)
        c = self.table[i]
        return frozenset(ModElem(self.source, y) for y in range(self.source.size) if self.table[y] == c)

    def lift(self, Nbar: Submodule) -> Submodule:
        """The submodule of M containing K that corresponds to ``Nbar``."""
        return self.preimage(Nbar)

    def correspondence(self) -> dict[Submodule, Submodule]:
        """Submodules of M/K keyed to the submodules of M containing K."""
        return {N: self.image(N) for N in all_submodules(self.source) if self.K <= N}


def quotient(M: ModuleView, K: Submodule) -> tuple[ModuleView, QuotientMap]:
    if K.module is not M:
        raise InputError("K must be a submodule of M")
    cls = [-1] * M.size
    reps = []
    kl = list(bits(K.mask))
    for x in range(M.size):
        if cls[x] < 0:
            c = len(reps)
            reps.append(x)
            for k in kl:
                cls[M.add[x][k]] = c
    add = [[cls[M.add[a][b]] for b in reps] for a in reps]
    act = [[cls[row[a]] for a in reps] for row in M.act]
    labels = [M.labels[a] for a in reps]
    name = f"({M.name}) / {K.short()}" if not K.is_zero() else f"({M.name}) / 0"
    view = ModuleView(M.ring, add, act, labels, "quotient", name)
    view.check_axioms()
    return view, QuotientMap(M, view, cls, K)


# products


def ring_product(R1: RingSpec, R2: RingSpec) -> RingSpec:
    return RingSpec(R1.moduli + R2.moduli)


def product(M1: ModuleView, M2: ModuleView) -> ModuleView:
    """M1 x M2 over R1 x R2 with the componentwise action."""
    R1, R2 = M1.ring, M2.ring
    R = ring_product(R1, R2)
    n2 = M2.size
    labels = [a + b for a in M1.labels for b in M2.labels]
    add = [[M1.add[a][c] * n2 + M2.add[b][d] for c in range(M1.size) for d in range(n2)]
           for a in range(M1.size) for b in range(n2)]
    act = []
    for r1 in range(R1.size):
        row1 = M1.act[r1]
        for r2 in range(R2.size):
            row2 = M2.act[r2]
            act.append([row1[a] * n2 + row2[b] for a in range(M1.size) for b in range(n2)])
    view = ModuleView(R, add, act, labels, "product", f"[{M1.name}] x [{M2.name}]")
    view.factors = (M1, M2)
    view.check_axioms()
    return view


def split(N: Submodule) -> tuple[Submodule, Submodule]:
    """Project a submodule of a product view onto its two factors."""
    P = N.module
    if P.factors is None:
        raise InputError("split needs a submodule of a product module")
    M1, M2 = P.factors
    n2 = M2.size
    m1 = mask_of(x // n2 for x in bits(N.mask))
    m2 = mask_of(x % n2 for x in bits(N.mask))
    return Submodule(M1, m1), Submodule(M2, m2)


def join(N1: Submodule, N2: Submodule, P: ModuleView) -> Submodule:
    """N1 x N2 inside the product view ``P``."""
    M1, M2 = P.factors
    if N1.module is not M1 or N2.module is not M2:
        raise InputError("factors do not match the product")
    n2 = M2.size
    return Submodule(P, mask_of(a * n2 + b for a in bits(N1.mask) for b in bits(N2.mask)))


# localization


class LocalizationMap(ModuleHom):
    def __init__(self, source, target, table, S: MultClosedSet, e: RingElem):
        super().__init__(source, target, table, check=False)
        self.S = S
        self.e = e


def localize(M: ModuleView, S: MultClosedSet) -> tuple[ModuleView, LocalizationMap]:
    """Finite localization: with e the minimal idempotent of S, S^-1 M is e*M.

    The carrier stays a module over the original ring; e acts as identity on
    it and every s in S acts bijectively. Both facts and the kernel description
    are checked before returning.
    """
    if S.ring != M.ring:
        raise InputError("multiplicative set from another ring")
    e = minimal_idempotent(S)
    carrier = M.scale(e.index, M.full_mask)
    members = list(bits(carrier))
    view = _induced_view(M, members, "localized", f"({M.name})[S={S!r}]")
    pos = {x: i for i, x in enumerate(members)}
    row = M.act[e.index]
    table = [pos[row[m]] for m in range(M.size)]
    for s in S.indices:
        if len({M.act[s][x] for x in members}) != len(members):
            raise ContractError(f"{RingElem(M.ring, s)} does not act bijectively on the localization")
    killed = mask_of(m for m in range(M.size) if any(M.act[s][m] == 0 for s in S.indices))
    kernel = mask_of(m for m in range(M.size) if table[m] == 0)
    if killed != kernel:
        raise ContractError("localization kernel differs from the S-torsion")
    view.check_axioms()
    return view, LocalizationMap(M, view, table, S, e)


# completely irreducible submodules and module classes


def _upper_meet(M: ModuleView, N: Submodule, limits: Limits) -> int | None:
    """Intersection of all submodules strictly above N (None if there are none)."""
    meet = None
    for L in all_submodules(M, limits):
        if N.mask & ~L.mask == 0 and L.mask != N.mask:
            meet = L.mask if meet is None else meet & L.mask
    return meet


def is_completely_irreducible(N: Submodule, limits: Limits = DEFAULT_LIMITS) -> bool:
    if N.is_whole():
        return False
    key = ("ci", N.mask)
    M = N.module
    out = M._cache.get(key)
    if out is None:
        meet = _upper_meet(M, N, limits)
        out = meet is not None and meet != N.mask
        M._cache[key] = out
    return out


def completely_irreducibles(M: ModuleView, limits: Limits = DEFAULT_LIMITS) -> list[Submodule]:
    return [L for L in all_submodules(M, limits) if is_completely_irreducible(L, limits)]


def ci_decomposition(N: Submodule, limits: Limits = DEFAULT_LIMITS) -> list[Submodule]:
    """All completely irreducible submodules containing N; they meet exactly in N."""
    if N.is_whole():
        raise InputError("ci_decomposition needs a proper submodule")
    M = N.module
    out = [L for L in completely_irreducibles(M, limits) if N <= L]
    meet = M.full_mask
    for L in out:
        meet &= L.mask
    if meet != N.mask:
        raise ContractError(f"completely irreducible cover of {N.short()} meets in a larger submodule")
    return out


def is_multiplication_module(M: ModuleView, limits: Limits = DEFAULT_LIMITS) -> ClassificationResult:
    whole = M.whole
    for N in all_submodules(M, limits):
        if ideal_image(residual(N), whole) != N:
            return ClassificationResult(False, {"N": N}, "multiplication")
    return ClassificationResult(True, None, "multiplication")


def is_comultiplication_module(M: ModuleView, limits: Limits = DEFAULT_LIMITS) -> ClassificationResult:
    zero = M.zero_submodule
    for N in all_submodules(M, limits):
        if colon_module(zero, annihilator(N)) != N:
            return ClassificationResult(False, {"N": N}, "comultiplication")
    return ClassificationResult(True, None, "comultiplication")


def ideals_of(M: ModuleView, limits: Limits = DEFAULT_LIMITS) -> list[Ideal]:
    return all_ideals(M.ring, limits)
