"""psi-functions and the second / weak second / psi-second / prime predicates.

A psi-function maps submodules of M to submodules of M or to ``EMPTY``. The
psi-second test has five interchangeable algorithms, selected by ``method``:

``def``          scalars r and submodules K
``ideal``        ideals I and submodules K
``elementwise``  scalars a with a*psi(N) not inside a*N
``ci_union``     completely irreducible L: (L:N) = Ann(N) ∪ (L:psi(N))
``ci_cases``     completely irreducible L: (L:N) is Ann(N) or (L:psi(N))

The two ``ci_*`` forms only match the others when N ⊆ psi(N); run them on
:func:`normalize_psi` of an arbitrary psi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from ._common import DEFAULT_LIMITS, EMPTY, ClassificationResult, InputError, Limits, bits
from .module import (
    ModElem,
    ModuleView,
    Submodule,
    all_submodules,
    annihilator,
    colon_module,
    colon_ring,
    completely_irreducibles,
    ideal_image,
    ideals_of,
    nonzero_submodules,
    residual,
)
from .ring import PhiFunction, RingElem, eval_phi, ideal_power

METHODS = ("def", "ideal", "elementwise", "ci_union", "ci_cases")


@dataclass(frozen=True)
class PsiFunction:
    """A function S(M) -> S(M) ∪ {∅}.

    ``kind`` is ``empty``, ``zero``, ``identity``, ``fullM``, ``indexed``
    (with ``index`` >= 1), ``sigma`` or ``custom``. Custom functions carry a
    table keyed by Submodule, or a callable.
    """

    kind: str
    index: int = 0
    table: Mapping[Submodule, object] | Callable[[Submodule], object] | None = field(
        default=None, compare=False, hash=False
    )
    label: str | None = None

    KINDS = ("empty", "zero", "identity", "fullM", "indexed", "sigma", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InputError(f"unknown psi kind {self.kind!r}")
        if self.kind == "indexed" and self.index < 1:
            raise InputError("psi index must be >= 1")
        if self.kind == "custom" and self.table is None:
            raise InputError("custom psi needs a table")

    @classmethod
    def indexed(cls, i: int) -> PsiFunction:
        return cls("indexed", index=i)

    @classmethod
    def custom(cls, table, label: str = "custom") -> PsiFunction:
        return cls("custom", table=table, label=label)

    def __str__(self):
        if self.kind == "indexed":
            return f"psi:{self.index}"
        if self.kind == "custom":
            return self.label or "custom"
        return self.kind

    def __call__(self, N: Submodule):
        return eval_psi(self, N)


FAMILY_TAGS = ("empty", "zero", "identity", "fullM", "psi:1", "psi:2", "sigma")


def parse_psi(tag: str) -> PsiFunction:
    tag = tag.strip()
    if tag in ("empty", "zero", "identity", "fullM", "sigma"):
        return PsiFunction(tag)
    if tag.startswith("psi:"):
        try:
            i = int(tag[4:])
        except ValueError:
            raise InputError(f"bad psi tag {tag!r}") from None
        return PsiFunction.indexed(i)
    raise InputError(f"unknown psi tag {tag!r}")


def psi_family(tags=FAMILY_TAGS) -> list[PsiFunction]:
    return [parse_psi(t) for t in tags]


def indexed_value(N: Submodule, i: int) -> Submodule:
    """(N :_M Ann(N)^i)."""
    return colon_module(N, ideal_power(annihilator(N), i))


def sigma_value(N: Submodule) -> Submodule:
    # (N : I^(k+1)) = ((N : I^k) : I), so the increasing chain is stable once two terms agree
    total = indexed_value(N, 1)
    i = 1
    while True:
        i += 1
        nxt = indexed_value(N, i)
        if nxt <= total:
            return total
        total = total + nxt


def eval_psi(psi: PsiFunction, N: Submodule):
    kind = psi.kind
    if kind == "empty":
        return EMPTY
    if kind == "zero":
        return N.module.zero_submodule
    if kind == "identity":
        return N
    if kind == "fullM":
        return N.module.whole
    if kind == "indexed":
        return indexed_value(N, psi.index)
    if kind == "sigma":
        return sigma_value(N)
    table = psi.table
    if callable(table):
        value = table(N)
    else:
        try:
            value = table[N]
        except KeyError:
            raise InputError(f"custom psi {psi} has no value at {N.short()}") from None
    if value is not EMPTY and value.module is not N.module:
        raise InputError(f"custom psi {psi} returned a submodule of another module")
    return value


def normalize_psi(psi: PsiFunction) -> PsiFunction:
    """psi'(N) = psi(N) + N, with ∅ sent to N. The psi-second verdict is unchanged."""

    def normalized(N: Submodule):
        value = eval_psi(psi, N)
        return N if value is EMPTY else value + N

    return PsiFunction.custom(normalized, label=f"norm({psi})")


def _elem(M: ModuleView, r: int) -> RingElem:
    return RingElem(M.ring, r)


def _maximal_witness(lattice, n_mask: int, img: int, pimg: int):
    """Among K with rN ⊆ K, r*psi(N) ⊄ K and N ⊄ K, the maximal ones are the
    strongest certificates; return the smallest of those, or None."""
    valid = [K for K in lattice if img & ~K.mask == 0 and pimg & ~K.mask and n_mask & ~K.mask]
    for K in valid:
        if not any(K.mask != L.mask and K.mask & ~L.mask == 0 for L in valid):
            return K
    return None


# second and weak second


def is_second(N: Submodule) -> ClassificationResult:
    """Every scalar maps N onto itself or to zero."""
    if N.is_zero():
        return ClassificationResult(False, {"reason": "zero submodule"}, "fast")
    M = N.module
    for r in range(M.ring.size):
        img = M.scale(r, N.mask)
        if img != 1 and img != N.mask:
            return ClassificationResult(False, {"a": _elem(M, r), "K": Submodule(M, img)}, "fast")
    return ClassificationResult(True, None, "fast")


def is_second_bruteforce(N: Submodule, limits: Limits = DEFAULT_LIMITS) -> ClassificationResult:
    """rN ⊆ K forces rN = 0 or N ⊆ K, over all scalars and all submodules."""
    if N.is_zero():
        return ClassificationResult(False, {"reason": "zero submodule"}, "bruteforce")
    M = N.module
    lattice = all_submodules(M, limits)
    for r in range(M.ring.size):
        img = M.scale(r, N.mask)
        if img == 1:
            continue
        for K in lattice:
            if img & ~K.mask == 0 and N.mask & ~K.mask:
                return ClassificationResult(False, {"r": _elem(M, r), "K": K}, "bruteforce")
    return ClassificationResult(True, None, "bruteforce")


def is_weak_second(S: Submodule, limits: Limits = DEFAULT_LIMITS) -> ClassificationResult:
    """r ∈ (K:S) minus (K:M) forces S ⊆ K or rS = 0."""
    if S.is_zero():
        return ClassificationResult(False, {"reason": "zero submodule"}, "weak")
    M = S.module
    lattice = all_submodules(M, limits)
    for r in range(M.ring.size):
        img = M.scale(r, S.mask)
        if img == 1:
            continue
        img_m = M.scale(r, M.full_mask)
        K = _maximal_witness(lattice, S.mask, img, img_m)
        if K is not None:
            return ClassificationResult(False, {"r": _elem(M, r), "K": K}, "weak")
    return ClassificationResult(True, None, "weak")


# psi-second


def is_psi_second(
    N: Submodule, psi: PsiFunction, method: str = "def", limits: Limits = DEFAULT_LIMITS
) -> ClassificationResult:
    if method not in METHODS:
        raise InputError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if N.is_zero():
        return ClassificationResult(False, {"reason": "zero submodule"}, method)
    value = eval_psi(psi, N)
    return _CHECKS[method](N, value, limits)


def _check_def(N: Submodule, value, limits: Limits) -> ClassificationResult:
    # r*∅ ⊆ K always holds, so the premise never fires
    if value is EMPTY:
        return ClassificationResult(True, None, "def")
    M = N.module
    lattice = all_submodules(M, limits)
    for r in range(M.ring.size):
        img = M.scale(r, N.mask)
        if img == 1:
            continue
        pimg = M.scale(r, value.mask)
        K = _maximal_witness(lattice, N.mask, img, pimg)
        if K is not None:
            return ClassificationResult(False, {"r": _elem(M, r), "K": K}, "def")
    return ClassificationResult(True, None, "def")


def _check_ideal(N: Submodule, value, limits: Limits) -> ClassificationResult:
    if value is EMPTY:
        return ClassificationResult(True, None, "ideal")
    M = N.module
    lattice = all_submodules(M, limits)
    for I in ideals_of(M, limits):
        img = ideal_image(I, N).mask
        if img == 1:
            continue
        pimg = ideal_image(I, value).mask
        for K in lattice:
            km = ~K.mask
            if img & km == 0 and pimg & km and N.mask & km:
                return ClassificationResult(False, {"I": I, "K": K}, "ideal")
    return ClassificationResult(True, None, "ideal")


def _check_elementwise(N: Submodule, value, limits: Limits) -> ClassificationResult:
    if value is EMPTY:
        return ClassificationResult(True, None, "elementwise")
    M = N.module
    for a in range(M.ring.size):
        img = M.scale(a, N.mask)
        pimg = M.scale(a, value.mask)
        if pimg & ~img and img != 1 and img != N.mask:
            return ClassificationResult(False, {"a": _elem(M, a), "K": Submodule(M, img)}, "elementwise")
    return ClassificationResult(True, None, "elementwise")


def _ci_witness(N: Submodule, value, L: Submodule, colon_n: int, ann: int, colon_psi: int) -> dict:
    """Turn a failing completely irreducible L into a (r, K=L) witness when one exists."""
    M = N.module
    add = M.ring.add_table
    a = next((r for r in bits(colon_n) if not ann >> r & 1 and not colon_psi >> r & 1), None)
    if a is None:
        # (L:N) ≠ Ann and ≠ (L:psi): combine one element from each gap
        xs = [r for r in bits(colon_n) if not ann >> r & 1]
        ys = [r for r in bits(colon_n) if not colon_psi >> r & 1]
        for x in xs:
            for y in ys:
                s = add[x][y]
                if colon_n >> s & 1 and not ann >> s & 1 and not colon_psi >> s & 1:
                    a = s
                    break
            if a is not None:
                break
    out = {"L": L}
    if a is not None:
        out["r"] = _elem(M, a)
        out["K"] = L
    return out


def _ci_common(N: Submodule, value, limits: Limits, cases: bool) -> ClassificationResult:
    method = "ci_cases" if cases else "ci_union"
    M = N.module
    ann = annihilator(N).mask
    for L in completely_irreducibles(M, limits):
        if N.mask & ~L.mask == 0:
            continue
        colon_n = colon_ring(L, N).mask
        colon_psi = colon_ring(L, value).mask
        if cases:
            ok = colon_n == ann or colon_n == colon_psi
        else:
            ok = colon_n == ann | colon_psi
        if not ok:
            return ClassificationResult(False, _ci_witness(N, value, L, colon_n, ann, colon_psi), method)
    return ClassificationResult(True, None, method)


def _check_ci_union(N, value, limits):
    return _ci_common(N, value, limits, cases=False)


def _check_ci_cases(N, value, limits):
    return _ci_common(N, value, limits, cases=True)


_CHECKS = {
    "def": _check_def,
    "ideal": _check_ideal,
    "elementwise": _check_elementwise,
    "ci_union": _check_ci_union,
    "ci_cases": _check_ci_cases,
}


def refutes_psi_second(N: Submodule, psi: PsiFunction, witness: dict) -> bool:
    """Re-check a witness against the raw definition: it must satisfy the
    premise (rN ⊆ K, r*psi(N) ⊄ K) and violate both conclusions."""
    if witness is None or N.is_zero():
        return False
    value = eval_psi(psi, N)
    if value is EMPTY:
        return False
    M = N.module
    if "I" in witness:
        scaled_n = ideal_image(witness["I"], N).mask
        scaled_psi = ideal_image(witness["I"], value).mask
    else:
        r = witness.get("r", witness.get("a"))
        if r is None:
            return False
        scaled_n = M.scale(r.index, N.mask)
        scaled_psi = M.scale(r.index, value.mask)
    K = witness.get("K")
    if K is None:
        return False
    km = ~K.mask
    return scaled_n & km == 0 and bool(scaled_psi & km) and scaled_n != 1 and bool(N.mask & km)


def refutes_second(N: Submodule, witness: dict) -> bool:
    """Re-check a (r, K) witness against: rN ⊆ K forces rN = 0 or N ⊆ K."""
    if witness is None or N.is_zero():
        return False
    r = witness.get("r", witness.get("a"))
    K = witness.get("K")
    if r is None or K is None:
        return False
    M = N.module
    img = M.scale(r.index, N.mask)
    return img & ~K.mask == 0 and img != 1 and bool(N.mask & ~K.mask)


# prime-type predicates


def _eval_phi_on_submodule(phi, P: Submodule):
    if isinstance(phi, PsiFunction):
        return eval_psi(phi, P)
    return phi(P)


def is_phi_prime_submodule(P: Submodule, phi) -> ClassificationResult:
    """rx ∈ P minus phi(P) forces r ∈ (P:M) or x ∈ P; ∅ excludes nothing."""
    if P.is_whole():
        raise InputError("phi-primeness is defined for proper submodules only")
    M = P.module
    value = _eval_phi_on_submodule(phi, P)
    excluded = 0 if value is EMPTY else value.mask
    res = residual(P).mask
    outside = [x for x in range(M.size) if not P.mask >> x & 1]
    for r in range(M.ring.size):
        if res >> r & 1:
            continue
        row = M.act[r]
        for x in outside:
            y = row[x]
            if P.mask >> y & 1 and not excluded >> y & 1:
                return ClassificationResult(False, {"r": _elem(M, r), "x": ModElem(M, x)}, "def")
    return ClassificationResult(True, None, "def")


def is_prime_submodule(P: Submodule) -> ClassificationResult:
    return is_phi_prime_submodule(P, PsiFunction("empty"))


def chi_from_phi(phi: PhiFunction, M: ModuleView) -> PsiFunction:
    """P -> phi((P :_R M)) M, with ∅ propagated."""

    def chi(P: Submodule):
        value = eval_phi(phi, residual(P))
        if value is EMPTY:
            return EMPTY
        return ideal_image(value, M.whole)

    return PsiFunction.custom(chi, label=f"chi[{phi}]")


# profiles


def psi_profile(M: ModuleView, psis, limits: Limits = DEFAULT_LIMITS) -> list[dict]:
    """One row per nonzero submodule: second / weak second verdicts and, for each
    psi, its value and the verdict of every method (ci forms raw and normalized)."""
    rows = []
    for N in nonzero_submodules(M, limits):
        second = is_second(N)
        row = {
            "submodule": N,
            "second": second,
            "second_bruteforce": is_second_bruteforce(N, limits),
            "weak_second": is_weak_second(N, limits),
            "psi": {},
        }
        for psi in psis:
            value = eval_psi(psi, N)
            verdicts = {m: is_psi_second(N, psi, m, limits) for m in METHODS}
            normed = normalize_psi(psi)
            ci_norm = {m: is_psi_second(N, normed, m, limits) for m in ("ci_union", "ci_cases")}
            base = verdicts["def"].verdict
            agree = all(verdicts[m].verdict == base for m in ("ideal", "elementwise")) and all(
                r.verdict == base for r in ci_norm.values()
            )
            row["psi"][str(psi)] = {
                "value": value,
                "contains_N": value is not EMPTY and N <= value,
                "methods": verdicts,
                "ci_normalized": ci_norm,
                "agree": agree,
            }
        rows.append(row)
    return rows
