"""Theorem verifiers over a catalog of finite modules.

Each ``verify_*`` walks the catalog, evaluates a result's hypothesis on every
instance, and checks the conclusion wherever the hypothesis holds. The output
is a :class:`TheoremReport`; a report whose hypothesis never fired is marked
``vacuous`` rather than ``verified``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from ._common import DEFAULT_LIMITS, EMPTY, ContractError, Limits, bits
from .classify import (
    PsiFunction,
    chi_from_phi,
    eval_psi,
    indexed_value,
    is_phi_prime_submodule,
    is_psi_second,
    is_second,
    is_second_bruteforce,
    is_weak_second,
    normalize_psi,
    psi_family,
    refutes_psi_second,
    refutes_second,
)
from .module import (
    ModuleHom,
    ModuleView,
    Submodule,
    all_submodules,
    annihilator,
    annihilator_in,
    ci_decomposition,
    colon_module,
    colon_ring,
    hom_make,
    ideal_image,
    ideals_of,
    is_comultiplication_module,
    is_multiplication_module,
    join,
    localize,
    module_make,
    nonzero_submodules,
    product,
    quotient,
    residual,
    split,
    submodule_generate,
    submodule_view,
)
from .ring import (
    Ideal,
    PhiFunction,
    RingElem,
    eval_phi,
    ideal_generate,
    ideal_product,
    is_phi_prime_ideal,
    minimal_idempotent,
    parse_phi,
    ring_make,
    saturate,
)

PHI_FAMILY_TAGS = ("empty", "zero", "identity", "power:2", "omega")
WITNESS_CAP = 25


# catalog


@dataclass
class CatalogEntry:
    name: str
    module: ModuleView
    kind: str = "base"


@dataclass
class Catalog:
    entries: list[CatalogEntry]
    psi_family: list[PsiFunction] = field(default_factory=psi_family)
    phi_family: list[PhiFunction] = field(default_factory=lambda: [parse_phi(t) for t in PHI_FAMILY_TAGS])
    limits: Limits = DEFAULT_LIMITS
    homs: list[tuple[str, ModuleHom]] = field(default_factory=list)

    def modules(self):
        for e in self.entries:
            yield e.name, e.module

    def products(self):
        for e in self.entries:
            if e.module.factors is not None:
                yield e.name, e.module


def base_modules() -> list[ModuleView]:
    out = []
    for n in (2, 3, 5, 4, 9, 25, 6, 10, 15, 8):
        R = ring_make([n])
        out.append(module_make(R, [n]))
    out.append(module_make(ring_make([4]), [4, 2]))
    out.append(module_make(ring_make([2]), [2, 2]))
    z6 = module_make(ring_make([6]), [6])
    out.append(product(z6, z6))
    out.append(product(module_make(ring_make([4]), [4]), module_make(ring_make([2]), [2, 2])))
    return out


def nontrivial_localizations(M: ModuleView, count: int = 2):
    """Up to ``count`` localizations at saturations of single elements whose
    carrier is neither 0 nor all of M, in ring-element order."""
    R = M.ring
    seen = set()
    for s in range(R.size):
        S = saturate(R, [RingElem(R, s)])
        e = minimal_idempotent(S)
        carrier = M.scale(e.index, M.full_mask)
        if carrier in seen or carrier in (1, M.full_mask):
            continue
        seen.add(carrier)
        yield S, localize(M, S)
        if len(seen) == count:
            return


def catalog_from_modules(modules, derived: bool = True, limits: Limits = DEFAULT_LIMITS) -> Catalog:
    """Base entries for ``modules``; with ``derived``, also every quotient by a
    nonzero proper submodule and two nontrivial localizations of each."""
    entries = []
    for M in modules:
        if M.size > limits.max_module_order:
            continue
        entries.append(CatalogEntry(M.name, M, "base"))
    if derived:
        for base in list(entries):
            M = base.module
            for K in all_submodules(M, limits):
                if K.is_zero() or K.is_whole():
                    continue
                Q, _ = quotient(M, K)
                entries.append(CatalogEntry(Q.name, Q, "quotient"))
            for _, (L, _) in nontrivial_localizations(M):
                entries.append(CatalogEntry(L.name, L, "localized"))
    return Catalog(entries, limits=limits, homs=inclusion_homs(entries))


def default_catalog(derived: bool = True, limits: Limits = DEFAULT_LIMITS) -> Catalog:
    catalog = catalog_from_modules(base_modules(), derived, limits)
    catalog.homs.extend(sample_homs())
    return catalog


def inclusion_homs(entries: list[CatalogEntry]) -> list[tuple[str, ModuleHom]]:
    """Inclusions of the nonzero proper submodules of every base entry."""
    homs = []
    for e in entries:
        if e.kind != "base":
            continue
        for A in nonzero_submodules(e.module):
            if A.is_whole():
                continue
            _, inc = submodule_view(A)
            homs.append((f"{A.short()} -> {e.name}", inc))
    return homs


def sample_homs() -> list[tuple[str, ModuleHom]]:
    homs = []
    R6 = ring_make([6])
    homs.append(("Z/3 -> Z/6, 1 |-> 2", hom_make(module_make(R6, [3]), module_make(R6, [6]), [(2,)])))
    R4 = ring_make([4])
    homs.append(("Z/2 -> Z/4, 1 |-> 2", hom_make(module_make(R4, [2]), module_make(R4, [4]), [(2,)])))
    R2 = ring_make([2])
    homs.append(("Z/2 -> Z/2+Z/2, 1 |-> (1,1)", hom_make(module_make(R2, [2]), module_make(R2, [2, 2]), [(1, 1)])))
    return homs


# reports


def _js(x):
    if x is EMPTY:
        return "∅"
    if isinstance(x, (Submodule, Ideal)):
        return x.short()
    if isinstance(x, dict):
        return {k: _js(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_js(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


@dataclass
class TheoremReport:
    theorem_id: str
    instances_checked: int = 0
    hypothesis_hits: int = 0
    violations: list[dict] = field(default_factory=list)
    status: str = "verified"
    details: dict = field(default_factory=dict)
    _order: list = field(default_factory=list, repr=False, compare=False)

    def violation(self, module: ModuleView, **info):
        self.violations.append({"module": module.name, **{k: _js(v) for k, v in info.items()}})
        self._order.append(module.size)

    def finish(self) -> TheoremReport:
        # smallest module first, then lexicographic on the serialized witness
        paired = sorted(
            zip(self._order, self.violations),
            key=lambda p: (p[0], json.dumps(p[1], sort_keys=True, ensure_ascii=False)),
        )
        self.violations = [v for _, v in paired]
        self._order = [o for o, _ in paired]
        if self.violations:
            self.status = "violated"
        elif self.hypothesis_hits == 0:
            self.status = "vacuous"
        else:
            self.status = "verified"
        return self

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "instances_checked": self.instances_checked,
            "hypothesis_hits": self.hypothesis_hits,
            "status": self.status,
            "violations": self.violations,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, d: dict) -> TheoremReport:
        return cls(
            d["theorem_id"],
            d["instances_checked"],
            d["hypothesis_hits"],
            list(d["violations"]),
            d["status"],
            dict(d.get("details", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)


class _Memo:
    """Caches family-psi verdicts; custom psi functions are never cached."""

    def __init__(self, limits: Limits):
        self.limits = limits
        self._psi: dict = {}
        self._second: dict = {}

    def psi_second(self, N: Submodule, psi: PsiFunction, method: str = "def") -> bool:
        if psi.kind == "custom":
            return is_psi_second(N, psi, method, self.limits).verdict
        key = (id(N.module), N.mask, str(psi), method)
        out = self._psi.get(key)
        if out is None:
            out = is_psi_second(N, psi, method, self.limits).verdict
            self._psi[key] = out
        return out

    def second(self, N: Submodule) -> bool:
        key = (id(N.module), N.mask)
        out = self._second.get(key)
        if out is None:
            out = is_second(N).verdict
            self._second[key] = out
        return out


_MEMOS: dict[int, _Memo] = {}


def _memo(catalog: Catalog) -> _Memo:
    m = _MEMOS.get(id(catalog))
    if m is None or m.limits is not catalog.limits:
        m = _Memo(catalog.limits)
        _MEMOS.clear()
        _MEMOS[id(catalog)] = m
    return m


def _contained(a, b) -> bool:
    """a ⊆ b where either side may be ∅ (the empty set)."""
    if a is EMPTY:
        return True
    if b is EMPTY:
        return False
    return a.mask & ~b.mask == 0


def _ideal_contained(a: Ideal, b) -> bool:
    if b is EMPTY:
        return False
    return a.mask & ~b.mask == 0


# verifiers


def verify_t2_3(catalog: Catalog, psis=None, theorem_id: str = "t2.3") -> TheoremReport:
    """psi-second N with Ann(N)psi(N) ⊄ N is second."""
    memo = _memo(catalog)
    rep = TheoremReport(theorem_id)
    for _, M in catalog.modules():
        for N in nonzero_submodules(M, catalog.limits):
            ann = annihilator(N)
            for psi in psis or catalog.psi_family:
                rep.instances_checked += 1
                value = eval_psi(psi, N)
                if value is EMPTY:
                    continue
                if ideal_image(ann, value).mask & ~N.mask == 0:
                    continue
                if not memo.psi_second(N, psi):
                    continue
                rep.hypothesis_hits += 1
                res = is_second(N)
                if not res:
                    rep.violation(M, submodule=N, psi=str(psi), witness=res.witness)
    return rep.finish()


def verify_c2_4(catalog: Catalog) -> TheoremReport:
    """Weak second N with Ann(N)M ⊄ N is second."""
    rep = TheoremReport("c2.4")
    for _, M in catalog.modules():
        for N in nonzero_submodules(M, catalog.limits):
            rep.instances_checked += 1
            if ideal_image(annihilator(N), M.whole).mask & ~N.mask == 0:
                continue
            if not is_weak_second(N, catalog.limits):
                continue
            rep.hypothesis_hits += 1
            res = is_second(N)
            if not res:
                rep.violation(M, submodule=N, psi="fullM", witness=res.witness)
    return rep.finish()


def verify_c42_3(catalog: Catalog) -> TheoremReport:
    """psi-second N with (N : Ann(N)^2) ⊆ psi(N) is psi_sigma-second."""
    memo = _memo(catalog)
    rep = TheoremReport("c42.3")
    sigma = PsiFunction("sigma")
    for _, M in catalog.modules():
        for N in nonzero_submodules(M, catalog.limits):
            second_colon = indexed_value(N, 2)
            for psi in catalog.psi_family:
                rep.instances_checked += 1
                value = eval_psi(psi, N)
                if not _contained(second_colon, value):
                    continue
                if not memo.psi_second(N, psi):
                    continue
                rep.hypothesis_hits += 1
                res = is_psi_second(N, sigma, "def", catalog.limits)
                if not res:
                    rep.violation(M, submodule=N, psi=str(psi), witness=res.witness)
    return rep.finish()


def colon_hypothesis(H: Submodule, limits: Limits = DEFAULT_LIMITS) -> tuple[bool, tuple | None]:
    """For all ideals I, J: (H:I) ⊆ (H:J) implies J ⊆ I. Returns a failing pair if any."""
    ideals = ideals_of(H.module, limits)
    colons = [colon_module(H, I).mask for I in ideals]
    for a, I in enumerate(ideals):
        for b, J in enumerate(ideals):
            if colons[a] & ~colons[b] == 0 and J.mask & ~I.mask:
                return False, (I, J)
    return True, None


def verify_t2_5_c2_6(catalog: Catalog) -> TheoremReport:
    """Under the colon hypothesis, H is second iff H is psi_1-second."""
    memo = _memo(catalog)
    rep = TheoremReport("t2.5_c2.6")
    psi1 = PsiFunction.indexed(1)
    zero_hits = 0
    for _, M in catalog.modules():
        for H in all_submodules(M, catalog.limits):
            rep.instances_checked += 1
            ok, _ = colon_hypothesis(H, catalog.limits)
            if not ok:
                continue
            if H.is_zero():
                zero_hits += 1
                continue
            rep.hypothesis_hits += 1
            s = memo.second(H)
            p = memo.psi_second(H, psi1)
            if s != p:
                rep.violation(M, submodule=H, psi="psi:1", second=s, psi_second=p)
    rep.details["zero_submodule_hits"] = zero_hits
    return rep.finish()


def verify_t2_7(catalog: Catalog, phis=None) -> TheoremReport:
    """chi = phi((P:M))M. (a) chi-prime P with (chi(P):M) ⊆ phi((P:M)) gives a phi-prime
    (P:M); (b) over a multiplication module, phi-prime (P:M) gives a chi-prime P."""
    rep = TheoremReport("t2.7")
    hits_a = hits_b = 0
    for _, M in catalog.modules():
        mult = is_multiplication_module(M, catalog.limits).verdict
        for phi in phis or catalog.phi_family:
            chi = chi_from_phi(phi, M)
            for P in all_submodules(M, catalog.limits):
                if P.is_whole():
                    continue
                rep.instances_checked += 1
                res_p = residual(P)
                phi_val = eval_phi(phi, res_p)
                chi_val = eval_psi(chi, P)
                chi_prime = is_phi_prime_submodule(P, chi)
                # (∅ :_R M) is the empty set of scalars, contained in anything
                colon_ok = chi_val is EMPTY or _ideal_contained(residual(chi_val), phi_val)
                if chi_prime and colon_ok:
                    hits_a += 1
                    res = is_phi_prime_ideal(res_p, phi)
                    if not res:
                        rep.violation(M, part="a", submodule=P, phi=str(phi), witness=res.witness)
                if mult:
                    res_phi = is_phi_prime_ideal(res_p, phi)
                    if res_phi:
                        hits_b += 1
                        if not chi_prime:
                            rep.violation(M, part="b", submodule=P, phi=str(phi), witness=chi_prime.witness)
    rep.hypothesis_hits = hits_a + hits_b
    rep.details.update(hits_a=hits_a, hits_b=hits_b)
    return rep.finish()


def psi_from_phi(phi: PhiFunction, M: ModuleView) -> PsiFunction:
    """S -> (0 :_M phi(Ann(S))), with (0 :_M ∅) = M."""

    def value(S: Submodule):
        return colon_module(M.zero_submodule, eval_phi(phi, annihilator(S)))

    return PsiFunction.custom(value, label=f"coann[{phi}]")


def verify_t92_8(catalog: Catalog, phis=None) -> TheoremReport:
    """(a) psi-second S with Ann(psi(S)) ⊆ phi(Ann(S)) has a phi-prime annihilator.
    (b) over a comultiplication module, with psi(S) = (0 :_M phi(Ann(S))), a phi-prime
    Ann(S) makes S psi-second. (b) is also run on non-comultiplication modules, where
    failures are collected as evidence that the hypothesis is needed."""
    memo = _memo(catalog)
    rep = TheoremReport("t92.8")
    hits_a = hits_b = 0
    necessity = []
    necessity_count = 0
    for _, M in catalog.modules():
        comult = is_comultiplication_module(M, catalog.limits).verdict
        for phi in phis or catalog.phi_family:
            psi_phi = psi_from_phi(phi, M)
            for S in nonzero_submodules(M, catalog.limits):
                ann = annihilator(S)
                phi_val = eval_phi(phi, ann)
                for psi in catalog.psi_family:
                    rep.instances_checked += 1
                    if not _ideal_contained(annihilator_in(M.ring, eval_psi(psi, S)), phi_val):
                        continue
                    if not memo.psi_second(S, psi):
                        continue
                    hits_a += 1
                    res = is_phi_prime_ideal(ann, phi)
                    if not res:
                        rep.violation(M, part="a", submodule=S, psi=str(psi), phi=str(phi), witness=res.witness)
                rep.instances_checked += 1
                if not is_phi_prime_ideal(ann, phi):
                    continue
                res = is_psi_second(S, psi_phi, "def", catalog.limits)
                if comult:
                    hits_b += 1
                    if not res:
                        rep.violation(M, part="b", submodule=S, phi=str(phi), witness=res.witness)
                elif not res:
                    necessity_count += 1
                    if len(necessity) < WITNESS_CAP:
                        necessity.append(
                            {"module": M.name, "submodule": S.short(), "phi": str(phi), "witness": _js(res.witness)}
                        )
    rep.hypothesis_hits = hits_a + hits_b
    rep.details.update(
        hits_a=hits_a,
        hits_b=hits_b,
        non_comultiplication_counterexamples=necessity_count,
        non_comultiplication_witnesses=necessity,
    )
    return rep.finish()


def _localizations(M: ModuleView):
    R = M.ring
    seen = set()
    for s in range(R.size):
        S = saturate(R, [RingElem(R, s)])
        if S.mask in seen:
            continue
        seen.add(S.mask)
        yield S


def verify_p2_9(catalog: Catalog) -> TheoremReport:
    """psi-second passes to N/K in M/K (for K ⊊ N, K ⊆ psi(N)) and to S^-1 N in S^-1 M
    (for Ann(N) ∩ S = ∅)."""
    memo = _memo(catalog)
    rep = TheoremReport("p2.9")
    hits_a = hits_b = 0
    skipped_a = 0
    for _, M in catalog.modules():
        lattice = all_submodules(M, catalog.limits)
        quotients: dict[int, tuple] = {}
        locs = [(S, localize(M, S)) for S in _localizations(M)]
        for N in lattice:
            if N.is_zero():
                continue
            ann = annihilator(N)
            for psi in catalog.psi_family:
                if not memo.psi_second(N, psi):
                    continue
                value = eval_psi(psi, N)
                for K in lattice:
                    if not K < N:
                        continue
                    rep.instances_checked += 1
                    if value is EMPTY or not K <= value:
                        skipped_a += 1
                        continue
                    hits_a += 1
                    if K.mask not in quotients:
                        quotients[K.mask] = quotient(M, K)
                    Q, q = quotients[K.mask]
                    NK = q.image(N)
                    psi_k = PsiFunction.custom({NK: q.image(value)}, label=f"{psi}/K")
                    res = is_psi_second(NK, psi_k, "def", catalog.limits)
                    if not res:
                        rep.violation(M, part="a", submodule=N, psi=str(psi), K=K, witness=res.witness)
                for S, (L, f) in locs:
                    rep.instances_checked += 1
                    if ann.mask & S.mask:
                        continue
                    hits_b += 1
                    SN = f.image(N)
                    s_value = EMPTY if value is EMPTY else f.image(value)
                    psi_s = PsiFunction.custom({SN: s_value}, label=f"S^-1 {psi}")
                    res = is_psi_second(SN, psi_s, "def", catalog.limits)
                    if not res:
                        rep.violation(M, part="b", submodule=N, psi=str(psi), S=repr(S), witness=res.witness)
    rep.hypothesis_hits = hits_a + hits_b
    rep.details.update(hits_a=hits_a, hits_b=hits_b, quotient_pairs_without_K_in_psi=skipped_a)
    return rep.finish()


def verify_p2_10(catalog: Catalog, homs=None) -> TheoremReport:
    """For a monomorphism f with psi(f^-1(N')) = f^-1(psi'(N')) for every N', the preimage
    of a psi'-second N' ⊆ Im f is psi-second. The same family tag is used on both sides."""
    rep = TheoremReport("p2.10")
    for name, f in homs if homs is not None else catalog.homs:
        if not f.is_mono():
            continue
        src, tgt = f.source, f.target
        targets = all_submodules(tgt, catalog.limits)
        im = f.image()
        for psi in catalog.psi_family:
            compatible = True
            for Np in targets:
                a = eval_psi(psi, f.preimage(Np))
                b = f.preimage(eval_psi(psi, Np))
                if (a is EMPTY) != (b is EMPTY) or (a is not EMPTY and a != b):
                    compatible = False
                    break
            for Np in targets:
                if Np.is_zero() or not Np <= im:
                    continue
                rep.instances_checked += 1
                if not compatible or not is_psi_second(Np, psi, "def", catalog.limits):
                    continue
                rep.hypothesis_hits += 1
                pre = f.preimage(Np)
                res = is_psi_second(pre, psi, "def", catalog.limits)
                if not res:
                    rep.violation(src, hom=name, submodule=Np, psi=str(psi), witness=res.witness)
    return rep.finish()


def verify_p2_11(catalog: Catalog) -> TheoremReport:
    """For psi_1-second N: aN ≠ N gives (N:Ann N) ⊆ (N:a); J ⊇ Ann(N) with JN ≠ N
    gives (N:Ann N) = (N:J)."""
    memo = _memo(catalog)
    rep = TheoremReport("p2.11")
    psi1 = PsiFunction.indexed(1)
    for _, M in catalog.modules():
        ideals = ideals_of(M, catalog.limits)
        for N in nonzero_submodules(M, catalog.limits):
            rep.instances_checked += 1
            if not memo.psi_second(N, psi1):
                continue
            rep.hypothesis_hits += 1
            ann = annihilator(N)
            top = colon_module(N, ann)
            for a in range(M.ring.size):
                if M.scale(a, N.mask) == N.mask:
                    continue
                r = RingElem(M.ring, a)
                if not top <= colon_module(N, r):
                    rep.violation(M, part="a", submodule=N, witness={"a": r})
            for J in ideals:
                if not ann <= J or ideal_image(J, N) == N:
                    continue
                if colon_module(N, J) != top:
                    rep.violation(M, part="b", submodule=N, witness={"J": J})
    return rep.finish()


def verify_t2_12(catalog: Catalog) -> TheoremReport:
    """If (0:a) ⊆ a(0 : a Ann((0:a))) and (0:a) is psi_1-second, then (0:a) is second."""
    memo = _memo(catalog)
    rep = TheoremReport("t2.12")
    psi1 = PsiFunction.indexed(1)
    for _, M in catalog.modules():
        zero = M.zero_submodule
        R = M.ring
        for a in range(R.size):
            rep.instances_checked += 1
            r = RingElem(R, a)
            N = colon_module(zero, r)
            if N.is_zero():
                continue
            inner = colon_module(zero, ideal_product(ideal_generate(R, [r]), annihilator(N)))
            if not N <= ideal_image(r, inner):
                continue
            rep.hypothesis_hits += 1
            if memo.psi_second(N, psi1) and not memo.second(N):
                rep.violation(M, submodule=N, witness={"a": r, "second": is_second(N).witness})
    return rep.finish()


def verify_t2_13(catalog: Catalog, psis=None) -> TheoremReport:
    """Five characterizations of psi-second must agree.

    def / ideal / elementwise are compared unconditionally. The completely
    irreducible forms are compared raw when N ⊆ psi(N) and always after
    normalization; raw disagreements with N ⊄ psi(N) are tallied, not counted
    as violations.
    """
    memo = _memo(catalog)
    rep = TheoremReport("t2.13")
    parts = {"unconditional": 0, "ci_contained": 0, "ci_normalized": 0}
    raw_discrepancies = 0
    for _, M in catalog.modules():
        for N in nonzero_submodules(M, catalog.limits):
            for psi in psis or catalog.psi_family:
                rep.instances_checked += 1
                rep.hypothesis_hits += 1
                base = memo.psi_second(N, psi, "def")
                failed = []
                for m in ("ideal", "elementwise"):
                    if memo.psi_second(N, psi, m) != base:
                        failed.append(m)
                        parts["unconditional"] += 1
                value = eval_psi(psi, N)
                contains = value is not EMPTY and N <= value
                for m in ("ci_union", "ci_cases"):
                    raw = memo.psi_second(N, psi, m)
                    if raw != base:
                        if contains:
                            failed.append(m)
                            parts["ci_contained"] += 1
                        else:
                            raw_discrepancies += 1
                normed = normalize_psi(psi)
                for m in ("ci_union", "ci_cases"):
                    if is_psi_second(N, normed, m, catalog.limits).verdict != base:
                        failed.append(f"{m}[normalized]")
                        parts["ci_normalized"] += 1
                if failed:
                    res = is_psi_second(N, psi, "def", catalog.limits)
                    rep.violation(M, submodule=N, psi=str(psi), def_verdict=base, disagreeing=failed, witness=res.witness)
    rep.details.update(
        violations_by_part=parts,
        raw_ci_discrepancies_without_containment=raw_discrepancies,
    )
    return rep.finish()


def _product_psi(P: ModuleView, psi1: PsiFunction, psi2: PsiFunction) -> PsiFunction:
    def value(N: Submodule):
        N1, N2 = split(N)
        if join(N1, N2, P) != N:
            raise ContractError(f"{N.short()} is not a product of submodules")
        v1, v2 = eval_psi(psi1, N1), eval_psi(psi2, N2)
        if v1 is EMPTY or v2 is EMPTY:
            return EMPTY
        return join(v1, v2, P)

    return PsiFunction.custom(value, label=f"{psi1}x{psi2}")


def second_product_structure(P: ModuleView, limits: Limits = DEFAULT_LIMITS) -> tuple[bool, list, list]:
    """Compare the second submodules of M1 x M2 with {S1 x 0} ∪ {0 x S2}."""
    M1, M2 = P.factors
    actual = {N.mask for N in nonzero_submodules(P, limits) if is_second(N)}
    predicted = set()
    for S1 in nonzero_submodules(M1, limits):
        if is_second(S1):
            predicted.add(join(S1, M2.zero_submodule, P).mask)
    for S2 in nonzero_submodules(M2, limits):
        if is_second(S2):
            predicted.add(join(M1.zero_submodule, S2, P).mask)
    extra = [Submodule(P, m) for m in sorted(actual - predicted)]
    missing = [Submodule(P, m) for m in sorted(predicted - actual)]
    return not extra and not missing, extra, missing


def verify_t2_133(catalog: Catalog) -> TheoremReport:
    """psi1-second S1 with psi2(0) = 0 makes S1 x 0 a (psi1 x psi2)-second submodule.
    Also checks that the second submodules of a product are exactly S1 x 0 and 0 x S2."""
    memo = _memo(catalog)
    rep = TheoremReport("t2.133")
    structure = {}
    for name, P in catalog.products():
        M1, M2 = P.factors
        for N in all_submodules(P, catalog.limits):
            N1, N2 = split(N)
            if join(N1, N2, P) != N:
                rep.violation(P, part="product_form", submodule=N)
        ok, extra, missing = second_product_structure(P, catalog.limits)
        structure[name] = ok
        for N in extra:
            rep.violation(P, part="second_structure_extra", submodule=N)
        for N in missing:
            rep.violation(P, part="second_structure_missing", submodule=N)
        zero2 = M2.zero_submodule
        for psi2 in catalog.psi_family:
            v2 = eval_psi(psi2, zero2)
            if v2 is EMPTY or not v2.is_zero():
                continue
            for psi1 in catalog.psi_family:
                prod_psi = _product_psi(P, psi1, psi2)
                for S1 in nonzero_submodules(M1, catalog.limits):
                    rep.instances_checked += 1
                    if not memo.psi_second(S1, psi1):
                        continue
                    rep.hypothesis_hits += 1
                    N = join(S1, zero2, P)
                    res = is_psi_second(N, prod_psi, "def", catalog.limits)
                    if not res:
                        rep.violation(P, part="theorem", submodule=N, psi=prod_psi.label, witness=res.witness)
    rep.details["second_structure"] = structure
    return rep.finish()


def probe_monotonicity(catalog: Catalog) -> TheoremReport:
    """When psi(N) ⊆ theta(N), theta-second implies psi-second (asserted). The reverse
    implication is tallied with witnesses but not asserted. The chain
    second -> psi_1 -> psi_2 -> psi_3 -> psi_sigma is tallied in both directions."""
    memo = _memo(catalog)
    rep = TheoremReport("probe.monotonicity")
    family = list(catalog.psi_family)
    stated_failures = 0
    stated_witnesses = []
    chain_psis = [PsiFunction.indexed(i) for i in (1, 2, 3)] + [PsiFunction("sigma")]
    chain_names = ["second"] + [str(p) for p in chain_psis]
    forward = {f"{a} => {b}": 0 for a, b in zip(chain_names, chain_names[1:])}
    backward = {f"{b} => {a}": 0 for a, b in zip(chain_names, chain_names[1:])}
    chain_examples: dict[str, dict] = {}
    for _, M in catalog.modules():
        for N in nonzero_submodules(M, catalog.limits):
            values = {str(p): eval_psi(p, N) for p in family}
            verdicts = {str(p): memo.psi_second(N, p) for p in family}
            for psi in family:
                for theta in family:
                    if psi is theta or not _contained(values[str(psi)], values[str(theta)]):
                        continue
                    rep.instances_checked += 1
                    rep.hypothesis_hits += 1
                    if verdicts[str(theta)] and not verdicts[str(psi)]:
                        rep.violation(M, submodule=N, psi=str(psi), theta=str(theta))
                    if verdicts[str(psi)] and not verdicts[str(theta)]:
                        stated_failures += 1
                        if len(stated_witnesses) < WITNESS_CAP:
                            res = is_psi_second(N, theta, "def", catalog.limits)
                            stated_witnesses.append(
                                {
                                    "module": M.name,
                                    "submodule": N.short(),
                                    "psi": str(psi),
                                    "theta": str(theta),
                                    "witness": _js(res.witness),
                                }
                            )
            chain = [memo.second(N)] + [memo.psi_second(N, p) for p in chain_psis]
            for i in range(len(chain) - 1):
                a, b = chain_names[i], chain_names[i + 1]
                if chain[i] and not chain[i + 1]:
                    forward[f"{a} => {b}"] += 1
                    chain_examples.setdefault(f"{a} => {b}", {"module": M.name, "submodule": N.short()})
                if chain[i + 1] and not chain[i]:
                    backward[f"{b} => {a}"] += 1
                    chain_examples.setdefault(f"{b} => {a}", {"module": M.name, "submodule": N.short()})
    rep.details.update(
        stated_direction_failures=stated_failures,
        stated_direction_witnesses=stated_witnesses,
        chain_forward_failures=forward,
        chain_backward_failures=backward,
        chain_failure_examples=chain_examples,
    )
    return rep.finish()


def product_weak_second_example() -> dict:
    """Rebuild the Z/6 x Z/6 example: S1 = Z/6 is weak second in Z/6, S1 x 0 is not."""
    R = ring_make([6, 6])
    M = module_make(R, [6, 6], [1, 2])
    S = submodule_generate(M, [(1, 0)])
    r = R.elem((2, 1))
    K = submodule_generate(M, [(2, 0), (0, 3)])
    classifier = is_weak_second(S)
    expected_witness = {"r": r, "K": K}
    rS = ideal_image(r, S)
    rM = ideal_image(r, M.whole)
    checks = {
        "rS_in_K": rS <= K,
        "rM_not_in_K": not rM <= K,
        "rS_nonzero": not rS.is_zero(),
        "S_not_in_K": not S <= K,
    }
    R1 = ring_make([6])
    M1 = module_make(R1, [6])
    return {
        "module": M,
        "S": S,
        "classifier": classifier,
        "classifier_witness_valid": refutes_psi_second(S, PsiFunction("fullM"), classifier.witness),
        "expected_witness": expected_witness,
        "expected_witness_checks": checks,
        "expected_witness_valid": all(checks.values()),
        "expected_witness_in_all_witnesses": (r, K) in weak_second_witnesses(S),
        "classifier_matches_expected": classifier.witness == expected_witness,
        "S1_weak_second": is_weak_second(M1.whole).verdict,
    }


def weak_second_witnesses(S: Submodule, limits: Limits = DEFAULT_LIMITS) -> list[tuple[RingElem, Submodule]]:
    """Every (r, K) refuting weak secondness of S."""
    M = S.module
    out = []
    for r in range(M.ring.size):
        img = M.scale(r, S.mask)
        if img == 1:
            continue
        img_m = M.scale(r, M.full_mask)
        for K in all_submodules(M, limits):
            if img & ~K.mask == 0 and img_m & ~K.mask and S.mask & ~K.mask:
                out.append((RingElem(M.ring, r), K))
    return out


def reproduce_examples(catalog: Catalog) -> TheoremReport:
    rep = TheoremReport("examples")
    ex = product_weak_second_example()
    rep.instances_checked += 1
    rep.hypothesis_hits += 1
    ok = (
        not ex["classifier"].verdict
        and ex["classifier_witness_valid"]
        and ex["expected_witness_valid"]
        and ex["expected_witness_in_all_witnesses"]
        and ex["classifier_matches_expected"]
        and ex["S1_weak_second"]
    )
    if not ok:
        rep.violation(ex["module"], example="e2.14", submodule=ex["S"], checks=ex["expected_witness_checks"])
    rep.details["e2.14"] = {
        "weak_second": ex["classifier"].verdict,
        "classifier_witness": _js(ex["classifier"].witness),
        "expected_witness": _js(ex["expected_witness"]),
        "expected_witness_checks": ex["expected_witness_checks"],
        "S1_weak_second_in_M1": ex["S1_weak_second"],
    }
    identity = PsiFunction("identity")
    count = 0
    for _, M in catalog.modules():
        for N in nonzero_submodules(M, catalog.limits):
            rep.instances_checked += 1
            rep.hypothesis_hits += 1
            count += 1
            res = is_psi_second(N, identity, "def", catalog.limits)
            if not res:
                rep.violation(M, example="e2.114", submodule=N, witness=res.witness)
    rep.details["e2.114_instances"] = count
    return rep.finish()


# engine self-checks used by the acceptance suite


def check_second_oracle(catalog: Catalog) -> TheoremReport:
    """Fast second test against the all-(r, K) form, with witness re-validation."""
    rep = TheoremReport("oracle.second")
    for _, M in catalog.modules():
        for N in all_submodules(M, catalog.limits):
            rep.instances_checked += 1
            rep.hypothesis_hits += 1
            fast = is_second(N)
            brute = is_second_bruteforce(N, catalog.limits)
            if fast.verdict != brute.verdict:
                rep.violation(M, submodule=N, fast=fast.verdict, bruteforce=brute.verdict)
            elif not fast.verdict and not N.is_zero():
                if not (refutes_second(N, fast.witness) and refutes_second(N, brute.witness)):
                    rep.violation(M, submodule=N, problem="witness does not re-validate")
    return rep.finish()


def check_implication_chain(catalog: Catalog) -> TheoremReport:
    """second implies psi-second for every family psi; weak second equals fullM-second."""
    memo = _memo(catalog)
    rep = TheoremReport("chain.second")
    full = PsiFunction("fullM")
    for _, M in catalog.modules():
        for N in nonzero_submodules(M, catalog.limits):
            s = memo.second(N)
            for psi in catalog.psi_family:
                rep.instances_checked += 1
                rep.hypothesis_hits += 1
                if s and not memo.psi_second(N, psi):
                    rep.violation(M, submodule=N, psi=str(psi), problem="second but not psi-second")
            weak = is_weak_second(N, catalog.limits)
            if weak.verdict != memo.psi_second(N, full):
                rep.violation(M, submodule=N, psi="fullM", problem="weak second differs from fullM-second")
    return rep.finish()


def check_structure(catalog: Catalog) -> TheoremReport:
    """Lattice closure, colon Galois connections, quotient correspondence,
    localization contract and completely irreducible decompositions."""
    rep = TheoremReport("structure")
    counts = dict.fromkeys(("closure", "lattice", "galois", "quotient", "localization", "ci"), 0)
    for _, M in catalog.modules():
        lattice = all_submodules(M, catalog.limits)
        masks = {N.mask for N in lattice}
        ideals = ideals_of(M, catalog.limits)
        for N in lattice:
            rep.instances_checked += 1
            if M.span(bits(N.mask)) != N.mask:
                counts["closure"] += 1
                rep.violation(M, check="closure", submodule=N)
            for K in lattice:
                if (N + K).mask not in masks or (N & K).mask not in masks:
                    counts["lattice"] += 1
                    rep.violation(M, check="lattice", submodule=N, other=K)
                for I in ideals:
                    img = ideal_image(I, N)
                    if img.mask not in masks:
                        counts["closure"] += 1
                        rep.violation(M, check="closure", submodule=img)
                    inside = img <= K
                    if (I <= colon_ring(K, N)) != inside or (N <= colon_module(K, I)) != inside:
                        counts["galois"] += 1
                        rep.violation(M, check="galois", submodule=N, other=K, ideal=I)
            if not N.is_whole():
                try:
                    ci_decomposition(N, catalog.limits)
                except ContractError:
                    counts["ci"] += 1
                    rep.violation(M, check="ci", submodule=N)
        for K in lattice:
            Q, q = quotient(M, K)
            above = [N for N in lattice if K <= N]
            images = [q.image(N) for N in above]
            q_lattice = all_submodules(Q, catalog.limits)
            bijective = len({X.mask for X in images}) == len(above) and {X.mask for X in images} == {
                X.mask for X in q_lattice
            }
            monotone = all(
                (A <= B) == (qa <= qb) for A, qa in zip(above, images) for B, qb in zip(above, images)
            )
            lifts = all(q.lift(X) == N for N, X in zip(above, images))
            if not (bijective and monotone and lifts):
                counts["quotient"] += 1
                rep.violation(M, check="quotient", submodule=K)
        for S in _localizations(M):
            try:
                localize(M, S)
            except ContractError as exc:
                counts["localization"] += 1
                rep.violation(M, check="localization", S=repr(S), problem=str(exc))
    rep.hypothesis_hits = rep.instances_checked
    rep.details["violations_by_check"] = counts
    return rep.finish()


REGISTRY: dict[str, Callable[[Catalog], TheoremReport]] = {
    "t2.3": verify_t2_3,
    "c2.4": verify_c2_4,
    "c42.3": verify_c42_3,
    "t2.5_c2.6": verify_t2_5_c2_6,
    "t2.7": verify_t2_7,
    "t92.8": verify_t92_8,
    "p2.9": verify_p2_9,
    "p2.10": verify_p2_10,
    "p2.11": verify_p2_11,
    "t2.12": verify_t2_12,
    "t2.13": verify_t2_13,
    "t2.133": verify_t2_133,
    "probe.monotonicity": probe_monotonicity,
    "examples": reproduce_examples,
    "oracle.second": check_second_oracle,
    "chain.second": check_implication_chain,
    "structure": check_structure,
}

ALIASES = {
    "t2.5": "t2.5_c2.6",
    "c2.6": "t2.5_c2.6",
    "p92.8": "t92.8",
    "e2.14": "examples",
    "e2.114": "examples",
}


def resolve_theorem(theorem_id: str) -> str:
    tid = ALIASES.get(theorem_id, theorem_id)
    if tid not in REGISTRY:
        raise KeyError(theorem_id)
    return tid


def run(theorem_ids, catalog: Catalog | None = None) -> list[TheoremReport]:
    catalog = catalog or default_catalog()
    if theorem_ids == "all" or theorem_ids == ["all"]:
        ids = list(REGISTRY)
    else:
        ids = [resolve_theorem(t) for t in theorem_ids]
    return [REGISTRY[t](catalog) for t in ids]
