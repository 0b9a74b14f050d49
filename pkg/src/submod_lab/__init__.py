"""Exact workbench for finite rings Z/n1 x ... x Z/nk and their finite modules:
second, weak second and psi-second submodules, phi-prime ideals and submodules,
and exhaustive theorem checks over a catalog of small modules."""

from ._common import EMPTY, ClassificationResult, ContractError, InputError, Limits, ResourceLimitError, is_empty
from .classify import (
    METHODS,
    PsiFunction,
    chi_from_phi,
    eval_psi,
    is_phi_prime_submodule,
    is_prime_submodule,
    is_psi_second,
    is_second,
    is_second_bruteforce,
    is_weak_second,
    normalize_psi,
    parse_psi,
    psi_family,
    psi_profile,
)
from .harness import REGISTRY, Catalog, TheoremReport, default_catalog, run
from .module import (
    ModElem,
    ModuleHom,
    ModuleSpec,
    ModuleView,
    Submodule,
    all_submodules,
    annihilator,
    ci_decomposition,
    colon_module,
    colon_ring,
    completely_irreducibles,
    hom_make,
    ideal_image,
    localize,
    module_make,
    product,
    quotient,
    regular_module,
    submodule_generate,
)
from .ring import (
    Ideal,
    PhiFunction,
    RingElem,
    RingSpec,
    all_ideals,
    ideal_generate,
    is_phi_prime_ideal,
    is_prime_ideal,
    parse_phi,
    ring_make,
    saturate,
)
from .workbench import parse as parse_workbench

__all__ = [name for name in dir() if not name.startswith("_")]
