import json

import pytest

from submod_lab import module_make, ring_make
from submod_lab.classify import is_psi_second, parse_psi, refutes_psi_second
from submod_lab.harness import (
    REGISTRY,
    TheoremReport,
    catalog_from_modules,
    product_weak_second_example,
    reproduce_examples,
    resolve_theorem,
    second_product_structure,
    verify_t2_13,
    weak_second_witnesses,
)
from submod_lab.module import all_submodules, product


@pytest.fixture(scope="module")
def reports(catalog):
    return {tid: fn(catalog) for tid, fn in REGISTRY.items()}


def test_catalog_shape(catalog):
    bases = [e for e in catalog.entries if e.kind == "base"]
    assert len(bases) >= 10
    assert {e.kind for e in catalog.entries} == {"base", "quotient", "localized"}
    assert len(list(catalog.products())) == 2


def test_characterization_clean_on_z6():
    cat = catalog_from_modules([module_make(ring_make([6]), [6])], derived=False)
    rep = verify_t2_13(cat)
    assert rep.status == "verified"
    assert rep.violations == []


def test_product_example_reproduced():
    ex = product_weak_second_example()
    assert not ex["classifier"].verdict
    assert ex["classifier_matches_expected"]
    assert ex["expected_witness_valid"]
    assert ex["S1_weak_second"]
    S = ex["S"]
    assert (ex["expected_witness"]["r"], ex["expected_witness"]["K"]) in weak_second_witnesses(S)


@pytest.mark.parametrize(
    "tid",
    ["t2.3", "c2.4", "c42.3", "t2.5_c2.6", "t2.7", "t92.8", "p2.9", "p2.10", "p2.11", "t2.12", "t2.133",
     "probe.monotonicity", "examples", "oracle.second", "chain.second", "structure"],
)
def test_verifier_has_no_violations(reports, tid):
    assert reports[tid].violations == []
    assert reports[tid].status == "verified"


def test_characterization_unconditional_part_clean(reports):
    rep = reports["t2.13"]
    assert rep.details["violations_by_part"]["unconditional"] == 0


def test_characterization_disagreements_are_real(catalog):
    # every ci disagreement is a definition-level failure with a re-checkable witness
    by_name = dict(catalog.modules())
    rep = verify_t2_13(catalog)
    assert rep.violations
    for v in rep.violations:
        assert v["def_verdict"] is False
        M = by_name[v["module"]]
        (N,) = [N for N in all_submodules(M) if N.short() == v["submodule"]]
        psi = parse_psi(v["psi"])
        res = is_psi_second(N, psi)
        assert refutes_psi_second(N, psi, res.witness)
        assert is_psi_second(N, psi, "ci_union").verdict


def test_product_structure():
    z6 = module_make(ring_make([6]), [6])
    ok, extra, missing = second_product_structure(product(z6, z6))
    assert ok and not extra and not missing


def test_report_json_round_trip(reports):
    for rep in reports.values():
        text = rep.to_json()
        again = TheoremReport.from_dict(json.loads(text))
        assert again.to_json() == text


def test_reports_are_deterministic(catalog):
    first = reproduce_examples(catalog).to_json()
    assert reproduce_examples(catalog).to_json() == first


def test_non_vacuous_coverage(reports):
    for tid in ("t2.3", "t2.5_c2.6", "t2.12", "t2.133"):
        assert reports[tid].hypothesis_hits >= 1


def test_vacuous_status():
    assert TheoremReport("x", instances_checked=3).finish().status == "vacuous"


def test_monotonicity_tallies_stated_direction(reports):
    d = reports["probe.monotonicity"].details
    assert d["stated_direction_failures"] > 0
    assert d["stated_direction_witnesses"]
    assert all(v == 0 for v in d["chain_forward_failures"].values())


def test_aliases():
    assert resolve_theorem("t2.5") == "t2.5_c2.6"
    assert resolve_theorem("e2.14") == "examples"
    with pytest.raises(KeyError):
        resolve_theorem("t9.9")
