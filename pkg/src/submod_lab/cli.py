"""``submod-lab`` command line: enumerate, classify, verify.

Exit codes: 0 clean, 1 a violation or method disagreement was found, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from ._common import EMPTY, InputError, Limits, ResourceLimitError
from .classify import FAMILY_TAGS, METHODS, chi_from_phi, eval_psi, is_phi_prime_submodule, parse_psi, psi_profile
from .harness import ALIASES, REGISTRY, base_modules, catalog_from_modules, default_catalog, resolve_theorem
from .module import all_submodules, ideals_of, residual
from .ring import is_phi_prime_ideal, parse_phi
from .workbench import WorkbenchBlock, load

EXIT_OK, EXIT_FOUND, EXIT_INPUT = 0, 1, 2


@dataclass
class WorkbenchConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    psi_tags: list[str] = field(default_factory=lambda: list(FAMILY_TAGS))
    phi_tags: list[str] = field(default_factory=list)
    theorems: list[str] = field(default_factory=lambda: ["all"])
    limits: Limits = Limits()
    emit: str = "text"
    seed: int = 0

    def __post_init__(self):
        if self.emit not in ("text", "json"):
            raise InputError(f"unknown output format {self.emit!r}")


def _tags(text: str | None) -> list[str]:
    if not text:
        return []
    return [t for t in (p.strip() for p in text.split(",")) if t]


def _blocks(config: WorkbenchConfig) -> list[WorkbenchBlock]:
    if not config.inputs:
        return [WorkbenchBlock(M.ring, M) for M in base_modules() if M.size <= config.limits.max_module_order]
    out = []
    for path in config.inputs:
        out.extend(load(path, config.limits))
    return out


def _sub_dict(N) -> dict:
    return {"generators": N.short(), "order": N.size}


# enumerate


def cmd_enumerate(config: WorkbenchConfig) -> tuple[dict, int]:
    modules = []
    for b in _blocks(config):
        M = b.module
        modules.append(
            {
                "module": M.name,
                "order": M.size,
                "ideals": [{"generators": I.short(), "order": I.size} for I in ideals_of(M, config.limits)],
                "submodules": [_sub_dict(N) for N in all_submodules(M, config.limits)],
            }
        )
    return {"command": "enumerate", "modules": modules}, EXIT_OK


def _enumerate_text(report: dict) -> list[str]:
    lines = []
    for m in report["modules"]:
        lines.append(f"module {m['module']}  |M| = {m['order']}")
        lines.append(f"  ideals ({len(m['ideals'])}):")
        lines.extend(f"    {i['generators']:<24} order {i['order']}" for i in m["ideals"])
        lines.append(f"  submodules ({len(m['submodules'])}):")
        lines.extend(f"    {s['generators']:<24} order {s['order']}" for s in m["submodules"])
    return lines


# classify


def _witness(res) -> dict | None:
    if res.witness is None:
        return None
    return {k: (v.short() if hasattr(v, "short") else str(v)) for k, v in res.witness.items()}


def cmd_classify(config: WorkbenchConfig) -> tuple[dict, int]:
    psis = [parse_psi(t) for t in config.psi_tags]
    phis = [parse_phi(t) for t in config.phi_tags]
    code = EXIT_OK
    modules = []
    for b in _blocks(config):
        M = b.module
        selected = {N.mask for N in b.submodules}
        rows = []
        for row in psi_profile(M, psis, config.limits):
            N = row["submodule"]
            if selected and N.mask not in selected:
                continue
            out = {
                "submodule": N.short(),
                "order": N.size,
                "second": row["second"].verdict,
                "second_witness": _witness(row["second"]),
                "weak_second": row["weak_second"].verdict,
                "weak_second_witness": _witness(row["weak_second"]),
                "psi": {},
            }
            if row["second"].verdict != row["second_bruteforce"].verdict:
                out["second_disagreement"] = True
                code = EXIT_FOUND
            for tag, info in row["psi"].items():
                methods = info["methods"]
                out["psi"][tag] = {
                    "value": "∅" if info["value"] is EMPTY else info["value"].short(),
                    "psi_second": methods["def"].verdict,
                    "witness": _witness(methods["def"]),
                    "methods": {m: methods[m].verdict for m in METHODS},
                    "ci_normalized": {m: r.verdict for m, r in info["ci_normalized"].items()},
                    "agree": info["agree"],
                }
                if not info["agree"]:
                    code = EXIT_FOUND
            rows.append(out)
        entry = {"module": M.name, "order": M.size, "submodules": rows}
        if phis:
            entry["phi"] = _phi_section(M, phis, config)
        modules.append(entry)
    return {"command": "classify", "psi": [str(p) for p in psis], "modules": modules}, code


def _phi_section(M, phis, config) -> dict:
    out = {}
    for phi in phis:
        chi = chi_from_phi(phi, M)
        ideals = []
        for I in ideals_of(M, config.limits):
            if not I.is_proper():
                continue
            res = is_phi_prime_ideal(I, phi)
            ideals.append({"ideal": I.short(), "phi_prime": res.verdict, "witness": _witness(res)})
        subs = []
        for P in all_submodules(M, config.limits):
            if P.is_whole():
                continue
            res = is_phi_prime_submodule(P, chi)
            value = eval_psi(chi, P)
            subs.append(
                {
                    "submodule": P.short(),
                    "colon": residual(P).short(),
                    "chi": "∅" if value is EMPTY else value.short(),
                    "chi_prime": res.verdict,
                    "witness": _witness(res),
                }
            )
        out[str(phi)] = {"ideals": ideals, "submodules": subs}
    return out


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _classify_text(report: dict) -> list[str]:
    lines = []
    for m in report["modules"]:
        lines.append(f"module {m['module']}  |M| = {m['order']}")
        for row in m["submodules"]:
            lines.append(
                f"  N = {row['submodule']} (order {row['order']}): second {_yn(row['second'])}, "
                f"weak second {_yn(row['weak_second'])}"
            )
            if row["weak_second_witness"] and "r" in row["weak_second_witness"]:
                w = row["weak_second_witness"]
                lines.append(f"    weak second fails: r = {w['r']}, K = {w['K']}")
            for tag, info in row["psi"].items():
                flags = " ".join(f"{k}={int(v)}" for k, v in info["methods"].items())
                mark = "" if info["agree"] else "  DISAGREE"
                lines.append(
                    f"    {tag:<9} psi(N) = {info['value']:<16} psi-second {_yn(info['psi_second'])}  [{flags}]{mark}"
                )
                w = info["witness"]
                if w and "r" in w:
                    lines.append(f"              witness r = {w['r']}, K = {w['K']}")
        for tag, sec in m.get("phi", {}).items():
            lines.append(f"  phi = {tag}")
            for i in sec["ideals"]:
                lines.append(f"    ideal {i['ideal']:<16} phi-prime {_yn(i['phi_prime'])}")
            for p in sec["submodules"]:
                lines.append(
                    f"    P = {p['submodule']:<14} (P:M) = {p['colon']:<10} chi(P) = {p['chi']:<12} chi-prime {_yn(p['chi_prime'])}"
                )
    return lines


# verify


def cmd_verify(config: WorkbenchConfig) -> tuple[dict, int]:
    if config.theorems == ["all"]:
        ids = list(REGISTRY)
    else:
        try:
            ids = [resolve_theorem(t) for t in config.theorems]
        except KeyError as exc:
            known = ", ".join(sorted(set(REGISTRY) | set(ALIASES)))
            raise InputError(f"unknown theorem id {exc.args[0]!r}; known: {known}") from None
    if config.inputs:
        catalog = catalog_from_modules([b.module for b in _blocks(config)], limits=config.limits)
    else:
        catalog = default_catalog(limits=config.limits)
    reports = [REGISTRY[t](catalog).to_dict() for t in ids]
    code = EXIT_FOUND if any(r["violations"] for r in reports) else EXIT_OK
    return {"command": "verify", "catalog_size": len(catalog.entries), "reports": reports}, code


def _verify_text(report: dict) -> list[str]:
    lines = [f"catalog: {report['catalog_size']} modules"]
    for r in report["reports"]:
        lines.append(
            f"{r['theorem_id']:<20} {r['status']:<9} instances {r['instances_checked']:>6}  "
            f"hits {r['hypothesis_hits']:>6}  violations {len(r['violations'])}"
        )
        for v in r["violations"]:
            lines.append("    " + json.dumps(v, sort_keys=True, ensure_ascii=False))
        for k in sorted(r["details"]):
            lines.append(f"    {k}: {json.dumps(r['details'][k], sort_keys=True, ensure_ascii=False)}")
    return lines


COMMANDS = {
    "enumerate": (cmd_enumerate, _enumerate_text),
    "classify": (cmd_classify, _classify_text),
    "verify": (cmd_verify, _verify_text),
}


def render(report: dict, emit: str) -> str:
    if emit == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(COMMANDS[report["command"]][1](report)) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="submod-lab", description="Finite module workbench for second-type submodules.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("theorem_pos", nargs="?", metavar="THEOREM", help="theorem id for verify (same as --theorem)")
    p.add_argument("--input", action="append", default=[], metavar="FILE", help="workbench file; repeatable")
    p.add_argument("--psi", metavar="TAGS", help="comma-separated psi tags (default: the full family)")
    p.add_argument("--phi", metavar="TAGS", help="comma-separated phi tags for prime-type checks")
    p.add_argument("--theorem", metavar="ID", help="theorem id, comma-separated ids, or 'all'")
    p.add_argument("--max-module-order", type=int, metavar="N")
    p.add_argument("--emit", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for sampling extensions (unused by default runs)")
    return p


def config_from_args(args) -> WorkbenchConfig:
    limits = Limits() if args.max_module_order is None else Limits(max_module_order=args.max_module_order)
    if args.theorem_pos and args.theorem and args.theorem_pos != args.theorem:
        raise InputError("conflicting theorem ids")
    theorem = args.theorem or args.theorem_pos
    if theorem and args.command != "verify":
        raise InputError("a theorem id only applies to verify")
    theorems = _tags(theorem) or ["all"]
    return WorkbenchConfig(
        command=args.command,
        inputs=list(args.input),
        psi_tags=_tags(args.psi) or list(FAMILY_TAGS),
        phi_tags=_tags(args.phi),
        theorems=theorems,
        limits=limits,
        emit=args.emit,
        seed=args.seed,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        run, _ = COMMANDS[config.command]
        report, code = run(config)
    except (InputError, ResourceLimitError) as exc:
        print(f"submod-lab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render(report, config.emit))
    return code


if __name__ == "__main__":
    sys.exit(main())
