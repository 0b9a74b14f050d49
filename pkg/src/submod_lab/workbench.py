"""Line-based input format.

::

    # comment
    ring 6 6
    module 6:1 6:2
    sub gen (1,0)
    sub gen (2,0) (0,3)

Each ``ring`` line starts a new block. A block without a ``module`` line uses
the regular module. ``sub gen`` lines select submodules of the block's module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ._common import DEFAULT_LIMITS, InputError, Limits
from .module import ModuleView, Submodule, module_make, regular_module, submodule_generate
from .ring import RingSpec, ring_make

_TUPLE = re.compile(r"\(([^()]*)\)|(-?\d+)")


@dataclass
class WorkbenchBlock:
    ring: RingSpec
    module: ModuleView
    submodules: list[Submodule] = field(default_factory=list)
    line: int = 0


def _ints(tokens, lineno: int, what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InputError(f"line {lineno}: {what} must be integers") from None


def _parse_elements(text: str, lineno: int) -> list[tuple[int, ...]]:
    rest = _TUPLE.sub("", text).strip()
    if rest:
        raise InputError(f"line {lineno}: cannot parse element list {text!r}")
    out = []
    for m in _TUPLE.finditer(text):
        body = m.group(1) if m.group(1) is not None else m.group(2)
        parts = [p.strip() for p in body.split(",") if p.strip()]
        if not parts:
            raise InputError(f"line {lineno}: empty element")
        out.append(tuple(_ints(parts, lineno, "element residues")))
    return out


def parse(text: str, limits: Limits = DEFAULT_LIMITS) -> list[WorkbenchBlock]:
    blocks: list[WorkbenchBlock] = []
    ring = None
    module = None
    pending_subs: list[tuple[int, list]] = []
    start = 0

    def close():
        nonlocal ring, module, pending_subs
        if ring is None:
            return
        M = module if module is not None else regular_module(ring)
        if M.size > limits.max_module_order:
            raise InputError(f"line {start}: module order {M.size} exceeds cap {limits.max_module_order}")
        subs = []
        for lineno, elems in pending_subs:
            try:
                subs.append(submodule_generate(M, elems))
            except (InputError, ValueError, IndexError) as exc:
                raise InputError(f"line {lineno}: {exc}") from None
        blocks.append(WorkbenchBlock(ring, M, subs, start))
        ring, module, pending_subs = None, None, []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, tail = line.partition(" ")
        tail = tail.strip()
        if head == "ring":
            close()
            moduli = _ints(tail.split(), lineno, "ring moduli")
            if not moduli:
                raise InputError(f"line {lineno}: ring needs at least one modulus")
            try:
                ring = ring_make(moduli)
            except InputError as exc:
                raise InputError(f"line {lineno}: {exc}") from None
            if ring.size > limits.max_ring_order:
                raise InputError(f"line {lineno}: ring order {ring.size} exceeds cap {limits.max_ring_order}")
            start = lineno
        elif head == "module":
            if ring is None:
                raise InputError(f"line {lineno}: module before ring")
            if module is not None:
                raise InputError(f"line {lineno}: second module line in one block")
            orders, coords = [], []
            for tok in tail.split():
                d, sep, c = tok.partition(":")
                if not sep:
                    raise InputError(f"line {lineno}: expected order:coordinate, got {tok!r}")
                d_, c_ = _ints([d, c], lineno, "module factors")
                orders.append(d_)
                coords.append(c_)
            if not orders:
                raise InputError(f"line {lineno}: module needs at least one factor")
            try:
                module = module_make(ring, orders, coords)
            except InputError as exc:
                raise InputError(f"line {lineno}: {exc}") from None
        elif head == "sub":
            if ring is None:
                raise InputError(f"line {lineno}: sub before ring")
            kind, _, elems = tail.partition(" ")
            if kind != "gen":
                raise InputError(f"line {lineno}: expected 'sub gen'")
            pending_subs.append((lineno, _parse_elements(elems, lineno)))
        else:
            raise InputError(f"line {lineno}: unknown directive {head!r}")
    close()
    if not blocks:
        raise InputError("no ring definition found")
    return blocks


def load(path: str | Path, limits: Limits = DEFAULT_LIMITS) -> list[WorkbenchBlock]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse(text, limits)
