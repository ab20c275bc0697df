"""Requirements-coverage checklist: one check per component and one
interaction check per requirement per layer, top layer down to physical."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .consistency import check_accessibility
from .model import LAYERS_TOP_DOWN, LayerId, LayeredModel


class ItemKind(Enum):
    COMPONENT = "ComponentCheck"
    INTERACTION = "InteractionCheck"


class Status(Enum):
    COVERED = "covered"
    UNSATISFIABLE = "unsatisfiable"


@dataclass(frozen=True)
class ChecklistItem:
    id: str
    kind: ItemKind
    layer: LayerId
    subject: str
    status: Status
    witness: Optional[tuple] = None

    def line(self) -> str:
        witness = ",".join(self.witness) if self.witness else "-"
        return "\t".join([self.id, self.kind.value, str(int(self.layer)), self.subject,
                          self.status.value, witness])


def _collapse(vertices) -> tuple:
    out = []
    for v in vertices:
        if not out or out[-1] != v:
            out.append(v)
    return tuple(out)


def _first_image_chain(model: LayeredModel, ident: str) -> dict:
    """Smallest-image descent from ``ident`` to layer 1, keyed by layer."""
    chain = {}
    cur = ident
    while True:
        images = model.adjacent_images(cur)
        if not images:
            return chain
        cur = images[0]
        chain[model.layer_of(cur)] = cur


def _layer_witnesses(model: LayeredModel, trace, top: LayerId) -> dict:
    """Per-layer concatenated witness paths from an (possibly partial) trace.

    A layer maps to ``None`` when some link on the layer above has no lower
    path; every layer beneath an unsatisfiable one is unsatisfiable too.
    """
    paths = {layer: [] for layer in LayerId if layer <= top}
    broken_below = None

    def visit(node):
        nonlocal broken_below
        layer = node.layer
        paths[layer].extend(node.root.vertices)
        if len(node.root.vertices) == 1 and layer > LayerId.PHYSICAL:
            for lower, ident in _first_image_chain(model, node.root.vertices[0]).items():
                paths[lower].append(ident)
        for child in node.children:
            if child is None:
                if broken_below is None or layer - 1 > broken_below:
                    broken_below = layer - 1
            else:
                visit(child)

    if trace is None:
        return {layer: None for layer in paths}
    visit(trace)
    return {layer: (None if broken_below is not None and layer <= broken_below else _collapse(p))
            for layer, p in paths.items()}


def generate_checklist(model: LayeredModel) -> list:
    """Component checks for every component plus interaction checks for
    every requirement on each layer from its own down to layer 1.

    Interaction witnesses come from the accessibility evidence; where a layer
    has no witness the item is kept with status ``unsatisfiable``.
    """
    items = [ChecklistItem(f"CMP-{int(c.layer)}-{c.id}", ItemKind.COMPONENT, c.layer, c.id,
                           Status.COVERED) for c in model.components]
    for req in model.requirements:
        result = check_accessibility(model, req)
        witnesses = _layer_witnesses(model, result.evidence or result.trace, req.layer)
        for layer in sorted(witnesses, reverse=True):
            path = witnesses[layer]
            status = Status.COVERED if path else Status.UNSATISFIABLE
            items.append(ChecklistItem(f"INT-{req.id}-L{int(layer)}", ItemKind.INTERACTION, layer,
                                       req.id, status, path or None))
    kind_rank = {ItemKind.COMPONENT: 0, ItemKind.INTERACTION: 1}
    items.sort(key=lambda i: (-i.layer, kind_rank[i.kind], i.id))
    return items


@dataclass(frozen=True)
class CoverageRow:
    layer: Optional[LayerId]
    components: int
    interactions: int
    unsatisfiable: int


def coverage_summary(checklist) -> list:
    """Counts per layer (top first) followed by a totals row (``layer=None``)."""
    comps, inters, unsat = Counter(), Counter(), Counter()
    for item in checklist:
        if item.kind is ItemKind.COMPONENT:
            comps[item.layer] += 1
        else:
            inters[item.layer] += 1
        if item.status is Status.UNSATISFIABLE:
            unsat[item.layer] += 1
    rows = [CoverageRow(layer, comps[layer], inters[layer], unsat[layer]) for layer in LAYERS_TOP_DOWN]
    rows.append(CoverageRow(None, sum(comps.values()), sum(inters.values()), sum(unsat.values())))
    return rows


def render_lines(checklist) -> str:
    return "".join(item.line() + "\n" for item in checklist)


def render_table(checklist) -> str:
    header = ("id", "kind", "layer", "subject", "status", "witness")
    body = [(i.id, i.kind.value, str(int(i.layer)), i.subject, i.status.value,
             " > ".join(i.witness) if i.witness else "-") for i in checklist]
    widths = [max(len(row[k]) for row in [header, *body]) for k in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *body]]
    summary = coverage_summary(checklist)[-1]
    lines.append("")
    lines.append(f"total: {summary.components} component check(s), {summary.interactions} "
                 f"interaction check(s), {summary.unsatisfiable} unsatisfiable")
    return "\n".join(lines) + "\n"
