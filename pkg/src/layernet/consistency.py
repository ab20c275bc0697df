"""Consistency rules over a layered model.

Covers protocol compatibility, path existence on a requirement's layer,
top-down realization of every link on that path, replica/location
cardinality, failure transparency (delegated to :mod:`layernet.faultsim`)
and the openness declaration audit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

from ._graph import alive_neighbors, baseline, edges_of, shortest_path, survival
from .model import (
    LayerId,
    LayeredModel,
    Link,
    Requirement,
    ValidationReport,
    link_key,
    link_label,
    validate_structure,
)


class WrongLayer(ValueError):
    pass


class NotALink(ValueError):
    pass


@dataclass(frozen=True)
class WitnessPath:
    layer: LayerId
    vertices: tuple

    @property
    def links(self) -> list:
        return [link_key(self.layer, a, b) for a, b in edges_of(self.vertices)]


@dataclass(frozen=True)
class RealizationTree:
    """A path plus, for each of its links, the tree realizing that link one
    layer down.  A ``None`` child marks a link with no lower path (only in
    partial traces of failed checks)."""

    root: WitnessPath
    children: tuple = ()

    @property
    def layer(self) -> LayerId:
        return self.root.layer

    @property
    def complete(self) -> bool:
        if self.layer > LayerId.PHYSICAL and len(self.children) != len(self.root.links):
            return False
        return all(c is not None and c.complete for c in self.children)

    def walk(self):
        """Pre-order traversal of the nodes."""
        yield self
        for child in self.children:
            if child is not None:
                yield from child.walk()

    def render(self, indent: str = "  ") -> str:
        lines = []

        def visit(node, depth):
            if node is None:
                lines.append(f"{indent * depth}(unrealized)")
                return
            lines.append(f"{indent * depth}L{int(node.layer)} " + " > ".join(node.root.vertices))
            for child in node.children:
                visit(child, depth + 1)

        visit(self, 0)
        return "\n".join(lines) + "\n"


def _excluded(excluded: Iterable) -> tuple:
    """Split exclusions into component ids and link keys.

    Accepts component ids, :class:`Link` objects, ``(layer, a, b)`` tuples
    and ``link:LAYER:A-B`` labels whose endpoints contain no hyphen.
    """
    comps, links = set(), set()
    for item in excluded or ():
        if isinstance(item, Link):
            links.add(item.key)
        elif isinstance(item, tuple):
            links.add(link_key(*item))
        elif isinstance(item, str) and item.startswith("link:") and item.count("-") == 1:
            _, layer, ends = item.split(":", 2)
            a, b = ends.split("-")
            links.add(link_key(layer, a, b))
        else:
            comps.add(item)
    return frozenset(comps), frozenset(links)


def _check_on_layer(model: LayeredModel, layer: LayerId, *idents: str):
    for ident in idents:
        if ident not in model.by_id or model.layer_of(ident) != layer:
            raise WrongLayer(f"{ident!r} is not a component on layer {int(layer)}")


def deterministic_path(model: LayeredModel, layer, src: str, dst: str,
                       excluded: Iterable = ()) -> Optional[WitnessPath]:
    """Minimum-hop path on one layer avoiding excluded components and links.

    Ties go to the lexicographically smallest vertex sequence; returns
    ``None`` when the endpoints are disconnected (or excluded).
    """
    layer = LayerId.parse(layer)
    _check_on_layer(model, layer, src, dst)
    comps, links = _excluded(excluded)
    if src in comps or dst in comps:
        return None

    def neighbors(v):
        return [n for n in model.neighbors(v)
                if n not in comps and link_key(layer, v, n) not in links]

    path = shortest_path(neighbors, src, dst)
    return WitnessPath(layer, path) if path is not None else None


def _realize(model, state, layer, a, b) -> Optional[RealizationTree]:
    """Tree for the lower realization of a surviving link (a, b) on ``layer``."""
    lower = LayerId(layer - 1)
    neighbors = alive_neighbors(model, state, lower)
    for a2 in model.adjacent_images(a):
        if not state.component_alive(a2):
            continue
        for b2 in model.adjacent_images(b):
            if not state.component_alive(b2):
                continue
            path = shortest_path(neighbors, a2, b2)
            if path is not None:
                return RealizationTree(WitnessPath(lower, path), _realize_children(model, state, lower, path))
    return None


def _realize_children(model, state, layer, path) -> tuple:
    if layer == LayerId.PHYSICAL:
        return ()
    return tuple(_realize(model, state, layer, u, v) for u, v in edges_of(path))


def realize_link(model: LayeredModel, layer, a: str, b: str,
                 excluded: Iterable = ()) -> Optional[RealizationTree]:
    """Realization tree of link (a, b) down to the physical layer.

    Image pairs are tried in lexicographic order; within a pair the lower
    path is the deterministic path over lower links that are themselves
    realizable, so the search is complete.  Excluded elements are unusable
    on every layer.
    """
    layer = LayerId.parse(layer)
    if model.get_link(layer, a, b) is None:
        raise NotALink(f"no link {a!r}-{b!r} on layer {int(layer)}")
    comps, links = _excluded(excluded)
    state = survival(model, comps, links) if (comps or links) else baseline(model)
    key = link_key(layer, a, b)
    if not state.link_alive(key):
        return None
    root = WitnessPath(layer, (a, b))
    if layer == LayerId.PHYSICAL:
        return RealizationTree(root)
    return RealizationTree(root, (_realize(model, state, layer, a, b),))


# --------------------------------------------------------------------------
# compatibility, openness


@dataclass(frozen=True)
class Finding:
    code: str
    subject: str
    message: str
    severity: str = "warning"

    @property
    def is_failure(self) -> bool:
        return self.severity == "error"


def check_compatibility(model: LayeredModel) -> list:
    """Protocol-tag intersection test for every link.

    An endpoint without declared protocols is a wildcard and only yields an
    ``UnspecifiedProtocols`` warning.
    """
    findings = []
    for link in model.links:
        pa, pb = model.by_id[link.a].protocols, model.by_id[link.b].protocols
        if not pa or not pb:
            missing = ",".join(x for x, p in ((link.a, pa), (link.b, pb)) if not p)
            findings.append(Finding("UnspecifiedProtocols", link.label,
                                    f"no protocols declared on {missing}"))
        elif not pa & pb:
            findings.append(Finding("Incompatible", link.label,
                                    f"{sorted(pa)} and {sorted(pb)} share no protocol", "error"))
    return sorted(findings, key=lambda f: (f.code, f.subject))


def check_openness(model: LayeredModel) -> list:
    """Ids of components that declare no standards."""
    return sorted(c.id for c in model.components if not c.standards)


# --------------------------------------------------------------------------
# accessibility


@dataclass(frozen=True)
class AccessibilityResult:
    requirement: str
    passed: bool
    evidence: Optional[RealizationTree] = None
    failing_link: Optional[tuple] = None
    trace: Optional[RealizationTree] = field(default=None, compare=False, repr=False)
    message: str = ""


def _trace(model, state, layer, a, b) -> Optional[RealizationTree]:
    """Best-effort realization of link (a, b): the real one when it exists,
    otherwise the first raw lower path, recursing until something is missing."""
    if state.link_alive(link_key(layer, a, b)):
        return _realize(model, state, layer, a, b)
    lower = LayerId(layer - 1)
    for a2 in model.adjacent_images(a):
        for b2 in model.adjacent_images(b):
            path = shortest_path(model.neighbors, a2, b2)
            if path is not None:
                children = () if lower == LayerId.PHYSICAL else tuple(
                    _trace(model, state, lower, u, v) for u, v in edges_of(path))
                return RealizationTree(WitnessPath(lower, path), children)
    return None


def _first_gap(tree: RealizationTree) -> Optional[tuple]:
    for key, child in zip(tree.root.links, tree.children):
        if child is None:
            return key
        gap = _first_gap(child)
        if gap is not None:
            return gap
    return None


def check_accessibility(model: LayeredModel, requirement: Union[str, Requirement]) -> AccessibilityResult:
    """Pass iff the endpoints are joined on the requirement's layer by a path
    whose links all realize down to layer 1.

    On failure ``failing_link`` names the first link (depth-first along the
    deterministic path) that has no lower path at all.
    """
    req = model.requirement(requirement)
    state = baseline(model)
    layer = req.layer
    if req.src == req.dst:
        tree = RealizationTree(WitnessPath(layer, (req.src,)))
        return AccessibilityResult(req.id, True, tree, trace=tree)

    path = shortest_path(alive_neighbors(model, state, layer), req.src, req.dst)
    if path is not None:
        tree = RealizationTree(WitnessPath(layer, path), _realize_children(model, state, layer, path))
        return AccessibilityResult(req.id, True, tree, trace=tree)

    raw = deterministic_path(model, layer, req.src, req.dst)
    if raw is None:
        return AccessibilityResult(req.id, False, message=f"no path between {req.src} and {req.dst}")
    children = () if layer == LayerId.PHYSICAL else tuple(
        _trace(model, state, layer, u, v) for u, v in edges_of(raw.vertices))
    trace = RealizationTree(raw, children)
    gap = _first_gap(trace)
    message = f"{link_label(gap)} has no layer-{int(gap[0]) - 1} realization" if gap else "no realization"
    return AccessibilityResult(req.id, False, failing_link=gap, trace=trace, message=message)


# --------------------------------------------------------------------------
# cardinality transparency


@dataclass(frozen=True)
class CardinalityCheck:
    attribute: str
    required: int
    actual: int

    @property
    def passed(self) -> bool:
        return self.actual >= self.required


def location_count(model: LayeredModel, idents: Iterable[str]) -> int:
    """Distinct location tags; untagged components each count as their own."""
    tagged, untagged = set(), 0
    for ident in idents:
        loc = model.by_id[ident].location
        if loc is None:
            untagged += 1
        else:
            tagged.add(loc)
    return len(tagged) + untagged


def check_cardinality_transparency(model: LayeredModel, requirement) -> list:
    """Replica and location thresholds on the destination's physical images.
    Unset thresholds produce no checks (vacuous pass)."""
    req = model.requirement(requirement)
    images = model.physical_images(req.dst)
    checks = []
    if req.min_replicas is not None:
        checks.append(CardinalityCheck("min_replicas", req.min_replicas, len(images)))
    if req.min_locations is not None:
        checks.append(CardinalityCheck("min_locations", req.min_locations, location_count(model, images)))
    return checks


# --------------------------------------------------------------------------
# aggregate


class Verdict(Enum):
    CONSISTENT = "consistent"
    WARNINGS = "consistent-with-warnings"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class RequirementResult:
    requirement: str
    accessibility: AccessibilityResult
    spofs: Optional[tuple]
    cardinality: tuple

    @property
    def failed(self) -> bool:
        return (not self.accessibility.passed or bool(self.spofs)
                or any(not c.passed for c in self.cardinality))


@dataclass(frozen=True)
class ConsistencyReport:
    structure: ValidationReport
    requirements: tuple = ()
    compatibility: tuple = ()
    openness: tuple = ()
    verdict: Verdict = Verdict.CONSISTENT

    def lines(self) -> list:
        """Tab-separated records: section, subject, code, detail."""
        out = [("verdict", "-", self.verdict.value, "-")]
        for issue in self.structure.violations:
            out.append(("structure", issue.subject, issue.code, issue.message))
        for issue in self.structure.warnings:
            out.append(("structure-warning", issue.subject, issue.code, issue.message))
        for f in self.compatibility:
            out.append(("compatibility", f.subject, f.code, f.message))
        for r in self.requirements:
            acc = r.accessibility
            detail = " > ".join(acc.evidence.root.vertices) if acc.passed else acc.message
            out.append(("accessibility", r.requirement, "pass" if acc.passed else "fail", detail))
            if r.spofs is not None:
                out.append(("failure-transparency", r.requirement,
                            "fail" if r.spofs else "pass", ",".join(r.spofs) or "-"))
            for c in r.cardinality:
                out.append(("cardinality", r.requirement, "pass" if c.passed else "fail",
                            f"{c.attribute} required={c.required} actual={c.actual}"))
        for ident in self.openness:
            out.append(("openness", ident, "NoStandards", "no standards declared"))
        return ["\t".join(map(str, row)) for row in out]

    def render(self) -> str:
        out = [f"verdict: {self.verdict.value}"]
        s = self.structure
        out.append(f"structure.violations: {len(s.violations)}")
        out += [f"  {i.code} {i.subject}: {i.message}" for i in s.violations]
        out.append(f"structure.warnings: {len(s.warnings)}")
        out += [f"  {i.code} {i.subject}: {i.message}" for i in s.warnings]
        if s.violations:
            out.append("semantic checks: skipped")
            return "\n".join(out) + "\n"
        out.append(f"compatibility.findings: {len(self.compatibility)}")
        out += [f"  {f.code} {f.subject}: {f.message}" for f in self.compatibility]
        for r in self.requirements:
            acc = r.accessibility
            out.append(f"requirement {r.requirement}:")
            if acc.passed:
                out.append("  accessibility: pass")
                out += ["    " + line for line in acc.evidence.render().splitlines()]
            else:
                out.append(f"  accessibility: fail ({acc.message})")
            if r.spofs is None:
                out.append("  failure-transparency: not evaluated")
            else:
                status = "fail" if r.spofs else "pass"
                out.append(f"  failure-transparency: {status} ({len(r.spofs)} single points of failure)")
                out += [f"    {x}" for x in r.spofs]
            for c in r.cardinality:
                out.append(f"  {c.attribute}: {'pass' if c.passed else 'fail'} "
                           f"(required {c.required}, actual {c.actual})")
        out.append(f"openness.undeclared: {len(self.openness)}")
        if self.openness:
            out.append("  " + " ".join(self.openness))
        return "\n".join(out) + "\n"


def consistency_check(model: LayeredModel, strict: bool = False) -> ConsistencyReport:
    """Structural validation followed, when clean, by every semantic check."""
    from .faultsim import enumerate_spofs

    structure = validate_structure(model, strict=strict)
    if structure.violations:
        return ConsistencyReport(structure, verdict=Verdict.INCONSISTENT)

    results = []
    for req in model.requirements:
        acc = check_accessibility(model, req)
        spofs = tuple(enumerate_spofs(model, req)) if acc.passed else None
        results.append(RequirementResult(req.id, acc, spofs,
                                         tuple(check_cardinality_transparency(model, req))))
    compat = tuple(check_compatibility(model))
    openness = tuple(check_openness(model))

    if any(r.failed for r in results) or any(f.is_failure for f in compat):
        verdict = Verdict.INCONSISTENT
    elif structure.warnings or compat or openness:
        verdict = Verdict.WARNINGS
    else:
        verdict = Verdict.CONSISTENT
    return ConsistencyReport(structure, tuple(results), compat, openness, verdict)

