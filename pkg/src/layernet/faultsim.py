"""Fault injection: element removal, upward failure propagation, single
points of failure and FMEA tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from ._graph import alive_neighbors, baseline, shortest_path, survival
from .consistency import check_accessibility
from .model import LAYERS_TOP_DOWN, LayerId, LayeredModel, Requirement, link_key, link_label


class UnknownElement(KeyError):
    def __init__(self, ident):
        super().__init__(ident)
        self.ident = ident

    def __str__(self):
        return f"unknown element {self.ident!r}"


class NotAccessible(ValueError):
    pass


class NoRequirements(ValueError):
    pass


@dataclass(frozen=True)
class FaultScenario:
    removed_components: frozenset = frozenset()
    removed_links: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "removed_components", frozenset(self.removed_components))
        object.__setattr__(self, "removed_links",
                           frozenset(link_key(*k) for k in self.removed_links))

    @property
    def labels(self) -> list:
        return sorted(self.removed_components) + sorted(link_label(k) for k in self.removed_links)

    @classmethod
    def parse(cls, model: LayeredModel, specs: Iterable[str]) -> "FaultScenario":
        """Build a scenario from ``comp:ID``, ``link:LAYER:A-B`` or bare ids.

        Link endpoints may themselves contain hyphens; the split point is
        resolved against the model's links on that layer.
        """
        comps, links = set(), set()
        for spec in specs:
            if spec.startswith("link:"):
                links.add(_resolve_link(model, spec))
                continue
            ident = spec[5:] if spec.startswith("comp:") else spec
            if ident not in model.by_id:
                raise UnknownElement(ident)
            comps.add(ident)
        return cls(frozenset(comps), frozenset(links))


def _resolve_link(model: LayeredModel, spec: str):
    try:
        _, layer_token, ends = spec.split(":", 2)
        layer = LayerId.parse(layer_token)
    except ValueError:
        raise UnknownElement(spec) from None
    for i, ch in enumerate(ends):
        if ch == "-":
            link = model.get_link(layer, ends[:i], ends[i + 1:])
            if link is not None:
                return link.key
    raise UnknownElement(spec)


def _coerce(model: LayeredModel, scenario) -> FaultScenario:
    if not isinstance(scenario, FaultScenario):
        scenario = FaultScenario.parse(model, scenario)
    for ident in scenario.removed_components:
        if ident not in model.by_id:
            raise UnknownElement(ident)
    for key in scenario.removed_links:
        if model.get_link(*key) is None:
            raise UnknownElement(link_label(key))
    return scenario


@dataclass(frozen=True)
class ImpactReport:
    """Outcome of a fault scenario.

    Failures are reported relative to the fault-free model: links that are
    unrealizable even with nothing removed, and requirements that are
    inaccessible from the start, are listed separately as defects rather
    than as consequences of the scenario.
    """

    scenario: FaultScenario
    failed_components: Mapping[LayerId, frozenset]
    failed_links: Mapping[LayerId, frozenset]
    broken_requirements: frozenset
    intact_requirements: frozenset
    defective_links: frozenset = field(default=frozenset(), compare=False)
    inaccessible_requirements: frozenset = field(default=frozenset(), compare=False)

    def failed_elements(self) -> set:
        out = set()
        for layer in LayerId:
            out |= self.failed_components[layer]
            out |= {link_label(k) for k in self.failed_links[layer]}
        return out

    def count_above(self, layer) -> int:
        return sum(len(self.failed_components[n]) + len(self.failed_links[n])
                   for n in LayerId if n > layer)

    def summary(self) -> str:
        out = ["removed: " + (" ".join(self.scenario.labels) or "-")]
        for layer in LAYERS_TOP_DOWN:
            comps = sorted(self.failed_components[layer])
            links = sorted(link_label(k) for k in self.failed_links[layer])
            out.append(f"L{int(layer)} {layer.label}: {len(comps)} component(s), {len(links)} link(s) failed")
            if comps:
                out.append("  components: " + " ".join(comps))
            if links:
                out.append("  links: " + " ".join(links))
        out.append("broken requirements: " + (" ".join(sorted(self.broken_requirements)) or "-"))
        out.append("intact requirements: " + (" ".join(sorted(self.intact_requirements)) or "-"))
        if self.inaccessible_requirements:
            out.append("inaccessible before injection: " + " ".join(sorted(self.inaccessible_requirements)))
        return "\n".join(out) + "\n"


def _broken(model: LayeredModel, state, req: Requirement) -> bool:
    if not state.component_alive(req.src) or not state.component_alive(req.dst):
        return True
    return shortest_path(alive_neighbors(model, state, req.layer), req.src, req.dst) is None


def _inaccessible(model: LayeredModel) -> frozenset:
    memo = model.memo
    if "inaccessible" not in memo:
        state = baseline(model)
        memo["inaccessible"] = frozenset(r.id for r in model.requirements if _broken(model, state, r))
    return memo["inaccessible"]


def propagate_failures(model: LayeredModel, scenario) -> ImpactReport:
    """Remove the scenario's elements and let failures climb the layers.

    Lower layers are settled before upper ones: a link dies with either
    endpoint, a component dies once every image below it has died, and an
    upper link dies when no surviving lower path joins surviving images of
    its endpoints.  A requirement breaks when an endpoint dies or its
    endpoints are no longer joined by surviving links on its layer.
    """
    scenario = _coerce(model, scenario)
    base = baseline(model)
    state = survival(model, scenario.removed_components, scenario.removed_links)
    dead_c = (state.failed_components - base.failed_components) | scenario.removed_components
    dead_l = (state.failed_links - base.failed_links) | scenario.removed_links

    failed_c = {layer: frozenset(c for c in dead_c if model.layer_of(c) == layer) for layer in LayerId}
    failed_l = {layer: frozenset(k for k in dead_l if k[0] == layer) for layer in LayerId}

    inaccessible = _inaccessible(model)
    broken, intact = set(), set()
    for req in model.requirements:
        if req.id in inaccessible:
            continue
        (broken if _broken(model, state, req) else intact).add(req.id)
    return ImpactReport(scenario, failed_c, failed_l, frozenset(broken), frozenset(intact),
                        base.failed_links, inaccessible)


def _element_sort_key(model: LayeredModel, element) -> tuple:
    if isinstance(element, tuple):
        return (int(element[0]), link_label(element))
    return (int(model.layer_of(element)), element)


def enumerate_spofs(model: LayeredModel, requirement: Union[str, Requirement]) -> list:
    """Elements whose lone removal breaks ``requirement``.

    Candidates are the components and links strictly below the
    requirement's layer; the endpoints themselves are never candidates.
    Sorted by layer, then label (links are labelled ``link:LAYER:A-B``).
    """
    req = model.requirement(requirement)
    if not check_accessibility(model, req).passed:
        raise NotAccessible(f"requirement {req.id!r} is not accessible")
    if req.src == req.dst:
        return []
    candidates = [c.id for c in model.components if c.layer < req.layer]
    candidates += [link.key for link in model.links if link.layer < req.layer]
    spofs = []
    for element in candidates:
        if isinstance(element, tuple):
            scenario = FaultScenario(removed_links={element})
        else:
            scenario = FaultScenario(removed_components={element})
        if req.id in propagate_failures(model, scenario).broken_requirements:
            spofs.append(element)
    spofs.sort(key=lambda e: _element_sort_key(model, e))
    return [e if isinstance(e, str) else link_label(e) for e in spofs]


@dataclass(frozen=True)
class FmeaRow:
    failure_mode: str
    layer: LayerId
    effects: tuple
    collateral: int
    severity: Fraction

    def line(self) -> str:
        return "\t".join([self.failure_mode, str(int(self.layer)), f"{float(self.severity):.4f}",
                          ",".join(self.effects) or "-"])


def generate_fmea(model: LayeredModel) -> list:
    """One row per single-element failure mode, most severe first.

    Severity is the exact fraction of requirements broken; collateral counts
    failed elements on layers above the failed one.
    """
    if not model.requirements:
        raise NoRequirements("FMEA severity needs at least one requirement")
    total = len(model.requirements)
    rows = []
    elements = [(c.id, c.layer, FaultScenario(removed_components={c.id})) for c in model.components]
    elements += [(link.label, link.layer, FaultScenario(removed_links={link.key})) for link in model.links]
    for label, layer, scenario in elements:
        impact = propagate_failures(model, scenario)
        effects = tuple(sorted(impact.broken_requirements))
        rows.append(FmeaRow(label, layer, effects, impact.count_above(layer), Fraction(len(effects), total)))
    rows.sort(key=lambda r: (-r.severity, r.failure_mode))
    return rows


def render_fmea(rows) -> str:
    header = ("failure mode", "layer", "severity", "collateral", "effects")
    body = [(r.failure_mode, str(int(r.layer)), f"{r.severity.numerator}/{r.severity.denominator}",
             str(r.collateral), ",".join(r.effects) or "-") for r in rows]
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *body]]
    return "\n".join(lines) + "\n"


def run_scenario(model: LayeredModel, scenario) -> tuple:
    """Propagate a scenario and render its per-layer summary."""
    report = propagate_failures(model, scenario)
    return report, report.summary()
