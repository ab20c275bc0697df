"""Four-layer graph model: components, links, projections and requirements.

A model holds one vertex set per architectural layer (physical, logical,
service, functional), undirected intra-layer links, and directed projections
that map a component onto the lower-layer component(s) implementing it.
Built models are immutable; every analysis in the package is a pure read.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from functools import cached_property
from typing import Iterable, Mapping, Optional, Union


class LayerId(IntEnum):
    PHYSICAL = 1
    LOGICAL = 2
    SERVICE = 3
    FUNCTIONAL = 4

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, token: Union[str, int, "LayerId"]) -> "LayerId":
        """Accept a layer name, an alias ("system" for service) or an index."""
        if isinstance(token, LayerId):
            return token
        if isinstance(token, int):
            return cls(token)
        key = token.strip().lower()
        if key.isdigit():
            return cls(int(key))
        if key in _LAYER_ALIASES:
            return _LAYER_ALIASES[key]
        raise ValueError(f"unknown layer {token!r}")


_LAYER_ALIASES = {
    "physical": LayerId.PHYSICAL,
    "logical": LayerId.LOGICAL,
    "service": LayerId.SERVICE,
    "system": LayerId.SERVICE,
    "functional": LayerId.FUNCTIONAL,
}

LAYERS_TOP_DOWN = (LayerId.FUNCTIONAL, LayerId.SERVICE, LayerId.LOGICAL, LayerId.PHYSICAL)
LAYERS_BOTTOM_UP = tuple(reversed(LAYERS_TOP_DOWN))

# (layer, a, b) with a < b
LinkKey = tuple


def link_key(layer, a: str, b: str) -> LinkKey:
    layer = LayerId.parse(layer)
    return (layer, a, b) if a <= b else (layer, b, a)


def link_label(key: LinkKey) -> str:
    layer, a, b = key
    return f"link:{int(layer)}:{a}-{b}"


# --------------------------------------------------------------------------
# errors


class ModelError(ValueError):
    """Base class for model construction errors.

    ``element`` is the offending input object when one exists; parsers use it
    to attach source positions.
    """

    def __init__(self, message: str, element=None):
        super().__init__(message)
        self.element = element
        self.line: Optional[int] = None


class DuplicateId(ModelError):
    def __init__(self, ident: str, element=None):
        super().__init__(f"duplicate id {ident!r}", element)
        self.ident = ident


class DanglingReference(ModelError):
    def __init__(self, kind: str, ident: str, element=None):
        super().__init__(f"{kind} references undeclared component {ident!r}", element)
        self.kind = kind
        self.ident = ident


class SelfLink(ModelError):
    def __init__(self, ident: str, element=None):
        super().__init__(f"link from {ident!r} to itself", element)
        self.ident = ident


class LayerMismatch(ModelError):
    pass


class NoProjection(ModelError):
    def __init__(self, ident: str):
        super().__init__(f"component {ident!r} has no projection")
        self.ident = ident


# --------------------------------------------------------------------------
# elements


def _tags(values: Iterable[str]) -> frozenset:
    if isinstance(values, str):
        values = [values]
    return frozenset(v for v in values if v)


@dataclass(frozen=True)
class Component:
    id: str
    layer: LayerId
    protocols: frozenset = frozenset()
    standards: frozenset = frozenset()
    description: Optional[str] = None
    location: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "layer", LayerId.parse(self.layer))
        object.__setattr__(self, "protocols", _tags(self.protocols))
        object.__setattr__(self, "standards", _tags(self.standards))


@dataclass(frozen=True)
class Link:
    """Undirected intra-layer connection; endpoints are stored sorted."""

    layer: LayerId
    a: str
    b: str
    protocols: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "layer", LayerId.parse(self.layer))
        object.__setattr__(self, "protocols", _tags(self.protocols))
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def key(self) -> LinkKey:
        return (self.layer, self.a, self.b)

    @property
    def label(self) -> str:
        return link_label(self.key)


@dataclass(frozen=True)
class Projection:
    upper: str
    lower: str


@dataclass(frozen=True)
class Requirement:
    id: str
    src: str
    dst: str
    layer: LayerId = LayerId.FUNCTIONAL
    min_replicas: Optional[int] = None
    min_locations: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "layer", LayerId.parse(self.layer))
        for name in ("min_replicas", "min_locations"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value}")


class ArityClass(Enum):
    VIRTUALIZED = "Virtualized"
    CLUSTERED = "Clustered"
    DEDICATED = "Dedicated"
    HYBRID = "Hybrid"


# --------------------------------------------------------------------------
# the model


@dataclass(frozen=True)
class LayeredModel:
    """The whole layered graph ``G = (V, E, M)`` plus its requirements.

    Element tuples are kept in canonical order so that two models built from
    the same elements compare equal regardless of input order.  Use
    :func:`build_model` rather than constructing this directly.
    """

    name: str
    components: tuple
    links: tuple
    projections: tuple
    requirements: tuple

    @cached_property
    def by_id(self) -> Mapping[str, Component]:
        return {c.id: c for c in self.components}

    @cached_property
    def _layer_members(self) -> Mapping[LayerId, tuple]:
        members = {layer: [] for layer in LayerId}
        for c in self.components:
            members[c.layer].append(c.id)
        return {layer: tuple(sorted(ids)) for layer, ids in members.items()}

    @cached_property
    def _link_index(self) -> Mapping[LinkKey, Link]:
        return {link.key: link for link in self.links}

    @cached_property
    def _adjacency(self) -> Mapping[str, tuple]:
        adj = defaultdict(set)
        for link in self.links:
            adj[link.a].add(link.b)
            adj[link.b].add(link.a)
        return {c: tuple(sorted(ns)) for c, ns in adj.items()}

    @cached_property
    def _images(self) -> Mapping[str, tuple]:
        out = defaultdict(set)
        for p in self.projections:
            out[p.upper].add(p.lower)
        return {c: tuple(sorted(v)) for c, v in out.items()}

    @cached_property
    def _preimages(self) -> Mapping[str, tuple]:
        inc = defaultdict(set)
        for p in self.projections:
            inc[p.lower].add(p.upper)
        return {c: tuple(sorted(v)) for c, v in inc.items()}

    @cached_property
    def memo(self) -> dict:
        """Scratch space for derived analyses of this (immutable) model."""
        return {}

    @cached_property
    def requirement_index(self) -> Mapping[str, Requirement]:
        return {r.id: r for r in self.requirements}

    def layer_of(self, ident: str) -> LayerId:
        return self.by_id[ident].layer

    def components_on(self, layer) -> tuple:
        """Sorted component ids on ``layer``."""
        return self._layer_members[LayerId.parse(layer)]

    def links_on(self, layer) -> tuple:
        layer = LayerId.parse(layer)
        return tuple(link for link in self.links if link.layer == layer)

    def neighbors(self, ident: str) -> tuple:
        return self._adjacency.get(ident, ())

    def get_link(self, layer, a: str, b: str) -> Optional[Link]:
        return self._link_index.get(link_key(layer, a, b))

    def images(self, ident: str) -> tuple:
        """Sorted projection targets of ``ident`` (all layers)."""
        return self._images.get(ident, ())

    def adjacent_images(self, ident: str) -> tuple:
        """Sorted projection targets that lie exactly one layer below."""
        target = self.layer_of(ident) - 1
        return tuple(i for i in self.images(ident) if self.by_id[i].layer == target)

    def preimages(self, ident: str) -> tuple:
        return self._preimages.get(ident, ())

    def physical_images(self, ident: str) -> frozenset:
        """Transitive downward closure of projections, restricted to layer 1."""
        seen, stack = set(), [ident]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self.images(cur))
        return frozenset(c for c in seen if self.by_id[c].layer == LayerId.PHYSICAL)

    def requirement(self, req: Union[str, Requirement]) -> Requirement:
        if isinstance(req, Requirement):
            return req
        try:
            return self.requirement_index[req]
        except KeyError:
            raise KeyError(f"unknown requirement {req!r}") from None

    @property
    def element_count(self) -> int:
        return len(self.components) + len(self.links)


def _canonical(components, links, projections, requirements):
    return (
        tuple(sorted(components, key=lambda c: (-c.layer, c.id))),
        tuple(sorted(links, key=lambda l: (-l.layer, l.a, l.b))),
        tuple(sorted(projections, key=lambda p: (p.upper, p.lower))),
        tuple(sorted(requirements, key=lambda r: r.id)),
    )


def build_model(components: Iterable[Component], links: Iterable[Link] = (),
                projections: Iterable[Projection] = (),
                requirements: Iterable[Requirement] = (), name: str = "") -> LayeredModel:
    """Assemble a model, enforcing id uniqueness and referential integrity.

    Layer rules for projections (adjacency, non-physical source, coverage) are
    *not* enforced here; they are reported by :func:`validate_structure`.
    """
    components, links = list(components), list(links)
    projections, requirements = list(projections), list(requirements)

    by_id = {}
    for c in components:
        if c.id in by_id:
            raise DuplicateId(c.id, c)
        by_id[c.id] = c

    seen_links = set()
    for link in links:
        if link.a == link.b:
            raise SelfLink(link.a, link)
        for end in (link.a, link.b):
            if end not in by_id:
                raise DanglingReference("link", end, link)
            if by_id[end].layer != link.layer:
                raise LayerMismatch(
                    f"link endpoint {end!r} is on layer {by_id[end].layer.label}, "
                    f"not {link.layer.label}", link)
        if link.key in seen_links:
            raise DuplicateId(link.label, link)
        seen_links.add(link.key)

    seen_maps = set()
    for p in projections:
        for end in (p.upper, p.lower):
            if end not in by_id:
                raise DanglingReference("map", end, p)
        if (p.upper, p.lower) in seen_maps:
            raise DuplicateId(f"map:{p.upper}->{p.lower}", p)
        seen_maps.add((p.upper, p.lower))

    req_ids = set()
    for r in requirements:
        if r.id in req_ids:
            raise DuplicateId(r.id, r)
        req_ids.add(r.id)
        for end in (r.src, r.dst):
            if end not in by_id:
                raise DanglingReference("requirement", end, r)
            if by_id[end].layer != r.layer:
                raise LayerMismatch(
                    f"requirement {r.id!r} endpoint {end!r} is not on layer {r.layer.label}", r)

    return LayeredModel(name, *_canonical(components, links, projections, requirements))


# --------------------------------------------------------------------------
# structural validation


@dataclass(frozen=True, order=True)
class Issue:
    code: str
    subject: str
    message: str = field(compare=False)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()
    warnings: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list:
        return [v.code for v in self.violations]


def validate_structure(model: LayeredModel, strict: bool = True) -> ValidationReport:
    """Report every violated structural rule.

    Violations: ``MissingProjection``, ``NonAdjacentProjection``,
    ``PhysicalProjection`` and, in strict mode, ``EmptyLayer`` and
    ``EmptyLinkSet``.  Lenient mode demotes the emptiness findings to
    warnings.  ``IsolatedLowerComponent`` is always a warning.
    """
    violations, warnings = [], []
    emptiness = violations if strict else warnings

    for layer in LAYERS_TOP_DOWN:
        if not model.components_on(layer):
            emptiness.append(Issue("EmptyLayer", layer.label, f"layer {int(layer)} has no components"))
    if not model.links:
        emptiness.append(Issue("EmptyLinkSet", model.name or "model", "model declares no links"))

    for p in model.projections:
        up, low = model.layer_of(p.upper), model.layer_of(p.lower)
        subject = f"{p.upper}->{p.lower}"
        if up == LayerId.PHYSICAL:
            violations.append(Issue("PhysicalProjection", subject,
                                    "projections may not leave the physical layer"))
        elif up != low + 1:
            violations.append(Issue("NonAdjacentProjection", subject,
                                    f"projects layer {int(up)} onto layer {int(low)}"))

    for c in model.components:
        if c.layer == LayerId.PHYSICAL:
            continue
        downward = [i for i in model.images(c.id) if model.layer_of(i) < c.layer]
        if not downward:
            violations.append(Issue("MissingProjection", c.id,
                                    f"{c.layer.label} component has no top-down projection"))
    for c in model.components:
        if c.layer == LayerId.FUNCTIONAL:
            continue
        if not model.preimages(c.id):
            warnings.append(Issue("IsolatedLowerComponent", c.id,
                                  "no upper-layer component projects onto it"))

    return ValidationReport(tuple(sorted(violations)), tuple(sorted(warnings)))


# --------------------------------------------------------------------------
# arity, layer views, cardinality


def classify_projection_arity(model: LayeredModel, upper: str) -> ArityClass:
    """Classify the projection pattern of ``upper`` onto the layer below.

    One image shared with other components is virtualization (N:1), several
    exclusive images are clustering (1:N), one exclusive image is a dedicated
    component (1:1); several images with at least one shared is ``HYBRID``.
    """
    images = model.images(upper)
    if not images:
        raise NoProjection(upper)
    shared = [len(model.preimages(i)) > 1 for i in images]
    if len(images) == 1:
        return ArityClass.VIRTUALIZED if shared[0] else ArityClass.DEDICATED
    return ArityClass.HYBRID if any(shared) else ArityClass.CLUSTERED


@dataclass(frozen=True)
class LayerView:
    """One layer's subgraph: its vertices, links, downward projections and
    the full vertex set of the layer below."""

    layer: LayerId
    components: frozenset
    links: frozenset
    projections: frozenset
    lower_components: frozenset


def layer_subgraph(model: LayeredModel, n) -> LayerView:
    n = LayerId.parse(n)
    comps = frozenset(model.by_id[i] for i in model.components_on(n))
    links = frozenset(model.links_on(n))
    if n == LayerId.PHYSICAL:
        return LayerView(n, comps, links, frozenset(), frozenset())
    ids = {c.id for c in comps}
    maps = frozenset(p for p in model.projections if p.upper in ids)
    lower = frozenset(model.by_id[i] for i in model.components_on(n - 1))
    return LayerView(n, comps, links, maps, lower)


def compose_layers(views: Iterable[LayerView], requirements: Iterable[Requirement] = (),
                   name: str = "") -> LayeredModel:
    """Union of layer views back into a model."""
    comps, links, maps = set(), set(), set()
    for v in views:
        comps |= v.components | v.lower_components
        links |= v.links
        maps |= v.projections
    return build_model(comps, links, maps, requirements, name=name)


@dataclass(frozen=True)
class CardinalityRow:
    layer: LayerId
    components: int
    links: int
    projections: Optional[int]
    lower_components: Optional[int]

    def as_tuple(self) -> tuple:
        return (int(self.layer), self.components, self.links, self.projections, self.lower_components)


def cardinality_report(model: LayeredModel) -> list:
    """Per-layer sizes, top layer first; the physical row has no projection
    or lower-vertex entries (``None``)."""
    rows = []
    for n in LAYERS_TOP_DOWN:
        view = layer_subgraph(model, n)
        if n == LayerId.PHYSICAL:
            rows.append(CardinalityRow(n, len(view.components), len(view.links), None, None))
        else:
            rows.append(CardinalityRow(n, len(view.components), len(view.links),
                                       len(view.projections), len(view.lower_components)))
    return rows
