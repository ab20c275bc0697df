"""Line-oriented model format, logic-fact export and DOT drawing export.

Model text, one directive per line (``#`` starts a comment)::

    model <name>
    component <physical|logical|service|functional> <id> [protocols=a,b] [standards=x,y] [location=L] [desc="..."]
    link <layer> <idA> <idB> [protocols=a,b]
    map <upperId> <lowerId>
    requirement <id> <srcId> <dstId> [layer=functional] [min_replicas=K] [min_locations=K]
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from typing import Optional

from .model import (
    LAYERS_TOP_DOWN,
    Component,
    LayerId,
    LayeredModel,
    Link,
    ModelError,
    Projection,
    Requirement,
    build_model,
)

_TOKEN = re.compile(r'(?:[^\s"]+|"(?:[^"\\]|\\.)*")+')
_QUOTED = re.compile(r'"((?:[^"\\]|\\.)*)"')


class ParseError(ValueError):
    """Syntax or model error with a 1-based source position."""

    def __init__(self, line: int, col: int, message: str, source: str = "<string>"):
        super().__init__(f"{source}:{line}:{col}: {message}")
        self.line, self.col, self.message, self.source = line, col, message, source


class ParseWarning(UserWarning):
    pass


class IdNotQuotable(ValueError):
    def __init__(self, ident: str):
        super().__init__(f"identifier {ident!r} contains an apostrophe and cannot be exported as a fact")
        self.ident = ident


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str

    def render(self, source: str) -> str:
        return f"{source}:{self.line}:{self.col}: warning: {self.message}"


_ALLOWED_KEYS = {
    "component": {"protocols", "standards", "location", "desc"},
    "link": {"protocols"},
    "map": set(),
    "requirement": {"layer", "min_replicas", "min_locations"},
}
_POSITIONAL = {"model": 1, "component": 2, "link": 3, "map": 2, "requirement": 3}


def _unquote(value: str) -> str:
    m = _QUOTED.fullmatch(value)
    if not m:
        return value
    return re.sub(r"\\(.)", r"\1", m.group(1))


def _split_list(value: str) -> list:
    return [v for v in _unquote(value).split(",") if v]


def parse_document(text: str, source: str = "<string>"):
    """Parse model text; returns ``(model, warnings)``.

    Raises :class:`ParseError` for syntax errors and for model construction
    errors, which are annotated with the line of the offending directive.
    """
    name = ""
    components, links, maps, reqs = [], [], [], []
    origin = {}
    diags = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        tokens = [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(body)]
        if not tokens:
            continue
        keyword, kcol = tokens[0]
        if keyword not in _POSITIONAL:
            raise ParseError(lineno, kcol, f"unknown directive {keyword!r}", source)
        need = _POSITIONAL[keyword]
        args = tokens[1:]
        positional = [t for t in args[:need] if "=" not in t[0]]
        if len(positional) < need:
            col = args[len(positional)][1] if len(positional) < len(args) else len(raw) + 1
            raise ParseError(lineno, col, f"{keyword} expects {need} argument(s)", source)
        attrs = {}
        for tok, col in args[need:]:
            if "=" not in tok:
                raise ParseError(lineno, col, f"unexpected token {tok!r}", source)
            key, value = tok.split("=", 1)
            if key in attrs:
                raise ParseError(lineno, col, f"repeated attribute {key!r}", source)
            if keyword == "model" or key not in _ALLOWED_KEYS[keyword]:
                diags.append(Diagnostic(lineno, col, f"unknown attribute {key!r} ignored"))
                continue
            attrs[key] = (value, col)
        values = [t for t, _ in positional]

        if keyword == "model":
            name = values[0]
            continue
        if keyword == "component":
            layer = _layer(values[0], lineno, positional[0][1], source)
            element = Component(
                values[1], layer,
                protocols=_split_list(attrs["protocols"][0]) if "protocols" in attrs else (),
                standards=_split_list(attrs["standards"][0]) if "standards" in attrs else (),
                description=_unquote(attrs["desc"][0]) if "desc" in attrs else None,
                location=_unquote(attrs["location"][0]) if "location" in attrs else None,
            )
            components.append(element)
        elif keyword == "link":
            layer = _layer(values[0], lineno, positional[0][1], source)
            protocols = _split_list(attrs["protocols"][0]) if "protocols" in attrs else ()
            element = Link(layer, values[1], values[2], protocols)
            links.append(element)
        elif keyword == "map":
            element = Projection(values[0], values[1])
            maps.append(element)
        else:
            kwargs = {}
            if "layer" in attrs:
                value, col = attrs["layer"]
                kwargs["layer"] = _layer(value, lineno, col, source)
            for key in ("min_replicas", "min_locations"):
                if key in attrs:
                    value, col = attrs[key]
                    if not value.isdigit() or int(value) < 1:
                        raise ParseError(lineno, col, f"{key} must be a positive integer", source)
                    kwargs[key] = int(value)
            element = Requirement(values[0], values[1], values[2], **kwargs)
            reqs.append(element)
        origin[id(element)] = lineno

    try:
        model = build_model(components, links, maps, reqs, name=name)
    except ModelError as exc:
        line = origin.get(id(exc.element), 0)
        exc.line = line
        raise ParseError(line, 1, str(exc), source) from exc
    return model, diags


def _strip_comment(raw: str) -> str:
    in_quote, escaped = False, False
    for i, ch in enumerate(raw):
        if escaped:
            escaped = False
        elif ch == "\\" and in_quote:
            escaped = True
        elif ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return raw[:i]
    return raw


def _layer(token: str, line: int, col: int, source: str) -> LayerId:
    try:
        return LayerId.parse(token)
    except ValueError:
        raise ParseError(line, col, f"unknown layer {token!r}", source) from None


def parse_model(text: str, source: str = "<string>") -> LayeredModel:
    """Parse model text, emitting :class:`ParseWarning` for ignored attributes."""
    model, diags = parse_document(text, source)
    for d in diags:
        warnings.warn(d.render(source), ParseWarning, stacklevel=2)
    return model


# --------------------------------------------------------------------------
# canonical text


def _quote(value: str) -> str:
    if value and re.fullmatch(r'[^\s"#\\]+', value):
        return value
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _join(tags) -> str:
    return ",".join(sorted(tags))


def serialize_model(model: LayeredModel) -> str:
    """Canonical text: header, components (layer desc, id), links, maps,
    requirements, one space between tokens."""
    out = []
    if model.name:
        out.append(f"model {model.name}")
    for c in model.components:
        parts = ["component", c.layer.label, c.id]
        if c.protocols:
            parts.append(f"protocols={_join(c.protocols)}")
        if c.standards:
            parts.append(f"standards={_join(c.standards)}")
        if c.location is not None:
            parts.append(f"location={_quote(c.location)}")
        if c.description is not None:
            parts.append(f"desc={_quote(c.description)}")
        out.append(" ".join(parts))
    for link in model.links:
        parts = ["link", link.layer.label, link.a, link.b]
        if link.protocols:
            parts.append(f"protocols={_join(link.protocols)}")
        out.append(" ".join(parts))
    for p in sorted(model.projections, key=lambda p: (-model.layer_of(p.upper), p.upper, p.lower)):
        out.append(f"map {p.upper} {p.lower}")
    for r in model.requirements:
        parts = ["requirement", r.id, r.src, r.dst]
        if r.layer != LayerId.FUNCTIONAL:
            parts.append(f"layer={r.layer.label}")
        if r.min_replicas is not None:
            parts.append(f"min_replicas={r.min_replicas}")
        if r.min_locations is not None:
            parts.append(f"min_locations={r.min_locations}")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n" if out else ""


# --------------------------------------------------------------------------
# exports


def _atom(ident: str) -> str:
    if "'" in ident:
        raise IdNotQuotable(ident)
    return f"'{ident}'"


def export_logic_facts(model: LayeredModel) -> str:
    """One Prolog fact per line: vertices, edges, maps, requirements."""
    facts = []
    for c in model.components:
        facts.append(f"vertex({int(c.layer)}, {_atom(c.id)}).")
    for link in model.links:
        facts.append(f"edge({int(link.layer)}, {_atom(link.a)}, {_atom(link.b)}).")
    for p in sorted(model.projections, key=lambda p: (-model.layer_of(p.upper), p.upper, p.lower)):
        facts.append(f"map({int(model.layer_of(p.upper))}, {_atom(p.upper)}, {_atom(p.lower)}).")
    for r in model.requirements:
        facts.append(f"requirement({_atom(r.id)}, {int(r.layer)}, {_atom(r.src)}, {_atom(r.dst)}).")
    return "".join(f + "\n" for f in facts)


def _dot_id(ident: str) -> str:
    return '"' + ident.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_drawing(model: LayeredModel, title: Optional[str] = None) -> str:
    """Graphviz DOT text with one cluster per layer, top layer first."""
    title = title or model.name or "model"
    out = [f"digraph {_dot_id(title)} {{", "  rankdir=TB;", "  compound=true;",
           "  node [shape=box];"]
    for layer in LAYERS_TOP_DOWN:
        out.append(f"  subgraph cluster_L{int(layer)} {{")
        out.append(f'    label="{int(layer)} {layer.label}";')
        out.append("    rank=same;")
        for ident in model.components_on(layer):
            out.append(f"    {_dot_id(ident)};")
        out.append("  }")
    for link in model.links:
        out.append(f"  {_dot_id(link.a)} -> {_dot_id(link.b)} [dir=none, style=solid];")
    for p in sorted(model.projections, key=lambda p: (-model.layer_of(p.upper), p.upper, p.lower)):
        out.append(f"  {_dot_id(p.upper)} -> {_dot_id(p.lower)} [style=dashed];")
    out.append("}")
    return "\n".join(out) + "\n"
