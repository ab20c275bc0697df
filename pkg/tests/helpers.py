"""Fixture builders, model editing and random valid models for the tests."""

import random
from pathlib import Path

from layernet.cli import bundled_fixture
from layernet.model import Component, LayerId, Link, Projection, Requirement, build_model
from layernet.modelio import parse_model

GOLDEN = Path(__file__).parent / "golden"


def load(name):
    return parse_model(bundled_fixture(name), f"{name}.lgm")


def demo():
    return load("demo")


def edit(model, add_components=(), drop_components=(), add_links=(), drop_links=(),
         add_maps=(), drop_maps=(), add_requirements=(), requirements=None):
    """Rebuild ``model`` with elements added or removed.

    Links are given as ``(layer, a, b)``, maps as ``(upper, lower)``.
    """
    drop_links = {frozenset(x[1:]) for x in drop_links}
    drop_maps = set(drop_maps)
    comps = [c for c in model.components if c.id not in set(drop_components)] + list(add_components)
    links = [l for l in model.links if frozenset((l.a, l.b)) not in drop_links]
    links += [x if isinstance(x, Link) else Link(*x) for x in add_links]
    maps = [p for p in model.projections if (p.upper, p.lower) not in drop_maps]
    maps += [m if isinstance(m, Projection) else Projection(*m) for m in add_maps]
    reqs = list(model.requirements) if requirements is None else list(requirements)
    reqs += list(add_requirements)
    return build_model(comps, links, maps, reqs, name=model.name)


def chain_model():
    """One component per layer, mapped straight down, no links."""
    comps = [Component(f"c{n}", n) for n in (1, 2, 3, 4)]
    maps = [Projection("c4", "c3"), Projection("c3", "c2"), Projection("c2", "c1")]
    return build_model(comps, (), maps, name="chain")


def clustered_demo():
    """Demo with srv also backed by vm3 on h3; vm3 joins net1."""
    return edit(demo(),
                add_components=[Component("h3", 1), Component("vm3", 2)],
                add_links=[(1, "h3", "sw1"), (2, "vm3", "net1")],
                add_maps=[("vm3", "h3"), ("srv", "vm3")])


def two_requirement_model():
    """Demo plus a second, independent chain user2 -> data2 on h3/h4."""
    extra = [Component(i, layer) for i, layer in
             [("h3", 1), ("h4", 1), ("sw2", 1), ("vm3", 2), ("vm4", 2), ("net2", 2),
              ("cli2", 3), ("srv2", 3), ("user2", 4), ("data2", 4)]]
    links = [(1, "h3", "sw2"), (1, "h4", "sw2"), (2, "vm3", "net2"), (2, "vm4", "net2"),
             (3, "cli2", "srv2"), (4, "user2", "data2")]
    maps = [("vm3", "h3"), ("vm4", "h4"), ("net2", "sw2"), ("cli2", "vm3"), ("srv2", "vm4"),
            ("user2", "cli2"), ("data2", "srv2")]
    return edit(demo(), add_components=extra, add_links=links, add_maps=maps,
                add_requirements=[Requirement("r2", "user2", "data2")])


# --------------------------------------------------------------------------
# random valid models

PREFIX = {1: "p", 2: "l", 3: "s", 4: "f"}


def random_model(rng: random.Random, max_per_layer=5, link_p=0.4, max_images=3, requirements=0,
                 name="random"):
    """A structurally valid model: every layer non-empty, at least one link,
    every upper component projected onto 1..max_images components of the
    layer directly below."""
    sizes = {n: rng.randint(1, max_per_layer) for n in (1, 2, 3, 4)}
    sizes[1] = max(sizes[1], 2)
    ids = {n: [f"{PREFIX[n]}{i}" for i in range(sizes[n])] for n in sizes}
    comps = [Component(i, n) for n in ids for i in ids[n]]
    links = []
    for n, members in ids.items():
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if rng.random() < link_p:
                    links.append(Link(n, a, b))
    if not links:
        links.append(Link(1, ids[1][0], ids[1][1]))
    maps = []
    for n in (2, 3, 4):
        for c in ids[n]:
            k = rng.randint(1, min(max_images, sizes[n - 1]))
            maps += [Projection(c, lower) for lower in rng.sample(ids[n - 1], k)]
    reqs = []
    for r in range(requirements):
        n = rng.choice([2, 3, 4])
        if sizes[n] < 2:
            continue
        src, dst = rng.sample(ids[n], 2)
        reqs.append(Requirement(f"r{r}", src, dst, n))
    return build_model(comps, links, maps, reqs, name=name)


def random_accessible_model(rng: random.Random, max_elements=40, attempts=200):
    """Random model with <= max_elements components+links and exactly one
    requirement that passes accessibility."""
    from layernet.consistency import check_accessibility

    for _ in range(attempts):
        model = random_model(rng, max_per_layer=4, link_p=rng.choice([0.3, 0.5, 0.7]), requirements=0)
        if model.element_count > max_elements:
            continue
        candidates = []
        for n in (2, 3, 4):
            members = model.components_on(n)
            candidates += [(n, a, b) for a in members for b in members if a < b]
        rng.shuffle(candidates)
        for n, a, b in candidates:
            req = Requirement("r", a, b, n) if rng.random() < 0.5 else Requirement("r", b, a, n)
            trial = edit(model, requirements=[req])
            if check_accessibility(trial, "r").passed:
                return trial
    raise RuntimeError("no accessible random model found")
