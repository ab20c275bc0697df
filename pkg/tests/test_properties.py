import random

from hypothesis import given, settings
from hypothesis import strategies as st

from layernet.checklist import generate_checklist, render_lines
from layernet.consistency import check_accessibility, consistency_check
from layernet.faultsim import FaultScenario, propagate_failures
from layernet.model import ArityClass, Component, Link, Projection, classify_projection_arity, layer_subgraph
from layernet.modelio import parse_model, serialize_model

from helpers import edit, random_accessible_model, random_model

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _elements(model):
    return [("c", c.id) for c in model.components] + [("l", link.key) for link in model.links]


def _scenario(elements):
    return FaultScenario({x for k, x in elements if k == "c"}, {x for k, x in elements if k == "l"})


@settings(max_examples=80, deadline=None)
@given(seeds, st.data())
def test_monotonicity(seed, data):
    model = random_model(random.Random(seed), requirements=3)
    pool = _elements(model)
    big = data.draw(st.lists(st.sampled_from(pool), max_size=6, unique=True))
    small = data.draw(st.lists(st.sampled_from(big), unique=True)) if big else []
    r_small = propagate_failures(model, _scenario(small))
    r_big = propagate_failures(model, _scenario(big))
    assert r_small.failed_elements() <= r_big.failed_elements()
    assert r_small.broken_requirements <= r_big.broken_requirements


@settings(max_examples=80, deadline=None)
@given(seeds, st.data())
def test_idempotence(seed, data):
    model = random_model(random.Random(seed), requirements=3)
    removed = data.draw(st.lists(st.sampled_from(_elements(model)), max_size=4, unique=True))
    first = propagate_failures(model, _scenario(removed))
    again = FaultScenario(
        frozenset().union(*first.failed_components.values()),
        frozenset().union(*first.failed_links.values()))
    second = propagate_failures(model, again)
    assert second.failed_elements() == first.failed_elements()
    assert second.broken_requirements == first.broken_requirements


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_zero_scenario(seed):
    model = random_model(random.Random(seed), requirements=3)
    report = propagate_failures(model, FaultScenario())
    assert report.failed_elements() == set()
    assert report.broken_requirements == frozenset()


@settings(max_examples=80, deadline=None)
@given(seeds, st.data())
def test_clustered_survives_strict_subset(seed, data):
    model = random_model(random.Random(seed), max_images=4)
    clustered = [c.id for c in model.components
                 if c.layer > 1 and classify_projection_arity(model, c.id) is ArityClass.CLUSTERED]
    if not clustered:
        return
    target = data.draw(st.sampled_from(clustered))
    images = list(model.images(target))
    subset = data.draw(st.lists(st.sampled_from(images), max_size=len(images) - 1, unique=True))
    report = propagate_failures(model, FaultScenario(set(subset)))
    assert target not in report.failed_elements()


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_accessibility_monotone_under_additions(seed, data):
    rng = random.Random(seed)
    model = random_accessible_model(rng)
    assert check_accessibility(model, "r").passed
    layer = data.draw(st.sampled_from([1, 2, 3, 4]))
    members = model.components_on(layer)
    kind = data.draw(st.sampled_from(["component", "link", "projection"]))
    if kind == "component":
        new = Component("extra", layer)
        maps = [Projection("extra", model.components_on(layer - 1)[0])] if layer > 1 else []
        grown = edit(model, add_components=[new], add_maps=maps)
    elif kind == "link":
        free = [(a, b) for a in members for b in members if a < b and model.get_link(layer, a, b) is None]
        if not free:
            return
        grown = edit(model, add_links=[Link(layer, *data.draw(st.sampled_from(free)))])
    else:
        if layer == 1:
            return
        pairs = [(u, v) for u in members for v in model.components_on(layer - 1) if v not in model.images(u)]
        if not pairs:
            return
        grown = edit(model, add_maps=[data.draw(st.sampled_from(pairs))])
    assert check_accessibility(grown, "r").passed


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_projection_bound(seed):
    model = random_model(random.Random(seed), max_per_layer=20)
    for n in (2, 3, 4):
        assert len(model.components_on(n)) <= len(layer_subgraph(model, n).projections)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_round_trip_random(seed):
    model = random_model(random.Random(seed), requirements=2)
    text = serialize_model(model)
    assert parse_model(text) == model
    assert serialize_model(parse_model(text)) == text


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_reports_are_pure(seed):
    model = random_model(random.Random(seed), requirements=2)
    twin = random_model(random.Random(seed), requirements=2)
    assert consistency_check(model).lines() == consistency_check(twin).lines()
    assert render_lines(generate_checklist(model)) == render_lines(generate_checklist(twin))
