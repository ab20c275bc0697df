"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line.  Run directly
(``python tests/test_acceptance.py``) for just those lines.
"""

import functools
import os
import random
import subprocess
import sys
import time
from itertools import combinations
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import GOLDEN, demo, edit, load, random_accessible_model, random_model  # noqa: E402
from oracles import spof_oracle  # noqa: E402

from layernet.checklist import generate_checklist, render_lines  # noqa: E402
from layernet.cli import run  # noqa: E402
from layernet.consistency import check_accessibility  # noqa: E402
from layernet.faultsim import FaultScenario, enumerate_spofs, propagate_failures  # noqa: E402
from layernet.model import (  # noqa: E402
    ArityClass,
    Component,
    DuplicateId,
    build_model,
    classify_projection_arity,
    layer_subgraph,
    validate_structure,
)
from layernet.modelio import export_logic_facts, parse_model, serialize_model  # noqa: E402

FIXTURES = ["demo", "redundant_demo", "cpwe_fixture"]


@functools.lru_cache(maxsize=None)
def structural_models():
    rng = random.Random(20240601)
    return tuple(random_model(rng, max_per_layer=20, link_p=rng.choice([0.05, 0.1, 0.2]))
                 for _ in range(1000))


@functools.lru_cache(maxsize=None)
def spof_models():
    rng = random.Random(4242)
    return tuple(random_accessible_model(rng, max_elements=40) for _ in range(200))


# ----------------------------------------------------------------- criteria

def criterion_1():
    start = time.perf_counter()
    code, stdout, _ = _invoke(["stats", "cpwe_fixture"], 0)
    elapsed = time.perf_counter() - start
    rows = [line.split()[1:] for line in stdout.decode().splitlines()[1:]]
    expected = [["4", "4", "2", "16", "45"], ["3", "45", "132", "45", "34"],
                ["2", "34", "33", "89", "11"], ["1", "11", "24", "-", "-"]]
    ok = code == 0 and rows == expected and elapsed < 1.0
    return ok, f"stats rows match={rows == expected}, {elapsed:.3f}s end-to-end process (< 1s)"


def _mutations(model, rng):
    """Yield (mutated model or exception, expected violation list) triples."""
    # drop a projection, preferring the sole projection of some component
    sole = [p for p in model.projections if len(model.images(p.upper)) == 1]
    dropped = rng.choice(sole or list(model.projections))
    expected = [("MissingProjection", dropped.upper)] if len(model.images(dropped.upper)) == 1 else []
    yield "drop", edit(model, drop_maps=[(dropped.upper, dropped.lower)]), expected

    # retarget a projection two layers down
    movable = [p for p in model.projections if model.layer_of(p.upper) >= 3]
    p = rng.choice(movable)
    target = rng.choice(model.components_on(model.layer_of(p.upper) - 2))
    retargeted = edit(model, drop_maps=[(p.upper, p.lower)], add_maps=[(p.upper, target)])
    yield "retarget", retargeted, [("NonAdjacentProjection", f"{p.upper}->{target}")]

    # duplicate an id on a random layer
    victim = rng.choice(model.components)
    try:
        build_model(list(model.components) + [Component(victim.id, rng.randint(1, 4))],
                    model.links, model.projections)
        yield "duplicate", None, ["DuplicateId"]
    except DuplicateId as exc:
        yield "duplicate", exc, ["DuplicateId"]


def criterion_2():
    start = time.perf_counter()
    rng = random.Random(99)
    failures = []
    dropped_with_violation = 0
    for i, model in enumerate(structural_models()):
        if max(len(model.components_on(n)) for n in (1, 2, 3, 4)) > 20:
            failures.append((i, "too large"))
        report = validate_structure(model, strict=True)
        if report.violations:
            failures.append((i, "valid model reported", report.codes()))
        for n in (2, 3, 4):
            if not len(model.components_on(n)) <= len(layer_subgraph(model, n).projections):
                failures.append((i, "projection bound", n))
        for kind, mutated, expected in _mutations(model, rng):
            if kind == "duplicate":
                if not isinstance(mutated, DuplicateId):
                    failures.append((i, kind))
                continue
            got = [(v.code, v.subject) for v in validate_structure(mutated, strict=True).violations]
            if got != expected:
                failures.append((i, kind, got, expected))
            if kind == "drop" and expected:
                dropped_with_violation += 1
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 30 and dropped_with_violation > 900
    detail = (f"{len(structural_models())} models, {len(failures)} failures, "
              f"{dropped_with_violation} sole-projection drops, {elapsed:.1f}s (< 30s)")
    return ok, detail + (f"; first failure {failures[0]}" if failures else "")


def criterion_3():
    start = time.perf_counter()
    models = spof_models()
    mismatches = []
    nonempty = 0
    for i, model in enumerate(models):
        assert model.element_count <= 40
        req = model.requirement("r")
        got = enumerate_spofs(model, req)
        want = spof_oracle(model, req)
        nonempty += bool(want)
        if got != want:
            mismatches.append((i, got, want))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 60
    detail = f"{len(models)} models ({nonempty} with SPOFs), {len(mismatches)} mismatches, {elapsed:.1f}s (< 60s)"
    return ok, detail + (f"; first mismatch {mismatches[0]}" if mismatches else "")


def _pool(model):
    return [("c", c.id) for c in model.components] + [("l", link.key) for link in model.links]


def _scenario(elements):
    return FaultScenario({x for k, x in elements if k == "c"}, {x for k, x in elements if k == "l"})


def criterion_4():
    rng = random.Random(7)
    models = list(spof_models()) + list(structural_models()[:100])
    bad = []
    clustered_checked = 0
    for i, model in enumerate(models):
        zero = propagate_failures(model, FaultScenario())
        if zero.failed_elements() or zero.broken_requirements:
            bad.append((i, "zero"))
        pool = _pool(model)
        for _ in range(5):
            big = rng.sample(pool, rng.randint(1, min(6, len(pool))))
            small = rng.sample(big, rng.randint(0, len(big)))
            r_small, r_big = propagate_failures(model, _scenario(small)), propagate_failures(model, _scenario(big))
            if not (r_small.failed_elements() <= r_big.failed_elements()
                    and r_small.broken_requirements <= r_big.broken_requirements):
                bad.append((i, "monotonicity", small, big))
            again = FaultScenario(frozenset().union(*r_big.failed_components.values()),
                                  frozenset().union(*r_big.failed_links.values()))
            r_again = propagate_failures(model, again)
            if (r_again.failed_elements(), r_again.broken_requirements) != (
                    r_big.failed_elements(), r_big.broken_requirements):
                bad.append((i, "idempotence", big))
        for c in model.components:
            if c.layer == 1 or classify_projection_arity(model, c.id) is not ArityClass.CLUSTERED:
                continue
            images = model.images(c.id)
            for k in range(len(images)):
                for subset in combinations(images, k):
                    clustered_checked += 1
                    if c.id in propagate_failures(model, FaultScenario(set(subset))).failed_elements():
                        bad.append((i, "clustered", c.id, subset))
    ok = not bad and clustered_checked > 0
    detail = f"{len(models)} models, {clustered_checked} clustered strict-subset failures, {len(bad)} violations"
    return ok, detail + (f"; first {bad[0]}" if bad else "")


def criterion_5():
    m = demo()
    checks = {}
    acc = check_accessibility(m, "r1")
    checks["accessibility"] = acc.passed and acc.evidence.render() == (GOLDEN / "demo_accessibility.txt").read_text()
    spof_out = run(["spof", "demo", "--requirement", "r1"]).stdout
    checks["spofs"] = (spof_out == (GOLDEN / "demo_spofs.tsv").read_text()
                       and len(enumerate_spofs(m, "r1")) == 13)
    items = generate_checklist(m)
    checks["checklist"] = len(items) == 14 and render_lines(items) == (GOLDEN / "demo_checklist.tsv").read_text()
    facts = export_logic_facts(m)
    checks["facts"] = len(facts.splitlines()) == 24 and facts == (GOLDEN / "demo_facts.pl").read_text()
    impact = propagate_failures(m, ["h1"])
    checks["inject h1"] = (len(impact.failed_elements()) == 8
                           and impact.summary() == (GOLDEN / "demo_inject_h1.txt").read_text())
    failed = [k for k, v in checks.items() if not v]
    return not failed, f"{len(checks) - len(failed)}/{len(checks)} goldens byte-exact" + (
        f"; mismatched: {', '.join(failed)}" if failed else "")


COMMANDS = [
    ["validate", "demo", "--strict"], ["check", "demo"], ["check", "cpwe_fixture", "--format", "lines"],
    ["checklist", "demo"], ["checklist", "cpwe_fixture", "--format", "lines"], ["stats", "cpwe_fixture"],
    ["inject", "demo", "--remove", "comp:h1"], ["inject", "cpwe_fixture", "--remove", "link:1:sw_core1-sw_dist1"],
    ["fmea", "demo"], ["fmea", "cpwe_fixture", "--format", "lines"], ["spof", "demo", "--requirement", "r1"],
    ["export", "demo", "--format", "facts"], ["export", "cpwe_fixture", "--format", "drawing"],
    ["export", "redundant_demo", "--format", "canonical"],
]


def _invoke(argv, hash_seed):
    env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
    proc = subprocess.run([sys.executable, "-m", "layernet", *argv], capture_output=True, env=env, check=False)
    return proc.returncode, proc.stdout, proc.stderr


def criterion_6():
    round_trip = {}
    for name in FIXTURES:
        m = load(name)
        text = serialize_model(m)
        round_trip[name] = parse_model(text) == m and serialize_model(parse_model(text)) == text
    unstable = [" ".join(argv) for argv in COMMANDS if _invoke(argv, 1) != _invoke(argv, 2)]
    ok = all(round_trip.values()) and not unstable
    detail = (f"round-trip {sum(round_trip.values())}/{len(FIXTURES)} fixtures, "
              f"{len(COMMANDS) - len(unstable)}/{len(COMMANDS)} commands byte-identical across two runs")
    return ok, detail + (f"; unstable: {unstable}" if unstable else "")


CRITERIA = {
    1: ("CPwE cardinality table", criterion_1),
    2: ("structural invariants and mutations", criterion_2),
    3: ("SPOF oracle equivalence", criterion_3),
    4: ("propagation laws", criterion_4),
    5: ("demo goldens", criterion_5),
    6: ("round-trip and CLI determinism", criterion_6),
}


def report_line(number):
    title, fn = CRITERIA[number]
    ok, detail = fn()
    return ok, f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'} {title}: {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = report_line(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report_line(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
