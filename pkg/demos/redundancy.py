"""Compare the single-chain demo with its duplicated twin.

The twin maps each functional endpoint onto two independent service
chains, so no single removal below the functional layer breaks r1.
"""

from layernet import enumerate_spofs, generate_fmea, parse_model, propagate_failures
from layernet.cli import bundled_fixture
from layernet.faultsim import render_fmea

single = parse_model(bundled_fixture("demo"))
twin = parse_model(bundled_fixture("redundant_demo"))

for model in (single, twin):
    print(f"{model.name}: {len(enumerate_spofs(model, 'r1'))} single points of failure")

# Losing one host takes down one chain of the twin, but r1 survives.
impact = propagate_failures(twin, ["h1a"])
print("\nremove h1a from the twin")
print(impact.summary(), end="")

# Two hosts, one per chain, are enough to break it.
impact = propagate_failures(twin, ["h1a", "h2b"])
print("\nremove h1a and h2b:", "r1 broken" if "r1" in impact.broken_requirements else "r1 intact")

rows = generate_fmea(single)
print(f"\nFMEA of the single chain, {len(rows)} failure modes")
print(render_fmea(rows[:6]), end="")
