"""Fault injection on the plant-scale fixture: a virtualized three-host
server farm behind core, distribution and access switches."""

from collections import Counter

from layernet import cardinality_report, consistency_check, generate_fmea, parse_model, propagate_failures
from layernet.cli import bundled_fixture

model = parse_model(bundled_fixture("cpwe_fixture"), "cpwe_fixture.lgm")

print("layer         |V|  |E|  |M|  |V below|")
for row in cardinality_report(model):
    proj = "-" if row.projections is None else row.projections
    below = "-" if row.lower_components is None else row.lower_components
    print(f"{row.layer.label:<12} {row.components:>4} {row.links:>4} {proj:>4} {below:>4}")

report = consistency_check(model)
print("\nverdict:", report.verdict.value)
for r in report.requirements:
    print(f"  {r.requirement}: accessibility {'pass' if r.accessibility.passed else 'fail'}, "
          f"SPOFs {list(r.spofs or ())}")
    for c in r.cardinality:
        print(f"    {c.attribute} required {c.required}, actual {c.actual}")

# A dead ESXi host kills every VM it carries and the services on them.
impact = propagate_failures(model, ["esxi1"])
lost = Counter(model.layer_of(c).label for c in impact.failed_elements() if not c.startswith("link:"))
print("\nremove esxi1:", dict(lost), "broken:", sorted(impact.broken_requirements) or "none")

rows = generate_fmea(model)
print("\nmost severe single failures:")
for r in rows[:5]:
    print(f"  {r.failure_mode:<38} severity {r.severity}  collateral {r.collateral}")
