"""Walk through the bundled demo model: structure, accessibility, single
points of failure and the generated checklist."""

from layernet import (
    check_accessibility,
    enumerate_spofs,
    generate_checklist,
    parse_model,
    validate_structure,
)
from layernet.checklist import render_table
from layernet.cli import bundled_fixture

model = parse_model(bundled_fixture("demo"), "demo.lgm")
print(f"{model.name}: {len(model.components)} components, {len(model.links)} links, "
      f"{len(model.projections)} projections")

report = validate_structure(model, strict=True)
print(f"structural violations: {len(report.violations)}")
for w in report.warnings:
    print(f"  warning {w.code} {w.subject}")

# r1 asks the portal to reach the data service; the evidence tree shows how
# that single functional link is carried down to the two hosts.
result = check_accessibility(model, "r1")
print("\naccessibility of r1:", "pass" if result.passed else "fail")
print(result.evidence.render())

spofs = enumerate_spofs(model, "r1")
print(f"{len(spofs)} single points of failure:")
for label in spofs:
    print("  ", label)

print()
print(render_table(generate_checklist(model)), end="")
