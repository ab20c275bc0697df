"""Four-layer graph models of distributed systems: structural validation,
consistency checks, test checklists and fault-injection analysis."""

from .checklist import ChecklistItem, coverage_summary, generate_checklist
from .consistency import (
    check_accessibility,
    check_cardinality_transparency,
    check_compatibility,
    check_openness,
    consistency_check,
    deterministic_path,
    realize_link,
)
from .faultsim import (
    FaultScenario,
    FmeaRow,
    ImpactReport,
    enumerate_spofs,
    generate_fmea,
    propagate_failures,
    run_scenario,
)
from .model import (
    ArityClass,
    Component,
    LayerId,
    LayeredModel,
    Link,
    Projection,
    Requirement,
    build_model,
    cardinality_report,
    classify_projection_arity,
    layer_subgraph,
    validate_structure,
)
from .modelio import export_drawing, export_logic_facts, parse_model, serialize_model

__version__ = "0.1.0"
