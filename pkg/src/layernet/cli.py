"""Command-line front end.

Exit codes: 0 clean, 1 findings present, 2 usage / file / parse / model error.
"""

from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import checklist as cl
from .consistency import Verdict, consistency_check
from .faultsim import (
    FaultScenario,
    NoRequirements,
    NotAccessible,
    UnknownElement,
    enumerate_spofs,
    generate_fmea,
    propagate_failures,
    render_fmea,
)
from .model import cardinality_report, validate_structure
from .modelio import (
    IdNotQuotable,
    ParseError,
    export_drawing,
    export_logic_facts,
    parse_document,
    serialize_model,
)

BUNDLED = ("demo", "cpwe_fixture", "redundant_demo")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    stdout: str
    stderr: str


def bundled_fixture(name: str) -> str:
    """Text of a fixture shipped with the package."""
    return resources.files("layernet").joinpath("fixtures", f"{name}.lgm").read_text(encoding="utf-8")


def _load(ref: str, err):
    path = Path(ref)
    if path.is_file():
        text, source = path.read_text(encoding="utf-8"), str(path)
    elif ref in BUNDLED:
        text, source = bundled_fixture(ref), f"{ref}.lgm"
    else:
        raise UsageError(f"cannot read model {ref!r}")
    model, diags = parse_document(text, source)
    for d in diags:
        print(d.render(source), file=err)
    return model


def _emit(text: str, target, out):
    if target:
        Path(target).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _cmd_validate(args, model, out, err):
    report = validate_structure(model, strict=args.strict)
    out.write(f"violations: {len(report.violations)}\n")
    for i in report.violations:
        out.write(f"  {i.code} {i.subject}: {i.message}\n")
    out.write(f"warnings: {len(report.warnings)}\n")
    for i in report.warnings:
        out.write(f"  {i.code} {i.subject}: {i.message}\n")
    return 0 if report.ok else 1


def _cmd_check(args, model, out, err):
    report = consistency_check(model, strict=args.strict)
    if args.format == "lines":
        out.write("".join(line + "\n" for line in report.lines()))
    else:
        out.write(report.render())
    return 1 if report.verdict is Verdict.INCONSISTENT else 0


def _cmd_checklist(args, model, out, err):
    items = cl.generate_checklist(model)
    text = cl.render_lines(items) if args.format == "lines" else cl.render_table(items)
    _emit(text, args.output, out)
    return 1 if any(i.status is cl.Status.UNSATISFIABLE for i in items) else 0


def _cmd_stats(args, model, out, err):
    header = ("layer", "n", "|V_n|", "|E_n|", "|M_n-1^n|", "|V_n-1|")
    rows = [header]
    for row in cardinality_report(model):
        rows.append((row.layer.label, str(int(row.layer)), str(row.components), str(row.links),
                     "-" if row.projections is None else str(row.projections),
                     "-" if row.lower_components is None else str(row.lower_components)))
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        out.write("  ".join(cells) + "\n")
    return 0


def _cmd_inject(args, model, out, err):
    specs = [s for group in args.remove for s in group]
    report = propagate_failures(model, FaultScenario.parse(model, specs))
    out.write(report.summary())
    return 1 if report.broken_requirements else 0


def _cmd_fmea(args, model, out, err):
    rows = generate_fmea(model)
    text = "".join(r.line() + "\n" for r in rows) if args.format == "lines" else render_fmea(rows)
    _emit(text, args.output, out)
    return 1 if any(r.severity > 0 for r in rows) else 0


def _cmd_spof(args, model, out, err):
    if args.requirement not in model.requirement_index:
        raise UsageError(f"unknown requirement {args.requirement!r}")
    try:
        spofs = enumerate_spofs(model, args.requirement)
    except NotAccessible as exc:
        err.write(f"{exc}\n")
        return 1
    for label in spofs:
        layer = label.split(":")[1] if label.startswith("link:") else str(int(model.layer_of(label)))
        out.write(f"{layer}\t{label}\n")
    return 1 if spofs else 0


def _cmd_export(args, model, out, err):
    exporters = {"facts": export_logic_facts, "drawing": export_drawing, "canonical": serialize_model}
    _emit(exporters[args.format](model), args.output, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="layernet", description="Four-layer distributed system model analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("model", help="model file, or a bundled fixture name: " + ", ".join(BUNDLED))
        p.set_defaults(func=func)
        return p

    p = command("validate", _cmd_validate, "structural rules")
    p.add_argument("--strict", action="store_true", help="empty layers / link set are violations")
    p = command("check", _cmd_check, "full consistency check")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--format", choices=("text", "lines"), default="text")
    p = command("checklist", _cmd_checklist, "requirements-coverage checklist")
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("table", "lines"), default="table")
    command("stats", _cmd_stats, "per-layer cardinality table")
    p = command("inject", _cmd_inject, "remove elements and propagate failures")
    p.add_argument("--remove", action="append", nargs="+", required=True,
                   metavar="comp:ID|link:LAYER:A-B")
    p = command("fmea", _cmd_fmea, "single-fault FMEA table")
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("table", "lines"), default="table")
    p = command("spof", _cmd_spof, "single points of failure of one requirement")
    p.add_argument("--requirement", required=True)
    p = command("export", _cmd_export, "facts, DOT drawing or canonical text")
    p.add_argument("--format", choices=("facts", "drawing", "canonical"), required=True)
    p.add_argument("-o", "--output")
    return parser


def run(argv) -> CommandOutcome:
    out, err = io.StringIO(), io.StringIO()
    try:
        args = build_parser().parse_args(list(argv))
        model = _load(args.model, err)
        code = args.func(args, model, out, err)
    except UsageError as exc:
        err.write(f"{exc}\n")
        code = 2
    except SystemExit as exc:  # --help
        code = exc.code or 0
    except ParseError as exc:
        err.write(f"{exc.source}:{exc.line}:{exc.col}: error: {exc.message}\n")
        code = 2
    except (UnknownElement, NoRequirements, IdNotQuotable, OSError) as exc:
        err.write(f"error: {exc}\n")
        code = 2
    return CommandOutcome(code, out.getvalue(), err.getvalue())


def main(argv=None) -> int:
    outcome = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(outcome.stdout)
    sys.stderr.write(outcome.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
