"""Command line front end.

Subcommands: model (score a home, optionally through an interactive
wizard), list (catalog inventories), explain (one threat in depth),
glossary (plain-language definitions), validate (catalog integrity).

Exit codes: 0 success, 1 usage problem, 2 catalog problem, 3 evaluation
problem. Errors are a single line on stderr, never a traceback.
"""

from __future__ import annotations

import argparse
import difflib
import os
import sys
import textwrap
from datetime import datetime, timezone

from .catalog import Catalog, CatalogError, IntegrityError, load_catalog, validate
from .cvss import VectorError, canonical_string
from .engine import (
    EvaluationError,
    ModelInput,
    active_categories,
    active_threats,
    score_model,
)
from .report import FORMATS, render

_BOLD = "\033[1m"
_RESET = "\033[0m"


class UsageError(Exception):
    """Bad command line or wizard input; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    """argparse normally exits with status 2 on bad input; we want 1."""

    def error(self, message):
        raise UsageError(message)


def _color_enabled(stream) -> bool:
    if "NO_COLOR" in os.environ:
        return False
    isatty = getattr(stream, "isatty", None)
    return bool(isatty and isatty())


def _bold(text: str, enabled: bool) -> str:
    return f"{_BOLD}{text}{_RESET}" if enabled else text


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _split_csv(raw: str | None) -> list[str]:
    if not raw:
        return []
    return [item.strip() for item in raw.split(",") if item.strip()]


def _parse_connections(raw: str | None) -> tuple[tuple[str, str], ...]:
    pairs = []
    for item in _split_csv(raw):
        left, sep, right = item.partition(":")
        if not sep or not left.strip() or not right.strip():
            raise UsageError(
                f"bad connection {item!r}, expected device-id:device-id"
            )
        pairs.append((left.strip(), right.strip()))
    return tuple(pairs)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="hometm",
        description="Threat modelling for consumer smart homes.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command",
                                required=True)

    model = sub.add_parser("model", help="score a home and rank its threats")
    model.add_argument("--devices", help="comma-separated device ids")
    model.add_argument("--risk-factors", dest="risk_factors",
                       help="comma-separated risk factor ids, e.g. R1,R3")
    model.add_argument("--connections",
                       help="comma-separated pairs, e.g. a:b,b:c")
    model.add_argument("--display-name", dest="display_name",
                       help="name to print on the report")
    model.add_argument("--format", choices=FORMATS, default="text")
    model.add_argument("--catalog", help="path to an alternative catalog")
    model.add_argument("--deterministic", action="store_true",
                       help="omit the generation timestamp")
    model.add_argument("--interactive", action="store_true",
                       help="answer questions instead of passing flags")
    model.set_defaults(func=_cmd_model)

    lst = sub.add_parser("list", help="list catalog entries")
    lst.add_argument("kind", choices=("devices", "risk-factors", "threats"))
    lst.add_argument("--catalog", help="path to an alternative catalog")
    lst.set_defaults(func=_cmd_list)

    explain = sub.add_parser("explain", help="describe one threat in depth")
    explain.add_argument("--threat", type=int, required=True,
                         help="threat id, 1 to 16")
    explain.add_argument("--catalog", help="path to an alternative catalog")
    explain.set_defaults(func=_cmd_explain)

    glossary = sub.add_parser("glossary",
                              help="define the jargon used in reports")
    glossary.add_argument("term", nargs="?",
                          help="one term to define; omit to list all")
    glossary.add_argument("--catalog", help="path to an alternative catalog")
    glossary.set_defaults(func=_cmd_glossary)

    val = sub.add_parser("validate", help="check a catalog for consistency")
    val.add_argument("--catalog", help="path to the catalog to check")
    val.set_defaults(func=_cmd_validate)

    return parser


# --------------------------------------------------------------- commands --


def _cmd_model(args, stdin, stdout, stderr) -> int:
    catalog = load_catalog(args.catalog)
    if args.interactive:
        model = _wizard(catalog, stdin, stdout)
    else:
        if args.devices is None:
            raise UsageError("--devices is required unless --interactive")
        model = ModelInput(
            devices=frozenset(_split_csv(args.devices)),
            risk_factors=frozenset(_split_csv(args.risk_factors)),
            connections=_parse_connections(args.connections),
            display_name=args.display_name,
        )
    stamp = None if args.deterministic else _now()
    report = score_model(model, catalog, generated_at=stamp)
    rendered = render(report, args.format, catalog)
    stdout.write(rendered.body)
    if args.format == "machine":
        for warning in rendered.warnings:
            stderr.write(f"note: {warning}\n")
    return 0


def _cmd_list(args, stdin, stdout, stderr) -> int:
    catalog = load_catalog(args.catalog)
    if args.kind == "devices":
        for device in catalog.devices.values():
            cats = ",".join(str(c) for c in sorted(device.categories))
            stdout.write(f"{device.id:24} {device.label} "
                         f"(categories {cats})\n")
    elif args.kind == "risk-factors":
        for factor in catalog.risk_factors.values():
            stdout.write(f"{factor.id:>3}  weight {factor.weight}  "
                         f"{factor.question_text}\n")
    else:
        for threat in catalog.threats.values():
            s = threat.scores
            stdout.write(
                f"{threat.id:2d} [{threat.stride}] "
                f"{threat.short_name:28} base {s.base:.1f}  "
                f"temporal {s.temporal:.1f}  environmental "
                f"{s.environmental:.1f}\n"
            )
    return 0


def _affected_devices(catalog: Catalog, threat_id: int) -> list[str]:
    labels = []
    for device in catalog.devices.values():
        hit = any(
            threat_id in catalog.categories[c].threat_ids
            for c in device.categories
        )
        if hit:
            labels.append(device.label)
    return labels


def _cmd_explain(args, stdin, stdout, stderr) -> int:
    catalog = load_catalog(args.catalog)
    record = catalog.threats.get(args.threat)
    if record is None:
        raise EvaluationError(
            f"unknown threat id {args.threat}; valid ids are 1 to 16"
        )
    s = record.scores
    out = [f"Threat {record.id}: {record.short_name} [{record.stride}]", ""]
    out.extend(textwrap.wrap(record.description, width=76))
    out.append("")
    affected = _affected_devices(catalog, record.id)
    out.extend(textwrap.wrap("Affected devices: " + ", ".join(affected),
                             width=76))
    out.append("")
    out.append(f"Vector: {canonical_string(record.vector)}")
    out.append(
        f"Scores: base {s.base:.1f} ({s.base_severity.value}), "
        f"temporal {s.temporal:.1f} ({s.temporal_severity.value}), "
        f"environmental {s.environmental:.1f} "
        f"({s.environmental_severity.value})"
    )
    out.append("")
    out.extend(textwrap.wrap(f"What to do: {record.mitigation}", width=76))
    stdout.write("\n".join(out) + "\n")
    return 0


def _cmd_glossary(args, stdin, stdout, stderr) -> int:
    catalog = load_catalog(args.catalog)
    if args.term is None:
        for term, definition in catalog.glossary.items():
            block = textwrap.wrap(f"{term}: {definition}", width=76,
                                  subsequent_indent="    ")
            stdout.write("\n".join(block) + "\n")
        return 0
    key = args.term.strip().lower()
    definition = catalog.glossary.get(key)
    if definition is None:
        close = difflib.get_close_matches(key, catalog.glossary, n=3)
        hint = f"; did you mean: {', '.join(close)}?" if close else ""
        raise EvaluationError(f"unknown glossary term {args.term!r}{hint}")
    block = textwrap.wrap(f"{key}: {definition}", width=76,
                          subsequent_indent="    ")
    stdout.write("\n".join(block) + "\n")
    return 0


def _cmd_validate(args, stdin, stdout, stderr) -> int:
    color = _color_enabled(stdout)
    try:
        catalog = load_catalog(args.catalog)
    except IntegrityError as exc:
        for violation in exc.violations:
            stdout.write(f"- {violation}\n")
        stdout.write(_bold(f"{len(exc.violations)} violation(s) found\n",
                           color))
        return 2
    problems = validate(catalog)
    if problems:
        for violation in problems:
            stdout.write(f"- {violation}\n")
        stdout.write(_bold(f"{len(problems)} violation(s) found\n", color))
        return 2
    stdout.write(_bold(
        f"catalog OK ({len(catalog.threats)} threats, "
        f"{len(catalog.devices)} devices, "
        f"{len(catalog.risk_factors)} risk factors, "
        f"{len(catalog.categories)} categories)\n", color))
    return 0


# ----------------------------------------------------------------- wizard --


def _ask(prompt: str, stdin, stdout) -> str:
    stdout.write(prompt)
    if hasattr(stdout, "flush"):
        stdout.flush()
    line = stdin.readline()
    if line == "":
        raise UsageError("input ended before the wizard finished")
    return line.strip()


def _ask_yes_no(prompt: str, stdin, stdout) -> bool:
    while True:
        answer = _ask(prompt, stdin, stdout).lower()
        if answer in ("y", "yes"):
            return True
        if answer in ("n", "no", ""):
            return False
        stdout.write("Please answer y or n (Enter counts as no).\n")


def _pick_devices(catalog: Catalog, stdin, stdout) -> tuple[list[str], dict]:
    ordered = list(catalog.devices.values())
    numbering = {}
    stdout.write("Devices this tool knows about:\n")
    for index, device in enumerate(ordered, start=1):
        numbering[index] = device.id
        stdout.write(f"{index:3d}. {device.label}\n")
    while True:
        raw = _ask("Select devices by number, comma-separated (e.g. 1,4): ",
                   stdin, stdout)
        picks = _split_csv(raw)
        if not picks:
            stdout.write("Pick at least one device.\n")
            continue
        try:
            numbers = [int(p) for p in picks]
        except ValueError:
            stdout.write("Numbers only, separated by commas.\n")
            continue
        bad = [n for n in numbers if n not in numbering]
        if bad:
            stdout.write(f"No device numbered {bad[0]}; "
                         f"choose between 1 and {len(ordered)}.\n")
            continue
        return [numbering[n] for n in numbers], numbering


def _pick_connections(selected: list[str], numbering: dict,
                      stdin, stdout) -> tuple[tuple[str, str], ...]:
    stdout.write(
        "\nIf any selected devices control or talk to each other, note the\n"
        "pairs. This is recorded for context only and does not change "
        "scores.\n"
    )
    while True:
        raw = _ask("Connected pairs like 1-4, comma-separated "
                   "(Enter for none): ", stdin, stdout)
        if raw == "":
            return ()
        pairs = []
        ok = True
        for item in _split_csv(raw):
            left, sep, right = item.partition("-")
            try:
                a, b = int(left), int(right)
            except ValueError:
                ok = False
                break
            if a not in numbering or b not in numbering:
                ok = False
                break
            da, db = numbering[a], numbering[b]
            if da not in selected or db not in selected:
                stdout.write("Connections can only join devices you "
                             "selected.\n")
                ok = False
                break
            pairs.append((da, db))
        if ok:
            return tuple(pairs)
        stdout.write("Use pairs of the device numbers shown above, "
                     "like 1-4.\n")


def _wizard(catalog: Catalog, stdin, stdout) -> ModelInput:
    color = _color_enabled(stdout)
    stdout.write(_bold("Home threat modelling\n", color))
    stdout.write(
        "Three short steps: pick your smart devices, answer a few yes/no\n"
        "questions about how they are set up, then read a ranked list of\n"
        "threats with suggested fixes.\n\n"
    )
    name = _ask("Who is this report for? (Enter to skip) ", stdin, stdout)
    stdout.write("\n")
    selected, numbering = _pick_devices(catalog, stdin, stdout)
    connections = ()
    if len(set(selected)) >= 2:
        connections = _pick_connections(selected, numbering, stdin, stdout)

    threats = active_threats(active_categories(selected, catalog), catalog)
    relevant = [
        factor for factor in catalog.risk_factors.values()
        if (factor.related_threats | factor.off_reductions) & threats
    ]
    answered = set()
    if relevant:
        stdout.write(_bold("\nA few questions about your setup\n", color))
        stdout.write("Answer y or n; Enter counts as no.\n")
        for factor in relevant:
            if _ask_yes_no(f"{factor.id}. {factor.question_text} [y/N] ",
                           stdin, stdout):
                answered.add(factor.id)
    stdout.write("\n")
    return ModelInput(
        devices=frozenset(selected),
        risk_factors=frozenset(answered),
        connections=connections,
        display_name=name or None,
    )


# ------------------------------------------------------------ entry point --


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    """Parse arguments and dispatch; returns the process exit code."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except SystemExit as exc:
        # argparse handles --help itself and asks to exit
        return int(exc.code or 0)
    try:
        return args.func(args, stdin, stdout, stderr)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except (CatalogError, VectorError) as exc:
        stderr.write(f"error: {_first_line(exc)}\n")
        return 2
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except EvaluationError as exc:
        stderr.write(f"error: {exc}\n")
        return 3


def _first_line(exc: Exception) -> str:
    return str(exc).splitlines()[0] if str(exc) else exc.__class__.__name__


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
