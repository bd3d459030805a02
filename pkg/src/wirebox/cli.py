"""Command line front end.

Subcommands::

    validate    check any document and report problems
    compose     collapse a named system to one machine document
    simulate    run a system or machine on an input word
    learn       filter a knowledge base against an opaque target
    attack      apply a named script and emit the attacked system
    diff        compare an attacked system against its baseline
    export-dot  render a wiring to Graphviz DOT
    yoneda-check verify naturality counts for a category file

Exit codes: 0 success, 64 usage error, 65 malformed input or domain
error.  ``learn`` exits 0 when exactly one candidate survives, 2 when
several do, 3 when none do.  ``diff`` exits 0 when behavior is equal at
the requested depth and 1 when it differs.

Input words are written ``"0|1,1|0"``: steps separated by commas, the
symbols of one step separated by bars, in port order.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import fileformat as ff
from .attacks import (AttackError, CompositeSystem, apply_script, attack_diff)
from .dot import wiring_dot
from .fincat import FinCatError, YonedaError, yoneda_check
from .moore import MachineError, MooreMachine, render_state, run, validate_machine
from .oracle import find_distinguishing_word
from .probes import (AMBIGUOUS, EXACT, UNKNOWN, MachineOracle, OracleError,
                     ProbeError, Test, TraceSet, yoneda_filter)
from .wiring import WiringError

EX_OK = 0
EX_USAGE = 64
EX_DATAERR = 65

DOMAIN_ERRORS = (ff.LoadError, WiringError, MachineError, ProbeError,
                 OracleError, AttackError, FinCatError)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would sys.exit(2); route usage problems to exit code 64
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def parse_word(text: str) -> tuple[tuple[str, ...], ...]:
    """Parse ``"0|1,1|0"`` into a step sequence."""
    if not text:
        return ()
    steps = []
    for i, chunk in enumerate(text.split(",")):
        symbols = tuple(chunk.split("|"))
        if any(not s for s in symbols):
            raise _UsageError(f"empty symbol in step {i}: {chunk!r}")
        steps.append(symbols)
    return tuple(steps)


def format_word(word: Sequence[Sequence[str]]) -> str:
    return ",".join("|".join(step) for step in word)


def _build_parser() -> _Parser:
    p = _Parser(prog="wirebox",
                description="wired machine networks, learning, and attacks")
    sub = p.add_subparsers(dest="command", metavar="command")

    v = sub.add_parser("validate", description="check a document")
    v.add_argument("file")

    c = sub.add_parser("compose",
                       description="collapse a system to one machine")
    c.add_argument("--system", required=True, metavar="FILE")
    c.add_argument("--name", required=True, help="system name in the file")

    s = sub.add_parser("simulate", description="run on an input word")
    s.add_argument("--system", metavar="FILE")
    s.add_argument("--name", help="system name (with --system)")
    s.add_argument("--machine", metavar="FILE", help="machine.v1 file")
    s.add_argument("--input", required=True, metavar="WORD",
                   help='e.g. "0|1,1|0"')

    l = sub.add_parser("learn",
                       description="filter a knowledge base against a target")
    l.add_argument("--kb", required=True, metavar="DIR",
                   help="directory of machine.v1 candidates")
    l.add_argument("--target", required=True, metavar="FILE",
                   help="machine.v1 the oracle answers for")
    l.add_argument("--battery", metavar="FILE", help="battery.v1 tests")
    l.add_argument("--depth", type=int, default=6,
                   help="trace depth when no battery is given (default 6)")

    a = sub.add_parser("attack", description="apply a script with provenance")
    a.add_argument("--scenario", required=True, metavar="FILE")
    a.add_argument("--script", required=True, help="script name")
    a.add_argument("--out", metavar="FILE", help="write system.v1 here")

    d = sub.add_parser("diff",
                       description="attacked system versus its baseline")
    d.add_argument("--scenario", required=True, metavar="FILE")
    d.add_argument("--script", required=True, help="script name")
    d.add_argument("--depth", type=int, default=6)

    e = sub.add_parser("export-dot", description="render a wiring as DOT")
    e.add_argument("--file", required=True, metavar="FILE",
                   help="system.v1, scenario.v1, or wiring.v1")
    e.add_argument("--wiring", help="wiring name (for system/scenario files)")
    e.add_argument("--out", metavar="FILE")

    y = sub.add_parser("yoneda-check",
                       description="verify naturality counts per object")
    y.add_argument("--file", required=True, metavar="FILE", help="fincat.v1")
    y.add_argument("--functor", help="check only this functor")
    return p


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_validate(args, out) -> int:
    doc = ff.load(args.file)
    if isinstance(doc, ff.MachineDoc):
        report = validate_machine(doc.machine)
        for w in report.warnings:
            print(f"warning: {w}", file=out)
        print(f"ok: machine {doc.name!r} on box {doc.machine.box.name!r}, "
              f"{len(doc.machine.states)} states", file=out)
    elif isinstance(doc, ff.WiringDoc):
        w = doc.wiring
        print(f"ok: wiring {doc.name!r}, {len(w.inner)} inner boxes -> "
              f"{len(w.outer)} outer", file=out)
    elif isinstance(doc, ff.SystemDoc):
        print(f"ok: {len(doc.boxes)} boxes, {len(doc.machines)} machines, "
              f"{len(doc.wirings)} wirings, {len(doc.systems)} systems",
              file=out)
    elif isinstance(doc, ff.BatteryDoc):
        print(f"ok: {len(doc.tests)} tests", file=out)
    elif isinstance(doc, ff.AttackDoc):
        print(f"ok: attack {doc.name!r}, {len(doc.script.steps)} steps",
              file=out)
    elif isinstance(doc, ff.ScenarioDoc):
        sc = doc.scenario
        print(f"ok: scenario {sc.name!r}, {len(sc.systems)} systems, "
              f"{len(sc.kb.entries)} knowledge base entries, "
              f"{len(sc.battery)} tests, {len(sc.scripts)} scripts", file=out)
    else:
        counts = len(doc.category.morphisms)
        print(f"ok: category {doc.category.name!r}, "
              f"{len(doc.category.objects)} objects, {counts} morphisms, "
              f"{len(doc.functors)} functors", file=out)
    return EX_OK


def _cmd_compose(args, out) -> int:
    doc = ff.load(args.system)
    if not isinstance(doc, (ff.SystemDoc, ff.ScenarioDoc)):
        raise ff.LoadError(args.system, "expected a system.v1 or scenario.v1")
    if args.name not in doc.systems:
        raise ff.LoadError(args.system, f"no system named {args.name!r}")
    machine = doc.systems[args.name].composite()
    out.write(ff.dump_machine(args.name, machine))
    return EX_OK


def _cmd_simulate(args, out) -> int:
    if (args.machine is None) == (args.system is None):
        raise _UsageError("simulate: give exactly one of --machine/--system")
    if args.machine is not None:
        doc = ff.load(args.machine)
        if not isinstance(doc, ff.MachineDoc):
            raise ff.LoadError(args.machine, "expected a machine.v1")
        m = doc.machine
    else:
        if not args.name:
            raise _UsageError("simulate: --system needs --name")
        doc = ff.load(args.system)
        if not isinstance(doc, (ff.SystemDoc, ff.ScenarioDoc)):
            raise ff.LoadError(args.system,
                               "expected a system.v1 or scenario.v1")
        if args.name not in doc.systems:
            raise ff.LoadError(args.system, f"no system named {args.name!r}")
        m = doc.systems[args.name].composite()
    word = parse_word(args.input)
    for output in run(m, word):
        print("|".join(output), file=out)
    return EX_OK


def _cmd_learn(args, out) -> int:
    kb = ff.load_kb_dir(args.kb)
    tdoc = ff.load(args.target)
    if not isinstance(tdoc, ff.MachineDoc):
        raise ff.LoadError(args.target, "expected a machine.v1")
    if args.battery:
        bdoc = ff.load(args.battery)
        if not isinstance(bdoc, ff.BatteryDoc):
            raise ff.LoadError(args.battery, "expected a battery.v1")
        battery = bdoc.tests
    else:
        battery = (Test("traces", TraceSet(args.depth)),)
    oracle = MachineOracle(tdoc.machine)
    result = yoneda_filter(kb, battery, oracle)
    marks = {True: "y", False: "n", None: "?"}
    for test in battery:
        cells = [(entry, verdict) for entry, tname, verdict in result.matrix
                 if tname == test.name]
        row = " ".join(f"{entry}={marks[verdict]}" for entry, verdict in cells)
        print(f"{test.name}: {row}", file=out)
    print(f"candidates: {', '.join(result.candidates) if result.candidates else '(none)'}",
          file=out)
    print(f"classification: {result.classification}", file=out)
    if result.classification == EXACT:
        return EX_OK
    if result.classification == AMBIGUOUS:
        return 2
    return 3


def _load_scenario(path: str):
    doc = ff.load(path)
    if not isinstance(doc, ff.ScenarioDoc):
        raise ff.LoadError(path, "expected a scenario.v1")
    return doc.scenario


def _cmd_attack(args, out) -> int:
    scenario = _load_scenario(args.scenario)
    script = scenario.script(args.script)
    system = scenario.system(script.system)
    result = apply_script(system, script.script)
    for entry in result.log:
        print(f"step {entry.position}: {entry.detail} "
              f"wiring={entry.wiring_fp} components={entry.components_fp}",
              file=out)
    text = ff.dump_system({f"{script.system}-attacked": result.system})
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        print(f"wrote {args.out}", file=out)
    else:
        out.write(text)
    return EX_OK


def _cmd_diff(args, out) -> int:
    scenario = _load_scenario(args.scenario)
    script = scenario.script(args.script)
    baseline = scenario.system(script.system)
    attacked = apply_script(baseline, script.script).system
    report = attack_diff(baseline, attacked, args.depth, scenario.battery)
    for name, agree in report.tests:
        print(f"{name}: {'agree' if agree else 'disagree'}", file=out)
    if report.equivalent:
        print(f"equal to depth {report.depth}", file=out)
        return EX_OK
    print(f"differs: input {format_word(report.witness)}", file=out)
    return 1


def _cmd_export_dot(args, out) -> int:
    doc = ff.load(args.file)
    if isinstance(doc, ff.WiringDoc):
        name, wiring = doc.name, doc.wiring
        if args.wiring and args.wiring != doc.name:
            raise ff.LoadError(args.file, f"no wiring named {args.wiring!r}")
    elif isinstance(doc, (ff.SystemDoc, ff.ScenarioDoc)):
        if not args.wiring:
            raise _UsageError("export-dot: this file needs --wiring NAME")
        if args.wiring not in doc.wirings:
            raise ff.LoadError(args.file, f"no wiring named {args.wiring!r}")
        name, wiring = args.wiring, doc.wirings[args.wiring]
    else:
        raise ff.LoadError(args.file, "no wirings in this document")
    text = wiring_dot(wiring, name)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        print(f"wrote {args.out}", file=out)
    else:
        out.write(text)
    return EX_OK


def _cmd_yoneda_check(args, out) -> int:
    doc = ff.load(args.file)
    if not isinstance(doc, ff.FincatDoc):
        raise ff.LoadError(args.file, "expected a fincat.v1")
    names = sorted(doc.functors)
    if args.functor is not None:
        if args.functor not in doc.functors:
            raise ff.LoadError(args.file, f"no functor named {args.functor!r}")
        names = [args.functor]
    if not names:
        raise ff.LoadError(args.file, "no functors to check")
    failed = False
    for fname in names:
        F = doc.functors[fname]
        for obj in doc.category.objects:
            try:
                witness = yoneda_check(doc.category, obj, F)
                print(f"{fname} at {obj}: {witness.count} "
                      f"transformations, bijection ok", file=out)
            except YonedaError as e:
                failed = True
                print(f"{fname} at {obj}: FAIL {e}", file=out)
    return 1 if failed else EX_OK


def dispatch(argv: Optional[Sequence[str]] = None,
             out=None, err=None) -> int:
    """Run one command line; returns the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(err)
            return EX_USAGE
        handler = {
            "validate": _cmd_validate,
            "compose": _cmd_compose,
            "simulate": _cmd_simulate,
            "learn": _cmd_learn,
            "attack": _cmd_attack,
            "diff": _cmd_diff,
            "export-dot": _cmd_export_dot,
            "yoneda-check": _cmd_yoneda_check,
        }[args.command]
        return handler(args, out)
    except _UsageError as e:
        print(str(e), file=err)
        return EX_USAGE
    except DOMAIN_ERRORS as e:
        print(f"error: {e}", file=err)
        return EX_DATAERR
    except SystemExit as e:  # argparse --help
        return int(e.code or 0)


def main() -> int:
    return dispatch()


if __name__ == "__main__":
    sys.exit(main())
