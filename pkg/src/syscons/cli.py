"""Batch front end: ``syscons <command> <file> [options]``.

Exit codes: 0 success, 1 a checked property fails (an entailment, an order,
soundness of a requested flow), 2 unusable input.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import json
import sys
import time
from pathlib import Path

from . import document
from .document import DocumentError, SystemDocument
from .infoflow import Classification
from .institution import InstitutionError
from .logic import is_complete, is_sound
from .specflow import consequence, entails
from .systems import (
    fusion,
    minimal_cover,
    pointwise_leq,
    sound_system_consequence,
    system_consequence,
    system_entails,
    underlying,
)
from .witness import find_strictness_witness

COMMANDS = ("validate", "consequence", "fuse", "sys-consequence", "entails", "order", "search-witness")


class PropertyFailure(Exception):
    """Carries a report whose checked property did not hold."""

    def __init__(self, report: dict):
        super().__init__(report.get("status"))
        self.report = report


def describe_structure(structure) -> str:
    if isinstance(structure, Classification):
        rows = structure.rows
        body = "; ".join(f"{x}:{{{','.join(sorted(rows[x]))}}}" for x in structure.instances)
        return f"classification [{body}]"
    body = "; ".join(f"{r}={sorted(t)}" for r, t in structure.tables)
    return f"carrier {structure.carrier_size}; {body}"


def _fmt(doc_or_inst, sentences) -> list[str]:
    inst = getattr(doc_or_inst, "institution", doc_or_inst)
    return [inst.format_sentence(s) for s in inst.sort_sentences(sentences)]


def _header(command: str, doc: SystemDocument | None, bound: int) -> dict:
    rep = {"command": command}
    if doc is not None:
        rep["file"] = doc.source
        rep["institution"] = doc.institution.name
    rep["bound"] = bound
    return rep


def _nodes(doc: SystemDocument, node: str | None):
    nodes = doc.system.shape.nodes
    if node is None:
        return nodes
    if node not in nodes:
        raise DocumentError(f"unknown node {node!r}; nodes are {list(nodes)}")
    return (node,)


def cmd_validate(doc: SystemDocument, args) -> dict:
    IS = doc.system
    rep = _header("validate", doc, args.bound)
    rep["status"] = "ok"
    rep["level"] = "formal" if IS.formal else "semantic"
    rep["nodes"] = len(IS.shape.nodes)
    rep["edges verified"] = len(IS.shape.edges)
    if not IS.formal:
        rep["soundness"] = {n: ("sound" if is_sound(IS.nodes[n], args.bound) else "unsound")
                            + (", complete" if is_complete(IS.nodes[n], args.bound) else "")
                            for n in IS.shape.nodes}
    return rep


def cmd_consequence(doc: SystemDocument, args) -> dict:
    rep = _header("consequence", doc, args.bound)
    rep["status"] = "ok"
    rep["theories"] = {n: _fmt(doc, consequence(doc.system.theory(n), args.bound).sentences)
                       for n in _nodes(doc, args.node)}
    return rep


def cmd_fuse(doc: SystemDocument, args) -> dict:
    IS = doc.system
    rep = _header("fuse", doc, args.bound)
    channel = minimal_cover(underlying(IS))
    fused = fusion(IS, args.bound)
    spec = fused if IS.formal else fused.spec
    rep["status"] = "ok"
    inst = doc.institution
    rep["core symbols"] = [f"{s}:{inst.symbol_sort(channel.core_language, s)}"
                           if inst.symbol_sort(channel.core_language, s) is not None else s
                           for s in channel.core_language.symbols]
    if not IS.formal:
        rep["core structure"] = describe_structure(fused.structure)
        rep["fusion sound"] = is_sound(fused, args.bound)
    rep["fusion theory"] = _fmt(doc, spec.sentences)
    rep["fusion consequence"] = _fmt(doc, consequence(spec, args.bound).sentences)
    return rep


def cmd_sys_consequence(doc: SystemDocument, args) -> dict:
    IS = doc.system
    name = "sys-consequence"
    rep = _header(name, doc, args.bound)
    if args.sound:
        if IS.formal:
            raise DocumentError("--sound needs a system whose nodes carry structures")
        unsound = [n for n in IS.shape.nodes if not is_sound(IS.nodes[n], args.bound)]
        if unsound:
            rep["status"] = "sound flow needs sound nodes"
            rep["unsound nodes"] = unsound
            raise PropertyFailure(rep)
        result = sound_system_consequence(IS, args.bound)
        rep["flow"] = "sound"
    else:
        result = system_consequence(IS, args.bound)
    rep["status"] = "ok"
    rep["theories"] = {n: _fmt(doc, result.theory(n).sentences) for n in _nodes(doc, args.node)}
    if args.out:
        Path(args.out).write_text(document.dumps(document.with_theories(doc, result)))
        rep["written"] = args.out
    return rep


def cmd_entails(doc: SystemDocument, args) -> dict:
    if args.node is None or args.sentence is None:
        raise DocumentError("entails needs --node and --sentence")
    (node,) = _nodes(doc, args.node)
    rep = _header("entails", doc, args.bound)
    spec = doc.system.theory(node)
    sentence = doc.institution.parse_sentence(spec.language, args.sentence)
    result = entails(spec, sentence, args.bound)
    rep["node"] = node
    rep["sentence"] = doc.institution.format_sentence(sentence)
    rep["holds"] = result.holds
    if not result.holds:
        rep["counter-model"] = describe_structure(result.witness)
        rep["status"] = "not entailed"
        raise PropertyFailure(rep)
    rep["status"] = "ok"
    return rep


def cmd_order(doc: SystemDocument, args) -> dict:
    if args.against is None:
        raise DocumentError("order needs --against FILE")
    other = document.load(args.against)
    rep = _header("order", doc, args.bound)
    rep["against"] = other.source
    pointwise = pointwise_leq(doc.system, other.system, args.bound)
    entailed = system_entails(doc.system, other.system, args.bound)
    rep["pointwise leq"] = pointwise
    rep["system entails"] = entailed
    if not entailed:
        rep["status"] = "not entailed"
        raise PropertyFailure(rep)
    rep["status"] = "ok"
    return rep


def cmd_search_witness(args) -> dict:
    rep = _header("search-witness", None, args.bound)
    rep["seed"] = args.seed
    rep["max nodes"] = args.max_nodes
    rep["max types"] = args.max_types
    rep["trials"] = args.trials
    w = find_strictness_witness(args.seed, max_nodes=args.max_nodes, max_types=args.max_types,
                                trials=args.trials, bound=args.bound)
    if w is None:
        rep["status"] = "none found"
        return rep
    rep["status"] = "found"
    rep["trial"] = w.trial
    rep["node"] = w.node
    rep["sentence"] = w.system.institution.format_sentence(w.sentence)
    raw = document.system_to_dict(w.system)
    if args.out:
        Path(args.out).write_text(document.dumps(raw))
        rep["written"] = args.out
    else:
        rep["system"] = raw
    return rep


HANDLERS = {
    "validate": cmd_validate,
    "consequence": cmd_consequence,
    "fuse": cmd_fuse,
    "sys-consequence": cmd_sys_consequence,
    "entails": cmd_entails,
    "order": cmd_order,
}


def render_text(rep: dict) -> str:
    lines = []
    for key, value in rep.items():
        if isinstance(value, dict) and key != "system":
            lines.append(f"{key}:")
            for k, v in value.items():
                if isinstance(v, list):
                    lines.append(f"  {k}:")
                    lines.extend(f"    {s}" for s in v)
                else:
                    lines.append(f"  {k}: {_scalar(v)}")
        elif isinstance(value, list):
            lines.append(f"{key}:")
            lines.extend(f"  {s}" for s in value)
        elif key == "system":
            lines.append("system:")
            lines.extend("  " + ln for ln in json.dumps(value, indent=2).splitlines())
        else:
            lines.append(f"{key}: {_scalar(value)}")
    return "\n".join(lines) + "\n"


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="syscons", description="System consequence over finite institutions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="system description (JSON)")
    p.add_argument("--bound", type=int, default=None, help="enumeration bound (default: file option, else 3)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--node")
    p.add_argument("--sentence")
    p.add_argument("--against", help="second system file for 'order'")
    p.add_argument("--out", help="write the resulting system document here")
    p.add_argument("--sound", action="store_true", help="sys-consequence: sound inverse flow")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--max-nodes", type=int, default=2)
    p.add_argument("--max-types", type=int, default=2)
    p.add_argument("--timing", action="store_true", help="append elapsed time (output no longer reproducible)")
    return p


def run(argv=None) -> tuple[int, str, str]:
    """Run one command; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    captured_out, captured_err = io.StringIO(), io.StringIO()
    try:
        with contextlib.redirect_stdout(captured_out), contextlib.redirect_stderr(captured_err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return code, captured_out.getvalue(), captured_err.getvalue()
    start = time.perf_counter()
    code = 0
    try:
        if args.bound is not None and args.bound < 1:
            raise DocumentError("--bound must be positive")
        if args.command == "search-witness":
            args.bound = args.bound or 3
            rep = cmd_search_witness(args)
        else:
            if not args.file:
                raise DocumentError(f"{args.command} needs a system file")
            doc = document.load(args.file)
            if args.bound is None:
                args.bound = doc.bound
            rep = HANDLERS[args.command](doc, args)
    except PropertyFailure as exc:
        rep, code = exc.report, 1
    except (InstitutionError, OSError) as exc:
        return 2, "", f"error: {exc}\n"
    if args.timing:
        rep["elapsed seconds"] = round(time.perf_counter() - start, 3)
    if args.format == "json":
        out = json.dumps(rep, indent=2) + "\n"
    else:
        out = render_text(rep)
    return code, out, ""


def main(argv=None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
