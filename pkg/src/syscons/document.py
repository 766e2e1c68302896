"""Reading and writing system-description files (JSON, fixed schema)."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .folf import DEFAULT_SCHEMAS, FOLF, FiniteStructure, RelSignature
from .infoflow import IF, Classification, IFLanguage, Infomorphism, InfomorphismError
from .institution import DEFAULT_BOUND, InstitutionError, SymbolMap
from .logic import Logic
from .specflow import Specification
from .systems import Edge, InformationSystem, ShapeGraph, SystemError

NESTED_KEYS = ("system", "shape", "nodes", "file")


class DocumentError(InstitutionError):
    """Unusable input file; carries a position (line/column) or a JSON path when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 path: str | None = None):
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: "
        elif path:
            where = f"{path}: "
        super().__init__(where + message)
        self.line, self.column, self.path = line, column, path


@dataclass
class SystemDocument:
    institution: Any
    system: InformationSystem
    raw: dict
    bound: int
    languages: dict
    source: str = "<memory>"

    @property
    def formal(self) -> bool:
        return self.system.formal


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("syscons").joinpath("fixtures/system.schema.json").read_text()
    return json.loads(text)


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def load(path) -> SystemDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, source=str(path))


def loads(text: str, source: str = "<memory>") -> SystemDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None
    return from_dict(raw, source)


def from_dict(raw: dict, source: str = "<memory>") -> SystemDocument:
    if isinstance(raw, dict):
        for name, node in (raw.get("nodes") or {}).items():
            if isinstance(node, dict) and any(k in node for k in NESTED_KEYS):
                raise DocumentError("nested systems are not supported", path=f"$.nodes.{name}")
    errors = sorted(jsonschema.Draft202012Validator(schema()).iter_errors(raw),
                    key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise DocumentError(err.message, path=_json_path(err.absolute_path))
    return _Builder(raw, source).build()


class _Builder:
    def __init__(self, raw: dict, source: str):
        self.raw = raw
        self.source = source
        self.inst = IF if raw["institution"] == "if" else FOLF
        options = raw.get("options", {})
        self.bound = options.get("bound", DEFAULT_BOUND)
        self.schemas = tuple(options.get("schemas", DEFAULT_SCHEMAS))

    def ref(self, table: str, name: str, where: str):
        items = self.raw.get(table, {})
        if name not in items:
            raise DocumentError(f"unknown {table[:-1]} {name!r}", path=where)
        return items[name]

    def language(self, name: str, where: str):
        if name not in self.languages:
            raise DocumentError(f"unknown language {name!r}", path=where)
        return self.languages[name]

    def build(self) -> SystemDocument:
        self.languages = {n: self._language(n, v) for n, v in self.raw["languages"].items()}
        structures = {n: self._structure(n, v) for n, v in self.raw.get("structures", {}).items()}
        shape = self._shape()
        nodes = {}
        with_structure = set()
        for nid in shape.nodes:
            where = f"$.nodes.{nid}"
            spec = self.raw["nodes"].get(nid)
            if spec is None:
                raise DocumentError(f"shape node {nid!r} has no node entry", path="$.shape.nodes")
            lang = self.language(spec["language"], where + ".language")
            theory = self._theory(lang, spec.get("theory", []), where + ".theory")
            if "structure" in spec:
                sname = spec["structure"]
                if sname not in structures:
                    raise DocumentError(f"unknown structure {sname!r}", path=where + ".structure")
                slang, struct = structures[sname]
                if slang != spec["language"]:
                    raise DocumentError(f"structure {sname!r} is over {slang!r}, node is over "
                                        f"{spec['language']!r}", path=where)
                nodes[nid] = Logic(lang, struct, theory.sentences)
                with_structure.add(nid)
            else:
                nodes[nid] = theory
        extra = sorted(set(self.raw["nodes"]) - set(shape.nodes))
        if extra:
            raise DocumentError(f"nodes {extra} are not in the shape", path="$.nodes")
        if with_structure and len(with_structure) != len(nodes):
            raise DocumentError("either every node has a structure or none does", path="$.nodes")
        morphisms = {e.id: self._edge_morphism(e, nodes, bool(with_structure)) for e in shape.edges}
        try:
            system = InformationSystem(shape, nodes, morphisms, self.bound)
        except SystemError as exc:
            raise DocumentError(str(exc), path="$.shape.edges") from None
        return SystemDocument(self.inst, system, self.raw, self.bound, self.languages, self.source)

    def _language(self, name, value):
        where = f"$.languages.{name}"
        try:
            if self.inst is IF:
                if not isinstance(value, list):
                    raise DocumentError("IF languages are lists of type symbols", path=where)
                return IFLanguage(tuple(value))
            if not isinstance(value, dict):
                raise DocumentError("FOLf languages map relation symbols to arities", path=where)
            return RelSignature(tuple(value.items()), self.schemas)
        except InstitutionError as exc:
            if isinstance(exc, DocumentError):
                raise
            raise DocumentError(str(exc), path=where) from None

    def _structure(self, name, value):
        where = f"$.structures.{name}"
        lang = self.language(value["language"], where + ".language")
        try:
            if self.inst is IF:
                if "instances" not in value:
                    raise DocumentError("IF structures list instances and incidence", path=where)
                c = Classification(tuple(value["instances"]), lang.types,
                                   frozenset(map(tuple, value["incidence"])))
                if c.language != lang:
                    raise DocumentError("classification types differ from its language", path=where)
                return value["language"], c
            if "carrier" not in value:
                raise DocumentError("FOLf structures give a carrier and tables", path=where)
            return value["language"], FiniteStructure(
                lang, value["carrier"], tuple((r, frozenset(map(tuple, t))) for r, t in value["tables"].items()))
        except InstitutionError as exc:
            if isinstance(exc, DocumentError):
                raise
            raise DocumentError(str(exc), path=where) from None

    def _shape(self) -> ShapeGraph:
        s = self.raw["shape"]
        for k, e in enumerate(s.get("edges", [])):
            for end in ("source", "target"):
                if e[end] not in s["nodes"]:
                    raise DocumentError(f"edge {e['id']!r} refers to unknown node {e[end]!r}",
                                        path=f"$.shape.edges[{k}].{end}")
            self.ref("morphisms", e["morphism"], f"$.shape.edges[{k}].morphism")
        try:
            return ShapeGraph(tuple(s["nodes"]),
                              tuple(Edge(e["id"], e["source"], e["target"]) for e in s.get("edges", [])))
        except SystemError as exc:
            raise DocumentError(str(exc), path="$.shape") from None

    def _theory(self, lang, texts, where) -> Specification:
        out = []
        for k, t in enumerate(texts):
            try:
                out.append(self.inst.parse_sentence(lang, t))
            except InstitutionError as exc:
                raise DocumentError(f"sentence {t!r}: {exc}", path=f"{where}[{k}]") from None
        return Specification(lang, frozenset(out))

    def _edge_morphism(self, edge: Edge, nodes, semantic: bool):
        spec = next(e for e in self.raw["shape"]["edges"] if e["id"] == edge.id)
        mname = spec["morphism"]
        where = f"$.morphisms.{mname}"
        m = self.raw["morphisms"][mname]
        src = self.language(m["source"], where + ".source")
        tgt = self.language(m["target"], where + ".target")
        if src != nodes[edge.source].language or tgt != nodes[edge.target].language:
            raise DocumentError(f"morphism {mname!r} does not match the languages of edge {edge.id!r}",
                                path=where)
        try:
            sigma = SymbolMap.from_dict(src, tgt, m["map"])
        except InstitutionError as exc:
            raise DocumentError(str(exc), path=where + ".map") from None
        if not (semantic and self.inst is IF):
            return sigma
        if "instances" not in m:
            raise DocumentError("IF morphisms between structures need an instance map", path=where)
        try:
            return Infomorphism(nodes[edge.source].structure, nodes[edge.target].structure, sigma,
                                tuple(m["instances"].items()))
        except InfomorphismError as exc:
            if exc.witness is not None:
                x, y = exc.witness
                raise DocumentError(f"edge {edge.id!r}: infomorphism condition fails at "
                                    f"(instance {x!r}, type {y!r})", path=where) from None
            raise DocumentError(f"edge {edge.id!r}: {exc}", path=where) from None


# -- writing ----------------------------------------------------------------------


def with_theories(doc: SystemDocument, system: InformationSystem) -> dict:
    """The original document with every node theory replaced by ``system``'s, canonically sorted."""
    raw = json.loads(json.dumps(doc.raw))
    fmt = doc.institution.format_sentence
    for n in system.shape.nodes:
        raw["nodes"][n]["theory"] = [fmt(s) for s in system.theory(n).sorted()]
    return raw


def system_to_dict(system: InformationSystem) -> dict:
    """Serialize a semantic IF or FOLf system with generated language/structure/morphism names."""
    inst = system.institution
    tag = "if" if inst is IF else "folf"
    doc: dict = {"institution": tag, "languages": {}, "structures": {}, "morphisms": {},
                 "shape": {"nodes": list(system.shape.nodes), "edges": []}, "nodes": {},
                 "options": {"bound": system.bound}}
    for n in system.shape.nodes:
        v = system.nodes[n]
        lang = v.language
        doc["languages"][f"L_{n}"] = list(lang.types) if tag == "if" else dict(lang.symbols_with_arity)
        entry = {"language": f"L_{n}", "theory": [inst.format_sentence(s) for s in system.theory(n).sorted()]}
        if isinstance(v, Logic):
            doc["structures"][f"M_{n}"] = _structure_to_dict(v.structure, f"L_{n}")
            entry["structure"] = f"M_{n}"
        doc["nodes"][n] = entry
    if not doc["structures"]:
        del doc["structures"]
    for e in system.shape.edges:
        f = system.morphisms[e.id]
        m = {"source": f"L_{e.source}", "target": f"L_{e.target}", "map": dict(f.language_morphism.pairs)}
        if isinstance(f, Infomorphism):
            m["instances"] = {str(k): str(v) for k, v in f.instance_pairs}
        doc["morphisms"][f"f_{e.id}"] = m
        doc["shape"]["edges"].append({"id": e.id, "source": e.source, "target": e.target,
                                      "morphism": f"f_{e.id}"})
    if tag == "folf":
        schemas = {v.language.schemas for v in system.nodes.values()}
        if len(schemas) == 1:
            doc["options"]["schemas"] = list(schemas.pop())
    return doc


def _structure_to_dict(structure, lang_name: str) -> dict:
    if isinstance(structure, Classification):
        return {"language": lang_name, "instances": [str(x) for x in structure.instances],
                "incidence": sorted([str(x), y] for x, y in structure.incidence)}
    return {"language": lang_name, "carrier": structure.carrier_size,
            "tables": {r: sorted(list(t) for t in rows) for r, rows in structure.tables}}


def dumps(raw: dict) -> str:
    return json.dumps(raw, indent=2) + "\n"
