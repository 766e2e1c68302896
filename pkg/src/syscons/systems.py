"""Distributed and information systems, covering channels, fusion and system consequence.

A system is a finite shape graph with a part at every node and a morphism on
every edge.  Semantic systems carry indexed structures (distributed) or
logics (information); formal systems carry languages or specifications.
Edges of IF semantic systems are infomorphisms, everything else uses symbol
maps.  Covering is checked on generating edges only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterator, Mapping, Sequence

from .folf import FiniteStructure, FOLfInstitution, RelSignature
from .infoflow import (
    Classification,
    IFInstitution,
    Infomorphism,
    InfomorphismError,
    all_maps,
    classification_colimit,
    compose_infomorphisms,
    name_classes,
)
from .institution import (
    DEFAULT_BOUND,
    FiniteSetDiagram,
    InstitutionError,
    MorphismMismatch,
    SymbolMap,
    colimit_of_finite_sets,
    compose,
)
from .logic import (
    IndexedStructure,
    Logic,
    StructureMorphism,
    UnsoundLogic,
    dir_logic,
    inv_sound,
    is_sound,
    is_structure_morphism,
    logic_leq_over_language,
    res,
)
from .specflow import Specification, direct, inverse, is_spec_morphism, leq, meet


class SystemError(InstitutionError):
    """Invalid system, channel or cover."""


class CoreConstructionError(SystemError):
    """The institution cannot build a semantic core for this system."""


@dataclass(frozen=True)
class Edge:
    id: Hashable
    source: Hashable
    target: Hashable


@dataclass(frozen=True)
class ShapeGraph:
    nodes: tuple
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if len(set(self.nodes)) != len(self.nodes):
            raise SystemError("duplicate nodes")
        if len({e.id for e in edges}) != len(edges):
            raise SystemError("duplicate edge ids")
        for e in edges:
            if e.source not in self.nodes or e.target not in self.nodes:
                raise SystemError(f"edge {e.id!r} has an unknown endpoint")

    @classmethod
    def discrete(cls, nodes: Sequence) -> ShapeGraph:
        return cls(tuple(nodes))

    @classmethod
    def span(cls, left, middle, right) -> ShapeGraph:
        return cls((left, middle, right), (Edge("l", middle, left), Edge("r", middle, right)))

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        seen, todo = {self.nodes[0]}, [self.nodes[0]]
        adj: dict = {n: set() for n in self.nodes}
        for e in self.edges:
            adj[e.source].add(e.target)
            adj[e.target].add(e.source)
        while todo:
            for m in adj[todo.pop()]:
                if m not in seen:
                    seen.add(m)
                    todo.append(m)
        return len(seen) == len(self.nodes)


def _lang_of(part):
    if isinstance(part, (IndexedStructure, Logic, Specification)):
        return part.language
    return part


def compose_morphisms(f, g):
    """``f`` then ``g`` for symbol maps or infomorphisms."""
    if isinstance(f, Infomorphism) and isinstance(g, Infomorphism):
        return compose_infomorphisms(f, g)
    return compose(f.language_morphism, g.language_morphism)


@dataclass(frozen=True, eq=True)
class DistributedSystem:
    """Shape-indexed parts (indexed structures, or bare languages at the formal level)."""

    shape: ShapeGraph
    parts: Mapping[Hashable, Any] = field(hash=False)
    morphisms: Mapping[Hashable, Any] = field(hash=False)
    verify: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "parts", dict(self.parts))
        object.__setattr__(self, "morphisms", dict(self.morphisms))
        _check_keys(self.shape, self.parts, self.morphisms)
        for e in self.shape.edges:
            f = self.morphisms[e.id]
            src, tgt = self.parts[e.source], self.parts[e.target]
            sigma = f.language_morphism
            if sigma.source != _lang_of(src) or sigma.target != _lang_of(tgt):
                raise MorphismMismatch(f"edge {e.id!r}: morphism endpoints differ from its nodes")
            if isinstance(f, Infomorphism) and not self.formal:
                if f.source != src.structure or f.target != tgt.structure:
                    raise MorphismMismatch(f"edge {e.id!r}: infomorphism classifications differ from node structures")
            if self.verify and not self.formal and not is_structure_morphism(f, src, tgt):
                raise SystemError(f"edge {e.id!r} is not a structure morphism")

    @property
    def formal(self) -> bool:
        return not all(isinstance(p, IndexedStructure) for p in self.parts.values())

    @property
    def institution(self):
        return _lang_of(next(iter(self.parts.values()))).institution


@dataclass(frozen=True, eq=True)
class InformationSystem:
    """Shape-indexed logics (semantic) or specifications (formal)."""

    shape: ShapeGraph
    nodes: Mapping[Hashable, Any] = field(hash=False)
    morphisms: Mapping[Hashable, Any] = field(hash=False)
    bound: int = field(default=DEFAULT_BOUND, compare=False)
    verify: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", dict(self.nodes))
        object.__setattr__(self, "morphisms", dict(self.morphisms))
        _check_keys(self.shape, self.nodes, self.morphisms)
        kinds = {type(v) for v in self.nodes.values()}
        if not (kinds <= {Logic} or kinds <= {Specification}):
            raise SystemError("nodes must be all logics or all specifications")
        if self.verify:
            for e in self.shape.edges:
                problem = self.edge_problem(e)
                if problem:
                    raise SystemError(f"edge {e.id!r}: {problem}")

    def edge_problem(self, e: Edge) -> str | None:
        f = self.morphisms[e.id]
        src, tgt = self.nodes[e.source], self.nodes[e.target]
        sigma = f.language_morphism
        if sigma.source != src.language or sigma.target != tgt.language:
            return "morphism endpoints differ from its nodes"
        if not self.formal:
            if isinstance(f, Infomorphism) and (f.source != src.structure or f.target != tgt.structure):
                return "infomorphism classifications differ from node structures"
            if not is_structure_morphism(f, src.indexed, tgt.indexed):
                return "not a structure morphism"
        if not is_spec_morphism(sigma, _spec(src), _spec(tgt), self.bound):
            return "not a specification morphism"
        return None

    @property
    def formal(self) -> bool:
        return all(isinstance(v, Specification) for v in self.nodes.values())

    @property
    def institution(self):
        return next(iter(self.nodes.values())).language.institution

    def theory(self, node) -> Specification:
        return _spec(self.nodes[node])

    def replace_theories(self, theories: Mapping[Hashable, frozenset], verify: bool = True
                         ) -> InformationSystem:
        nodes = {n: _with_theory(v, theories[n]) for n, v in self.nodes.items()}
        return InformationSystem(self.shape, nodes, self.morphisms, self.bound, verify)


def _check_keys(shape: ShapeGraph, parts, morphisms):
    if set(parts) != set(shape.nodes):
        raise SystemError("parts must be given for exactly the shape's nodes")
    if set(morphisms) != {e.id for e in shape.edges}:
        raise SystemError("morphisms must be given for exactly the shape's edges")


def _spec(v) -> Specification:
    return v.spec if isinstance(v, Logic) else v


def _with_theory(v, theory):
    if isinstance(v, Logic):
        return v.with_theory(theory)
    return Specification(v.language, theory)


def underlying(system: InformationSystem) -> DistributedSystem:
    """Same shape; each logic replaced by its indexed structure (or language if formal)."""
    parts = {n: (v.language if system.formal else v.indexed) for n, v in system.nodes.items()}
    return DistributedSystem(system.shape, parts, system.morphisms, verify=False)


# -- channels -------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class Channel:
    """Morphisms from every part into a common core (an indexed structure or a language)."""

    core: Any
    components: Mapping[Hashable, Any] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "components", dict(self.components))
        core_lang = _lang_of(self.core)
        for n, g in self.components.items():
            if g.language_morphism.target != core_lang:
                raise MorphismMismatch(f"component {n!r} does not target the core")

    @property
    def core_language(self):
        return _lang_of(self.core)


def covering_violations(channel: Channel, system: DistributedSystem) -> list:
    """Edges ``e: i -> j`` where ``component_i != sigma_e ; component_j``."""
    if set(channel.components) != set(system.shape.nodes):
        raise SystemError("channel components do not match the system's nodes")
    bad = []
    for e in system.shape.edges:
        try:
            via = compose_morphisms(system.morphisms[e.id], channel.components[e.target])
        except MorphismMismatch:
            bad.append(e.id)
            continue
        if via != channel.components[e.source]:
            bad.append(e.id)
    return bad


def is_covering(channel: Channel, system: DistributedSystem) -> bool:
    return not covering_violations(channel, system)


def minimal_cover(system: DistributedSystem) -> Channel:
    """The colimit channel: merged symbols at the core, injections as components."""
    inst = system.institution
    nodes = system.shape.nodes
    langs = {n: _lang_of(system.parts[n]) for n in nodes}
    diagram = FiniteSetDiagram(
        tuple((n, langs[n].symbols) for n in nodes),
        tuple((e.id, e.source, e.target, system.morphisms[e.id].language_morphism.mapping)
              for e in system.shape.edges),
    )
    colim = colimit_of_finite_sets(diagram)
    if isinstance(inst, FOLfInstitution):
        names = name_classes(colim.classes, join="_", qualify="_")
    else:
        names = name_classes(colim.classes)
    sorts = []
    for name, members in zip(names, colim.classes):
        found = {inst.symbol_sort(langs[n], s) for n, s in members}
        if len(found) != 1:
            raise CoreConstructionError(f"merged symbols {members} have clashing sorts {sorted(found)}")
        sorts.append((name, found.pop()))

    if not system.formal and isinstance(inst, IFInstitution):
        colim_c = classification_colimit(
            [(n, system.parts[n].structure) for n in nodes],
            [(e.id, e.source, e.target, system.morphisms[e.id]) for e in system.shape.edges],
        )
        core = IndexedStructure(colim_c.core.language, colim_c.core)
        return Channel(core, colim_c.injections)

    if isinstance(inst, FOLfInstitution):
        core_lang = RelSignature(tuple(sorts), langs[nodes[0]].schemas)
    else:
        core_lang = inst.make_language(sorts)
    comps = {n: SymbolMap(langs[n], core_lang,
                          tuple((s, names[colim.injections[n][s]]) for s in langs[n].symbols))
             for n in nodes}
    if system.formal:
        return Channel(core_lang, comps)
    if isinstance(inst, FOLfInstitution):
        core = _amalgamate(system, colim, names, core_lang)
        return Channel(IndexedStructure(core_lang, core), comps)
    raise CoreConstructionError(f"no semantic core construction for institution {inst.name!r}")


def _amalgamate(system: DistributedSystem, colim, names, core_lang) -> FiniteStructure:
    sizes = {n: system.parts[n].structure.carrier_size for n in system.shape.nodes}
    if len(set(sizes.values())) > 1:
        raise CoreConstructionError(f"carrier sizes differ across nodes: {sizes}")
    n = next(iter(sizes.values()))
    tables = []
    for name, members in zip(names, colim.classes):
        seen = {(node, s): system.parts[node].structure.table[s] for node, s in members}
        distinct = set(seen.values())
        if len(distinct) > 1:
            (a, ta), (b, tb) = next(((p, q) for p in seen.items() for q in seen.items() if p[1] != q[1]))
            diff = sorted(ta ^ tb)
            raise CoreConstructionError(
                f"merged symbols {a[0]}.{a[1]} and {b[0]}.{b[1]} disagree on tuples {diff}")
        tables.append((name, distinct.pop()))
    return FiniteStructure(core_lang, n, tuple(tables))


def _core_structure_morphism(component, part, channel):
    return StructureMorphism(part, channel.core, component)


def mediator(minimal: Channel, other: Channel, system: DistributedSystem,
             check_unique: bool = True, enumeration_cap: int = 200_000):
    """The unique refinement ``rho`` with ``iota_i ; rho = gamma_i`` for every node.

    Uniqueness is checked by enumerating every candidate symbol map (and, for
    infomorphisms, every candidate instance map) when the count stays under
    ``enumeration_cap``.
    """
    if not is_covering(other, system):
        raise SystemError("the other channel does not cover the system")
    nodes = system.shape.nodes
    min_lang, other_lang = minimal.core_language, other.core_language
    assignment: dict[str, str] = {}
    for n in nodes:
        for s, c in minimal.components[n].language_morphism.pairs:
            image = other.components[n].language_morphism(s)
            if assignment.setdefault(c, image) != image:
                raise SystemError(f"no consistent refinement: core symbol {c!r} must go to "
                                  f"both {assignment[c]!r} and {image!r}")
    missing = [c for c in min_lang.symbols if c not in assignment]
    if missing:
        raise SystemError(f"core symbols {missing} are not hit by any component")
    rho_lang = SymbolMap.from_dict(min_lang, other_lang, assignment)

    if isinstance(minimal.core, IndexedStructure) and isinstance(minimal.core.structure, Classification):
        rho = _mediating_infomorphism(minimal, other, nodes, rho_lang)
    else:
        rho = rho_lang
        if isinstance(minimal.core, IndexedStructure) and not is_structure_morphism(rho, minimal.core, other.core):
            raise SystemError("mediating symbol map is not a structure morphism")

    for n in nodes:
        if compose_morphisms(minimal.components[n], rho) != other.components[n]:
            raise SystemError(f"refinement equation fails at node {n!r}")
    if check_unique:
        count = count_refinements(minimal, other, nodes, enumeration_cap)
        if count is not None and count != 1:
            raise SystemError(f"refinement is not unique: {count} candidates satisfy the equations")
    return rho


def _mediating_infomorphism(minimal, other, nodes, rho_lang) -> Infomorphism:
    min_core: Classification = minimal.core.structure
    other_core: Classification = other.core.structure
    by_components = {tuple(minimal.components[n].instance_map[x] for n in nodes): x
                     for x in min_core.instances}
    inst_map = {}
    for c in other_core.instances:
        key = tuple(other.components[n].instance_map[c] for n in nodes)
        if key not in by_components:
            raise SystemError(f"other-core instance {c!r} has no matching core tuple")
        inst_map[c] = by_components[key]
    try:
        return Infomorphism(min_core, other_core, rho_lang, tuple(inst_map.items()))
    except InfomorphismError as exc:
        raise SystemError(f"mediating map is not an infomorphism: {exc}") from exc


def count_refinements(minimal: Channel, other: Channel, nodes, cap: int = 200_000) -> int | None:
    """Number of morphisms ``rho`` between the cores satisfying every refinement equation.

    Returns None if the candidate space exceeds ``cap``.
    """
    min_lang, other_lang = minimal.core_language, other.core_language
    inst = min_lang.institution
    syms, targets = min_lang.symbols, other_lang.symbols
    if len(targets) ** len(syms) > cap:
        return None
    sort_ok = lambda m: all(inst.symbol_sort(min_lang, a) == inst.symbol_sort(other_lang, b)
                            for a, b in m.items())
    type_maps = [m for m in all_maps(syms, targets) if sort_ok(m)]
    semantic_if = isinstance(minimal.core, IndexedStructure) and isinstance(minimal.core.structure, Classification)
    if not semantic_if:
        count = 0
        for m in type_maps:
            rho = SymbolMap.from_dict(min_lang, other_lang, m)
            if all(compose(minimal.components[n].language_morphism, rho)
                   == other.components[n].language_morphism for n in nodes):
                count += 1
        return count
    x_min = minimal.core.structure.instances
    x_other = other.core.structure.instances
    if len(type_maps) * len(x_min) ** len(x_other) > cap:
        return None
    count = 0
    for m in type_maps:
        rho_t = SymbolMap.from_dict(min_lang, other_lang, m)
        if not all(compose(minimal.components[n].type_map, rho_t) == other.components[n].type_map
                   for n in nodes):
            continue
        for im in all_maps(x_other, x_min):
            if all(minimal.components[n].instance_map[im[c]] == other.components[n].instance_map[c]
                   for n in nodes for c in x_other):
                count += 1
    return count


def enumerate_covering_channels(system: DistributedSystem, max_core_symbols: int = 4,
                                max_core_instances: int = 2) -> Iterator[Channel]:
    """Every covering channel whose core has at most ``max_core_symbols`` symbols.

    Formal systems: cores are languages with symbols ``c0, c1, ...`` (sorts
    drawn from those present in the system).  IF semantic systems: cores are
    classifications with at most ``max_core_instances`` instances, given by
    their type-rows.  Other semantic systems are not enumerated.
    """
    inst = system.institution
    nodes = system.shape.nodes
    langs = {n: _lang_of(system.parts[n]) for n in nodes}
    sorts = sorted({inst.symbol_sort(langs[n], s) for n in nodes for s in langs[n].symbols},
                   key=repr)
    semantic_if = not system.formal and isinstance(inst, IFInstitution)
    if not system.formal and not semantic_if:
        raise CoreConstructionError("alternative channels are enumerated for formal or IF systems only")
    for k in range(1, max_core_symbols + 1):
        names = [f"c{i}" for i in range(k)]
        for sort_choice in itertools.combinations_with_replacement(sorts, k):
            core_lang = inst.make_language(list(zip(names, sort_choice)))
            for maps in _covering_symbol_maps(system, langs, core_lang):
                if not semantic_if:
                    yield Channel(core_lang, maps)
                    continue
                yield from _if_channels(system, maps, core_lang, max_core_instances)


def _covering_symbol_maps(system, langs, core_lang) -> Iterator[dict]:
    inst = core_lang.institution
    nodes = system.shape.nodes
    per_node = []
    for n in nodes:
        options = []
        for m in all_maps(langs[n].symbols, core_lang.symbols):
            if all(inst.symbol_sort(langs[n], a) == inst.symbol_sort(core_lang, b) for a, b in m.items()):
                options.append(SymbolMap.from_dict(langs[n], core_lang, m))
        per_node.append(options)
    for combo in itertools.product(*per_node):
        maps = dict(zip(nodes, combo))
        if all(compose(system.morphisms[e.id].language_morphism, maps[e.target]) == maps[e.source]
               for e in system.shape.edges):
            yield maps


def _if_channels(system, type_maps, core_lang, max_instances) -> Iterator[Channel]:
    nodes = system.shape.nodes
    n_rows = 1 << len(core_lang.types)
    for count in range(max_instances + 1):
        for rows in itertools.product(range(n_rows), repeat=count):
            core_c = Classification.from_rows(
                core_lang.types, {f"k{i}": core_lang.unmask(r) for i, r in enumerate(rows)})
            choices = []
            for n in nodes:
                part: Classification = system.parts[n].structure
                tm = type_maps[n]
                per_inst = []
                for c in core_c.instances:
                    want = {y for y in part.types if core_c.classifies(c, tm(y))}
                    per_inst.append([x for x in part.instances if part.rows[x] == want])
                choices.append([dict(zip(core_c.instances, pick)) for pick in itertools.product(*per_inst)])
            for picks in itertools.product(*choices):
                imaps = dict(zip(nodes, picks))
                ok = all(system.morphisms[e.id].instance_map[imaps[e.target][c]] == imaps[e.source][c]
                         for e in system.shape.edges for c in core_c.instances)
                if not ok:
                    continue
                comps = {n: Infomorphism(system.parts[n].structure, core_c, type_maps[n],
                                         tuple(imaps[n].items())) for n in nodes}
                yield Channel(IndexedStructure(core_lang, core_c), comps)


# -- fusion and system consequence ----------------------------------------------


def _fusion(system: InformationSystem):
    channel = minimal_cover(underlying(system))
    inst = system.institution
    theory = frozenset(inst.translate(channel.components[n].language_morphism, s)
                       for n in system.shape.nodes for s in system.theory(n).sentences)
    if system.formal:
        return Specification(channel.core_language, theory), channel
    core: IndexedStructure = channel.core
    return Logic(core.language, core.structure, theory), channel


def fusion(system: InformationSystem, bound: int | None = None):
    """Direct flow of every part to the minimal-cover core, combined by meet (union).

    Returns a logic at the core, or a specification for formal systems.
    """
    return _fusion(system)[0]


def direct_system_flow(system: InformationSystem) -> list:
    """Per-node direct flows to the core (before the meet)."""
    fused, channel = _fusion(system)
    if system.formal:
        return [direct(channel.components[n].language_morphism, system.theory(n))
                for n in system.shape.nodes]
    out = []
    for n in system.shape.nodes:
        f = _core_structure_morphism(channel.components[n], system.nodes[n].indexed, channel)
        out.append(dir_logic(f, system.nodes[n]))
    return out


def system_consequence(system: InformationSystem, bound: int | None = None) -> InformationSystem:
    """Inverse flow of the fusion's consequence back along the minimal cover."""
    bound = system.bound if bound is None else bound
    fused, channel = _fusion(system)
    spec = fused if system.formal else fused.spec
    theories = {n: inverse(channel.components[n].language_morphism, spec, bound).sentences
                for n in system.shape.nodes}
    out = system.replace_theories(theories, verify=False)
    for e in out.shape.edges:
        problem = out.edge_problem(e)
        if problem:
            raise AssertionError(f"system consequence broke edge {e.id!r}: {problem}")
    return out


def sound_system_consequence(system: InformationSystem, bound: int | None = None) -> InformationSystem:
    """System consequence among sound logics: sound inverse flow from the (sound) fusion."""
    bound = system.bound if bound is None else bound
    if system.formal:
        raise SystemError("sound system consequence needs a semantic system")
    for n, lg in system.nodes.items():
        if not is_sound(lg, bound):
            raise UnsoundLogic(f"node {n!r} is not sound")
    fused, channel = _fusion(system)
    theories = {}
    for n in system.shape.nodes:
        f = _core_structure_morphism(channel.components[n], system.nodes[n].indexed, channel)
        theories[n] = inv_sound(f, fused, bound).theory
    return system.replace_theories(theories, verify=False)


def restrict_system(system: InformationSystem, bound: int | None = None) -> InformationSystem:
    bound = system.bound if bound is None else bound
    return system.replace_theories({n: res(v, bound).theory for n, v in system.nodes.items()},
                                   verify=False)


def include_system(system: InformationSystem, bound: int | None = None) -> InformationSystem:
    bound = system.bound if bound is None else bound
    for n, v in system.nodes.items():
        if not is_sound(v, bound):
            raise UnsoundLogic(f"node {n!r} is not sound")
    return system


def _same_shape(a: InformationSystem, b: InformationSystem):
    if a.shape != b.shape:
        raise SystemError("systems have different shapes")


def pointwise_leq(a: InformationSystem, b: InformationSystem, bound: int | None = None) -> bool:
    """Node by node: structure order and theory order (theory order only if formal)."""
    _same_shape(a, b)
    bound = a.bound if bound is None else bound
    for n in a.shape.nodes:
        x, y = a.nodes[n], b.nodes[n]
        if isinstance(x, Logic) and isinstance(y, Logic):
            if not logic_leq_over_language(x, y, bound):
                return False
        elif not leq(_spec(x), _spec(y), bound):
            return False
    return True


def system_entails(a: InformationSystem, b: InformationSystem, bound: int | None = None) -> bool:
    """``a`` system-entails ``b``: the system consequence of ``a`` is pointwise below ``b``."""
    _same_shape(a, b)
    return pointwise_leq(system_consequence(a, bound), b, bound)


def constant_meet(system: InformationSystem) -> Specification:
    """Meet (union) of all node theories, for systems over one common language."""
    return meet([system.theory(n) for n in system.shape.nodes])
