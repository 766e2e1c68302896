"""Seeded random IF specifications, logics, morphisms and small information systems."""
from __future__ import annotations

import random

from .infoflow import IF, Classification, IFLanguage, Infomorphism, row_set_classification
from .institution import SymbolMap
from .logic import IndexedStructure, Logic, StructureMorphism, intent
from .specflow import Specification, direct
from .systems import Edge, InformationSystem, ShapeGraph

TYPE_NAMES = "abcdefgh"


def random_language(rng: random.Random, max_types: int = 3, min_types: int = 1,
                    prefix: str = "") -> IFLanguage:
    k = rng.randint(min_types, max_types)
    return IFLanguage(tuple(f"{prefix}{t}" for t in TYPE_NAMES[:k]))


def random_spec(rng: random.Random, lang: IFLanguage, max_size: int = 3, pool=None) -> Specification:
    pool = IF.sentences(lang) if pool is None else sorted(pool, key=IF.sentence_key)
    k = min(len(pool), rng.randint(0, max_size))
    return Specification(lang, frozenset(rng.sample(list(pool), k)))


def random_symbol_map(rng: random.Random, source: IFLanguage, target: IFLanguage) -> SymbolMap:
    return SymbolMap.from_dict(source, target, {t: rng.choice(target.types) for t in source.types})


def random_classification(rng: random.Random, lang: IFLanguage, max_instances: int = 3,
                          min_instances: int = 0, prefix: str = "x") -> Classification:
    n = rng.randint(min_instances, max_instances)
    rows = {f"{prefix}{i}": [t for t in lang.types if rng.random() < 0.5] for i in range(n)}
    return Classification.from_rows(lang.types, rows)


def random_row_set(rng: random.Random, lang: IFLanguage) -> Classification:
    masks = [m for m in range(1 << len(lang.types)) if rng.random() < 0.5]
    return row_set_classification(lang, masks)


def random_structure_morphism(rng: random.Random, max_types: int = 3):
    """A random symbol map with structures on both sides such that it preserves satisfaction.

    The source structure is the reduct of the target plus extra rows, which
    can only shrink its intent.
    """
    l1 = random_language(rng, max_types)
    l2 = random_language(rng, max_types)
    sigma = random_symbol_map(rng, l1, l2)
    m2 = random_row_set(rng, l2)
    reduced = IF.reduct(sigma, m2)
    extra = {m for m in range(1 << len(l1.types)) if rng.random() < 0.3}
    m1 = row_set_classification(l1, set(reduced.row_masks) | extra)
    return StructureMorphism(IndexedStructure(l1, m1), IndexedStructure(l2, m2), sigma)


def random_logic(rng: random.Random, m: IndexedStructure, sound: bool | None = None,
                 max_size: int = 3) -> Logic:
    """Random theory over ``m``; drawn from the intent if ``sound`` is True."""
    pool = intent(m).sentences if sound else None
    return Logic.of(m, random_spec(rng, m.language, max_size, pool))


def random_shape(rng: random.Random, max_nodes: int = 3, max_edges: int = 2,
                 min_nodes: int = 1) -> ShapeGraph:
    """Random acyclic shape; edges run from lower to higher node index."""
    n = rng.randint(min_nodes, max_nodes)
    nodes = tuple(f"n{i}" for i in range(n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    k = rng.randint(0, min(max_edges, len(pairs))) if pairs else 0
    chosen = rng.sample(pairs, k)
    edges = tuple(Edge(f"e{m}", nodes[i], nodes[j]) for m, (i, j) in enumerate(sorted(chosen)))
    return ShapeGraph(nodes, edges)


def random_if_system(rng: random.Random, max_nodes: int = 3, max_edges: int = 2, max_types: int = 2,
                     sound: bool = False, min_nodes: int = 1, max_theory: int = 2,
                     bound: int = 3) -> InformationSystem:
    """Random IF information system whose edges are infomorphisms and logic morphisms.

    Structures are built from the sinks back: a node's instances contain a
    pulled-back copy of every instance of each edge target, so the instance
    maps can send each target instance to its copy.  Theories are built
    forward: a target's theory contains the direct image of each source's.
    """
    shape = random_shape(rng, max_nodes, max_edges, min_nodes)
    langs = {n: random_language(rng, max_types, prefix="") for n in shape.nodes}
    out_edges = {n: [e for e in shape.edges if e.source == n] for n in shape.nodes}
    in_edges = {n: [e for e in shape.edges if e.target == n] for n in shape.nodes}
    sigmas = {e.id: random_symbol_map(rng, langs[e.source], langs[e.target]) for e in shape.edges}

    classes: dict = {}
    copies: dict = {}
    for n in reversed(shape.nodes):
        rows: dict = {}
        for e in out_edges[n]:
            target = classes[e.target]
            sigma = sigmas[e.id]
            copies[e.id] = {}
            for x in target.instances:
                name = f"{e.id}:{x}"
                rows[name] = [y for y in langs[n].types if target.classifies(x, sigma(y))]
                copies[e.id][x] = name
        extra = random_classification(rng, langs[n], max_instances=2 if out_edges[n] else 3,
                                      min_instances=0 if out_edges[n] else 1, prefix=f"{n}x")
        rows.update(extra.rows)
        classes[n] = Classification.from_rows(langs[n].types, rows)

    morphisms = {e.id: Infomorphism(classes[e.source], classes[e.target], sigmas[e.id],
                                    tuple(copies[e.id].items()))
                 for e in shape.edges}
    structs = {n: IndexedStructure(langs[n], classes[n]) for n in shape.nodes}
    theories: dict = {}
    for n in shape.nodes:
        own = random_logic(rng, structs[n], sound, max_theory).theory
        pushed = [direct(sigmas[e.id], Specification(langs[e.source], theories[e.source])).sentences
                  for e in in_edges[n]]
        theories[n] = frozenset(own).union(*pushed)
    nodes = {n: Logic(langs[n], classes[n], theories[n]) for n in shape.nodes}
    return InformationSystem(shape, nodes, morphisms, bound)


def strengthen(rng: random.Random, system: InformationSystem, max_extra: int = 2,
               sound: bool = False) -> InformationSystem:
    """A pointwise more specialized system: add sentences, then saturate along edges."""
    theories = {}
    for n in system.shape.nodes:
        lg = system.nodes[n]
        pool = intent(lg.indexed).sentences if sound else None
        theories[n] = lg.theory | random_spec(rng, lg.language, max_extra, pool).sentences
    for n in system.shape.nodes:
        for e in system.shape.edges:
            if e.target == n:
                sigma = system.morphisms[e.id].language_morphism
                theories[n] |= {IF.translate(sigma, s) for s in theories[e.source]}
    return system.replace_theories(theories)


def random_systems(seed: int, count: int, **kw) -> list[InformationSystem]:
    rng = random.Random(seed)
    return [random_if_system(rng, **kw) for _ in range(count)]

