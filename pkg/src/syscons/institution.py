"""Abstract logical-system contract and the finite-colimit machinery shared by instances.

An institution bundles, per language, a finite sentence universe, a bounded
structure enumeration, a satisfaction relation, sentence translation along
language morphisms and structure reduct against them.  Everything downstream
(specification flow, logics, systems) is written against this contract.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

DEFAULT_BOUND = 3


class InstitutionError(ValueError):
    """Malformed input to an institution operation."""


class MorphismMismatch(InstitutionError):
    """Morphism endpoints do not line up."""


class CapExceeded(InstitutionError):
    """A finite enumeration would exceed its configured cap."""


@dataclass(frozen=True)
class EntailmentReport:
    """Outcome of an entailment query; ``witness`` is a counter-model iff not ``holds``."""

    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class SymbolMap:
    """Language morphism given extensionally as a symbol map.

    ``pairs`` is a sorted tuple of ``(source_symbol, target_symbol)``; equality
    of morphisms is equality of these maps plus endpoints.
    """

    source: Any
    target: Any
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        pairs = tuple(sorted(dict(self.pairs).items()))
        object.__setattr__(self, "pairs", pairs)
        src = set(self.source.symbols)
        tgt = set(self.target.symbols)
        keys = {a for a, _ in pairs}
        if keys != src:
            missing = sorted(src - keys)
            extra = sorted(keys - src)
            raise InstitutionError(
                f"symbol map not total on source: missing={missing} extra={extra}"
            )
        bad = sorted(b for _, b in pairs if b not in tgt)
        if bad:
            raise InstitutionError(f"symbol map hits unknown target symbols {bad}")
        self.source.institution.check_morphism(self)

    @classmethod
    def from_dict(cls, source, target, mapping: Mapping[str, str]) -> SymbolMap:
        return cls(source, target, tuple(mapping.items()))

    @classmethod
    def identity(cls, language) -> SymbolMap:
        return cls(language, language, tuple((s, s) for s in language.symbols))

    @cached_property
    def mapping(self) -> dict[str, str]:
        return dict(self.pairs)

    def __call__(self, symbol: str) -> str:
        return self.mapping[symbol]

    @property
    def language_morphism(self) -> SymbolMap:
        return self

    def is_identity(self) -> bool:
        return self.source == self.target and all(a == b for a, b in self.pairs)

    def __repr__(self) -> str:
        body = ", ".join(f"{a}->{b}" for a, b in self.pairs)
        return f"SymbolMap({body})"


def compose(first: SymbolMap, second: SymbolMap) -> SymbolMap:
    """Diagrammatic composite: apply ``first`` then ``second``."""
    if first.target != second.source:
        raise MorphismMismatch(
            f"cannot compose: target {first.target!r} != source {second.source!r}"
        )
    return SymbolMap(
        first.source,
        second.target,
        tuple((a, second(b)) for a, b in first.pairs),
    )


class Institution(ABC):
    """Contract every concrete logical system implements.

    Languages are hashable values carrying a ``symbols`` tuple and an
    ``institution`` attribute pointing back here.  Sentences and structures
    are hashable values too.  ``bound`` limits structure enumeration; an
    institution whose enumeration is complete at any bound may ignore it.
    """

    name: str = "abstract"

    @abstractmethod
    def sentences(self, language) -> tuple:
        """Finite sentence universe in canonical order."""

    @abstractmethod
    def structures(self, language, bound: int = DEFAULT_BOUND) -> Iterator:
        """Bounded structure enumeration in canonical order."""

    @abstractmethod
    def satisfies(self, structure, sentence) -> bool: ...

    @abstractmethod
    def translate(self, sigma: SymbolMap, sentence): ...

    @abstractmethod
    def reduct(self, sigma: SymbolMap, structure): ...

    @abstractmethod
    def sentence_key(self, sentence): ...

    @abstractmethod
    def check_sentence(self, language, sentence) -> None:
        """Raise InstitutionError unless ``sentence`` is over ``language``."""

    @abstractmethod
    def structure_language(self, structure): ...

    @abstractmethod
    def make_language(self, symbols: Sequence[tuple[str, Any]]):
        """Build a language from ``(name, sort)`` pairs (sort is institution specific)."""

    @abstractmethod
    def symbol_sort(self, language, symbol: str) -> Any: ...

    @abstractmethod
    def parse_sentence(self, language, text: str): ...

    @abstractmethod
    def format_sentence(self, sentence) -> str: ...

    def check_morphism(self, sigma: SymbolMap) -> None:
        for a, b in sigma.pairs:
            if self.symbol_sort(sigma.source, a) != self.symbol_sort(sigma.target, b):
                raise InstitutionError(f"symbol {a}->{b} changes sort")

    def sort_sentences(self, sentences: Iterable) -> tuple:
        return tuple(sorted(set(sentences), key=self.sentence_key))

    def check_structure(self, language, structure) -> None:
        if self.structure_language(structure) != language:
            raise MorphismMismatch("structure is not over the expected language")

    # -- semantic consequence -------------------------------------------------

    def entailment(self, language, sentences: Iterable, bound: int = DEFAULT_BOUND
                   ) -> Callable[[Any], EntailmentReport]:
        """Return a decision procedure for ``sentences |- s`` at ``bound``.

        Generic version: materialize every enumerated model once.  The witness
        is the first counter-model in enumeration order.
        """
        theory = tuple(sentences)
        models = [m for m in self.structures(language, bound)
                  if all(self.satisfies(m, t) for t in theory)]

        def decide(s) -> EntailmentReport:
            for m in models:
                if not self.satisfies(m, s):
                    return EntailmentReport(False, m)
            return EntailmentReport(True)

        return decide

    def consequence(self, language, sentences: Iterable, bound: int = DEFAULT_BOUND
                    ) -> frozenset:
        """Universe sentences (plus the given ones) true in every bounded model."""
        theory = frozenset(sentences)
        decide = self.entailment(language, theory, bound)
        ambient = set(self.sentences(language)) | theory
        return frozenset(s for s in ambient if decide(s).holds)

    def intent(self, structure) -> frozenset:
        language = self.structure_language(structure)
        return frozenset(s for s in self.sentences(language) if self.satisfies(structure, s))


def check_satisfaction_invariance(sigma: SymbolMap, target_structure,
                                  bound: int = DEFAULT_BOUND,
                                  institution: Institution | None = None) -> bool:
    """Truth is invariant under change of notation along ``sigma``.

    Checks ``reduct(sigma)(M2) |= s1  <=>  M2 |= translate(sigma)(s1)`` for
    every source-universe sentence ``s1``.
    """
    inst = institution or sigma.source.institution
    if inst.structure_language(target_structure) != sigma.target:
        raise MorphismMismatch("structure is not over the morphism's target language")
    reduced = inst.reduct(sigma, target_structure)
    for s1 in inst.sentences(sigma.source):
        if inst.satisfies(reduced, s1) != inst.satisfies(target_structure, inst.translate(sigma, s1)):
            return False
    return True


# -- finite colimits of sets ----------------------------------------------------


@dataclass(frozen=True)
class FiniteSetDiagram:
    """Shape-indexed family of finite sets with total edge functions.

    ``edges`` holds ``(edge_id, source_node, target_node, function)`` where the
    function is a mapping from the source node's set into the target node's.
    """

    nodes: tuple[tuple[Hashable, tuple], ...]
    edges: tuple[tuple[Hashable, Hashable, Hashable, Mapping], ...] = ()

    def __post_init__(self):
        sets = dict(self.nodes)
        for eid, src, tgt, fn in self.edges:
            if src not in sets or tgt not in sets:
                raise InstitutionError(f"edge {eid!r}: unknown endpoint")
            missing = [x for x in sets[src] if x not in fn]
            if missing:
                raise InstitutionError(f"edge {eid!r}: function not total, missing {missing}")
            stray = [fn[x] for x in sets[src] if fn[x] not in set(sets[tgt])]
            if stray:
                raise InstitutionError(f"edge {eid!r}: values {stray} outside target set")

    @cached_property
    def sets(self) -> dict:
        return dict(self.nodes)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class SetColimit:
    """Result of ``colimit_of_finite_sets``.

    ``classes[k]`` is the k-th equivalence class as a tuple of ``(node, element)``
    pairs; ``injections[node][element]`` is the class index.
    """

    classes: tuple[tuple[tuple[Hashable, Hashable], ...], ...]
    injections: Mapping[Hashable, Mapping[Hashable, int]] = field(compare=False)


def colimit_of_finite_sets(diagram: FiniteSetDiagram) -> SetColimit:
    """Disjoint union quotiented by ``x ~ f_e(x)`` for every edge.

    Classes are ordered by their least member, where members compare by node
    position in the diagram and then by the element's position in its set.
    """
    order = {}
    for ni, (node, elems) in enumerate(diagram.nodes):
        for ei, x in enumerate(elems):
            order[(node, x)] = (ni, ei)
    uf = _UnionFind(order)
    for _eid, src, tgt, fn in diagram.edges:
        for x in diagram.sets[src]:
            uf.union((src, x), (tgt, fn[x]))
    groups: dict = {}
    for member in order:
        groups.setdefault(uf.find(member), []).append(member)
    classes = sorted((tuple(sorted(g, key=order.__getitem__)) for g in groups.values()),
                     key=lambda c: order[c[0]])
    injections: dict = {node: {} for node, _ in diagram.nodes}
    for k, cls in enumerate(classes):
        for node, x in cls:
            injections[node][x] = k
    return SetColimit(tuple(classes), injections)
