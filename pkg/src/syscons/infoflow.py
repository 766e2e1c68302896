"""The logical system IF: type-set languages, sequents, classifications, infomorphisms.

Sequent satisfaction only depends on which type-rows a classification
realizes, so a structure over an n-type language is enumerated as a set of
rows (bitmasks over the language's canonical type order).  Consequence uses
the same fact directly: a row-set models ``T`` iff each of its rows does, so
``T |- s`` iff every ``T``-admissible row satisfies ``s``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .institution import (
    DEFAULT_BOUND,
    CapExceeded,
    EntailmentReport,
    FiniteSetDiagram,
    Institution,
    InstitutionError,
    MorphismMismatch,
    SymbolMap,
    colimit_of_finite_sets,
)

UNIVERSE_CAP = 8
STRUCTURE_CAP = 4


class InfomorphismError(InstitutionError):
    """The infomorphism biconditional fails; ``witness`` is ``(instance, type)``."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class IFLanguage:
    types: tuple[str, ...]

    def __post_init__(self):
        types = tuple(sorted(set(self.types)))
        if len(types) != len(self.types):
            raise InstitutionError(f"duplicate type symbols in {self.types}")
        object.__setattr__(self, "types", types)

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.types

    @property
    def institution(self) -> IFInstitution:
        return IF

    @cached_property
    def index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.types)}

    def mask(self, types: Iterable[str]) -> int:
        m = 0
        for t in types:
            try:
                m |= 1 << self.index[t]
            except KeyError:
                raise InstitutionError(f"unknown type {t!r} for language {self.types}") from None
        return m

    def unmask(self, mask: int) -> frozenset[str]:
        return frozenset(t for i, t in enumerate(self.types) if mask >> i & 1)

    def __repr__(self) -> str:
        return "IFLanguage({" + ", ".join(self.types) + "})"


@dataclass(frozen=True)
class Sequent:
    antecedent: frozenset[str]
    succedent: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "antecedent", frozenset(self.antecedent))
        object.__setattr__(self, "succedent", frozenset(self.succedent))

    @property
    def types(self) -> frozenset[str]:
        return self.antecedent | self.succedent

    def key(self):
        return (len(self.antecedent) + len(self.succedent),
                tuple(sorted(self.antecedent)), tuple(sorted(self.succedent)))

    def __str__(self) -> str:
        left = ", ".join(sorted(self.antecedent))
        right = ", ".join(sorted(self.succedent))
        return " ".join(p for p in (left, "|-", right) if p)

    def __repr__(self) -> str:
        return f"Sequent({self})"


def seq(antecedent: Iterable[str] = (), succedent: Iterable[str] = ()) -> Sequent:
    return Sequent(frozenset(antecedent), frozenset(succedent))


def parse_sequent(text: str) -> Sequent:
    """Parse ``"a, b |- c"``; either side may be empty."""
    if text.count("|-") != 1:
        raise InstitutionError(f"sequent must contain exactly one '|-': {text!r}")
    left, right = text.split("|-")

    def side(part: str) -> frozenset[str]:
        names = [p.strip() for p in part.split(",")]
        if names == [""]:
            return frozenset()
        if any(not n for n in names):
            raise InstitutionError(f"empty type name in {text!r}")
        return frozenset(names)

    return Sequent(side(left), side(right))


@dataclass(frozen=True)
class Classification:
    """Instances classified by types through an incidence relation."""

    instances: tuple[Hashable, ...]
    types: tuple[str, ...]
    incidence: frozenset[tuple[Hashable, str]]

    def __post_init__(self):
        if len(set(self.instances)) != len(self.instances):
            raise InstitutionError("duplicate instances")
        object.__setattr__(self, "types", tuple(sorted(set(self.types))))
        object.__setattr__(self, "incidence", frozenset(self.incidence))
        inst, typs = set(self.instances), set(self.types)
        for x, y in self.incidence:
            if x not in inst or y not in typs:
                raise InstitutionError(f"incidence pair {(x, y)!r} outside instances x types")

    @classmethod
    def from_rows(cls, types: Sequence[str], rows: Mapping[Hashable, Iterable[str]]
                  ) -> Classification:
        return cls(tuple(rows), tuple(types),
                   frozenset((x, t) for x, r in rows.items() for t in r))

    @cached_property
    def language(self) -> IFLanguage:
        return IFLanguage(self.types)

    @cached_property
    def rows(self) -> dict[Hashable, frozenset[str]]:
        out: dict = {x: set() for x in self.instances}
        for x, y in self.incidence:
            out[x].add(y)
        return {x: frozenset(r) for x, r in out.items()}

    @cached_property
    def row_masks(self) -> frozenset[int]:
        lang = self.language
        return frozenset(lang.mask(r) for r in self.rows.values())

    def classifies(self, instance, type_: str) -> bool:
        return (instance, type_) in self.incidence

    def row_set_abstraction(self) -> Classification:
        lang = self.language
        return row_set_classification(lang, sorted(self.row_masks))


def _row_name(lang: IFLanguage, mask: int) -> str:
    return "{" + ",".join(t for i, t in enumerate(lang.types) if mask >> i & 1) + "}"


def row_set_classification(lang: IFLanguage, masks: Iterable[int]) -> Classification:
    masks = sorted(set(masks))
    rows = {_row_name(lang, m): lang.unmask(m) for m in masks}
    return Classification.from_rows(lang.types, rows)


@dataclass(frozen=True)
class Infomorphism:
    """Types map forward, instances map backward.

    ``instance_pairs`` maps each target instance to a source instance.  The
    defining condition ``instance_map(x2) |=_1 y1  <=>  x2 |=_2 type_map(y1)``
    is checked on construction.
    """

    source: Classification
    target: Classification
    type_map: SymbolMap
    instance_pairs: tuple[tuple[Hashable, Hashable], ...]

    def __post_init__(self):
        pairs = tuple(sorted(dict(self.instance_pairs).items(), key=lambda p: repr(p[0])))
        object.__setattr__(self, "instance_pairs", pairs)
        if self.type_map.source != self.source.language or self.type_map.target != self.target.language:
            raise MorphismMismatch("type map endpoints differ from classification languages")
        imap = dict(pairs)
        if set(imap) != set(self.target.instances):
            raise InfomorphismError("instance map not total on target instances")
        src_inst = set(self.source.instances)
        for x2, x1 in pairs:
            if x1 not in src_inst:
                raise InfomorphismError(f"instance map sends {x2!r} to unknown {x1!r}")
        for x2 in self.target.instances:
            x1 = imap[x2]
            for y1 in self.source.types:
                if self.source.classifies(x1, y1) != self.target.classifies(x2, self.type_map(y1)):
                    raise InfomorphismError(
                        f"infomorphism condition fails at instance {x2!r}, type {y1!r}",
                        witness=(x2, y1),
                    )

    @classmethod
    def build(cls, source: Classification, target: Classification,
              type_map: Mapping[str, str], instance_map: Mapping) -> Infomorphism:
        sigma = SymbolMap.from_dict(source.language, target.language, type_map)
        return cls(source, target, sigma, tuple(instance_map.items()))

    @classmethod
    def identity(cls, c: Classification) -> Infomorphism:
        return cls(c, c, SymbolMap.identity(c.language), tuple((x, x) for x in c.instances))

    @cached_property
    def instance_map(self) -> dict:
        return dict(self.instance_pairs)

    @property
    def language_morphism(self) -> SymbolMap:
        return self.type_map


def compose_infomorphisms(f: Infomorphism, g: Infomorphism) -> Infomorphism:
    """``f`` then ``g``: types ``g.type∘f.type``, instances ``f.inst∘g.inst``."""
    if f.target != g.source:
        raise MorphismMismatch("infomorphisms do not compose")
    type_map = SymbolMap(f.source.language, g.target.language,
                         tuple((a, g.type_map(b)) for a, b in f.type_map.pairs))
    inst = tuple((x3, f.instance_map[x2]) for x3, x2 in g.instance_pairs)
    return Infomorphism(f.source, g.target, type_map, inst)


def _sat_mask(row: int, gamma: int, delta: int) -> bool:
    return (gamma & ~row) != 0 or (delta & row) != 0


class IFInstitution(Institution):
    name = "if"

    def __init__(self, universe_cap: int = UNIVERSE_CAP, structure_cap: int = STRUCTURE_CAP):
        self.universe_cap = universe_cap
        self.structure_cap = structure_cap

    # languages

    def make_language(self, symbols) -> IFLanguage:
        return IFLanguage(tuple(name for name, _ in symbols))

    def symbol_sort(self, language, symbol):
        if symbol not in language.index:
            raise InstitutionError(f"unknown type {symbol!r}")
        return None

    # sentences

    def sentences(self, language: IFLanguage) -> tuple[Sequent, ...]:
        return _universe(language, self.universe_cap)

    def sentence_key(self, sentence: Sequent):
        return sentence.key()

    def check_sentence(self, language: IFLanguage, sentence) -> None:
        if not isinstance(sentence, Sequent):
            raise InstitutionError(f"not a sequent: {sentence!r}")
        unknown = sorted(sentence.types - set(language.types))
        if unknown:
            raise InstitutionError(f"sequent {sentence} mentions unknown types {unknown}")

    def parse_sentence(self, language, text: str) -> Sequent:
        s = parse_sequent(text)
        self.check_sentence(language, s)
        return s

    def format_sentence(self, sentence: Sequent) -> str:
        return str(sentence)

    def translate(self, sigma: SymbolMap, sentence: Sequent) -> Sequent:
        self.check_sentence(sigma.source, sentence)
        return Sequent(frozenset(sigma(t) for t in sentence.antecedent),
                       frozenset(sigma(t) for t in sentence.succedent))

    # structures

    def structure_language(self, structure: Classification) -> IFLanguage:
        return structure.language

    def structures(self, language: IFLanguage, bound: int = DEFAULT_BOUND
                   ) -> Iterator[Classification]:
        """Every row-set classification, ordered by the row-set bitmask.

        ``bound`` is ignored: row-set enumeration is already complete.
        """
        n = len(language.types)
        if n > self.structure_cap:
            raise CapExceeded(f"{n} types exceeds structure cap {self.structure_cap}")
        nrows = 1 << n
        for code in range(1 << nrows):
            yield row_set_classification(language, (r for r in range(nrows) if code >> r & 1))

    def satisfies(self, structure: Classification, sentence: Sequent) -> bool:
        gamma, delta = sentence.antecedent, sentence.succedent
        unknown = (gamma | delta) - set(structure.types)
        if unknown:
            raise InstitutionError(f"sequent {sentence} mentions unknown types {sorted(unknown)}")
        for row in structure.rows.values():
            if gamma <= row and not (delta & row):
                return False
        return True

    def reduct(self, sigma: SymbolMap, structure: Classification) -> Classification:
        if structure.language != sigma.target:
            raise MorphismMismatch("classification is not over the morphism's target")
        inc = frozenset((x, y) for x in structure.instances for y in sigma.source.types
                        if structure.classifies(x, sigma(y)))
        return Classification(structure.instances, sigma.source.types, inc)

    # consequence via admissible rows

    def admissible_rows(self, language: IFLanguage, sentences: Iterable[Sequent]) -> tuple[int, ...]:
        return _admissible_rows(language, frozenset(sentences))

    def entailment(self, language, sentences, bound: int = DEFAULT_BOUND):
        rows = self.admissible_rows(language, sentences)

        def decide(s: Sequent) -> EntailmentReport:
            self.check_sentence(language, s)
            g, d = language.mask(s.antecedent), language.mask(s.succedent)
            for r in rows:
                if not _sat_mask(r, g, d):
                    return EntailmentReport(False, row_set_classification(language, [r]))
            return EntailmentReport(True)

        return decide

    def consequence(self, language, sentences, bound: int = DEFAULT_BOUND) -> frozenset:
        rows = self.admissible_rows(language, sentences)
        return _closed_under(language, rows, self.universe_cap)

    def intent(self, structure: Classification) -> frozenset:
        lang = structure.language
        return _closed_under(lang, tuple(sorted(structure.row_masks)), self.universe_cap)


@lru_cache(maxsize=64)
def _universe(language: IFLanguage, cap: int) -> tuple[Sequent, ...]:
    n = len(language.types)
    if n > cap:
        raise CapExceeded(f"{n} types exceeds sentence-universe cap {cap}")
    full = range(1 << n)
    out = [Sequent(language.unmask(g), language.unmask(d)) for g in full for d in full]
    out.sort(key=Sequent.key)
    return tuple(out)


@lru_cache(maxsize=4096)
def _admissible_rows(language: IFLanguage, sentences: frozenset) -> tuple[int, ...]:
    masks = [(language.mask(s.antecedent), language.mask(s.succedent)) for s in sentences]
    return tuple(r for r in range(1 << len(language.types))
                 if all(_sat_mask(r, g, d) for g, d in masks))


@lru_cache(maxsize=4096)
def _closed_under(language: IFLanguage, rows: tuple[int, ...], cap: int) -> frozenset:
    """All universe sequents satisfied by every row in ``rows``."""
    n = len(language.types)
    full = (1 << n) - 1
    out = []
    # <G, D> fails at r iff G <= r and D & r == 0; collect the (G, D) that no row refutes.
    for s in _universe(language, cap):
        g, d = language.mask(s.antecedent), language.mask(s.succedent)
        if all((g & ~r & full) or (d & r) for r in rows):
            out.append(s)
    return frozenset(out)


IF = IFInstitution()


# -- colimits of classifications ------------------------------------------------


@dataclass(frozen=True)
class ClassificationColimit:
    core: Classification
    injections: Mapping[Hashable, Infomorphism]
    class_members: Mapping[str, tuple]


def name_classes(classes, symbol_of=lambda member: member[1], join: str = "=",
                 qualify: str = ".") -> list[str]:
    """Readable, unique names for colimit classes.

    A class whose members share one symbol name keeps it; otherwise the
    distinct names are joined with ``=``.  Collisions fall back to
    ``node.symbol`` of the least member.
    """
    first = []
    for cls in classes:
        names = sorted({symbol_of(m) for m in cls})
        first.append(names[0] if len(names) == 1 else join.join(names))
    counts: dict[str, int] = {}
    for n in first:
        counts[n] = counts.get(n, 0) + 1
    out = []
    for cls, n in zip(classes, first):
        if counts[n] > 1:
            node, sym = cls[0]
            n = f"{node}{qualify}{sym}"
        out.append(n)
    if len(set(out)) != len(out):
        out = [f"c{k}" for k in range(len(classes))]
    return out


def classification_colimit(nodes: Sequence[tuple[Hashable, Classification]],
                           edges: Sequence[tuple[Hashable, Hashable, Hashable, Infomorphism]],
                           ) -> ClassificationColimit:
    """Colimit of a diagram of classifications and infomorphisms.

    Types are the set colimit of the type sets.  Instances are the tuples
    ``(x_i)`` with ``x_i = instance_map_e(x_j)`` for every edge ``e: i -> j``;
    a tuple is of class ``[y]`` iff its component at a representative's node
    is of type ``y`` there.
    """
    cls_of = dict(nodes)
    for eid, i, j, f in edges:
        if f.source != cls_of[i] or f.target != cls_of[j]:
            raise MorphismMismatch(f"edge {eid!r}: infomorphism endpoints differ from node classifications")
    diagram = FiniteSetDiagram(
        tuple((n, c.types) for n, c in nodes),
        tuple((eid, i, j, f.type_map.mapping) for eid, i, j, f in edges),
    )
    colim = colimit_of_finite_sets(diagram)
    names = name_classes(colim.classes)
    order = [n for n, _ in nodes]
    tuples = _compatible_tuples(order, cls_of, edges)

    def inst_name(t) -> str:
        return "(" + ",".join(str(x) for x in t) + ")"

    inc = set()
    for t in tuples:
        comp = dict(zip(order, t))
        for k, members in enumerate(colim.classes):
            verdicts = {cls_of[n].classifies(comp[n], y) for n, y in members}
            if len(verdicts) != 1:
                raise InfomorphismError(f"incidence of class {names[k]} not well defined at {t}")
            if verdicts.pop():
                inc.add((inst_name(t), names[k]))
    core = Classification(tuple(inst_name(t) for t in tuples), tuple(names), frozenset(inc))
    injections = {}
    for pos, (n, c) in enumerate(nodes):
        tmap = {y: names[colim.injections[n][y]] for y in c.types}
        imap = {inst_name(t): t[pos] for t in tuples}
        injections[n] = Infomorphism.build(c, core, tmap, imap)
    members = {names[k]: cls for k, cls in enumerate(colim.classes)}
    return ClassificationColimit(core, injections, members)


def _compatible_tuples(order, cls_of, edges) -> list[tuple]:
    """Backtracking enumeration of instance tuples respecting every edge."""
    pos = {n: k for k, n in enumerate(order)}
    # constraint checked once both endpoints are assigned
    checks: dict[int, list] = {k: [] for k in range(len(order))}
    for _eid, i, j, f in edges:
        checks[max(pos[i], pos[j])].append((pos[i], pos[j], f.instance_map))
    out: list[tuple] = []
    current: list = []

    def extend(k: int):
        if k == len(order):
            out.append(tuple(current))
            return
        for x in cls_of[order[k]].instances:
            current.append(x)
            if all(current[pi] == imap[current[pj]] for pi, pj, imap in checks[k]):
                extend(k + 1)
            current.pop()

    extend(0)
    return out


def all_maps(domain: Sequence, codomain: Sequence) -> Iterator[dict]:
    for image in itertools.product(codomain, repeat=len(domain)):
        yield dict(zip(domain, image))
