"""Finite-model fragment of unsorted first-order logic.

Relation symbols only (no function symbols, no constants), with equality.
Formulas are stored with de Bruijn indices, so alpha-equivalent formulas are
equal values; binder names are kept as display hints that take no part in
equality.  Sentence universes are generated from per-symbol schemas.

Grammar (ASCII)::

    formula := ('forall' | 'exists') IDENT '.' formula | implication
    implication := disjunction ('->' formula)?
    disjunction := conjunction ('|' conjunction)*
    conjunction := unary ('&' unary)*
    unary := '~' unary | '(' formula ')' | quantified | atom
    atom := IDENT '(' IDENT (',' IDENT)* ')' | IDENT '=' IDENT
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence, Union

from .institution import (
    DEFAULT_BOUND,
    CapExceeded,
    Institution,
    InstitutionError,
    MorphismMismatch,
    SymbolMap,
)

STRUCTURE_CAP = 1 << 20


class FormulaError(InstitutionError):
    """Ill-formed formula: syntax, unknown symbol, arity or binding problem."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at column {position + 1})"
        super().__init__(message)
        self.position = position


# -- syntax ---------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    relation: str
    args: tuple[int, ...]


@dataclass(frozen=True)
class Equal:
    left: int
    right: int


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    body: "Formula"
    var: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Exists:
    body: "Formula"
    var: str = field(default="x", compare=False)


Formula = Union[Atom, Equal, Not, And, Or, Implies, Forall, Exists]
_BINARY = {And: "&", Or: "|", Implies: "->"}
_PREC = {Implies: 1, Or: 2, And: 3}


def free_depth(f: Formula) -> int:
    """Number of enclosing binders the formula needs (0 for sentences)."""
    if isinstance(f, Atom):
        return max(f.args, default=-1) + 1
    if isinstance(f, Equal):
        return max(f.left, f.right) + 1
    if isinstance(f, Not):
        return free_depth(f.body)
    if isinstance(f, (And, Or, Implies)):
        return max(free_depth(f.left), free_depth(f.right))
    return max(free_depth(f.body) - 1, 0)


def relations(f: Formula) -> set[tuple[str, int]]:
    if isinstance(f, Atom):
        return {(f.relation, len(f.args))}
    if isinstance(f, Equal):
        return set()
    if isinstance(f, (Not, Forall, Exists)):
        return relations(f.body)
    return relations(f.left) | relations(f.right)


def rename(f: Formula, mapping) -> Formula:
    if isinstance(f, Atom):
        return Atom(mapping(f.relation), f.args)
    if isinstance(f, Equal):
        return f
    if isinstance(f, Not):
        return Not(rename(f.body, mapping))
    if isinstance(f, (Forall, Exists)):
        return type(f)(rename(f.body, mapping), f.var)
    return type(f)(rename(f.left, mapping), rename(f.right, mapping))


# -- printing -------------------------------------------------------------------


def _fresh(hint: str, scope: list[str]) -> str:
    if hint not in scope:
        return hint
    for k in itertools.count(1):
        cand = f"{hint}{k}"
        if cand not in scope:
            return cand


def to_text(f: Formula, canonical: bool = False) -> str:
    """Render in the module grammar.

    Binder hints are used for variable names unless ``canonical`` is set, in
    which case names depend only on binder depth (so alpha-equivalent
    formulas render identically).
    """
    canon = ["x", "y", "z", "w"]

    def var_name(depth: int, hint: str, scope: list[str]) -> str:
        if canonical:
            return canon[depth] if depth < len(canon) else f"v{depth}"
        return _fresh(hint, scope)

    def go(g: Formula, scope: list[str], ctx: int) -> str:
        # ctx: minimum precedence that may appear unparenthesized here
        if isinstance(g, Atom):
            return f"{g.relation}(" + ",".join(scope[-1 - i] for i in g.args) + ")"
        if isinstance(g, Equal):
            return f"{scope[-1 - g.left]} = {scope[-1 - g.right]}"
        if isinstance(g, Not):
            return "~" + go(g.body, scope, 4)
        if isinstance(g, (Forall, Exists)):
            name = var_name(len(scope), g.var, scope)
            kw = "forall" if isinstance(g, Forall) else "exists"
            text = f"{kw} {name}. " + go(g.body, scope + [name], 0)
            return text if ctx == 0 else f"({text})"
        prec = _PREC[type(g)]
        if isinstance(g, Implies):
            left = go(g.left, scope, prec + 1)
            right = go(g.right, scope, prec)
        else:
            left = go(g.left, scope, prec)
            right = go(g.right, scope, prec + 1)
        text = f"{left} {_BINARY[type(g)]} {right}"
        return text if prec >= ctx else f"({text})"

    return go(f, [], 0)


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->)|([~&|().,=])|([A-Za-z][A-Za-z0-9_]*))")
_KEYWORDS = {"forall", "exists"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(3):
            kind = "kw" if m.group(3) in _KEYWORDS else "id"
            out.append((kind, m.group(3), start))
        else:
            out.append(("op", m.group(1) or m.group(2), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, arities: dict[str, int] | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.arities = arities
        self.scope: list[str] = []

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise FormulaError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        kind, value, _ = self.peek()
        if kind == "kw":
            return self.quantified()
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take("->")
            return Implies(left, self.formula())
        return left

    def quantified(self) -> Formula:
        _, kw, _ = self.take(kind="kw")
        _, name, _ = self.take(kind="id")
        self.take(".")
        self.scope.append(name)
        body = self.formula()
        self.scope.pop()
        return (Forall if kw == "forall" else Exists)(body, name)

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[1] == "|":
            self.take("|")
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.take("&")
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "~" and kind == "op":
            self.take("~")
            return Not(self.unary())
        if value == "(" and kind == "op":
            self.take("(")
            f = self.formula()
            self.take(")")
            return f
        if kind == "kw":
            return self.quantified()
        if kind == "id":
            return self.atom()
        raise FormulaError(f"unexpected {value!r}" if kind != "end" else "unexpected end of input", pos)

    def var(self) -> int:
        _, name, pos = self.take(kind="id")
        for k, bound in enumerate(reversed(self.scope)):
            if bound == name:
                return k
        raise FormulaError(f"unbound variable {name!r}", pos)

    def atom(self) -> Formula:
        _, name, pos = self.take(kind="id")
        if self.peek()[1] == "(":
            self.take("(")
            args = [self.var()]
            while self.peek()[1] == ",":
                self.take(",")
                args.append(self.var())
            self.take(")")
            if self.arities is not None:
                if name not in self.arities:
                    raise FormulaError(f"unknown relation symbol {name!r}", pos)
                if self.arities[name] != len(args):
                    raise FormulaError(
                        f"arity mismatch: {name} has arity {self.arities[name]}, used with {len(args)}", pos)
            return Atom(name, tuple(args))
        if self.peek()[1] == "=":
            self.i -= 1
            left = self.var()
            self.take("=")
            return Equal(left, self.var())
        raise FormulaError(f"expected '(' or '=' after {name!r}", self.peek()[2])


def parse_formula(text: str, signature: RelSignature | None = None) -> Formula:
    """Parse a closed formula; with a signature, symbols and arities are checked."""
    arities = dict(signature.symbols_with_arity) if signature is not None else None
    p = _Parser(text, arities)
    f = p.formula()
    p.take(kind="end")
    return f


# -- signatures, structures, schemas -------------------------------------------

BINARY_SCHEMAS = {
    "reflexive": "forall x. R(x,x)",
    "symmetric": "forall x. forall y. R(x,y) -> R(y,x)",
    "transitive": "forall x. forall y. forall z. R(x,y) & R(y,z) -> R(x,z)",
    "total": "forall x. forall y. R(x,y) | R(y,x)",
    "irreflexive": "forall x. ~R(x,x)",
    "antisymmetric": "forall x. forall y. R(x,y) & R(y,x) -> x = y",
}
UNARY_SCHEMAS = {
    "all": "forall x. R(x)",
    "none": "forall x. ~R(x)",
    "some": "exists x. R(x)",
    "notall": "exists x. ~R(x)",
}
DEFAULT_SCHEMAS = tuple(BINARY_SCHEMAS) + tuple(UNARY_SCHEMAS)


def schema_instance(schema: str, symbol: str) -> Formula:
    template = BINARY_SCHEMAS.get(schema) or UNARY_SCHEMAS.get(schema)
    if template is None:
        raise InstitutionError(f"unknown schema {schema!r}")
    return rename(parse_formula(template), lambda _r: symbol)


def _schema_arity(schema: str) -> int:
    return 2 if schema in BINARY_SCHEMAS else 1


@dataclass(frozen=True)
class RelSignature:
    """Relation symbols with arities plus the schemas generating its sentence universe."""

    symbols_with_arity: tuple[tuple[str, int], ...]
    schemas: tuple[str, ...] = DEFAULT_SCHEMAS

    def __post_init__(self):
        syms = tuple(sorted(dict(self.symbols_with_arity).items()))
        if len(syms) != len(self.symbols_with_arity):
            raise InstitutionError("duplicate relation symbols")
        for name, arity in syms:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name) or name in _KEYWORDS:
                raise InstitutionError(f"bad relation symbol {name!r}")
            if not isinstance(arity, int) or arity < 1:
                raise InstitutionError(f"arity of {name} must be a positive integer")
        for s in self.schemas:
            if s not in BINARY_SCHEMAS and s not in UNARY_SCHEMAS:
                raise InstitutionError(f"unknown schema {s!r}")
        object.__setattr__(self, "symbols_with_arity", syms)
        object.__setattr__(self, "schemas", tuple(self.schemas))

    @classmethod
    def of(cls, schemas: Sequence[str] = DEFAULT_SCHEMAS, **arities: int) -> RelSignature:
        return cls(tuple(arities.items()), tuple(schemas))

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.symbols_with_arity)

    @cached_property
    def arity(self) -> dict[str, int]:
        return dict(self.symbols_with_arity)

    @property
    def institution(self) -> FOLfInstitution:
        return FOLF

    def __repr__(self) -> str:
        return "RelSignature({" + ", ".join(f"{n}:{a}" for n, a in self.symbols_with_arity) + "})"


@dataclass(frozen=True)
class FiniteStructure:
    """Carrier ``{0..n-1}`` with one table of tuples per relation symbol."""

    signature: RelSignature
    carrier_size: int
    tables: tuple[tuple[str, frozenset[tuple[int, ...]]], ...]

    def __post_init__(self):
        if self.carrier_size < 1:
            raise InstitutionError("carrier size must be positive")
        tables = dict(self.tables)
        if set(tables) != set(self.signature.symbols):
            raise InstitutionError("tables must cover exactly the signature's symbols")
        norm = []
        for name in self.signature.symbols:
            rows = frozenset(tuple(t) for t in tables[name])
            for t in rows:
                if len(t) != self.signature.arity[name] or any(not 0 <= v < self.carrier_size for v in t):
                    raise InstitutionError(f"bad tuple {t} in table {name}")
            norm.append((name, rows))
        object.__setattr__(self, "tables", tuple(norm))

    @classmethod
    def of(cls, signature: RelSignature, n: int, **tables) -> FiniteStructure:
        return cls(signature, n, tuple((k, frozenset(map(tuple, v))) for k, v in tables.items()))

    @cached_property
    def table(self) -> dict[str, frozenset]:
        return dict(self.tables)

    def __repr__(self) -> str:
        body = "; ".join(f"{k}={sorted(v)}" for k, v in self.tables)
        return f"FiniteStructure(n={self.carrier_size}; {body})"


def evaluate(structure: FiniteStructure, f: Formula) -> bool:
    """Tarskian truth of a closed formula in a finite structure."""
    if free_depth(f) != 0:
        raise FormulaError("formula is not closed")
    missing = {r for r, a in relations(f) if structure.signature.arity.get(r) != a}
    if missing:
        raise MorphismMismatch(f"formula uses symbols {sorted(missing)} not in the structure's signature")
    return _eval(f, structure, ())


def _eval(f: Formula, m: FiniteStructure, env: tuple[int, ...]) -> bool:
    if isinstance(f, Atom):
        return tuple(env[-1 - i] for i in f.args) in m.table[f.relation]
    if isinstance(f, Equal):
        return env[-1 - f.left] == env[-1 - f.right]
    if isinstance(f, Not):
        return not _eval(f.body, m, env)
    if isinstance(f, And):
        return _eval(f.left, m, env) and _eval(f.right, m, env)
    if isinstance(f, Or):
        return _eval(f.left, m, env) or _eval(f.right, m, env)
    if isinstance(f, Implies):
        return (not _eval(f.left, m, env)) or _eval(f.right, m, env)
    if isinstance(f, Forall):
        return all(_eval(f.body, m, env + (v,)) for v in range(m.carrier_size))
    return any(_eval(f.body, m, env + (v,)) for v in range(m.carrier_size))


def _tuples(n: int, arity: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(n), repeat=arity))


def count_structures(signature: RelSignature, max_carrier: int) -> int:
    return sum(1 << sum(n ** a for _, a in signature.symbols_with_arity)
               for n in range(1, max_carrier + 1))


def enumerate_structures(signature: RelSignature, max_carrier: int,
                         cap: int = STRUCTURE_CAP) -> Iterator[FiniteStructure]:
    """All structures with carriers ``1..max_carrier``.

    Canonical order: by carrier size, then by the integer whose bits mark
    table membership, tuples listed symbol by symbol in signature order and
    lexicographically within a symbol (bit 0 = first tuple).
    """
    if max_carrier < 1:
        raise InstitutionError("max_carrier must be positive")
    for n in range(1, max_carrier + 1):
        slots = [(name, t) for name, a in signature.symbols_with_arity for t in _tuples(n, a)]
        if (1 << len(slots)) > cap:
            raise CapExceeded(
                f"carrier {n} needs {1 << len(slots)} structures, cap is {cap}")
    for n in range(1, max_carrier + 1):
        slots = [(name, t) for name, a in signature.symbols_with_arity for t in _tuples(n, a)]
        for code in range(1 << len(slots)):
            tables = {name: set() for name in signature.symbols}
            for bit, (name, t) in enumerate(slots):
                if code >> bit & 1:
                    tables[name].add(t)
            yield FiniteStructure(signature, n, tuple((k, frozenset(v)) for k, v in tables.items()))


class FOLfInstitution(Institution):
    name = "folf"

    def __init__(self, structure_cap: int = STRUCTURE_CAP):
        self.structure_cap = structure_cap

    def make_language(self, symbols) -> RelSignature:
        return RelSignature(tuple(symbols))

    def symbol_sort(self, language: RelSignature, symbol: str) -> int:
        try:
            return language.arity[symbol]
        except KeyError:
            raise InstitutionError(f"unknown relation symbol {symbol!r}") from None

    def sentences(self, language: RelSignature) -> tuple[Formula, ...]:
        return _schema_universe(language)

    def sentence_key(self, sentence: Formula):
        return to_text(sentence, canonical=True)

    def check_sentence(self, language: RelSignature, sentence) -> None:
        if free_depth(sentence) != 0:
            raise FormulaError("sentence is not closed")
        for r, a in relations(sentence):
            if language.arity.get(r) != a:
                raise FormulaError(f"symbol {r}/{a} not in signature {language!r}")

    def parse_sentence(self, language, text: str) -> Formula:
        return parse_formula(text, language)

    def format_sentence(self, sentence: Formula) -> str:
        return to_text(sentence)

    def translate(self, sigma: SymbolMap, sentence: Formula) -> Formula:
        self.check_sentence(sigma.source, sentence)
        return rename(sentence, sigma)

    def structure_language(self, structure: FiniteStructure) -> RelSignature:
        return structure.signature

    def structures(self, language, bound: int = DEFAULT_BOUND):
        return enumerate_structures(language, bound, self.structure_cap)

    def satisfies(self, structure: FiniteStructure, sentence: Formula) -> bool:
        return evaluate(structure, sentence)

    def reduct(self, sigma: SymbolMap, structure: FiniteStructure) -> FiniteStructure:
        if structure.signature.arity != sigma.target.arity:
            raise MorphismMismatch("structure is not over the morphism's target signature")
        return FiniteStructure(sigma.source, structure.carrier_size,
                               tuple((r, structure.table[sigma(r)]) for r in sigma.source.symbols))

    def entailment(self, language, sentences, bound: int = DEFAULT_BOUND):
        return _cached_entailment(self, language, frozenset(sentences), bound)


@lru_cache(maxsize=256)
def _cached_entailment(inst: FOLfInstitution, language, sentences: frozenset, bound: int):
    ordered = tuple(sorted(sentences, key=inst.sentence_key))
    return Institution.entailment(inst, language, ordered, bound)


@lru_cache(maxsize=256)
def _schema_universe(signature: RelSignature) -> tuple[Formula, ...]:
    out = []
    for name, arity in signature.symbols_with_arity:
        for schema in signature.schemas:
            if _schema_arity(schema) == arity:
                out.append(schema_instance(schema, name))
    return tuple(sorted(set(out), key=FOLF.sentence_key))


FOLF = FOLfInstitution()
