"""Specifications, semantic consequence, the entailment order and flow along language morphisms.

Order convention: ``leq(T1, T2)`` means ``T1`` is more specialized, i.e. its
consequence contains that of ``T2``.  Meets are unions and joins are
intersections of consequences.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .institution import (
    DEFAULT_BOUND,
    EntailmentReport,
    InstitutionError,
    MorphismMismatch,
    SymbolMap,
)


class LanguageMismatch(InstitutionError):
    pass


@dataclass(frozen=True)
class Specification:
    language: Any
    sentences: frozenset

    def __post_init__(self):
        object.__setattr__(self, "sentences", frozenset(self.sentences))
        inst = self.language.institution
        for s in self.sentences:
            inst.check_sentence(self.language, s)

    @classmethod
    def of(cls, language, sentences: Iterable = ()) -> Specification:
        """Build from sentence values or from text in the institution's syntax."""
        inst = language.institution
        parsed = [inst.parse_sentence(language, s) if isinstance(s, str) else s for s in sentences]
        return cls(language, frozenset(parsed))

    @property
    def institution(self):
        return self.language.institution

    def sorted(self) -> tuple:
        return self.institution.sort_sentences(self.sentences)

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.sentences)

    def __contains__(self, s) -> bool:
        return s in self.sentences

    def __repr__(self) -> str:
        fmt = self.institution.format_sentence
        return f"Specification({self.language!r}: " + "; ".join(fmt(s) for s in self.sorted()) + ")"


def _same_language(*specs: Specification):
    langs = {t.language for t in specs}
    if len(langs) > 1:
        raise LanguageMismatch("specifications are over different languages")


def consequence(spec: Specification, bound: int = DEFAULT_BOUND) -> Specification:
    """Universe sentences entailed by ``spec`` at ``bound`` (the spec's own sentences included)."""
    return Specification(spec.language,
                         spec.institution.consequence(spec.language, spec.sentences, bound))


def entails(spec: Specification, sentence, bound: int = DEFAULT_BOUND) -> EntailmentReport:
    """Does every enumerated model of ``spec`` satisfy ``sentence``?"""
    inst = spec.institution
    if isinstance(sentence, str):
        sentence = inst.parse_sentence(spec.language, sentence)
    inst.check_sentence(spec.language, sentence)
    return inst.entailment(spec.language, spec.sentences, bound)(sentence)


def leq(t1: Specification, t2: Specification, bound: int = DEFAULT_BOUND) -> bool:
    """``t1 <= t2``: every sentence of ``t2`` is entailed by ``t1``."""
    _same_language(t1, t2)
    decide = t1.institution.entailment(t1.language, t1.sentences, bound)
    return all(decide(s).holds for s in t2.sentences)


def equivalent(t1: Specification, t2: Specification, bound: int = DEFAULT_BOUND) -> bool:
    return leq(t1, t2, bound) and leq(t2, t1, bound)


def meet(specs: Sequence[Specification], language=None) -> Specification:
    """Greatest lower bound: union of sentence sets."""
    if not specs:
        if language is None:
            raise InstitutionError("meet of no specifications needs a language")
        return Specification(language, frozenset())
    _same_language(*specs)
    return Specification(specs[0].language, frozenset().union(*(t.sentences for t in specs)))


def join(specs: Sequence[Specification], bound: int = DEFAULT_BOUND) -> Specification:
    """Least upper bound: intersection of consequences."""
    if not specs:
        raise InstitutionError("join needs at least one specification")
    _same_language(*specs)
    closed = [consequence(t, bound).sentences for t in specs]
    return Specification(specs[0].language, frozenset.intersection(*closed))


def direct(sigma: SymbolMap, spec: Specification) -> Specification:
    """Direct flow: image of the sentences under translation."""
    if spec.language != sigma.source:
        raise MorphismMismatch("specification is not over the morphism's source")
    inst = spec.institution
    return Specification(sigma.target, frozenset(inst.translate(sigma, s) for s in spec.sentences))


def inverse(sigma: SymbolMap, spec: Specification, bound: int = DEFAULT_BOUND) -> Specification:
    """Inverse flow: source-universe sentences whose translation ``spec`` entails."""
    if spec.language != sigma.target:
        raise MorphismMismatch("specification is not over the morphism's target")
    inst = spec.institution
    decide = inst.entailment(sigma.target, spec.sentences, bound)
    return Specification(sigma.source, frozenset(
        s for s in inst.sentences(sigma.source) if decide(inst.translate(sigma, s)).holds))


# ``dir`` and ``inv`` are the customary names; ``dir`` would shadow the builtin.
dir_flow = direct
inv_flow = inverse


def is_spec_morphism(sigma: SymbolMap, t1: Specification, t2: Specification,
                     bound: int = DEFAULT_BOUND) -> bool:
    """Does ``sigma`` preserve entailment from ``t1`` to ``t2``?

    Computed both as entailment preservation over ``t1``'s consequence and as
    ``t2 <= direct(sigma, t1)``; the two must agree.
    """
    if t1.language != sigma.source or t2.language != sigma.target:
        raise MorphismMismatch("specification languages do not match the morphism")
    inst = t1.institution
    decide2 = inst.entailment(t2.language, t2.sentences, bound)
    preserving = all(decide2(inst.translate(sigma, s)).holds
                     for s in consequence(t1, bound).sentences)
    by_order = leq(t2, direct(sigma, t1), bound)
    if preserving != by_order:
        raise AssertionError("specification morphism formulations disagree")
    return preserving
