"""Indexed structures, logics, soundness and completeness, and logic flow along structure morphisms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .institution import DEFAULT_BOUND, InstitutionError, MorphismMismatch
from .specflow import Specification, consequence, direct, inverse, leq


class NotAStructureMorphism(InstitutionError):
    """A language morphism fails to preserve satisfaction between two structures."""

    def __init__(self, message: str, sentence=None):
        super().__init__(message)
        self.sentence = sentence


class UnsoundLogic(InstitutionError):
    pass


@dataclass(frozen=True)
class IndexedStructure:
    language: Any
    structure: Any

    def __post_init__(self):
        self.language.institution.check_structure(self.language, self.structure)

    @property
    def institution(self):
        return self.language.institution


@dataclass(frozen=True)
class Logic:
    """A structure and a specification sharing one language."""

    language: Any
    structure: Any
    theory: frozenset

    def __post_init__(self):
        object.__setattr__(self, "theory", frozenset(self.theory))
        inst = self.language.institution
        inst.check_structure(self.language, self.structure)
        for s in self.theory:
            inst.check_sentence(self.language, s)

    @classmethod
    def of(cls, structure: IndexedStructure, spec: Specification) -> Logic:
        if structure.language != spec.language:
            raise MorphismMismatch("structure and specification languages differ")
        return cls(structure.language, structure.structure, spec.sentences)

    @property
    def indexed(self) -> IndexedStructure:
        return IndexedStructure(self.language, self.structure)

    @property
    def spec(self) -> Specification:
        return Specification(self.language, self.theory)

    def with_theory(self, theory) -> Logic:
        return Logic(self.language, self.structure, frozenset(theory))


def intent(m: IndexedStructure) -> Specification:
    """Every universe sentence the structure satisfies."""
    return Specification(m.language, m.institution.intent(m.structure))


def structure_leq(m1: IndexedStructure, m2: IndexedStructure) -> bool:
    """Intent order: ``m1 <= m2`` iff ``m1`` satisfies everything ``m2`` does."""
    if m1.language != m2.language:
        raise MorphismMismatch("structures over different languages")
    return intent(m1).sentences >= intent(m2).sentences


def structure_morphism_violation(sigma, m1: IndexedStructure, m2: IndexedStructure):
    """First universe sentence ``s`` with ``m1 |= s`` but ``m2 |/= sigma(s)``, else None."""
    sigma = sigma.language_morphism
    if sigma.source != m1.language or sigma.target != m2.language:
        raise MorphismMismatch("morphism endpoints do not match the structures")
    inst = m1.institution
    for s in inst.sentences(m1.language):
        if inst.satisfies(m1.structure, s) and not inst.satisfies(m2.structure, inst.translate(sigma, s)):
            return s
    return None


def is_structure_morphism(sigma, m1: IndexedStructure, m2: IndexedStructure) -> bool:
    """Does ``sigma`` preserve satisfaction from ``m1`` to ``m2``?

    Also computed as ``reduct(sigma)(m2) <= m1`` in the intent order; the two
    formulations must agree.
    """
    preserving = structure_morphism_violation(sigma, m1, m2) is None
    lang_map = sigma.language_morphism
    reduced = IndexedStructure(m1.language, m1.institution.reduct(lang_map, m2.structure))
    by_reduct = structure_leq(reduced, m1)
    if preserving != by_reduct:
        raise AssertionError("structure morphism formulations disagree")
    return preserving


@dataclass(frozen=True)
class StructureMorphism:
    """A language morphism verified to preserve satisfaction between two indexed structures.

    ``morphism`` may be a plain symbol map or anything exposing
    ``language_morphism`` (an infomorphism, say).
    """

    source: IndexedStructure
    target: IndexedStructure
    morphism: Any

    def __post_init__(self):
        bad = structure_morphism_violation(self.morphism, self.source, self.target)
        if bad is not None:
            fmt = self.source.institution.format_sentence
            raise NotAStructureMorphism(
                f"satisfaction not preserved: source satisfies {fmt(bad)!r}, target refutes its translation",
                sentence=bad)

    @property
    def sigma(self):
        return self.morphism.language_morphism


def is_sound(logic: Logic, bound: int = DEFAULT_BOUND) -> bool:
    """Everything the theory entails holds in the structure."""
    closed = consequence(logic.spec, bound).sentences
    inst = logic.language.institution
    return all(inst.satisfies(logic.structure, s) for s in closed)


def is_complete(logic: Logic, bound: int = DEFAULT_BOUND) -> bool:
    """Everything the structure satisfies is entailed by the theory."""
    return leq(logic.spec, intent(logic.indexed), bound)


def nat(m: IndexedStructure) -> Logic:
    """The natural logic: a structure paired with its own intent."""
    return Logic.of(m, intent(m))


def res(logic: Logic, bound: int = DEFAULT_BOUND) -> Logic:
    """Restriction: theory becomes ``intent(M) ∩ consequence(T)``."""
    closed = consequence(logic.spec, bound).sentences
    return logic.with_theory(intent(logic.indexed).sentences & closed)


def inc(logic: Logic, bound: int = DEFAULT_BOUND) -> Logic:
    """Inclusion of a sound logic among all logics (identity on values)."""
    if not is_sound(logic, bound):
        raise UnsoundLogic("inclusion applies to sound logics only")
    return logic


def logic_leq(l1: Logic, l2: Logic, bound: int = DEFAULT_BOUND) -> bool:
    """Order on the fiber over one structure: the specification order of the theories."""
    if l1.indexed != l2.indexed:
        raise MorphismMismatch("fiber order compares logics over the same structure")
    return leq(l1.spec, l2.spec, bound)


def logic_leq_over_language(l1: Logic, l2: Logic, bound: int = DEFAULT_BOUND) -> bool:
    """Comparison on the larger fiber over a language: structure order and theory order."""
    if l1.language != l2.language:
        raise MorphismMismatch("logics over different languages")
    return structure_leq(l1.indexed, l2.indexed) and leq(l1.spec, l2.spec, bound)


def _check_source(f: StructureMorphism, logic: Logic):
    if logic.indexed != f.source:
        raise MorphismMismatch("logic does not sit over the morphism's source structure")


def _check_target(f: StructureMorphism, logic: Logic):
    if logic.indexed != f.target:
        raise MorphismMismatch("logic does not sit over the morphism's target structure")


def dir_logic(f: StructureMorphism, logic: Logic) -> Logic:
    """Keep the target structure, push the theory forward."""
    _check_source(f, logic)
    return Logic.of(f.target, direct(f.sigma, logic.spec))


def inv_logic(f: StructureMorphism, logic: Logic, bound: int = DEFAULT_BOUND) -> Logic:
    """Keep the source structure, pull back the theory's consequence."""
    _check_target(f, logic)
    return Logic.of(f.source, inverse(f.sigma, logic.spec, bound))


def inv_sound(f: StructureMorphism, logic: Logic, bound: int = DEFAULT_BOUND) -> Logic:
    """Inverse flow of sound logics: pulled-back consequence joined with the source intent."""
    _check_target(f, logic)
    if not is_sound(logic, bound):
        raise UnsoundLogic("inverse sound flow needs a sound target logic")
    pulled = inverse(f.sigma, logic.spec, bound)
    theory = consequence(pulled, bound).sentences & intent(f.source).sentences
    return Logic(f.source.language, f.source.structure, theory)


@dataclass(frozen=True)
class CompositeLogic:
    base: Logic
    sound_part: Logic


def validate_composite(c: CompositeLogic, bound: int = DEFAULT_BOUND) -> tuple[bool, str | None]:
    """Check a composite logic; returns ``(ok, first_problem)``."""
    base, snd = c.base, c.sound_part
    if base.language != snd.language:
        return False, "base and sound part have different languages"
    if base.theory != snd.theory:
        return False, "base and sound part have different specifications"
    if not is_sound(snd, bound):
        return False, "sound part is not sound"
    inst = base.language.institution
    for s in inst.sentences(base.language):
        if inst.satisfies(base.structure, s) and not inst.satisfies(snd.structure, s):
            return False, f"base structure satisfies {inst.format_sentence(s)!r} but sound structure does not"
    return True, None
