import random

import pytest

from syscons.folf import FiniteStructure, RelSignature, schema_instance
from syscons.generate import random_language, random_logic, random_row_set, random_structure_morphism
from syscons.infoflow import IF, Classification, IFLanguage, row_set_classification, seq
from syscons.institution import MorphismMismatch, SymbolMap
from syscons.logic import (
    CompositeLogic,
    IndexedStructure,
    Logic,
    NotAStructureMorphism,
    StructureMorphism,
    UnsoundLogic,
    dir_logic,
    inc,
    intent,
    inv_logic,
    inv_sound,
    is_complete,
    is_sound,
    is_structure_morphism,
    logic_leq,
    nat,
    res,
    validate_composite,
)
from syscons.specflow import Specification, consequence, equivalent, leq

from oracles import if_intent

AB = IFLanguage(("a", "b"))


def ab_struct(*rows):
    return IndexedStructure(AB, Classification.from_rows(("a", "b"), {f"x{i}": r for i, r in enumerate(rows)}))


def test_intent_of_three_rows():
    m = ab_struct([], ["b"], ["a", "b"])
    got = intent(m).sentences
    assert len(got) == 8
    assert seq("a", "b") in got
    oracle = if_intent([frozenset(), frozenset("b"), frozenset("ab")], "ab")
    assert {(s.antecedent, s.succedent) for s in got} == oracle


def test_intent_folf_single_loop():
    sig = RelSignature.of(R=2)
    m = IndexedStructure(sig, FiniteStructure.of(sig, 1, R=[(0, 0)]))
    got = intent(m).sentences
    for name in ("reflexive", "symmetric", "transitive"):
        assert schema_instance(name, "R") in got


def test_intent_is_closed():
    rng = random.Random(1)
    for _ in range(30):
        lang = random_language(rng, 3)
        m = IndexedStructure(lang, random_row_set(rng, lang))
        assert consequence(intent(m)) == intent(m)


def test_structure_morphism_identity():
    m = ab_struct(["a"], [])
    assert is_structure_morphism(SymbolMap.identity(AB), m, m)


def test_structure_morphism_counterexample():
    a = IFLanguage(("a",))
    m1 = IndexedStructure(a, Classification.from_rows(("a",), {"x": []}))
    m2 = IndexedStructure(a, Classification.from_rows(("a",), {"y": ["a"]}))
    ident = SymbolMap.identity(a)
    assert not is_structure_morphism(ident, m1, m2)
    assert not intent(m1).sentences <= intent(m2).sentences
    with pytest.raises(NotAStructureMorphism) as info:
        StructureMorphism(m1, m2, ident)
    assert info.value.sentence == seq("a", ())


def test_structure_morphism_formulations_agree_random():
    rng = random.Random(2)
    for _ in range(200):
        l1, l2 = random_language(rng, 3), random_language(rng, 3)
        sigma = SymbolMap.from_dict(l1, l2, {t: rng.choice(l2.types) for t in l1.types})
        m1 = IndexedStructure(l1, random_row_set(rng, l1))
        m2 = IndexedStructure(l2, random_row_set(rng, l2))
        is_structure_morphism(sigma, m1, m2)  # raises if the formulations disagree


def test_sound_and_complete_examples():
    m = ab_struct(["a"], ["a", "b"])
    n = nat(m)
    assert is_sound(n) and is_complete(n)
    top = Logic.of(m, Specification(AB, frozenset()))
    assert is_sound(top) and not is_complete(top)
    bottom = Logic.of(m, Specification(AB, frozenset(IF.sentences(AB))))
    assert is_complete(bottom) and not is_sound(bottom)


def test_res_examples():
    m = ab_struct(["a"], [])
    n = nat(m)
    assert res(n) == n
    bottom = Logic.of(m, Specification(AB, frozenset(IF.sentences(AB))))
    assert res(bottom) == nat(m)
    rng = random.Random(3)
    for _ in range(100):
        lang = random_language(rng, 3)
        lg = random_logic(rng, IndexedStructure(lang, random_row_set(rng, lang)))
        r = res(lg)
        assert is_sound(r)
        assert logic_leq(lg, r)
        assert res(r) == r


def test_inc_rejects_unsound():
    m = ab_struct(["a"])
    with pytest.raises(UnsoundLogic):
        inc(Logic.of(m, Specification.of(AB, ["a |-"])))


def test_reflection_on_sound_logics():
    rng = random.Random(4)
    for _ in range(100):
        lang = random_language(rng, 3)
        m = IndexedStructure(lang, random_row_set(rng, lang))
        lg = random_logic(rng, m, sound=True)
        assert logic_leq(nat(m), lg)
        assert nat(m).indexed == m


def test_fiber_order_matches_spec_order():
    rng = random.Random(5)
    for _ in range(80):
        lang = random_language(rng, 2)
        m = IndexedStructure(lang, random_row_set(rng, lang))
        l1, l2 = random_logic(rng, m), random_logic(rng, m)
        assert logic_leq(l1, l2) == leq(l1.spec, l2.spec)


def test_identity_flows():
    m = ab_struct(["a"], ["b"])
    ident = StructureMorphism(m, m, SymbolMap.identity(AB))
    lg = Logic.of(m, Specification.of(AB, ["a, b |-"]))
    assert dir_logic(ident, lg) == lg
    assert inv_logic(ident, lg).theory == consequence(lg.spec).sentences
    assert inv_sound(ident, nat(m)) == nat(m)


def test_flow_checks_endpoints():
    m = ab_struct(["a"])
    other = ab_struct([])
    ident = StructureMorphism(m, m, SymbolMap.identity(AB))
    with pytest.raises(MorphismMismatch):
        dir_logic(ident, nat(other))


def test_inv_sound_needs_sound_target():
    m = ab_struct(["a"])
    ident = StructureMorphism(m, m, SymbolMap.identity(AB))
    with pytest.raises(UnsoundLogic):
        inv_sound(ident, Logic.of(m, Specification.of(AB, ["a |-"])))


def test_inv_sound_is_sound_random():
    rng = random.Random(6)
    for _ in range(150):
        f = random_structure_morphism(rng)
        l2 = random_logic(rng, f.target, sound=True)
        assert is_sound(inv_sound(f, l2))


def test_composite_logic_checks():
    m = ab_struct(["a"], ["b"])
    assert validate_composite(CompositeLogic(nat(m), nat(m))) == (True, None)
    unsound = Logic.of(m, Specification.of(AB, ["a |-"]))
    ok, problem = validate_composite(CompositeLogic(unsound, unsound))
    assert not ok and "not sound" in problem
    # the base structure satisfies "a |-" but the sound structure does not
    base = Logic.of(ab_struct(["b"]), Specification(AB, frozenset()))
    sound = Logic.of(m, Specification(AB, frozenset()))
    ok, problem = validate_composite(CompositeLogic(base, sound))
    assert not ok and "base structure satisfies" in problem


def test_natural_logic_of_row_set():
    lang = IFLanguage(("a",))
    m = IndexedStructure(lang, row_set_classification(lang, [0, 1]))
    assert nat(m).theory == {seq("a", "a")}
    assert equivalent(nat(m).spec, Specification(lang, frozenset()))
