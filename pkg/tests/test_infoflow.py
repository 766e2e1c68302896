import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syscons.generate import random_classification, random_language, random_symbol_map
from syscons.infoflow import (
    IF,
    CapExceeded,
    Classification,
    IFLanguage,
    Infomorphism,
    InfomorphismError,
    all_maps,
    classification_colimit,
    compose_infomorphisms,
    parse_sequent,
    seq,
)
from syscons.institution import InstitutionError, SymbolMap
from syscons.logic import IndexedStructure, is_structure_morphism

from oracles import all_sequents, structure_satisfies

AB = IFLanguage(("a", "b"))


def rows_struct(*rows):
    return Classification.from_rows(("a", "b"), {f"x{i}": r for i, r in enumerate(rows)})


def test_identity_sequent_always_holds():
    for m in IF.structures(AB):
        assert IF.satisfies(m, seq("a", "a"))


def test_single_row_refutes():
    assert not IF.satisfies(rows_struct(["a"]), seq("a", "b"))


def test_rows_with_b_whenever_a():
    assert IF.satisfies(rows_struct([], ["b"], ["a", "b"]), seq("a", "b"))


def test_unknown_type_rejected():
    with pytest.raises(InstitutionError):
        IF.satisfies(rows_struct(["a"]), seq("c", "a"))


def test_translate_examples():
    ab_p = SymbolMap.from_dict(AB, IFLanguage(("p",)), {"a": "p", "b": "p"})
    assert IF.translate(SymbolMap.identity(AB), seq("a", "b")) == seq("a", "b")
    assert IF.translate(ab_p, seq("a", "b")) == seq("p", "p")
    ab_pq = SymbolMap.from_dict(AB, IFLanguage(("p", "q")), {"a": "p", "b": "q"})
    assert IF.translate(ab_pq, seq(["a", "b"], [])) == seq(["p", "q"], [])


def test_reduct_examples():
    m = Classification.from_rows(("p",), {"x": ["p"]})
    assert IF.reduct(SymbolMap.identity(m.language), m) == m
    a = IFLanguage(("a",))
    r = IF.reduct(SymbolMap.from_dict(a, m.language, {"a": "p"}), m)
    assert r.classifies("x", "a")


def test_reduct_invariance_random():
    rng = random.Random(7)
    pq = IFLanguage(("p", "q"))
    for _ in range(30):
        m2 = random_classification(rng, pq, 3)
        sigma = random_symbol_map(rng, AB, pq)
        red = IF.reduct(sigma, m2)
        for s in IF.sentences(AB):
            assert IF.satisfies(red, s) == IF.satisfies(m2, IF.translate(sigma, s))


@pytest.mark.parametrize("n,expected", [(0, 1), (1, 4), (2, 16), (3, 64)])
def test_universe_sizes(n, expected):
    lang = IFLanguage(tuple("abc"[:n]))
    assert len(IF.sentences(lang)) == expected
    if n == 0:
        assert IF.sentences(lang) == (seq(),)


def test_universe_cap():
    with pytest.raises(CapExceeded):
        IF.sentences(IFLanguage(tuple("abcdefghi")))


def test_structure_counts():
    one = list(IF.structures(IFLanguage(("a",))))
    assert len(one) == 4
    assert [sorted(map(sorted, m.rows.values())) for m in one] == [[], [[]], [["a"]], [[], ["a"]]]
    assert len(list(IF.structures(AB))) == 2 ** 4
    with pytest.raises(CapExceeded):
        next(IF.structures(IFLanguage(tuple("abcde"))))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sets(st.sampled_from("ab")), max_size=3))
def test_row_set_adequacy(rows):
    m = Classification.from_rows(("a", "b"), {f"x{i}": r for i, r in enumerate(rows)})
    abstract = m.row_set_abstraction()
    frozen = [frozenset(r) for r in rows]
    for s in IF.sentences(AB):
        assert IF.satisfies(m, s) == IF.satisfies(abstract, s)
        assert IF.satisfies(m, s) == structure_satisfies(frozen, s.antecedent, s.succedent)


def test_sequent_text_round_trip():
    for s in IF.sentences(IFLanguage(("a", "b", "c"))):
        assert parse_sequent(str(s)) == s
    assert parse_sequent("  |- ") == seq()
    with pytest.raises(InstitutionError):
        parse_sequent("a, b")


def test_infomorphism_condition_and_witness():
    src = Classification.from_rows(("a",), {"x1": ["a"]})
    tgt = Classification.from_rows(("p",), {"x2": []})
    with pytest.raises(InfomorphismError) as info:
        Infomorphism.build(src, tgt, {"a": "p"}, {"x2": "x1"})
    assert info.value.witness == ("x2", "a")
    ok = Classification.from_rows(("p",), {"x2": ["p"]})
    f = Infomorphism.build(src, ok, {"a": "p"}, {"x2": "x1"})
    assert f.instance_map == {"x2": "x1"}


def _all_infomorphisms(c1, c2):
    for tm in all_maps(c1.types, c2.types):
        for im in all_maps(c2.instances, c1.instances):
            try:
                yield Infomorphism.build(c1, c2, tm, im)
            except InfomorphismError:
                pass


def test_infomorphisms_are_structure_morphisms():
    rng = random.Random(13)
    found = 0
    for _ in range(60):
        l1, l2 = random_language(rng, 3), random_language(rng, 3)
        c1 = random_classification(rng, l1, 3, 1)
        c2 = random_classification(rng, l2, 2, 1)
        for f in _all_infomorphisms(c1, c2):
            found += 1
            assert is_structure_morphism(f, IndexedStructure(l1, c1), IndexedStructure(l2, c2))
    assert found > 0


def test_compose_infomorphisms():
    c = Classification.from_rows(("a",), {"x": ["a"], "y": []})
    i = Infomorphism.identity(c)
    assert compose_infomorphisms(i, i) == i


def test_colimit_discrete_is_sum():
    c1 = Classification.from_rows(("a",), {"x0": ["a"], "x1": []})
    c2 = Classification.from_rows(("b",), {"y0": ["b"]})
    col = classification_colimit([("L", c1), ("R", c2)], [])
    assert col.core.types == ("a", "b")
    assert len(col.core.instances) == 2
    for x in col.core.instances:
        assert col.core.rows[x] == c1.rows[col.injections["L"].instance_map[x]] | c2.rows[col.injections["R"].instance_map[x]]


def test_colimit_single_node_isomorphic():
    c = Classification.from_rows(("a", "b"), {"x": ["a"], "y": ["a", "b"]})
    col = classification_colimit([("n", c)], [])
    assert col.core.types == c.types
    inj = col.injections["n"]
    assert sorted(map(sorted, col.core.rows.values())) == sorted(map(sorted, c.rows.values()))
    assert len(set(inj.instance_map.values())) == len(c.instances)


def test_colimit_merged_type_well_defined():
    e = Classification.from_rows(("citizen",), {"u": ["citizen"], "v": []})
    l2 = Classification.from_rows(("personnel",), {"u": ["personnel"], "v": []})
    l3 = Classification.from_rows(("worker",), {"u": ["worker"], "v": []})
    f2 = Infomorphism.build(e, l2, {"citizen": "personnel"}, {"u": "u", "v": "v"})
    f3 = Infomorphism.build(e, l3, {"citizen": "worker"}, {"u": "u", "v": "v"})
    col = classification_colimit([("E", e), ("L2", l2), ("L3", l3)],
                                 [("e2", "E", "L2", f2), ("e3", "E", "L3", f3)])
    (merged,) = col.core.types
    members = col.class_members[merged]
    parts = {"E": e, "L2": l2, "L3": l3}
    for x in col.core.instances:
        truth = {parts[n].classifies(col.injections[n].instance_map[x], y) for n, y in members}
        assert len(truth) == 1
        assert col.core.classifies(x, merged) == truth.pop()


def test_oracle_sequent_count():
    assert len(all_sequents("ab")) == len(IF.sentences(AB))
