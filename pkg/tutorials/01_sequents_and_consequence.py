"""
Sequents, classifications and consequence
=========================================

A classification sorts instances by types.  A sequent ``G |- D`` holds in it
when every instance having all the types of ``G`` has some type of ``D``.
"""

from syscons import IF, Classification, IFLanguage, Specification, consequence, entails, seq
from syscons.logic import IndexedStructure, intent

lang = IFLanguage(("a", "b"))
c = Classification.from_rows(lang.types, {"x0": [], "x1": ["b"], "x2": ["a", "b"]})
print(IF.satisfies(c, seq("a", "b")))    # every a is a b
print(IF.satisfies(c, seq("b", "a")))    # x1 is a b but not an a

# the intent collects everything the classification satisfies
for s in IF.sort_sentences(intent(IndexedStructure(lang, c)).sentences):
    print("   ", s)

###############################################################################
# Consequence closes a theory under entailment.  ``a |- b`` and ``b |- a``
# together make the two types interchangeable.

T = Specification.of(lang, ["a |- b", "b |- a"])
closed = consequence(T)
print(len(closed), "sentences in the closure")
print(entails(T, IF.parse_sentence(lang, "a, b |- a")).holds)

# a failed entailment comes with a counter-model
report = entails(Specification.of(lang, ["a |- b"]), IF.parse_sentence(lang, "b |- a"))
print(report.holds, report.witness.rows)
