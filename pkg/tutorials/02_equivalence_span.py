"""
Merging relational specifications over a span
==============================================

Three nodes share one binary relation ``R``.  The middle node only asks for
reflexivity; one side adds transitivity, the other symmetry.  Fusing the
system and pulling the result back gives every node the full theory of
equivalence relations.
"""

from importlib import resources

from syscons.cli import run
from syscons.document import load
from syscons.folf import schema_instance
from syscons.specflow import consequence, entails
from syscons.systems import fusion, system_consequence

path = str(resources.files("syscons").joinpath("fixtures/span.sys"))
doc = load(path)
for n in doc.system.shape.nodes:
    print(n, [doc.institution.format_sentence(s) for s in doc.system.theory(n).sorted()])

###############################################################################
# The fusion lives on the core signature, where the three copies of ``R``
# were merged into one symbol.

fused = fusion(doc.system)
for s in fused.sorted():
    print("  ", doc.institution.format_sentence(s))

###############################################################################
# Before fusing, the reflexive-only node does not know symmetry; the first
# counter-model comes out of the canonical enumeration.

sym = schema_instance("symmetric", "R")
print(entails(doc.system.theory("refl_node"), sym).witness)

after = system_consequence(doc.system)
print(entails(after.theory("refl_node"), sym).holds)
print(schema_instance("antisymmetric", "R") in consequence(after.theory("refl_node")).sentences)

###############################################################################
# The same workflow through the command line front end.

code, out, err = run(["fuse", path])
print(out)
