"""
A community of classifications
==============================

Nine IF logics joined by eleven infomorphisms.  Each community names its
own types; the mediators say which types mean the same thing.  The minimal
cover merges them, and the fused theory flows back to every community.
"""

from importlib import resources

from syscons.document import load
from syscons.specflow import consequence
from syscons.systems import minimal_cover, system_consequence, underlying

doc = load(str(resources.files("syscons").joinpath("fixtures/community.sys")))
IS = doc.system
print(len(IS.shape.nodes), "nodes,", len(IS.shape.edges), "edges")

channel = minimal_cover(underlying(IS))
print("core types:", channel.core_language.types)
print("core instances:", channel.core.structure.instances)

###############################################################################
# What each community knows before and after.

out = system_consequence(IS)
for n in ("L0", "L1", "L2", "L3"):
    before = consequence(IS.theory(n)).sentences
    after = consequence(out.theory(n)).sentences
    print(n, "gains", len(after - before), "sentences")
    for s in IS.institution.sort_sentences(after - before)[:3]:
        print("    ", s)
