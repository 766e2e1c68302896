"""
Restricting before or after fusion
==================================

Restricting a logic keeps only what its structure supports.  Restricting
after the system consequence never loses anything compared with restricting
first, but the converse can fail.  A seeded search finds a small system
where the two differ.
"""

from syscons.document import dumps, system_to_dict
from syscons.specflow import consequence
from syscons.systems import restrict_system, sound_system_consequence, system_consequence
from syscons.witness import find_strictness_witness, recheck

w = find_strictness_witness(seed=0)
print("trial", w.trial, "node", w.node, "sentence", w.sentence)
print(dumps(system_to_dict(w.system)))

###############################################################################
# Both sides computed by hand.

fuse_first = restrict_system(system_consequence(w.system))
restrict_first = sound_system_consequence(restrict_system(w.system))
print(w.sentence in consequence(fuse_first.theory(w.node)).sentences)
print(w.sentence in consequence(restrict_first.theory(w.node)).sentences)
print(recheck(w))

###############################################################################
# The witness system has no edges and one inconsistent node.  An
# inconsistent theory has no model, so the fused core has no instances and
# everything becomes a consequence everywhere, while restricting first
# repairs that node before it can spread.
