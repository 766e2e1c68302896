"""Seeded search for a system where restricting before fusing loses a consequence.

For every node ``i`` the closed theory of ``res(IS◆)_i`` always entails that
of ``(res IS)◆_i``.  A witness is a node and a sentence in the former that the
latter does not entail.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any

from .generate import random_if_system
from .institution import DEFAULT_BOUND
from .specflow import consequence
from .systems import InformationSystem, restrict_system, sound_system_consequence, system_consequence


@dataclass(frozen=True)
class StrictnessWitness:
    system: InformationSystem
    node: Any
    sentence: Any
    trial: int


def strict_gap(system: InformationSystem, bound: int = DEFAULT_BOUND) -> dict:
    """Per node: sentences of ``res(IS◆)`` not entailed by ``(res IS)◆``, canonically sorted."""
    fuse_first = restrict_system(system_consequence(system, bound), bound)
    restrict_first = sound_system_consequence(restrict_system(system, bound), bound)
    inst = system.institution
    out = {}
    for n in system.shape.nodes:
        weaker = consequence(restrict_first.theory(n), bound).sentences
        gap = consequence(fuse_first.theory(n), bound).sentences - weaker
        out[n] = inst.sort_sentences(gap)
    return out


def find_strictness_witness(seed: int, max_nodes: int = 2, max_types: int = 2, max_edges: int = 2,
                            trials: int = 500, bound: int = DEFAULT_BOUND) -> StrictnessWitness | None:
    """First witness among ``trials`` seeded random IF systems, or None."""
    rng = random.Random(seed)
    for trial in range(trials):
        system = random_if_system(rng, max_nodes=max_nodes, max_edges=max_edges,
                                  max_types=max_types, bound=bound)
        for n, gap in strict_gap(system, bound).items():
            if gap:
                return StrictnessWitness(system, n, gap[0], trial)
    return None


def recheck(w: StrictnessWitness, bound: int = DEFAULT_BOUND) -> bool:
    """Re-derive a witness from the definitions."""
    fuse_first = restrict_system(system_consequence(w.system, bound), bound)
    restrict_first = sound_system_consequence(restrict_system(w.system, bound), bound)
    closed_fuse = consequence(fuse_first.theory(w.node), bound).sentences
    closed_res = consequence(restrict_first.theory(w.node), bound).sentences
    return w.sentence in closed_fuse and w.sentence not in closed_res
