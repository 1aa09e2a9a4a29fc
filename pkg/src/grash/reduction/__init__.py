"""Graph reduction: triple sampling, random walks and k-cores."""

from .models import CoreChoice, CoreLadder, CoreLevel, Provenance, Subgraph
from .induce import incidence_lists, induce_subgraph
from .sampling import random_walk_for_fraction, random_walk_sample, triple_sample
from .kcore import LadderCache, core_decomposition, k_core, select_core_for_fidelity

__all__ = [
    "CoreChoice",
    "CoreLadder",
    "CoreLevel",
    "Provenance",
    "Subgraph",
    "incidence_lists",
    "induce_subgraph",
    "random_walk_for_fraction",
    "random_walk_sample",
    "triple_sample",
    "LadderCache",
    "core_decomposition",
    "k_core",
    "select_core_for_fidelity",
]
