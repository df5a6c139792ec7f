"""Rainbow k-factors in graph collections: spectral tools, Kelmans shifting, exact search."""

from __future__ import annotations

from .factors import (
    RainbowFactor,
    SearchBudgetExceeded,
    find_k_factor,
    find_rainbow_hamiltonian_cycle,
    find_rainbow_k_factor,
    find_rainbow_perfect_matching,
    pull_back,
    verify_rainbow,
)
from .graph import GraphCollection, GraphError, LabeledGraph, hnk, is_identical, is_isomorphic, lemma_family
from .kelmans import is_shift_stable, ko_collection, ko_full, ko_pair
from .schedules import (
    HubCollection,
    Schedule,
    closure_member,
    decompose_hnk,
    disjointify_repair,
    even_schedule,
    hub_factor,
    odd_schedule,
    schedule_certifies,
)
from .spectral import Comparison, SpectralCertificate, compare_radius, hnk_radius, quotient_matrix, spectral_radius

__version__ = "0.1.0"

__all__ = [
    "Comparison",
    "GraphCollection",
    "GraphError",
    "HubCollection",
    "LabeledGraph",
    "RainbowFactor",
    "Schedule",
    "SearchBudgetExceeded",
    "SpectralCertificate",
    "closure_member",
    "compare_radius",
    "decompose_hnk",
    "disjointify_repair",
    "even_schedule",
    "find_k_factor",
    "find_rainbow_hamiltonian_cycle",
    "find_rainbow_k_factor",
    "find_rainbow_perfect_matching",
    "hnk",
    "hnk_radius",
    "hub_factor",
    "is_identical",
    "is_isomorphic",
    "is_shift_stable",
    "ko_collection",
    "ko_full",
    "ko_pair",
    "lemma_family",
    "odd_schedule",
    "pull_back",
    "quotient_matrix",
    "schedule_certifies",
    "spectral_radius",
    "verify_rainbow",
]
