"""Conjugator-length toolkit: RAAG normal forms, Cayley-graph oracles,
coset domains with gates and Big sets, conjugacy search with shortening,
and free-group projection complexes."""

from .errors import (
    BudgetExceededError,
    ConjlabError,
    IncompleteUniverseError,
    InputError,
)
from .raag import (
    CyclicForm,
    DefiningGraph,
    Letter,
    NormalForm,
    canonical_core,
    cyclic_form,
    format_word,
    free_group_graph,
    invert,
    is_join_irreducible,
    join_factors,
    link,
    multiply,
    normal_form,
    parse_word,
    star,
    support,
)

__version__ = "0.1.0"
