"""Exception types shared across the package."""


class ConjlabError(Exception):
    """Base class for all conjlab errors."""


class InputError(ConjlabError):
    """Malformed input: unknown generator, bad graph file, mismatched graphs."""


class BudgetExceededError(ConjlabError):
    """A resource cap was hit before the computation finished.

    Distinct from a negative answer: a search that exhausts its radius
    without finding anything returns normally, this error means the search
    was cut off and is inconclusive.
    """


class IncompleteUniverseError(ConjlabError):
    """A projection-complex computation needed a coset outside the universe."""
