"""Exhaustive ground truth in the Cayley graph.

Balls are generated breadth-first, extending by each signed generator and
canonicalizing, so an element first appears in the layer equal to its
geodesic length.  Everything here is deliberately brute force: these are
the oracles the cleverer modules are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .budget import resolve_budget
from .errors import BudgetExceededError, InputError
from .raag import DefiningGraph, NormalForm, _inv_codes, _nf_codes

__all__ = [
    "Ball",
    "enumerate_ball",
    "nearest_in_set",
    "NearestResult",
    "shortest_conjugator_bruteforce",
    "min_conjugator",
]


@dataclass(frozen=True)
class Ball:
    """All elements of geodesic length <= radius, layered by length."""

    graph: DefiningGraph
    radius: int
    layers: tuple  # tuple of frozenset[code tuple], layers[r] = sphere of radius r

    @property
    def elements(self) -> frozenset:
        return frozenset(
            NormalForm(self.graph, c, _canonical=True) for layer in self.layers for c in layer
        )

    def element_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def sphere_sizes(self):
        return [len(layer) for layer in self.layers]

    def codes(self):
        for layer in self.layers:
            for c in layer:
                yield c

    def sorted_codes(self):
        """Codes in (length, shortlex) order; deterministic scan order."""
        for layer in self.layers:
            for c in sorted(layer):
                yield c

    def distance(self, x: NormalForm) -> Optional[int]:
        for r, layer in enumerate(self.layers):
            if x.code in layer:
                return r
        return None

    def __contains__(self, x) -> bool:
        code = x.code if isinstance(x, NormalForm) else tuple(x)
        return any(code in layer for layer in self.layers)


def enumerate_ball(graph: DefiningGraph, radius: int, budget=None) -> Ball:
    if radius < 0:
        raise InputError("radius must be >= 0")
    cap = resolve_budget(budget)
    adj = graph.adjacency_masks
    gens = tuple(range(2 * len(graph.vertices)))
    seen = {(): 0}
    layers = [frozenset([()])]
    frontier = [()]
    for r in range(1, radius + 1):
        nxt = []
        for code in frontier:
            for s in gens:
                new = _nf_codes(code + (s,), adj)
                if new not in seen:
                    seen[new] = r
                    nxt.append(new)
                    if len(seen) > cap:
                        raise BudgetExceededError(
                            "ball enumeration exceeded %d elements" % cap
                        )
        layers.append(frozenset(nxt))
        frontier = nxt
    return Ball(graph, radius, tuple(layers))


@dataclass(frozen=True)
class NearestResult:
    element: NormalForm
    distance: int
    unique: bool


def nearest_in_set(x: NormalForm, S) -> NearestResult:
    """Closest point of S to x in the word metric; ties go shortlex-least.

    ``unique`` reports whether the minimizer is unique as a group element.
    """
    S = list(S)
    if not S:
        raise InputError("nearest_in_set needs a nonempty set")
    adj = x.graph.adjacency_masks
    best = None
    best_d = None
    count = 0
    seen_best = set()
    for s in S:
        if s.graph != x.graph:
            raise InputError("set element from a different graph")
        d = len(_nf_codes(_inv_codes(s.code) + x.code, adj))
        if best_d is None or d < best_d:
            best_d = d
            best = s
            seen_best = {s.code}
        elif d == best_d and s.code not in seen_best:
            seen_best.add(s.code)
            if s.code < best.code:
                best = s
    count = len(seen_best)
    return NearestResult(element=best, distance=best_d, unique=count == 1)


def shortest_conjugator_bruteforce(
    a: NormalForm, b: NormalForm, r_max: int, budget=None
) -> Optional[NormalForm]:
    """Shortlex-least g with |g| minimal, |g| <= r_max and g a g^-1 = b.

    Returns None when no conjugator exists within the radius; that outcome
    never claims a and b are non-conjugate.  A budget overrun raises, which
    is a distinct, inconclusive outcome.
    """
    if a.graph != b.graph:
        raise InputError("words come from different defining graphs")
    graph = a.graph
    adj = graph.adjacency_masks
    cap = resolve_budget(budget)
    tested = 0
    ball = enumerate_ball(graph, r_max, budget=budget)
    for g in ball.sorted_codes():
        tested += 1
        if tested > cap:
            raise BudgetExceededError("conjugator scan exceeded %d tests" % cap)
        if _nf_codes(g + a.code, adj) == _nf_codes(b.code + g, adj):
            return NormalForm(graph, g, _canonical=True)
    return None


def _conj_by_letter(code, s, adj):
    return _nf_codes((s,) + code + (s ^ 1,), adj)


def min_conjugator(
    a: NormalForm, b: NormalForm, r_max: int, budget=None
) -> Optional[NormalForm]:
    """A minimal-length conjugator taking a to b, via bidirectional BFS.

    Conjugation by a word is a chain of conjugations by letters, so the
    minimal conjugator length is the graph distance between a and b in the
    conjugate-by-a-letter graph; bidirectional breadth-first search finds it
    exactly.  Same minimum as the ball scan (the unit tests check that), but
    exponentially cheaper; the witness is deterministic though not always
    the shortlex-least one.
    """
    if a.graph != b.graph:
        raise InputError("words come from different defining graphs")
    graph = a.graph
    adj = graph.adjacency_masks
    cap = resolve_budget(budget)
    gens = tuple(range(2 * len(graph.vertices)))
    if a == b:
        return NormalForm.identity(graph)

    sides = [
        {"seen": {a.code: None}, "frontier": [a.code], "depth": 0},
        {"seen": {b.code: None}, "frontier": [b.code], "depth": 0},
    ]

    def expand(side, other):
        nxt = []
        meets = []
        for code in side["frontier"]:
            for s in gens:
                new = _conj_by_letter(code, s, adj)
                if new not in side["seen"]:
                    side["seen"][new] = (code, s)
                    nxt.append(new)
                    if new in other["seen"]:
                        meets.append(new)
        side["frontier"] = nxt
        side["depth"] += 1
        return meets

    def path_letters(side, code):
        letters = []
        cur = code
        while side["seen"][cur] is not None:
            prev, s = side["seen"][cur]
            letters.append(s)
            cur = prev
        return letters  # letters applied, most recent first

    # Layer-complete bidirectional BFS: the first meet appears exactly when
    # depth_a + depth_b reaches the true distance, so every meet node yields
    # a minimal conjugator.
    while True:
        total = sides[0]["depth"] + sides[1]["depth"]
        if total >= r_max:
            return None
        i = 0 if len(sides[0]["frontier"]) <= len(sides[1]["frontier"]) else 1
        side, other = sides[i], sides[1 - i]
        if not side["frontier"]:
            return None
        meet = expand(side, other)
        if len(sides[0]["seen"]) + len(sides[1]["seen"]) > cap:
            raise BudgetExceededError("conjugation search exceeded %d states" % cap)
        if meet:
            best = None
            for code in sorted(meet):
                # path_letters is most-recent-first, which is the conjugating
                # word read left to right: x = g_a . a . g_a^-1, so the meet
                # node gives b = (g_b^-1 g_a) a (g_b^-1 g_a)^-1.
                ga = tuple(path_letters(sides[0], code))
                gb = tuple(path_letters(sides[1], code))
                g = _nf_codes(_inv_codes(gb) + ga, adj)
                if best is None or (len(g), g) < (len(best), best):
                    best = g
            if len(best) > r_max:
                return None
            out = NormalForm(graph, best, _canonical=True)
            assert a.conjugated_by(out) == b
            return out
