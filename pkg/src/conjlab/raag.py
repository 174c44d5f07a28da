"""Right-angled Artin groups: defining graphs, words, and canonical forms.

A finite simplicial graph Gamma presents the group A_Gamma with one
generator per vertex and the relations uv = vu for every edge {u, v}.
Words are sequences of signed generators.  Every element has a unique
canonical representative: the shortlex-least word among all fully reduced
(geodesic) words for it, where the letter order is

    v1 < v1^-1 < v2 < v2^-1 < ...

with the vertex order taken from the defining graph.  Two words are equal
in A_Gamma iff their canonical forms agree letter for letter; the length
of the canonical form is the word-metric length |g|.

Internally a letter is the integer ``(vertex_index << 1) | (0 if positive
else 1)`` so that the letter order is plain integer order and commutation
tests are bitmask lookups.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .budget import resolve_budget
from .errors import BudgetExceededError, InputError

__all__ = [
    "DefiningGraph",
    "Letter",
    "NormalForm",
    "CyclicForm",
    "parse_word",
    "format_word",
    "normal_form",
    "multiply",
    "invert",
    "cyclic_form",
    "canonical_core",
    "support",
    "link",
    "star",
    "join_factors",
    "is_join_irreducible",
]


@dataclass(frozen=True)
class Letter:
    """A signed generator; ``sign`` is +1 or -1."""

    generator: str
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.generator, -self.sign)

    def __str__(self) -> str:
        return self.generator if self.sign > 0 else self.generator + "^-1"


class DefiningGraph:
    """Finite simplicial graph; the vertex order fixes the letter order.

    Vertices are strings.  No self-loops; edge endpoints must be declared
    vertices.  Equality and hashing use the ordered vertex tuple and the
    edge set, so equal graphs present the same group with the same
    canonical forms.
    """

    __slots__ = ("vertices", "edges", "_index", "_adj", "_hash")

    def __init__(self, vertices: Sequence[str], edges: Iterable[Sequence[str]] = ()):
        vertices = list(vertices)
        if not vertices:
            raise InputError("defining graph needs at least one vertex")
        if len(set(vertices)) != len(vertices):
            raise InputError("duplicate vertex names")
        for v in vertices:
            if not v or any(ch.isspace() for ch in v) or "^" in v:
                raise InputError("vertex names must be nonempty, without whitespace or '^': %r" % (v,))
        self.vertices = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        adj = [0] * len(self.vertices)
        edge_set = set()
        for e in edges:
            u, v = e
            if u == v:
                raise InputError("self-loop at %r" % (u,))
            if u not in self._index or v not in self._index:
                raise InputError("edge %r uses undeclared vertex" % ((u, v),))
            i, j = self._index[u], self._index[v]
            edge_set.add((min(i, j), max(i, j)))
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self.edges = frozenset(
            (self.vertices[i], self.vertices[j]) for i, j in edge_set
        )
        self._adj = tuple(adj)
        self._hash = hash((self.vertices, frozenset(edge_set)))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError("unknown generator %r" % (name,)) from None

    def adjacent(self, u: str, v: str) -> bool:
        return (self._adj[self.index(u)] >> self.index(v)) & 1 == 1

    @property
    def adjacency_masks(self):
        return self._adj

    def __eq__(self, other):
        return (
            isinstance(other, DefiningGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "DefiningGraph(vertices=%r, edges=%r)" % (
            list(self.vertices),
            sorted(tuple(sorted((self.index(a), self.index(b)))) for a, b in self.edges),
        )

    def to_json(self) -> dict:
        edges = sorted(
            sorted((a, b), key=self.index) for a, b in self.edges
        )
        return {"vertices": list(self.vertices), "edges": [list(e) for e in edges]}

    @classmethod
    def from_json(cls, obj) -> "DefiningGraph":
        if not isinstance(obj, dict) or "vertices" not in obj:
            raise InputError("graph JSON must be an object with 'vertices' and 'edges'")
        return cls(obj["vertices"], obj.get("edges", ()))

    @classmethod
    def from_file(cls, path) -> "DefiningGraph":
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError("cannot read graph file %s: %s" % (path, exc)) from exc
        return cls.from_json(obj)


# Common test graphs.

def free_group_graph(rank: int = 2) -> DefiningGraph:
    names = ["a", "b", "c", "d", "e", "f", "g", "h"][:rank]
    return DefiningGraph(names)


# ---------------------------------------------------------------------------
# Letter-code arithmetic.  A code is a tuple of ints; generator = code >> 1,
# the low bit is 1 for an inverse letter, and ``code ^ 1`` is the inverse.

def _reduce_codes(codes: list, adj) -> list:
    """Delete cancelling pairs (x ... x^-1 with commuting gap) to a fixed point.

    A word admits no such pair iff it is geodesic, so the fixed point has
    minimal length.
    """
    buf = list(codes)
    again = True
    while again:
        again = False
        n = len(buf)
        for i in range(n):
            x = buf[i]
            g = x >> 1
            mask = adj[g]
            for j in range(i + 1, n):
                y = buf[j]
                gy = y >> 1
                if gy == g:
                    if y == x ^ 1:
                        del buf[j]
                        del buf[i]
                        again = True
                    break
                if not (mask >> gy) & 1:
                    break
            if again:
                break
    return buf


def _canon_codes(buf: list, adj) -> tuple:
    """Shortlex-least shuffle of a reduced word.

    Left-greedy: repeatedly emit the least letter that commutes with every
    letter before it (the least minimal letter of the heap), which is the
    lexicographically least representative of the trace.
    """
    out = []
    rem = list(buf)
    all_mask = -1
    while rem:
        cum = all_mask
        best = -1
        best_i = -1
        for i, x in enumerate(rem):
            g = x >> 1
            if (cum >> g) & 1 and (best_i < 0 or x < best):
                best = x
                best_i = i
            cum &= adj[g]
            if not cum:
                break
        out.append(rem.pop(best_i))
    return tuple(out)


def _nf_codes(codes, adj) -> tuple:
    return _canon_codes(_reduce_codes(list(codes), adj), adj)


def _inv_codes(codes) -> tuple:
    return tuple(x ^ 1 for x in reversed(codes))


def _front_movable(codes, adj):
    """Indices of letters that commute past everything before them."""
    out = []
    cum = -1
    for i, x in enumerate(codes):
        g = x >> 1
        if (cum >> g) & 1:
            out.append(i)
        cum &= adj[g]
        if not cum:
            break
    return out


def _cyclic_strip(codes, adj):
    """Split a reduced word as prefix . core . prefix^-1 with core cyclically reduced.

    Repeatedly finds a letter x movable to the front and x^-1 movable to the
    back and strips both; each strip shortens the core by two, so the result
    is the minimal-length conjugate (cyclic reduction is confluent here).
    """
    core = list(codes)
    prefix = []
    while True:
        front = _front_movable(core, adj)
        back = [len(core) - 1 - i for i in _front_movable(_inv_codes(core), adj)]
        back_letters = {}
        for j in back:
            back_letters.setdefault(core[j], j)  # rightmost wins below
        for j in back:
            if j > back_letters[core[j]]:
                back_letters[core[j]] = j
        pick = None
        for i in front:
            x = core[i]
            j = back_letters.get(x ^ 1)
            if j is not None and j != i:
                if pick is None or (x, i) < (core[pick[0]], pick[0]):
                    pick = (i, j)
        if pick is None:
            return prefix, core
        i, j = pick
        prefix.append(core[i])
        del core[j]
        del core[i]


def _cyclic_closure(core, adj, budget=None):
    """Closure of a cyclically reduced word under commuting swaps and rotation.

    Returns ``{word: conjugator}`` where ``conjugator . core . conjugator^-1``
    equals ``word`` in the group.  Rotating ``x . m`` to ``m . x`` conjugates
    by ``x^-1``.  Exhaustive by design; the budget caps the state count.
    """
    cap = resolve_budget(budget)
    start = tuple(core)
    seen = {start: ()}
    queue = [start]
    qi = 0
    while qi < len(queue):
        w = queue[qi]
        qi += 1
        conj = seen[w]
        n = len(w)
        for i in range(n - 1):
            x, y = w[i], w[i + 1]
            if (adj[x >> 1] >> (y >> 1)) & 1:
                nw = w[:i] + (y, x) + w[i + 2 :]
                if nw not in seen:
                    seen[nw] = conj
                    queue.append(nw)
        if n >= 2:
            nw = w[1:] + (w[0],)
            if nw not in seen:
                seen[nw] = ((w[0] ^ 1),) + conj
                queue.append(nw)
        if len(seen) > cap:
            raise BudgetExceededError(
                "cyclic closure exceeded %d states" % cap
            )
    return seen


# ---------------------------------------------------------------------------
# Public word types.

class NormalForm:
    """The canonical (shortlex-least geodesic) word for a group element.

    Instances are immutable, hashable, and totally ordered by shortlex.
    ``len`` is the word-metric length |g|.
    """

    __slots__ = ("graph", "code")

    def __init__(self, graph: DefiningGraph, code: tuple, _canonical: bool = False):
        self.graph = graph
        if _canonical:
            self.code = code
        else:
            self.code = _nf_codes(code, graph.adjacency_masks)

    @classmethod
    def identity(cls, graph: DefiningGraph) -> "NormalForm":
        return cls(graph, (), _canonical=True)

    @property
    def letters(self) -> tuple:
        verts = self.graph.vertices
        return tuple(
            Letter(verts[x >> 1], -1 if x & 1 else 1) for x in self.code
        )

    def is_identity(self) -> bool:
        return not self.code

    def support(self) -> frozenset:
        verts = self.graph.vertices
        return frozenset(verts[x >> 1] for x in self.code)

    def __len__(self):
        return len(self.code)

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        _same_graph(self, other)
        return NormalForm(self.graph, self.code + other.code)

    def __invert__(self) -> "NormalForm":
        return NormalForm(self.graph, _inv_codes(self.code), _canonical=False)

    def __pow__(self, n: int) -> "NormalForm":
        if n < 0:
            return (~self) ** (-n)
        out = NormalForm.identity(self.graph)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugated_by(self, g: "NormalForm") -> "NormalForm":
        """g . self . g^-1."""
        _same_graph(self, g)
        return NormalForm(self.graph, g.code + self.code + _inv_codes(g.code))

    def __eq__(self, other):
        return (
            isinstance(other, NormalForm)
            and self.code == other.code
            and self.graph == other.graph
        )

    def __lt__(self, other):
        return (len(self.code), self.code) < (len(other.code), other.code)

    def __hash__(self):
        return hash((self.graph, self.code))

    def __str__(self):
        return format_word(self.letters)

    def __repr__(self):
        return "NormalForm(%r)" % (str(self),)


def _same_graph(u, v):
    if u.graph != v.graph:
        raise InputError("words come from different defining graphs")


@dataclass(frozen=True)
class CyclicForm:
    """g = prefix . core . prefix^-1 with core cyclically reduced.

    ``canonical_core`` is the shortlex-least word in the closure of the core
    under commuting swaps and one-letter rotations; it is a complete
    conjugacy invariant, since cyclically reduced words are conjugate in
    A_Gamma exactly when that closure connects them.
    """

    prefix: NormalForm
    core: NormalForm
    canonical_core: NormalForm

    @property
    def element(self) -> NormalForm:
        return (self.prefix * self.core) * ~self.prefix


# ---------------------------------------------------------------------------
# Parsing and formatting.

def parse_word(text: str, graph: DefiningGraph):
    """Parse ``"a b^-1 a"`` into a list of Letters.  Empty string is identity.

    ``name^k`` with any nonzero integer k is accepted as shorthand.
    """
    letters = []
    for tok in text.split():
        name, sep, exp = tok.partition("^")
        if not sep:
            power = 1
        else:
            try:
                power = int(exp)
            except ValueError:
                raise InputError("bad token %r" % (tok,)) from None
            if power == 0:
                continue
        graph.index(name)
        sign = 1 if power > 0 else -1
        letters.extend(Letter(name, sign) for _ in range(abs(power)))
    return letters


def format_word(letters) -> str:
    return " ".join(str(l) for l in letters)


def _as_codes(w, graph: DefiningGraph) -> tuple:
    if isinstance(w, NormalForm):
        if w.graph != graph:
            raise InputError("word belongs to a different graph")
        return w.code
    if isinstance(w, str):
        w = parse_word(w, graph)
    codes = []
    for l in w:
        i = graph.index(l.generator)
        if l.sign not in (1, -1):
            raise InputError("letter sign must be +1 or -1")
        codes.append((i << 1) | (0 if l.sign > 0 else 1))
    return tuple(codes)


# ---------------------------------------------------------------------------
# Operations.

def normal_form(w, graph: DefiningGraph) -> NormalForm:
    """Canonical form of a word (string, Letter sequence, or NormalForm)."""
    return NormalForm(graph, _as_codes(w, graph))


def multiply(u: NormalForm, v: NormalForm) -> NormalForm:
    return u * v


def invert(u: NormalForm) -> NormalForm:
    return ~u


def cyclic_form(w, graph: DefiningGraph = None, budget=None) -> CyclicForm:
    if graph is None:
        if not isinstance(w, NormalForm):
            raise InputError("graph required unless w is a NormalForm")
        graph = w.graph
    nf = normal_form(w, graph)
    adj = graph.adjacency_masks
    prefix, core = _cyclic_strip(list(nf.code), adj)
    core_nf = NormalForm(graph, _canon_codes(core, adj), _canonical=True)
    closure = _cyclic_closure(core_nf.code, adj, budget=budget)
    least = min(closure) if closure else ()
    return CyclicForm(
        prefix=NormalForm(graph, tuple(prefix)),
        core=core_nf,
        canonical_core=NormalForm(graph, least, _canonical=False),
    )


def canonical_core(w, graph: DefiningGraph = None, budget=None) -> NormalForm:
    """Conjugacy-class invariant: least word in the rotation/shuffle closure."""
    return cyclic_form(w, graph, budget=budget).canonical_core


def support(w: NormalForm) -> frozenset:
    return w.support()


def link(S, graph: DefiningGraph) -> frozenset:
    """Vertices adjacent to every vertex of S (S itself never qualifies)."""
    S = list(S)
    for v in S:
        graph.index(v)
    out = []
    for v in graph.vertices:
        if all(graph.adjacent(v, s) for s in S):
            out.append(v)
    return frozenset(out)


def star(S, graph: DefiningGraph) -> frozenset:
    return frozenset(S) | link(S, graph)


def join_factors(S, graph: DefiningGraph):
    """Finest partition of S into blocks that pairwise span complete joins.

    Computed as connected components of the complement of the induced
    subgraph on S; distinct blocks commute elementwise.
    """
    S = sorted(set(S), key=graph.index)
    for v in S:
        graph.index(v)
    parent = {v: v for v in S}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in combinations(S, 2):
        if not graph.adjacent(u, v):
            parent[find(u)] = find(v)
    blocks = {}
    for v in S:
        blocks.setdefault(find(v), []).append(v)
    return sorted(
        (frozenset(b) for b in blocks.values()),
        key=lambda b: min(graph.index(v) for v in b),
    )


def is_join_irreducible(S, graph: DefiningGraph) -> bool:
    """True when the complement of the induced subgraph on S is connected."""
    return len(join_factors(S, graph)) == 1
