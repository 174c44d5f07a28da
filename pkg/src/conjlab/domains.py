"""Coset domains in a RAAG: gates, relations, product regions, Big sets.

A domain is a parallelism class of a standard coset c.A_Delta.  Two cosets
c.A_Delta and c'.A_Delta are parallel exactly when they lie in the same
coset of A_{Delta u lk(Delta)}, so a class is canonicalized by the pair
(Delta, least element of c.A_{Delta u lk(Delta)}).

The gate of x into a convex coset c.A_S is its unique nearest point: write
w = nf(c^-1 x) and greedily pull every S-letter of w that commutes past
everything before it into a prefix p; the gate is c.p and the distance is
the number of letters left behind.

Distances between gates in the coset ("F-metric") stand in for distances
in the associated hyperbolic space; reports that depend on this label it
as the F-metric proxy.  It is exact for detecting unbounded orbits and
upper-bounds the hyperbolic-space distance.  Domains whose Delta splits as
a nontrivial join are excluded from relevance scans: their hyperbolic
space is bounded, which the F-metric cannot see.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional

from .budget import resolve_budget
from .errors import BudgetExceededError, InputError
from .raag import (
    DefiningGraph,
    NormalForm,
    _inv_codes,
    _nf_codes,
    cyclic_form,
    is_join_irreducible,
    join_factors,
    link,
    normal_form,
    star,
)

__all__ = [
    "Domain",
    "ProductRegion",
    "BigSet",
    "Relation",
    "GateResult",
    "gate",
    "coset_min",
    "cosets_intersect",
    "relation",
    "big",
    "domain_distance",
    "relevant_domains",
    "irreducible_subsets",
    "DistToProductReport",
    "dist_to_product_region_check",
    "translation_length_group",
]


def _member_mask(graph: DefiningGraph, names) -> int:
    mask = 0
    for v in names:
        mask |= 1 << graph.index(v)
    return mask


def _extract_prefix(codes, member_mask, adj):
    """Pull member letters that commute to the front, to a fixed point.

    One forward pass suffices: removing a letter can only unlock letters
    after it, and the scan position never retreats past an unlocked letter.
    Returns (prefix letters, remainder letters); the remainder stays
    geodesic because subwords of geodesics are geodesic.
    """
    rem = list(codes)
    out = []
    cum = -1
    i = 0
    while i < len(rem):
        x = rem[i]
        g = x >> 1
        if (member_mask >> g) & 1 and (cum >> g) & 1:
            out.append(x)
            del rem[i]
            continue
        cum &= adj[g]
        if not cum:
            break
        i += 1
    return out, rem


@dataclass(frozen=True)
class GateResult:
    point: NormalForm
    distance: int
    prefix: NormalForm  # gate = coset_rep . prefix


def gate(x: NormalForm, coset_rep: NormalForm, delta) -> GateResult:
    """Nearest point of the convex coset coset_rep . A_delta to x."""
    graph = x.graph
    if coset_rep.graph != graph:
        raise InputError("coset representative from a different graph")
    adj = graph.adjacency_masks
    mask = _member_mask(graph, delta)
    w = _nf_codes(_inv_codes(coset_rep.code) + x.code, adj)
    prefix, rem = _extract_prefix(w, mask, adj)
    point = NormalForm(graph, coset_rep.code + tuple(prefix))
    return GateResult(
        point=point,
        distance=len(rem),
        prefix=NormalForm(graph, tuple(prefix)),
    )


def coset_min(c: NormalForm, delta) -> NormalForm:
    """Least element of c . A_delta (the gate of the identity)."""
    return gate(NormalForm.identity(c.graph), c, delta).point


class Relation(Enum):
    EQUAL = "equal"
    NESTED_IN = "nested(U in V)"
    CONTAINS = "nested(V in U)"
    ORTHOGONAL = "orthogonal"
    TRANSVERSE = "transverse"


@dataclass(frozen=True)
class Domain:
    """Parallelism class of a standard coset; rep is canonical."""

    graph: DefiningGraph
    delta: frozenset
    rep: NormalForm

    @classmethod
    def make(cls, graph: DefiningGraph, delta, rep) -> "Domain":
        delta = frozenset(delta)
        if not delta:
            raise InputError("domain needs a nonempty vertex set")
        for v in delta:
            graph.index(v)
        rep = normal_form(rep, graph)
        canonical = coset_min(rep, star(delta, graph))
        return cls(graph=graph, delta=delta, rep=canonical)

    def translate(self, h: NormalForm) -> "Domain":
        return Domain.make(self.graph, self.delta, h * self.rep)

    @property
    def f_coset(self):
        """(rep, delta): the canonical coset rep . A_delta."""
        return self.rep, self.delta

    def product_coset(self):
        """(rep, delta u lk(delta)): the supporting convex product coset."""
        return self.rep, star(self.delta, self.graph)

    def sort_key(self):
        g = self.graph
        return (
            tuple(sorted(g.index(v) for v in self.delta)),
            len(self.rep.code),
            self.rep.code,
        )

    def to_json(self) -> dict:
        order = self.graph.index
        return {"delta": sorted(self.delta, key=order), "rep": str(self.rep)}

    @classmethod
    def from_json(cls, obj, graph: DefiningGraph) -> "Domain":
        if not isinstance(obj, dict) or "delta" not in obj:
            raise InputError("domain JSON must have 'delta' and 'rep'")
        return cls.make(graph, obj["delta"], obj.get("rep", ""))

    def __str__(self):
        rep = str(self.rep) or "1"
        return "[%s . A_{%s}]" % (rep, ",".join(sorted(self.delta, key=self.graph.index)))


@dataclass(frozen=True)
class ProductRegion:
    """F x E splitting of the convex coset rep . A_{delta u lk(delta)}."""

    base: Domain

    @property
    def f_part(self):
        return self.base.rep, self.base.delta

    @property
    def e_part(self):
        return self.base.rep, link(self.base.delta, self.base.graph)

    @property
    def region_coset(self):
        return self.base.product_coset()


def cosets_intersect(c1: NormalForm, S1, c2: NormalForm, S2) -> bool:
    """Whether c1 . A_S1 meets c2 . A_S2.

    Equivalent to nf(c2^-1 c1) lying in A_S2 . A_S1, which greedy prefix
    extraction decides: the S2-letters of any factorization form an initial
    ideal of the trace, so the maximal extracted prefix absorbs them all.
    """
    if c1.graph != c2.graph:
        raise InputError("cosets from different graphs")
    graph = c1.graph
    adj = graph.adjacency_masks
    w = _nf_codes(_inv_codes(c2.code) + c1.code, adj)
    _, rem = _extract_prefix(w, _member_mask(graph, S2), adj)
    m1 = _member_mask(graph, S1)
    return all((m1 >> (x >> 1)) & 1 for x in rem)


def relation(U: Domain, V: Domain) -> Relation:
    """Equal / nested / orthogonal / transverse, decided via gates.

    Both orthogonality and nesting ask for representatives in a common
    position, i.e. the supporting product cosets must intersect; which of
    the two holds is then a matter of how the defining subgraphs sit.
    """
    if U.graph != V.graph:
        raise InputError("domains from different graphs")
    graph = U.graph
    if U == V:
        return Relation.EQUAL
    meet = cosets_intersect(
        U.rep, star(U.delta, graph), V.rep, star(V.delta, graph)
    )
    if not meet:
        return Relation.TRANSVERSE
    if U.delta <= link(V.delta, graph):
        return Relation.ORTHOGONAL
    if U.delta <= V.delta:
        return Relation.NESTED_IN
    if V.delta <= U.delta:
        return Relation.CONTAINS
    return Relation.TRANSVERSE


@dataclass(frozen=True)
class BigSet:
    """Domains on which powers of g travel unboundedly, with the commuting
    factorization of its cyclically reduced core."""

    owner: NormalForm
    domains: tuple
    factors: tuple
    maximal: bool


def big(g: NormalForm) -> BigSet:
    graph = g.graph
    cf = cyclic_form(g)
    if cf.core.is_identity():
        return BigSet(owner=g, domains=(), factors=(), maximal=False)
    supp = cf.core.support()
    blocks = join_factors(supp, graph)
    factor_codes = {b: [] for b in blocks}
    for x in cf.core.code:
        v = graph.vertices[x >> 1]
        for b in blocks:
            if v in b:
                factor_codes[b].append(x)
                break
    domains = []
    factors = []
    for b in blocks:
        domains.append(Domain.make(graph, b, cf.prefix))
        factors.append(NormalForm(graph, tuple(factor_codes[b])))
    maximal = not link(supp, graph) and all(
        is_join_irreducible(b, graph) for b in blocks
    )
    return BigSet(
        owner=g,
        domains=tuple(domains),
        factors=tuple(factors),
        maximal=maximal,
    )


def domain_distance(U: Domain, x: NormalForm, y: NormalForm) -> int:
    """F-metric proxy for the hyperbolic-space distance: distance between
    the gates of x and y in the coset rep . A_delta."""
    gx = gate(x, U.rep, U.delta).point
    gy = gate(y, U.rep, U.delta).point
    return len(~gx * gy)


def irreducible_subsets(graph: DefiningGraph):
    """Nonempty vertex sets whose induced complement is connected."""
    out = []
    verts = graph.vertices
    for k in range(1, len(verts) + 1):
        for S in combinations(verts, k):
            if is_join_irreducible(S, graph):
                out.append(frozenset(S))
    return out


def relevant_domains(
    x: NormalForm,
    y: NormalForm,
    K: int,
    search_radius: int = 1,
    budget=None,
):
    """Join-irreducible domains with gate-to-gate distance >= K between x and y.

    Candidate cosets are seeded along one geodesic from x to y plus a slack
    ball of the given radius; domains crossed by any geodesic must meet this
    hull, and canonical dedup collapses parallel copies.  The unit tests
    cross-check against a full-ball scan at small scale.
    """
    if K < 1:
        raise InputError("K must be >= 1")
    if x.graph != y.graph:
        raise InputError("words come from different defining graphs")
    graph = x.graph
    adj = graph.adjacency_masks
    cap = resolve_budget(budget)
    w = _nf_codes(_inv_codes(x.code) + y.code, adj)
    points = [NormalForm(graph, x.code + w[:i]) for i in range(len(w) + 1)]
    from .cayley import enumerate_ball

    slack = [
        NormalForm(graph, c, _canonical=True)
        for c in enumerate_ball(graph, search_radius).codes()
    ]
    deltas = irreducible_subsets(graph)
    n_candidates = len(points) * len(slack) * len(deltas)
    if n_candidates > cap:
        raise BudgetExceededError(
            "relevant-domain scan needs %d candidates, budget %d"
            % (n_candidates, cap)
        )
    seen = {}
    for z in points:
        for h in slack:
            base = z * h
            for delta in deltas:
                dom = Domain.make(graph, delta, base)
                key = (dom.delta, dom.rep.code)
                if key in seen:
                    continue
                seen[key] = dom
    out = []
    for dom in seen.values():
        if domain_distance(dom, x, y) >= K:
            out.append(dom)
    return frozenset(out)


@dataclass(frozen=True)
class DistToProductReport:
    exact: int
    proxy_sum: int
    terms: tuple  # (Domain, distance) pairs entering the sum
    note: str = "proxy distances use the F-metric between gates"

    @property
    def ratio(self) -> Optional[float]:
        if self.exact == 0 and self.proxy_sum == 0:
            return 1.0
        if self.proxy_sum == 0:
            return None
        return self.exact / self.proxy_sum


def dist_to_product_region_check(
    x: NormalForm, P: ProductRegion, K: int, search_radius: int = 1
) -> DistToProductReport:
    """Exact distance to the product region vs the sum of proxy distances
    over domains transverse to or properly containing the base."""
    base = P.base
    rep, S = P.region_coset
    gres = gate(x, rep, S)
    terms = []
    total = 0
    if gres.distance > 0:
        for dom in relevant_domains(x, gres.point, K, search_radius=search_radius):
            rel = relation(dom, base)
            if rel in (Relation.TRANSVERSE, Relation.CONTAINS):
                d = domain_distance(dom, x, gres.point)
                terms.append((dom, d))
                total += d
    terms.sort(key=lambda t: t[0].sort_key())
    return DistToProductReport(exact=gres.distance, proxy_sum=total, terms=tuple(terms))


def translation_length_group(g: NormalForm):
    """Stable translation length in the word metric: the length of the
    cyclically reduced core.  Also returns the per-factor core lengths,
    the domain-level translation proxies."""
    bs = big(g)
    core_len = sum(len(f) for f in bs.factors)
    return core_len, tuple(len(f) for f in bs.factors)
