"""Projection complexes over a free group acting on its Cayley tree.

Fix a nontrivial h in F_rank with primitive root r (cyclically reduced
after conjugating by p).  The cosets cE(h), E(h) = <root>, correspond to
translated axes in the Cayley tree: the coset with canonical representative
``rep`` owns the bi-infinite line {rep . r^k . q}.  Points on an axis are
parametrized by the integer k|r| + |q|, so nearest-point projections are
integer intervals and projection distances are interval arithmetic, all
exact.

On a finite universe of cosets, the projection-distance graph P_K has an
edge between X and Z when every other universe member sees them at
distance at most K.  For single-letter roots distinct axes are disjoint,
projections are single vertices, and any coset seeing X and Z at positive
distance must own a vertex of the bridge geodesic between their axes; this
makes adjacency tests local.  Every report records the universe bound it
was computed with.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .budget import resolve_budget
from .errors import BudgetExceededError, IncompleteUniverseError, InputError
from .freegroup import (
    ALPHABET,
    common_prefix_len,
    finv,
    fmul,
    format_free_word,
    fpow,
    freduce,
    parse_free_word,
    primitive_root,
    shortlex_key,
    tree_distance,
    tree_geodesic,
)

__all__ = [
    "AxisCoset",
    "ProjectionComplex",
    "PKGraph",
    "StandardPath",
    "QuasiStabilizer",
    "VSet",
    "CheckReport",
]


@dataclass(frozen=True)
class AxisCoset:
    """Coset c.E(h) with its canonical (shortlex-least) representative."""

    rep: tuple
    root: tuple

    def __str__(self):
        return "%s<%s>" % (
            format_free_word(self.rep) or "1",
            format_free_word(self.root),
        )


@dataclass(frozen=True)
class StandardPath:
    start: AxisCoset
    end: AxisCoset
    interior: tuple  # ordered AxisCosets with d_W(start, end) >= K
    K: int

    @property
    def vertices(self):
        return (self.start,) + self.interior + (self.end,)

    def reversed(self):
        return StandardPath(
            start=self.end, end=self.start,
            interior=tuple(reversed(self.interior)), K=self.K,
        )


@dataclass(frozen=True)
class QuasiStabilizer:
    center: object
    eta: int
    members: tuple
    ball_radius: int


@dataclass(frozen=True)
class VSet:
    center: AxisCoset
    eps: int
    M: int
    members: tuple
    applicable: bool
    diameter: Optional[int]


@dataclass(frozen=True)
class CheckReport:
    check: str
    parameters: dict
    universe_bound: object
    K: Optional[int]
    worst_case: object
    passed: bool

    def to_json(self):
        return {
            "check": self.check,
            "parameters": self.parameters,
            "universe_bound": self.universe_bound,
            "K": self.K,
            "worst_case": self.worst_case,
            "pass": self.passed,
        }


def _set_diameter(words):
    """Exact diameter of a finite point set in the Cayley tree (double sweep)."""
    words = list(words)
    if not words:
        return None
    far = max(words, key=lambda w: tree_distance(words[0], w))
    return max(tree_distance(far, w) for w in words)


class ProjectionComplex:
    """All coset-axis geometry for one choice of h (and one tree)."""

    def __init__(self, h="a", rank: int = 2, K: Optional[int] = None):
        if isinstance(h, str):
            h = parse_free_word(h, rank)
        h = freduce(h)
        if not h:
            raise InputError("h must be nontrivial")
        self.rank = rank
        self.h = h
        root, _ = primitive_root(h)
        # work with the cyclically reduced root; cE(h) -> (c p)<r0> matches
        # the true axis c p . line(r0) and commutes with the G-action
        from .freegroup import cyclic_reduce

        p, core = cyclic_reduce(root)
        self.conj = p
        self.root = core
        self.K = K
        self._proj_cache = {}
        self._through_cache = {}

    # -- cosets and axis parametrization ------------------------------------

    def coset(self, c) -> AxisCoset:
        if isinstance(c, str):
            c = parse_free_word(c, self.rank)
        d = fmul(freduce(c), self.conj)
        L = len(self.root)
        best = None
        span = len(d) // L + 2
        for k in range(-span, span + 1):
            cand = fmul(d, fpow(self.root, k))
            key = shortlex_key(cand)
            if best is None or key < best[0]:
                best = (key, cand)
        return AxisCoset(rep=best[1], root=self.root)

    @property
    def base_vertex(self) -> AxisCoset:
        return self.coset(())

    def translate(self, g, Y: AxisCoset) -> AxisCoset:
        if isinstance(g, str):
            g = parse_free_word(g, self.rank)
        return self.coset(fmul(fmul(g, Y.rep), finv(self.conj)))

    def _axis_word(self, param: int) -> tuple:
        k, m = divmod(param, len(self.root))
        return fmul(fpow(self.root, k), self.root[:m])

    def point_at(self, Y: AxisCoset, param: int) -> tuple:
        return fmul(Y.rep, self._axis_word(param))

    def on_axis_param(self, Y: AxisCoset, v) -> Optional[int]:
        w = fmul(finv(Y.rep), v)
        if not w:
            return 0
        for p in (len(w), -len(w)):
            if self._axis_word(p) == w:
                return p
        return None

    # -- projections ----------------------------------------------------------

    def project_vertex(self, Y: AxisCoset, v):
        """(param, distance) of the nearest axis point: the geodesic from the
        rep to v follows one of the two periodic rays while letters match."""
        w = fmul(finv(Y.rep), v)
        n = len(w)
        L = len(self.root)
        up = fpow(self.root, n // L + 1)[:n]
        down = fpow(finv(self.root), n // L + 1)[:n]
        lp = common_prefix_len(w, up)
        lm = common_prefix_len(w, down)
        if lp >= lm:
            return lp, n - lp
        return -lm, n - lm

    def proj_interval(self, Y: AxisCoset, X: AxisCoset):
        """Parameter interval of the nearest-point projection of axis(X)
        onto axis(Y); a single parameter unless the axes overlap."""
        if X == Y:
            raise InputError("projection of a coset onto itself is undefined")
        key = (Y.rep, X.rep)
        hit = self._proj_cache.get(key)
        if hit is not None:
            return hit
        L = len(self.root)
        far = len(X.rep) + len(Y.rep) + 2 * L + 4
        lo = hi = None
        for extra in (0, L, 2 * L):
            p1, _ = self.project_vertex(Y, self.point_at(X, far + extra))
            p2, _ = self.project_vertex(Y, self.point_at(X, -(far + extra)))
            nlo, nhi = min(p1, p2), max(p1, p2)
            if (nlo, nhi) == (lo, hi):
                break
            lo, hi = nlo, nhi
        self._proj_cache[key] = (lo, hi)
        return lo, hi

    def proj_segment(self, Y: AxisCoset, X: AxisCoset):
        lo, hi = self.proj_interval(Y, X)
        return self.point_at(Y, lo), self.point_at(Y, hi)

    def proj_distance(self, Y: AxisCoset, X: AxisCoset, Z: AxisCoset) -> int:
        """Diameter of proj_Y(X) u proj_Y(Z): span of the two intervals."""
        if Y in (X, Z):
            raise InputError("proj_distance needs Y distinct from X and Z")
        a1, b1 = self.proj_interval(Y, X)
        a2, b2 = self.proj_interval(Y, Z)
        return max(b1, b2) - min(a1, a2)

    # -- bridges and candidate cosets ------------------------------------------

    def bridge(self, X: AxisCoset, Z: AxisCoset):
        """Tree geodesic between the two axes (entry point to entry point)."""
        pX, _ = self.proj_interval(X, Z)
        pZ, _ = self.proj_interval(Z, X)
        return tree_geodesic(self.point_at(X, pX), self.point_at(Z, pZ))

    def cosets_through_vertex(self, v):
        hit = self._through_cache.get(v)
        if hit is not None:
            return hit
        out = []
        seen = set()
        for m in range(len(self.root)):
            c = self.coset(fmul(fmul(v, finv(self.root[:m])), finv(self.conj)))
            if c.rep not in seen:
                seen.add(c.rep)
                out.append(c)
        self._through_cache[v] = out
        return out

    def crossing_candidates(self, X: AxisCoset, Z: AxisCoset):
        """Cosets that can see X and Z at positive distance.

        Exact for single-letter roots: projections are single vertices, and
        when they differ both lie on the bridge geodesic.
        """
        out = []
        seen = set()
        for v in self.bridge(X, Z):
            for c in self.cosets_through_vertex(v):
                if c.rep not in seen:
                    seen.add(c.rep)
                    out.append(c)
        return out

    def local_candidates_exact(self) -> bool:
        return len(self.root) == 1

    # -- universes ---------------------------------------------------------------

    def universe_by_bound(self, bound: int, budget=None):
        """All cosets whose canonical representative has length <= bound."""
        cap = resolve_budget(budget)
        out = []
        seen = set()
        letters = [i for i in range(1, self.rank + 1)] + [
            -i for i in range(1, self.rank + 1)
        ]
        c0 = self.coset(())
        if len(c0.rep) <= bound:
            seen.add(c0.rep)
            out.append(c0)
        words = [()]
        # rep = word . conj up to root powers, so words slightly longer than
        # the bound can still canonicalize inside it
        for _ in range(bound + len(self.conj)):
            nxt = []
            for w in words:
                for x in letters:
                    if w and w[-1] == -x:
                        continue
                    nw = w + (x,)
                    nxt.append(nw)
                    c = self.coset(nw)
                    if len(c.rep) <= bound and c.rep not in seen:
                        seen.add(c.rep)
                        out.append(c)
                    if len(seen) > cap:
                        raise BudgetExceededError("universe exceeded %d cosets" % cap)
            words = nxt
        out.sort(key=lambda c: shortlex_key(c.rep))
        return out

    def dist_to_coset_elements(self, C: AxisCoset, g) -> int:
        """Tree distance from the vertex g to the element set C = rep . <root>
        (full root powers, not general axis points)."""
        w = fmul(finv(C.rep), g)
        L = len(self.root)
        p, d = self.project_vertex(AxisCoset(rep=(), root=self.root), w)
        return d + min(p % L, (-p) % L)

    def hull_universe(self, words, extra_cosets=()):
        """Cosets through every vertex of every pairwise geodesic among the
        given tree vertices; the natural universe for a handful of targets."""
        words = [freduce(w) for w in words]
        verts = set()
        for i in range(len(words)):
            for j in range(i + 1, len(words)):
                verts.update(tree_geodesic(words[i], words[j]))
        verts.update(words)
        out = []
        seen = set()
        for v in sorted(verts, key=shortlex_key):
            for c in self.cosets_through_vertex(v):
                if c.rep not in seen:
                    seen.add(c.rep)
                    out.append(c)
        for c in extra_cosets:
            if c.rep not in seen:
                seen.add(c.rep)
                out.append(c)
        out.sort(key=lambda c: shortlex_key(c.rep))
        return out

    # -- standard paths -------------------------------------------------------

    def interior_cosets(self, X: AxisCoset, Z: AxisCoset, K: int, universe):
        if K < 1:
            raise InputError("K must be >= 1")
        out = []
        for W in universe:
            if W == X or W == Z:
                continue
            if self.proj_distance(W, X, Z) >= K:
                out.append(W)
        return out

    def standard_path(self, X: AxisCoset, Z: AxisCoset, K: int, universe) -> StandardPath:
        """Total order by crossing position along the bridge geodesic."""
        universe_reps = {W.rep for W in universe}
        if X == Z:
            return StandardPath(start=X, end=Z, interior=(), K=K)
        bridge = self.bridge(X, Z)
        if self.local_candidates_exact():
            for W in self.crossing_candidates(X, Z):
                if W.rep in universe_reps or W in (X, Z):
                    continue
                if self.proj_distance(W, X, Z) >= K:
                    raise IncompleteUniverseError(
                        "universe misses relevant coset %s" % (W,)
                    )
        interior = self.interior_cosets(X, Z, K, universe)
        index = {v: i for i, v in enumerate(bridge)}
        keyed = []
        for W in interior:
            spots = [index[v] for v in bridge if self.on_axis_param(W, v) is not None]
            if not spots:
                # positive projection gap but axis off the bridge: order last
                key = (len(bridge), 0)
            else:
                key = (min(spots) + max(spots), min(spots))
            keyed.append(((key, shortlex_key(W.rep)), W))
        keyed.sort(key=lambda t: t[0])
        return StandardPath(start=X, end=Z, interior=tuple(w for _, w in keyed), K=K)

    # -- the projection graph ---------------------------------------------------

    def build_graph(self, universe, K: int) -> "PKGraph":
        return PKGraph(self, list(universe), K)

    def scan_K(self, universe, K_range, sample_pairs=40, seed=0):
        """Least K whose graph passes the path-coherence checks on a sample:
        consecutive standard-path vertices adjacent, bottleneck witnesses
        within 2, thin-triangle defect at most 2 and consecutive."""
        rng = random.Random(seed)
        uni = list(universe)
        report = []
        for K in K_range:
            graph = self.build_graph(uni, K)
            ok = True
            pairs = []
            for _ in range(sample_pairs):
                X, Z = rng.choice(uni), rng.choice(uni)
                if X != Z:
                    pairs.append((X, Z))
            for X, Z in pairs:
                sp = self.standard_path(X, Z, K, uni)
                verts = sp.vertices
                if any(
                    not graph.adjacent(verts[i], verts[i + 1])
                    for i in range(len(verts) - 1)
                    if verts[i] != verts[i + 1]
                ):
                    ok = False
                    break
                rep = self.bottleneck_check(X, Z, None, K, uni, graph=graph)
                if not rep.passed:
                    ok = False
                    break
            if ok:
                for _ in range(sample_pairs):
                    X, Y, Z = rng.choice(uni), rng.choice(uni), rng.choice(uni)
                    rep = self.thin_triangle_check(X, Y, Z, K, uni)
                    if not rep.passed:
                        ok = False
                        break
            report.append((K, ok))
            if ok:
                return K, report
        return None, report

    # -- lemma checks -------------------------------------------------------------

    def thin_triangle_check(self, X, Y, Z, K, universe) -> CheckReport:
        """Y_K(X,Z) minus (Y_K(X,Y) u Y_K(Y,Z)) has at most two elements,
        consecutive along the standard path when there are two."""
        params = {"X": str(X), "Y": str(Y), "Z": str(Z)}
        ab = set(w.rep for w in self.interior_cosets(X, Y, K, universe)) if X != Y else set()
        bc = set(w.rep for w in self.interior_cosets(Y, Z, K, universe)) if Y != Z else set()
        path = self.standard_path(X, Z, K, universe)
        missing_pos = [
            i for i, w in enumerate(path.interior) if w.rep not in ab | bc
        ]
        ok = len(missing_pos) <= 2
        if len(missing_pos) == 2:
            ok = missing_pos[1] == missing_pos[0] + 1
        return CheckReport(
            check="thin-triangle",
            parameters=params,
            universe_bound=len(list(universe)),
            K=K,
            worst_case=len(missing_pos),
            passed=ok,
        )

    def bottleneck_check(self, X, Z, path_vertices, K, universe, graph=None) -> CheckReport:
        """Every interior vertex of the standard path is within graph
        distance 2 of every path from X to Z (the given one, or a detour)."""
        if graph is None:
            graph = self.build_graph(universe, K)
        sp = self.standard_path(X, Z, K, universe)
        if path_vertices is None:
            path_vertices = graph.some_path(X, Z)
            if path_vertices is None:
                return CheckReport(
                    check="bottleneck", parameters={"X": str(X), "Z": str(Z)},
                    universe_bound=len(list(universe)), K=K,
                    worst_case="disconnected", passed=False,
                )
        else:
            for i in range(len(path_vertices) - 1):
                if path_vertices[i] == path_vertices[i + 1]:
                    continue
                if not graph.adjacent(path_vertices[i], path_vertices[i + 1]):
                    raise InputError("given vertex sequence is not a P_K path")
        worst = 0
        for W in sp.interior:
            dists = graph.distances_from(W)
            best = min(
                (dists.get(v.rep) for v in path_vertices if dists.get(v.rep) is not None),
                default=None,
            )
            if best is None:
                worst = None
                break
            worst = max(worst, best)
        passed = worst is not None and worst <= 2
        return CheckReport(
            check="bottleneck",
            parameters={"X": str(X), "Z": str(Z), "path_len": len(path_vertices)},
            universe_bound=len(list(universe)),
            K=K,
            worst_case=worst,
            passed=passed,
        )

    def qgeos_constants(self, universe, K, graph=None, pairs=None):
        """Fit (multiplicative, additive) constants comparing standard-path
        length against graph distance over the given pairs."""
        uni = list(universe)
        if graph is None:
            graph = self.build_graph(uni, K)
        if pairs is None:
            pairs = [(X, Z) for i, X in enumerate(uni) for Z in uni[i + 1 :]]
        mult = 1.0
        add = 0
        broken = 0
        for X, Z in pairs:
            sp = self.standard_path(X, Z, K, uni)
            edges = len(sp.interior) + 1
            verts = sp.vertices
            for i in range(len(verts) - 1):
                if verts[i] != verts[i + 1] and not graph.adjacent(verts[i], verts[i + 1]):
                    broken += 1
                    break
            d = graph.distance(X, Z)
            if d is None:
                continue
            mult = max(mult, edges / max(d, 1))
            add = max(add, edges - d)
        return {"multiplicative": mult, "additive": add, "non_path_pairs": broken}

    # -- quasi-stabilizers, V-sets, acylindricity ---------------------------------

    def group_elements_over(self, universe, power_cap: int):
        """All g with g.Y0 in the universe and |axis shift| <= power_cap,
        i.e. g = rep . root^j: the full preimage of the universe, truncated
        only in the power direction."""
        out = []
        for C in universe:
            for j in range(-power_cap, power_cap + 1):
                out.append((fmul(C.rep, self._axis_word(j * len(self.root))), C))
        return out

    def quasi_stabilizer_tree(self, x, eta: int, ball_radius: int) -> QuasiStabilizer:
        """Action on the tree itself: elements moving the vertex x at most eta."""
        x = freduce(x)
        members = []
        frontier = [()]
        all_words = [()]
        letters = [i for i in range(1, self.rank + 1)] + [
            -i for i in range(1, self.rank + 1)
        ]
        for _ in range(ball_radius):
            nxt = []
            for w in frontier:
                for s in letters:
                    if w and w[-1] == -s:
                        continue
                    nxt.append(w + (s,))
            all_words.extend(nxt)
            frontier = nxt
        for g in all_words:
            if tree_distance(x, fmul(g, x)) <= eta:
                members.append(g)
        return QuasiStabilizer(center=x, eta=eta, members=tuple(members), ball_radius=ball_radius)

    def quasi_stabilizer_complex(
        self, x: AxisCoset, eta: int, graph: "PKGraph", power_cap: int
    ) -> QuasiStabilizer:
        """Action on P_K: elements moving the vertex x at most eta, drawn
        from the universe preimage."""
        dists = graph.distances_from_vertex_action(x)
        members = []
        for g, _ in self.group_elements_over(graph.universe, power_cap):
            gx = self.translate(g, x)
            d = dists.get(gx.rep)
            if d is not None and d <= eta:
                members.append(g)
        members.sort(key=shortlex_key)
        return QuasiStabilizer(
            center=x, eta=eta, members=tuple(members),
            ball_radius=power_cap,
        )

    def joint_stabilizer_check(self, x, y, eta: int, r: int, ball_radius: int) -> dict:
        """Measure the least r' with N_r(Stab(x)) n N_r(Stab(y)) inside
        N_{r'}(Stab(x) n Stab(y)), for the stated eta and for 2*eta."""
        sx = self.quasi_stabilizer_tree(x, eta, ball_radius).members
        sy = self.quasi_stabilizer_tree(y, eta, ball_radius).members
        ball = self.quasi_stabilizer_tree((), 2 * ball_radius, ball_radius).members

        def near(t, S, rad):
            return any(tree_distance(t, s) <= rad for s in S)

        lhs = [t for t in ball if near(t, sx, r) and near(t, sy, r)]
        out = {"eta": eta, "r": r, "ball_radius": ball_radius, "lhs_size": len(lhs)}
        for label, bound in (("r_prime_eta", eta), ("r_prime_2eta", 2 * eta)):
            jx = self.quasi_stabilizer_tree(x, bound, ball_radius).members
            jy = set(self.quasi_stabilizer_tree(y, bound, ball_radius).members)
            joint = [g for g in jx if g in jy]
            if not joint:
                out[label] = None if lhs else r
                continue
            worst = 0
            for t in lhs:
                worst = max(worst, min(tree_distance(t, s) for s in joint))
            out[label] = worst
        return out

    def v_set(
        self,
        y: AxisCoset,
        eps: int,
        M: int,
        graph: "PKGraph",
        power_cap: int,
        ball_radius: int,
        r_threshold: Optional[int] = None,
    ) -> VSet:
        """V_eps(y): elements fixing Y0 up to eps whose word distance to the
        preimage of the eps-neighborhood of y is at most M.

        Distance from g to the preimage of a coset C is the tree distance
        from g to the axis of C, computed in closed form.
        """
        d0 = graph.distances_from(self.base_vertex)
        dy = graph.distances_from(y)
        if r_threshold is not None:
            dYy = dy.get(self.base_vertex.rep)
            if dYy is None or dYy < r_threshold:
                return VSet(center=y, eps=eps, M=M, members=(), applicable=False, diameter=None)
        near_y = [C for C in graph.universe if dy.get(C.rep) is not None and dy[C.rep] <= eps]
        members = []
        for g, C in self.group_elements_over(graph.universe, power_cap):
            if len(g) > ball_radius:
                continue
            d = d0.get(C.rep)
            if d is None or d > eps:
                continue
            best = None
            for C2 in near_y:
                dist = self.dist_to_coset_elements(C2, g)
                if best is None or dist < best:
                    best = dist
            if best is not None and best <= M:
                members.append(g)
        members.sort(key=shortlex_key)
        return VSet(
            center=y, eps=eps, M=M, members=tuple(members),
            applicable=True, diameter=_set_diameter(members),
        )

    def f_measure(
        self,
        M_values,
        eps: int,
        samples,
        graph: "PKGraph",
        power_cap: int,
        ball_radius: int,
        r_threshold: Optional[int] = None,
    ):
        """Empirical f: per M, the max diameter of V_eps(y) over the samples.
        Rows are (M, max_diam, n_samples_with_members, eps)."""
        rows = []
        for M in sorted(M_values):
            worst = 0
            hits = 0
            for y in samples:
                vs = self.v_set(
                    y, eps, M, graph, power_cap, ball_radius, r_threshold=r_threshold
                )
                if vs.applicable and vs.diameter is not None:
                    hits += 1
                    worst = max(worst, vs.diameter)
            rows.append({"M": M, "max_diam": worst, "samples": hits, "eps": eps})
        return rows

    def acylindricity_scan(self, eps_values, graph: "PKGraph", power_cap: int):
        """Max joint quasi-stabilizer size against vertex distance; the
        plateau value is the measured N(eps), the distance where it is first
        reached the measured R(eps)."""
        base = self.base_vertex
        d0 = graph.distances_from(base)
        elements = self.group_elements_over(graph.universe, power_cap)
        out = {}
        for eps in eps_values:
            stab0 = []
            for g, C in elements:
                d = d0.get(C.rep)
                if d is not None and d <= eps:
                    stab0.append(g)
            by_dist = {}
            for y in graph.universe:
                dy = d0.get(y.rep)
                if dy is None or dy == 0:
                    continue
                dmap = graph.distances_from(y)
                count = 0
                for g in stab0:
                    gy = self.translate(g, y)
                    d = dmap.get(gy.rep)
                    if d is not None and d <= eps:
                        count += 1
                by_dist.setdefault(dy, 0)
                by_dist[dy] = max(by_dist[dy], count)
            dists = sorted(by_dist)
            if not dists:
                out[eps] = {"table": {}, "N": None, "R": None}
                continue
            N = by_dist[dists[-1]]
            R = dists[-1]
            for d in reversed(dists):
                if by_dist[d] <= N:
                    R = d
                else:
                    break
            out[eps] = {"table": by_dist, "N": N, "R": R}
        return out


    # -- the conjugator-bound pipeline ---------------------------------------

    def theoremC_pipeline(self, a, b, g, m: int = 2, K: Optional[int] = None, f=None):
        """Run the quasi-tree conjugator-bound construction on g a g^-1 = b.

        Projects the base vertex to the orbit quasi-axes of a and b,
        normalizes g by a power of b so the projections correspond, locates
        prefix vertices of a and b near those projections, and checks the
        two inequalities: the prefix-vertex gap against f(m|a|+m|b|), and
        |g| <= |a| + |b| + f(m|a|+m|b|).  f is a callable, typically the
        monotone table measured by f_measure.
        """
        if isinstance(a, str):
            a = parse_free_word(a, self.rank)
        if isinstance(b, str):
            b = parse_free_word(b, self.rank)
        if isinstance(g, str):
            g = parse_free_word(g, self.rank)
        a, b, g = freduce(a), freduce(b), freduce(g)
        if fmul(fmul(g, a), finv(g)) != b:
            raise InputError("g does not conjugate a to b")
        K = K if K is not None else self.K
        if K is None:
            raise InputError("no K given and none set on the complex")
        m0 = max(4, m + 1)

        def prefixes(w):
            return [w[:i] for i in range(len(w) + 1)]

        base_words = [fpow(a, k) for k in range(-1, m0 + 1)]
        base_words += [fmul(fpow(b, k), g) for k in range(-1, m0 + 1)]
        base_words += [fpow(b, k) for k in range(0, m + 1)]
        base_words += prefixes(a) + prefixes(b)
        base_words += [fmul(fpow(a, m - 1), p) for p in prefixes(a)]
        base_words += [fmul(fpow(b, m - 1), p) for p in prefixes(b)]
        universe = self.hull_universe(base_words)
        graph = self.build_graph(universe, K)
        Y0 = self.base_vertex

        orbit = {k: self.coset(fpow(a, k)) for k in range(-1, m0 + 1)}
        dists0 = graph.distances_from(Y0)
        orbit_d = [dists0.get(orbit[k].rep) for k in range(1, m0 + 1)]
        loxo = (
            None not in orbit_d
            and all(x <= y for x, y in zip(orbit_d, orbit_d[1:]))
            and orbit_d[3] >= 2
        )
        if not loxo:
            raise InputError(
                "a is not loxodromic on this quasi-tree (orbit distances %r)" % (orbit_d,)
            )

        borbit = {k: self.coset(fmul(fpow(b, k), g)) for k in range(-1, m0 + 1)}
        k_p = min(
            orbit, key=lambda k: (dists0.get(orbit[k].rep, 10 ** 9), abs(k), k)
        )
        k_q = min(
            borbit, key=lambda k: (dists0.get(borbit[k].rep, 10 ** 9), abs(k), k)
        )
        r_shift = k_q - k_p
        g_norm = fmul(fpow(b, r_shift), g)

        # second phase: extend the universe with the normalized translates
        extra = [fmul(g_norm, p) for p in prefixes(a)]
        extra += [fmul(g_norm, fmul(fpow(a, m - 1), p)) for p in prefixes(a)]
        universe = self.hull_universe(base_words + extra)
        graph = self.build_graph(universe, K)
        dists0 = graph.distances_from(Y0)

        p_vertex = orbit[k_p]
        q_vertex = borbit[k_q]
        gamma_a = self.standard_path(Y0, p_vertex, K, universe)
        P_a = self.standard_path(p_vertex, orbit[k_p + m] if k_p + m in orbit else self.coset(fpow(a, k_p + m)), K, universe)
        gamma_b = self.standard_path(Y0, q_vertex, K, universe)
        bq_far = self.coset(fmul(fpow(b, k_q + m), g))
        P_b = self.standard_path(q_vertex, bq_far, K, universe)

        def farthest_common(sp1, sp2, anchor):
            common = [v for v in sp1.vertices if v in set(sp2.vertices)]
            if not common:
                return anchor
            da = graph.distances_from(anchor)
            return max(common, key=lambda v: (da.get(v.rep, -1), shortlex_key(v.rep)))

        p_prime = farthest_common(gamma_a, P_a, p_vertex)
        q_prime = farthest_common(gamma_b, P_b, q_vertex)

        gamma_a1 = self.standard_path(Y0, self.coset(a), K, universe)
        gamma_b1 = self.standard_path(Y0, self.coset(b), K, universe)

        def argmin_vertex(cands, target):
            dt = graph.distances_from(target)
            best = None
            for v in cands:
                d = dt.get(v.rep)
                if d is None:
                    continue
                if best is None or (d, shortlex_key(v.rep)) < best[0]:
                    best = ((d, shortlex_key(v.rep)), v)
            return (None, None) if best is None else (best[1], best[0][0])

        v_vert, d_v = argmin_vertex(gamma_a1.vertices, p_prime)
        w_vert, d_w = argmin_vertex(gamma_b1.vertices, q_prime)

        geo_a = graph.some_path(Y0, self.coset(a)) or [Y0]
        geo_b = graph.some_path(Y0, self.coset(b)) or [Y0]
        v_prime, _ = argmin_vertex(geo_a, v_vert if v_vert else p_vertex)
        w_prime, _ = argmin_vertex(geo_b, w_vert if w_vert else q_vertex)

        def best_prefix(word, target):
            dt = graph.distances_from(target)
            best = None
            for pref in prefixes(word):
                c = self.coset(pref)
                d = dt.get(c.rep)
                if d is None:
                    continue
                if best is None or (d, len(pref)) < best[0]:
                    best = ((d, len(pref)), pref)
            return best[1], best[0][0]

        y_a, _ = best_prefix(a, v_prime if v_prime else p_vertex)
        y_b, _ = best_prefix(b, w_prime if w_prime else q_vertex)

        # proximities to the projection points, the measured epsilon
        dq = graph.distances_from(q_vertex)
        gya = self.coset(fmul(g_norm, y_a))
        prox_gya = dq.get(gya.rep)
        prox_yb = dq.get(self.coset(y_b).rep)

        d_star = len(fmul(fmul(finv(y_b), g_norm), y_a))
        M = m * (len(a) + len(b))
        f_value = None if f is None else f(M)
        lemma_ok = None if f_value is None else d_star <= f_value
        final_ok = (
            None
            if f_value is None
            else len(g_norm) <= len(a) + len(b) + f_value
        )
        return PipelineReport(
            a=a,
            b=b,
            g_input=g,
            g_normalized=g_norm,
            m=m,
            K=K,
            universe_size=len(universe),
            orbit_distances=tuple(orbit_d),
            r_shift=r_shift,
            proximity_g_ya=prox_gya,
            proximity_yb=prox_yb,
            y_a=y_a,
            y_b=y_b,
            d_star=d_star,
            M=M,
            f_value=f_value,
            lemma_bound_holds=lemma_ok,
            final_bound_holds=final_ok,
            details={
                "k_p": k_p,
                "k_q": k_q,
                "p": str(p_vertex),
                "q": str(q_vertex),
                "p_prime": str(p_prime),
                "q_prime": str(q_prime),
                "v": None if v_vert is None else str(v_vert),
                "w": None if w_vert is None else str(w_vert),
                "gamma_a_len": len(gamma_a.interior),
                "P_a_len": len(P_a.interior),
            },
        )


@dataclass(frozen=True)
class PipelineReport:
    a: tuple
    b: tuple
    g_input: tuple
    g_normalized: tuple
    m: int
    K: int
    universe_size: int
    orbit_distances: tuple
    r_shift: int
    proximity_g_ya: Optional[int]
    proximity_yb: Optional[int]
    y_a: tuple
    y_b: tuple
    d_star: int
    M: int
    f_value: Optional[int]
    lemma_bound_holds: Optional[bool]
    final_bound_holds: Optional[bool]
    details: dict

    def to_json(self):
        return {
            "a": format_free_word(self.a),
            "b": format_free_word(self.b),
            "g_input": format_free_word(self.g_input),
            "g_normalized": format_free_word(self.g_normalized),
            "g_length": len(self.g_normalized),
            "m": self.m,
            "K": self.K,
            "universe_size": self.universe_size,
            "orbit_distances": list(self.orbit_distances),
            "r_shift": self.r_shift,
            "proximity_g_ya": self.proximity_g_ya,
            "proximity_yb": self.proximity_yb,
            "y_a": format_free_word(self.y_a),
            "y_b": format_free_word(self.y_b),
            "d_star": self.d_star,
            "M": self.M,
            "f_value": self.f_value,
            "lemma_bound_holds": self.lemma_bound_holds,
            "final_bound_holds": self.final_bound_holds,
            "details": self.details,
        }


class PKGraph:
    """P_K on an explicit universe: edge X-Z iff every other universe coset
    projects the pair within K."""

    def __init__(self, cx: ProjectionComplex, universe, K: int):
        self.cx = cx
        self.K = K
        self.universe = sorted(universe, key=lambda c: shortlex_key(c.rep))
        self.index = {c.rep: i for i, c in enumerate(self.universe)}
        n = len(self.universe)
        self.adj = [set() for _ in range(n)]
        fast = cx.local_candidates_exact()
        for i in range(n):
            for j in range(i + 1, n):
                X, Z = self.universe[i], self.universe[j]
                if fast:
                    cands = [
                        W for W in cx.crossing_candidates(X, Z)
                        if W.rep in self.index and W.rep not in (X.rep, Z.rep)
                    ]
                else:
                    cands = [W for W in self.universe if W not in (X, Z)]
                if all(cx.proj_distance(W, X, Z) <= K for W in cands):
                    self.adj[i].add(j)
                    self.adj[j].add(i)
        self._dist_cache = {}

    def edge_count(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def adjacent(self, X: AxisCoset, Z: AxisCoset) -> bool:
        i, j = self.index.get(X.rep), self.index.get(Z.rep)
        if i is None or j is None:
            raise InputError("vertex outside the universe")
        return j in self.adj[i]

    def distances_from(self, X: AxisCoset):
        """rep -> BFS distance; missing rep means unreachable/outside."""
        i = self.index.get(X.rep)
        if i is None:
            raise InputError("vertex outside the universe")
        hit = self._dist_cache.get(i)
        if hit is not None:
            return hit
        dist = {i: 0}
        frontier = [i]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self.adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        out = {self.universe[u].rep: d for u, d in dist.items()}
        self._dist_cache[i] = out
        return out

    def distances_from_vertex_action(self, X: AxisCoset):
        return self.distances_from(X)

    def distance(self, X: AxisCoset, Z: AxisCoset) -> Optional[int]:
        return self.distances_from(X).get(Z.rep)

    def some_path(self, X: AxisCoset, Z: AxisCoset):
        """A BFS geodesic as a vertex list, None if disconnected."""
        i, j = self.index.get(X.rep), self.index.get(Z.rep)
        if i is None or j is None:
            raise InputError("vertex outside the universe")
        parent = {i: None}
        frontier = [i]
        while frontier and j not in parent:
            nxt = []
            for u in frontier:
                for v in sorted(self.adj[u]):
                    if v not in parent:
                        parent[v] = u
                        nxt.append(v)
            frontier = nxt
        if j not in parent:
            return None
        path = []
        cur = j
        while cur is not None:
            path.append(self.universe[cur])
            cur = parent[cur]
        return list(reversed(path))

    def connected(self) -> bool:
        if not self.universe:
            return True
        return len(self.distances_from(self.universe[0])) == len(self.universe)

    def component_count(self) -> int:
        seen = set()
        comps = 0
        for i, c in enumerate(self.universe):
            if c.rep in seen:
                continue
            comps += 1
            seen.update(self.distances_from(c))
        return comps
