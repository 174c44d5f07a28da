"""Independent slow oracles used by the test suite.

These deliberately avoid the algorithms under test: equality and geodesic
length are decided by exhaustive closure under elementary moves (swap two
adjacent commuting letters, delete an adjacent inverse pair), which is the
defining rewriting system of the group.  Exponential, fine at test scale.
"""

from fractions import Fraction
from itertools import combinations


def swap_delete_closure(codes, adj, cap=200_000):
    """All words reachable by commuting swaps and adjacent cancellations."""
    start = tuple(codes)
    seen = {start}
    queue = [start]
    while queue:
        w = queue.pop()
        n = len(w)
        for i in range(n - 1):
            x, y = w[i], w[i + 1]
            if y == x ^ 1:
                nw = w[:i] + w[i + 2 :]
                if nw not in seen:
                    seen.add(nw)
                    queue.append(nw)
            if (x >> 1) != (y >> 1) and (adj[x >> 1] >> (y >> 1)) & 1:
                nw = w[:i] + (y, x) + w[i + 2 :]
                if nw not in seen:
                    seen.add(nw)
                    queue.append(nw)
        if len(seen) > cap:
            raise RuntimeError("oracle closure blew its cap")
    return seen


def slow_geodesics(codes, adj):
    closure = swap_delete_closure(codes, adj)
    m = min(len(w) for w in closure)
    return {w for w in closure if len(w) == m}


def slow_normal_form(codes, adj):
    return min(slow_geodesics(codes, adj))


def slow_equal(u, v, adj):
    inv_v = tuple(x ^ 1 for x in reversed(v))
    return slow_normal_form(tuple(u) + inv_v, adj) == ()


def shuffle_closure(codes, adj, cap=500_000):
    """Commuting-swap closure only (all reduced spellings of one element)."""
    start = tuple(codes)
    seen = {start}
    queue = [start]
    while queue:
        w = queue.pop()
        for i in range(len(w) - 1):
            x, y = w[i], w[i + 1]
            if (x >> 1) != (y >> 1) and (adj[x >> 1] >> (y >> 1)) & 1:
                nw = w[:i] + (y, x) + w[i + 2 :]
                if nw not in seen:
                    seen.add(nw)
                    queue.append(nw)
        if len(seen) > cap:
            raise RuntimeError("oracle closure blew its cap")
    return seen


def sphere_counts(graph, n_max):
    """Sphere sizes of A_Gamma from the clique polynomial, independently of
    any word machinery: 1/f(t) = sum over cliques S of (-2t)^{|S|}/(1+t)^{|S|}.
    """
    verts = graph.vertices
    clique_sizes = [0] * (len(verts) + 1)
    clique_sizes[0] = 1
    for k in range(1, len(verts) + 1):
        for S in combinations(verts, k):
            if all(graph.adjacent(u, v) for u, v in combinations(S, 2)):
                clique_sizes[k] += 1

    def inv_one_plus_t_pow(k, n):
        # coefficients of (1+t)^-k up to degree n
        out = [Fraction(0)] * (n + 1)
        out[0] = Fraction(1)
        for j in range(1, n + 1):
            # C(-k, j) = (-1)^j C(k+j-1, j)
            num = 1
            den = 1
            for i in range(j):
                num *= k + i
                den *= i + 1
            out[j] = Fraction((-1) ** j * num, den)
        return out

    n = n_max
    D = [Fraction(0)] * (n + 1)
    for k, count in enumerate(clique_sizes):
        if not count:
            continue
        base = inv_one_plus_t_pow(k, n)
        coeff = Fraction((-2) ** k * count)
        for j in range(n + 1 - k):
            D[j + k] += coeff * base[j]
    # invert the series D to get f
    f = [Fraction(0)] * (n + 1)
    f[0] = 1 / D[0]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(1, m + 1):
            acc += D[j] * f[m - j]
        f[m] = -acc / D[0]
    out = []
    for c in f:
        assert c.denominator == 1
        out.append(int(c))
    return out
