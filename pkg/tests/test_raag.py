"""Normal forms, cyclic forms, and graph combinatorics, checked against the
swap/delete closure oracle."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conjlab import (
    DefiningGraph,
    InputError,
    NormalForm,
    canonical_core,
    cyclic_form,
    free_group_graph,
    join_factors,
    link,
    normal_form,
    parse_word,
    star,
)
from conjlab.raag import _as_codes

from oracles import slow_equal, slow_normal_form


def nf(s, g):
    return normal_form(s, g)


# --- parsing ---------------------------------------------------------------

def test_parse_roundtrip(path3):
    w = nf("a c^-1 a", path3)
    assert str(w) == "a c^-1 a"
    assert nf(str(w), path3) == w


def test_parse_powers(z2):
    assert nf("a^3 b^-2", z2) == nf("a a a b^-1 b^-1", z2)
    assert nf("a^0", z2).is_identity()


def test_parse_errors(f2):
    with pytest.raises(InputError):
        parse_word("x", f2)
    with pytest.raises(InputError):
        parse_word("a^q", f2)


def test_graph_validation():
    with pytest.raises(InputError):
        DefiningGraph(["a", "a"])
    with pytest.raises(InputError):
        DefiningGraph(["a"], [["a", "a"]])
    with pytest.raises(InputError):
        DefiningGraph(["a"], [["a", "b"]])
    with pytest.raises(InputError):
        DefiningGraph([])


def test_graph_json_roundtrip(path3):
    assert DefiningGraph.from_json(path3.to_json()) == path3


# --- normal form examples ---------------------------------------------------

def test_nf_edge_cancellation(z2):
    assert str(nf("a b a^-1", z2)) == "b"


def test_nf_shortlex_swap(z2):
    assert str(nf("b a", z2)) == "a b"


def test_nf_path_free_reduction(path3):
    assert str(nf("a c a^-1 a", path3)) == "a c"


def test_identity(f2):
    assert nf("", f2).is_identity()
    assert nf("a a^-1", f2).is_identity()
    assert NormalForm.identity(f2) == nf("", f2)


def test_multiply_invert_examples(f2, z2):
    assert (nf("a", f2) * nf("a^-1", f2)).is_identity()
    assert str(~nf("a b", f2)) == "b^-1 a^-1"
    assert str(nf("a", z2) * nf("b", z2)) == "a b"


def test_mismatched_graphs(f2, z2):
    with pytest.raises(InputError):
        nf("a", f2) * nf("a", z2)


# --- oracle agreement -------------------------------------------------------

def all_words(graph, length):
    n = 2 * len(graph.vertices)
    for tup in itertools.product(range(n), repeat=length):
        yield tup


@pytest.mark.parametrize("gname,maxlen", [("f2", 4), ("z2", 4), ("path3", 4)])
def test_nf_matches_slow_oracle_exhaustive(gname, maxlen, request):
    graph = request.getfixturevalue(gname)
    adj = graph.adjacency_masks
    for n in range(maxlen + 1):
        for w in all_words(graph, n):
            got = NormalForm(graph, w).code
            want = slow_normal_form(w, adj)
            assert got == want, (w, got, want)


def test_nf_matches_slow_oracle_pentagon_sample(pentagon):
    adj = pentagon.adjacency_masks
    import random

    rng = random.Random(4)
    for _ in range(300):
        w = tuple(rng.randrange(10) for _ in range(rng.randrange(7)))
        assert NormalForm(pentagon, w).code == slow_normal_form(w, adj)


# --- hypothesis properties --------------------------------------------------

GRAPHS = [
    DefiningGraph(["a", "b"]),
    DefiningGraph(["a", "b"], [["a", "b"]]),
    DefiningGraph(["a", "b", "c"], [["a", "b"], ["b", "c"]]),
]


def words_for(graph, max_len=8):
    n = 2 * len(graph.vertices)
    return st.lists(st.integers(0, n - 1), max_size=max_len).map(tuple)


@st.composite
def graph_and_word(draw, max_len=8):
    graph = draw(st.sampled_from(GRAPHS))
    return graph, draw(words_for(graph, max_len))


@st.composite
def graph_and_two_words(draw, max_len=6):
    graph = draw(st.sampled_from(GRAPHS))
    return graph, draw(words_for(graph, max_len)), draw(words_for(graph, max_len))


@settings(max_examples=150, deadline=None)
@given(graph_and_word())
def test_nf_idempotent(gw):
    graph, w = gw
    x = NormalForm(graph, w)
    assert NormalForm(graph, x.code) == x


@settings(max_examples=150, deadline=None)
@given(graph_and_two_words())
def test_nf_homomorphism(gww):
    graph, u, v = gww
    assert NormalForm(graph, u + v) == NormalForm(graph, u) * NormalForm(graph, v)


@settings(max_examples=150, deadline=None)
@given(graph_and_two_words())
def test_length_subadditive(gww):
    graph, u, v = gww
    a, b = NormalForm(graph, u), NormalForm(graph, v)
    assert len(a * b) <= len(a) + len(b)


@settings(max_examples=150, deadline=None)
@given(graph_and_word())
def test_inverse_involution(gw):
    graph, w = gw
    x = NormalForm(graph, w)
    assert ~~x == x
    assert (x * ~x).is_identity()


@settings(max_examples=100, deadline=None)
@given(graph_and_two_words(max_len=5))
def test_equality_matches_closure_oracle(gww):
    graph, u, v = gww
    adj = graph.adjacency_masks
    same = NormalForm(graph, u) == NormalForm(graph, v)
    assert same == slow_equal(u, v, adj)


# --- cyclic forms -----------------------------------------------------------

def test_cyclic_form_examples(f2):
    cf = cyclic_form("a b a^-1", f2)
    assert str(cf.prefix) == "a"
    assert str(cf.core) == "b"

    cf = cyclic_form("b", f2)
    assert cf.prefix.is_identity()
    assert str(cf.core) == "b"

    cf = cyclic_form("a b a b^-1", f2)
    assert cf.prefix.is_identity()
    rotations = set()
    w = tuple(_as_codes("a b a b^-1", f2))
    for i in range(4):
        rotations.add(w[i:] + w[:i])
    assert cf.canonical_core.code == min(rotations)


def test_cyclic_form_reconstructs(f2, z2, path3, pentagon):
    import random

    rng = random.Random(11)
    for graph in (f2, z2, path3, pentagon):
        n = 2 * len(graph.vertices)
        for _ in range(100):
            w = tuple(rng.randrange(n) for _ in range(rng.randrange(9)))
            g = NormalForm(graph, w)
            cf = cyclic_form(g)
            assert cf.element == g
            assert len(g) == len(cf.core) + 2 * len(cf.prefix)


def test_canonical_core_conjugacy_invariant(path3):
    import random

    rng = random.Random(5)
    for _ in range(60):
        w = tuple(rng.randrange(6) for _ in range(rng.randrange(7)))
        h = tuple(rng.randrange(6) for _ in range(rng.randrange(5)))
        g = NormalForm(path3, w)
        conj = g.conjugated_by(NormalForm(path3, h))
        assert canonical_core(g) == canonical_core(conj)


def test_geodesic_powers(f2, z2, path3):
    for graph, word in [(f2, "a b"), (z2, "a b"), (path3, "a c")]:
        c = cyclic_form(word, graph).core
        for n in range(1, 6):
            assert len(c**n) == n * len(c)


# --- support / link / star / join -------------------------------------------

def test_support(f2):
    assert nf("a b a^-1", f2).support() == {"a", "b"}


def test_link_star(path3):
    assert link({"a"}, path3) == {"b"}
    assert link({"a", "c"}, path3) == {"b"}
    assert star({"a"}, path3) == {"a", "b"}


def test_join_factors(z2, path3, pentagon):
    assert join_factors({"a", "b"}, z2) == [frozenset({"a"}), frozenset({"b"})]
    assert join_factors({"a", "c"}, path3) == [frozenset({"a", "c"})]
    assert join_factors(set(pentagon.vertices), pentagon) == [
        frozenset(pentagon.vertices)
    ]


def test_join_blocks_commute(pentagon):
    blocks = join_factors({"a", "b", "d"}, pentagon)
    for b1, b2 in itertools.combinations(blocks, 2):
        for u in b1:
            for v in b2:
                assert pentagon.adjacent(u, v)
